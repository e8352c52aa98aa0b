#include "scirec/service.hpp"

#include <algorithm>
#include <charconv>

#include <httplib.h>

#include "scirec/error.hpp"

namespace scirec {

namespace {

using nlohmann::json;

std::string hash_of(const std::shared_ptr<const ModelBundle>& b) { return b ? b->manifest().corpus_hash : ""; }

ServiceResponse error(int status, std::string code, std::string message, const std::shared_ptr<const ModelBundle>& b) {
    return {status, json{{"code", std::move(code)}, {"message", std::move(message)}, {"status", status},
                         {"corpus_hash", hash_of(b)}}};
}

ServiceResponse not_loaded() {
    return error(503, "model_not_loaded", "the model is still loading", nullptr);
}

// Returns nullopt (and fills `err`) when the parameter is not a positive integer.
std::optional<std::size_t> parse_k(std::optional<std::string_view> text, std::size_t fallback,
                                   const std::shared_ptr<const ModelBundle>& b, ServiceResponse& err) {
    if (!text) return fallback;
    std::size_t k = 0;
    auto [ptr, ec] = std::from_chars(text->data(), text->data() + text->size(), k);
    if (ec != std::errc() || ptr != text->data() + text->size() || k == 0) {
        err = error(400, "bad_parameter", "k must be a positive integer", b);
        return std::nullopt;
    }
    return k;
}

json alpha_json(const ActionWeights& w) { return json::array({w.same_paper, w.same_topic, w.citation, w.random_jump}); }

json papers_json(const Corpus& c, const std::vector<RankedPaper>& papers) {
    json out = json::array();
    for (const auto& p : papers)
        out.push_back({{"paper", c.paper_id(p.paper)}, {"title", c.paper_title(p.paper)}, {"score", p.score}});
    return out;
}

json related_json(const Corpus& c, const std::vector<RelatedKeyword>& list) {
    json out = json::array();
    for (const auto& r : list) out.push_back({{"keyword", c.keyword_id(r.keyword)}, {"score", r.score}});
    return out;
}

}  // namespace

QueryService::QueryService(ServiceConfig cfg) : cfg_(std::move(cfg)) {
    if (cfg_.default_k == 0) throw InvalidConfig("default_k must be >= 1");
    cfg_.thresholds.validate();
}

void QueryService::reload() { set_model(ModelBundle::load(cfg_.model_dir)); }

void QueryService::set_model(std::shared_ptr<const ModelBundle> bundle) {
    std::lock_guard lock(mu_);
    bundle_ = std::move(bundle);
}

std::shared_ptr<const ModelBundle> QueryService::model() const {
    std::lock_guard lock(mu_);
    return bundle_;
}

ServiceResponse QueryService::health() const {
    const auto b = model();
    if (!b) return {200, json{{"status", "loading"}, {"corpus_hash", ""}, {"alpha", nullptr}, {"sample_manifest", nullptr}}};
    const auto manifest = b->manifest().to_json();
    return {200, json{{"status", "ok"},
                      {"corpus_hash", b->manifest().corpus_hash},
                      {"alpha", b->manifest().stationary ? alpha_json(b->manifest().stationary->alpha) : json()},
                      {"counts", manifest.at("counts")},
                      {"stationary", manifest.value("stationary", json())},
                      {"sample_manifest", manifest.value("sample", json())}}};
}

ServiceResponse QueryService::keywords(std::string_view prefix, std::optional<std::string_view> k_text) const {
    const auto b = model();
    if (!b) return not_loaded();
    ServiceResponse err;
    const auto k = parse_k(k_text, cfg_.default_k, b, err);
    if (!k) return err;

    const Corpus& c = b->corpus();
    const auto canon = canonicalize_keyword(prefix);
    const auto& ids = c.keyword_ids();
    // Keyword ids are sorted, so prefix matches form one contiguous range.
    auto first = std::lower_bound(ids.begin(), ids.end(), canon);
    std::vector<KeywordIndex> hits;
    for (auto it = first; it != ids.end() && it->compare(0, canon.size(), canon) == 0; ++it)
        hits.push_back(static_cast<KeywordIndex>(it - ids.begin()));
    const auto& rg = b->rank_graph();
    std::sort(hits.begin(), hits.end(), [&](KeywordIndex x, KeywordIndex y) {
        if (rg[x] != rg[y]) return rg[x] > rg[y];
        return x < y;
    });
    if (hits.size() > *k) hits.resize(*k);

    json list = json::array();
    for (KeywordIndex a : hits)
        list.push_back({{"keyword", c.keyword_id(a)},
                        {"papers", c.postings(a).size()},
                        {"r_c", b->rank_counting()[a]},
                        {"r_p", b->rank_probability()[a]},
                        {"r_g", rg[a]}});
    return {200, json{{"corpus_hash", hash_of(b)}, {"query", canon}, {"k", *k}, {"keywords", std::move(list)}}};
}

ServiceResponse QueryService::keyword_papers(std::string_view keyword, std::optional<std::string_view> mode_text,
                                             std::optional<std::string_view> k_text) const {
    const auto b = model();
    if (!b) return not_loaded();
    ServiceResponse err;
    const auto k = parse_k(k_text, cfg_.default_k, b, err);
    if (!k) return err;
    SearchMode mode = SearchMode::universal;
    try {
        if (mode_text) mode = parse_search_mode(*mode_text);
    } catch (const InvalidConfig& e) {
        return error(400, "bad_mode", e.what(), b);
    }
    const Corpus& c = b->corpus();
    const auto a = c.find_keyword(keyword);
    if (!a) return error(404, "unknown_keyword", "unknown keyword: " + std::string(keyword), b);
    const auto results = search(b->model(), b->stationary(), *a, mode, *k);
    return {200, json{{"corpus_hash", hash_of(b)},
                      {"keyword", c.keyword_id(*a)},
                      {"mode", search_mode_name(mode)},
                      {"k", *k},
                      {"candidates", c.postings(*a).size()},
                      {"papers", papers_json(c, results)}}};
}

ServiceResponse QueryService::keyword_related(std::string_view keyword, std::optional<std::string_view> k_text) const {
    const auto b = model();
    if (!b) return not_loaded();
    ServiceResponse err;
    const auto k = parse_k(k_text, cfg_.default_k, b, err);
    if (!k) return err;
    const Corpus& c = b->corpus();
    const auto a = c.find_keyword(keyword);
    if (!a) return error(404, "unknown_keyword", "unknown keyword: " + std::string(keyword), b);
    const auto& sample = b->sample();
    if (!sample.covers(*a))
        return error(409, "insufficient_support", "keyword is not tracked by the sequence sample", b);
    try {
        const auto rel = related_keywords(sample, *a, cfg_.thresholds, *k);
        return {200, json{{"corpus_hash", hash_of(b)},
                          {"keyword", c.keyword_id(*a)},
                          {"k", *k},
                          {"occurrences", sample.occurrences(*a)},
                          {"num_sequences", sample.total()},
                          {"thresholds",
                           {{"m_child", cfg_.thresholds.m_child},
                            {"m_parent", cfg_.thresholds.m_parent},
                            {"m_sibling", cfg_.thresholds.m_sibling}}},
                          {"children", related_json(c, rel.children)},
                          {"parents", related_json(c, rel.parents)},
                          {"siblings", related_json(c, rel.siblings)}}};
    } catch (const InsufficientSupport& e) {
        return error(409, "insufficient_support",
                     std::string(e.what()) + "; graph inference is undefined without occurrences, "
                                             "increase --samples or --n0 when building",
                     b);
    }
}

ServiceResponse QueryService::read_more(std::string_view paper, std::optional<std::string_view> keyword,
                                        std::optional<std::string_view> k_text) const {
    const auto b = model();
    if (!b) return not_loaded();
    ServiceResponse err;
    const auto k = parse_k(k_text, cfg_.default_k, b, err);
    if (!k) return err;
    const Corpus& c = b->corpus();
    const auto p = c.find_paper(paper);
    if (!p) return error(404, "unknown_paper", "unknown paper: " + std::string(paper), b);
    if (!keyword) return error(400, "bad_parameter", "the keyword parameter is required", b);
    const auto a = c.find_keyword(*keyword);
    if (!a || !c.has_keyword(*p, *a))
        return error(422, "invalid_state", "keyword '" + std::string(*keyword) + "' is not a keyword of paper " +
                                                std::string(paper),
                     b);
    const auto rm = scirec::read_more(b->model(), State{*a, *p}, *k);
    json kws = json::array();
    for (KeywordIndex x : c.keywords_of(*p)) kws.push_back(c.keyword_id(x));
    return {200, json{{"corpus_hash", hash_of(b)},
                      {"paper", c.paper_id(*p)},
                      {"title", c.paper_title(*p)},
                      {"keyword", c.keyword_id(*a)},
                      {"paper_keywords", std::move(kws)},
                      {"k", *k},
                      {"papers", papers_json(c, rm.scores)}}};
}

void QueryService::mount(httplib::Server& server) const {
    auto reply = [](httplib::Response& res, const ServiceResponse& r) {
        res.status = r.status;
        res.set_header("Access-Control-Allow-Origin", "*");
        res.set_content(r.body.dump(), "application/json");
    };
    auto param = [](const httplib::Request& req, const char* name) -> std::optional<std::string_view> {
        if (!req.has_param(name)) return std::nullopt;
        // get_param_value returns by value; keep it alive in the request's params map instead.
        auto it = req.params.find(name);
        return std::string_view(it->second);
    };

    server.Get("/health", [=, this](const httplib::Request&, httplib::Response& res) { reply(res, health()); });
    server.Get("/keywords", [=, this](const httplib::Request& req, httplib::Response& res) {
        reply(res, keywords(param(req, "q").value_or(""), param(req, "k")));
    });
    server.Get(R"(/keywords/([^/]+)/papers)", [=, this](const httplib::Request& req, httplib::Response& res) {
        reply(res, keyword_papers(req.matches[1].str(), param(req, "mode"), param(req, "k")));
    });
    server.Get(R"(/keywords/([^/]+)/related)", [=, this](const httplib::Request& req, httplib::Response& res) {
        reply(res, keyword_related(req.matches[1].str(), param(req, "k")));
    });
    server.Get(R"(/papers/([^/]+)/readmore)", [=, this](const httplib::Request& req, httplib::Response& res) {
        reply(res, read_more(req.matches[1].str(), param(req, "keyword"), param(req, "k")));
    });
    server.set_error_handler([=, this](const httplib::Request&, httplib::Response& res) {
        if (!res.body.empty()) return;
        reply(res, error(res.status, res.status == 404 ? "not_found" : "http_error", "no such endpoint", model()));
    });
}

}  // namespace scirec
