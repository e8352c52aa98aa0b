// scirec: batch driver for ingesting a corpus, building the reading-chain
// model, and querying / evaluating it.
//
// Exit codes: 0 ok, 2 input validation, 3 non-convergence, 4 unknown entity,
// 1 anything else (I/O, corrupt model).

#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <httplib.h>
#include <json.hpp>

#include "scirec/corpus.hpp"
#include "scirec/error.hpp"
#include "scirec/evaluation.hpp"
#include "scirec/graph_measures.hpp"
#include "scirec/markov_chain.hpp"
#include "scirec/model_bundle.hpp"
#include "scirec/model_store.hpp"
#include "scirec/occurrence_measures.hpp"
#include "scirec/recommender.hpp"
#include "scirec/service.hpp"

namespace {

using namespace scirec;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitValidation = 2;
constexpr int kExitNotConverged = 3;
constexpr int kExitUnknown = 4;

void print_manifest(const ModelManifest& m) {
    nlohmann::json j{{"corpus_hash", m.corpus_hash}, {"counts", m.to_json().at("counts")}};
    if (m.stationary) {
        j["alpha"] = {m.stationary->alpha.same_paper, m.stationary->alpha.same_topic, m.stationary->alpha.citation,
                      m.stationary->alpha.random_jump};
        j["eps"] = m.stationary->solver.epsilon;
    }
    if (m.sample) {
        j["n0"] = m.sample->n0;
        j["N"] = m.sample->num_sequences;
        j["seed"] = m.sample->seed;
        j["rng_id"] = m.sample->rng_id;
    }
    std::cerr << "manifest: " << j.dump() << '\n';
}

// Plain aligned table for humans, RFC 4180 CSV otherwise.
class Table {
public:
    explicit Table(std::vector<std::string> header) : header_(std::move(header)) {}
    void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

    void print(std::ostream& os, bool csv) const {
        if (csv) {
            print_csv_row(os, header_);
            for (const auto& r : rows_) print_csv_row(os, r);
            return;
        }
        std::vector<std::size_t> width(header_.size());
        for (std::size_t i = 0; i < header_.size(); ++i) width[i] = header_[i].size();
        for (const auto& r : rows_)
            for (std::size_t i = 0; i < r.size(); ++i) width[i] = std::max(width[i], r[i].size());
        auto line = [&](const std::vector<std::string>& r) {
            for (std::size_t i = 0; i < r.size(); ++i) {
                os << r[i];
                if (i + 1 < r.size()) os << std::string(width[i] - r[i].size() + 2, ' ');
            }
            os << '\n';
        };
        line(header_);
        for (const auto& r : rows_) line(r);
    }

private:
    static void print_csv_row(std::ostream& os, const std::vector<std::string>& r) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i) os << ',';
            if (r[i].find_first_of(",\"\n") == std::string::npos) {
                os << r[i];
            } else {
                os << '"';
                for (char c : r[i]) os << (c == '"' ? "\"\"" : std::string(1, c));
                os << '"';
            }
        }
        os << '\n';
    }

    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

std::string num(double v, bool csv) { return csv ? format_csv_number(v) : format_display_number(v); }

std::string default_model_dir() {
    const char* env = std::getenv("SCIREC_MODEL_DIR");
    return env ? env : "";
}

void require_model_dir(const std::string& dir) {
    if (dir.empty()) throw InvalidConfig("no model directory: pass --model or set SCIREC_MODEL_DIR");
}

// ---------------------------------------------------------------------------

struct IngestArgs {
    std::string papers;
    std::string format = "jsonl";
    std::string out;
};

int run_ingest(const IngestArgs& a) {
    const Corpus c = load_corpus(a.papers, parse_input_format(a.format));
    save_model(c, a.out);
    const auto m = read_manifest(a.out);
    print_manifest(m);
    const auto s = c.stats();
    std::cout << "papers     " << s.paper_count << '\n'
              << "keywords   " << s.keyword_count << '\n'
              << "citations  " << s.citation_count << '\n'
              << "states     " << s.state_count << '\n';
    return kExitOk;
}

struct BuildArgs {
    std::string model = default_model_dir();
    std::string alpha = "0.3,0.3,0.2,0.2";
    double eps = 1e-10;
    std::size_t max_iter = 10000;
    std::uint32_t n0 = 10;
    std::uint64_t samples = 1'000'000;
    std::uint64_t seed = 42;
    unsigned threads = 0;
};

int run_build(const BuildArgs& a) {
    require_model_dir(a.model);
    const auto weights = ActionWeights::parse(a.alpha);
    weights.validate();
    const SolverConfig solver{a.eps, a.max_iter};
    solver.validate();
    SamplerConfig sampler{a.n0, a.samples, a.seed, a.threads};
    sampler.validate();

    BuildReport report;
    try {
        report = build_model(a.model, weights, solver, sampler);
    } catch (const NotConverged& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNotConverged;
    }
    print_manifest(report.manifest);

    std::cout << "states      " << report.state_count << '\n'
              << "row check   max |O - 1| = " << report.row_check.max_deviation << '\n'
              << "iterations  " << report.iterations << '\n'
              << "residual    " << report.residual << " (eps " << a.eps << ")\n"
              << "sequences   " << report.sequences << " x n0=" << a.n0 << '\n';
    return kExitOk;
}

struct QueryArgs {
    std::string model = default_model_dir();
    std::size_t top = 10;
    bool csv = false;
};

std::shared_ptr<const ModelBundle> open_bundle(const QueryArgs& q, ModelBundle::Parts parts) {
    require_model_dir(q.model);
    auto b = ModelBundle::load(q.model, parts);
    print_manifest(b->manifest());
    return b;
}

int run_rank(const QueryArgs& q, const std::string& measure_tag) {
    const Measure measure = parse_measure(measure_tag);
    const auto b = open_bundle(q, {measure == Measure::graph, false});
    const KeywordRanking& r = measure == Measure::counting      ? b->rank_counting()
                              : measure == Measure::probability ? b->rank_probability()
                                                                : b->rank_graph();
    std::vector<KeywordIndex> order(r.scores.size());
    for (KeywordIndex a = 0; a < order.size(); ++a) order[a] = a;
    std::stable_sort(order.begin(), order.end(), [&](KeywordIndex x, KeywordIndex y) { return r[x] > r[y]; });
    if (order.size() > q.top) order.resize(q.top);
    Table t({"rank", "keyword", "r_" + std::string(measure_name(measure))});
    for (std::size_t i = 0; i < order.size(); ++i)
        t.add({std::to_string(i + 1), b->corpus().keyword_id(order[i]), num(r[order[i]], q.csv)});
    t.print(std::cout, q.csv);
    return kExitOk;
}

int run_search(const QueryArgs& q, const std::string& keyword, const std::string& mode_name) {
    const auto mode = parse_search_mode(mode_name);
    const auto b = open_bundle(q, {true, false});
    const auto& c = b->corpus();
    const auto results = search(b->model(), b->stationary(), c.keyword_index(keyword), mode, q.top);
    Table t({"rank", "paper", "score", "title"});
    for (std::size_t i = 0; i < results.size(); ++i)
        t.add({std::to_string(i + 1), c.paper_id(results[i].paper), num(results[i].score, q.csv),
               c.paper_title(results[i].paper)});
    t.print(std::cout, q.csv);
    return kExitOk;
}

int run_related(const QueryArgs& q, const std::string& keyword, const RelationThresholds& thresholds) {
    const auto b = open_bundle(q, {false, true});
    const auto& c = b->corpus();
    const auto rel = related_keywords(b->sample(), c.keyword_index(keyword), thresholds, q.top);
    Table t({"relation", "keyword", "score"});
    auto add = [&](const char* name, const std::vector<RelatedKeyword>& list) {
        for (const auto& r : list) t.add({name, c.keyword_id(r.keyword), num(r.score, q.csv)});
    };
    add("child", rel.children);
    add("parent", rel.parents);
    add("sibling", rel.siblings);
    t.print(std::cout, q.csv);
    return kExitOk;
}

int run_readmore(const QueryArgs& q, const std::string& paper, const std::string& keyword) {
    const auto b = open_bundle(q, {true, false});
    const auto& c = b->corpus();
    const State source{c.keyword_index(keyword), c.paper_index(paper)};
    const auto rm = read_more(b->model(), source, q.top);
    Table t({"rank", "paper", "score", "title"});
    for (std::size_t i = 0; i < rm.scores.size(); ++i)
        t.add({std::to_string(i + 1), c.paper_id(rm.scores[i].paper), num(rm.scores[i].score, q.csv),
               c.paper_title(rm.scores[i].paper)});
    t.print(std::cout, q.csv);
    return kExitOk;
}

int run_eval(const QueryArgs& q, const std::string& pairs, double scale) {
    const auto b = open_bundle(q, {true, false});
    auto pick = [&](Measure m) -> const KeywordRanking& {
        return m == Measure::counting ? b->rank_counting()
               : m == Measure::probability ? b->rank_probability()
                                           : b->rank_graph();
    };
    std::vector<RankComparison> comparisons;
    std::stringstream ss(pairs);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw InvalidConfig("--compare expects pairs like c:g");
        const Measure baseline = parse_measure(item.substr(0, colon));
        const Measure target = parse_measure(item.substr(colon + 1));
        // "c:g" reports Delta = R^g - R^c relative to R^c.
        comparisons.push_back(compare(pick(target), pick(baseline), q.top, scale));
    }
    if (comparisons.empty()) throw InvalidConfig("--compare needs at least one pair");
    const RankingTriple triple{&b->rank_counting(), &b->rank_probability(), &b->rank_graph()};
    if (q.csv) {
        std::cout << render_summary_csv(comparisons) << '\n' << render_detail_csv(b->corpus(), comparisons, triple);
    } else {
        std::cout << render_markdown(b->corpus(), comparisons, triple);
    }
    return kExitOk;
}

struct ServeArgs {
    std::string model = default_model_dir();
    std::string host = "127.0.0.1";
    int port = 8080;
    std::size_t default_k = 10;
    RelationThresholds thresholds;
};

int run_serve(const ServeArgs& a) {
    require_model_dir(a.model);
    QueryService service({a.model, a.host, a.port, a.default_k, a.thresholds});
    httplib::Server server;
    service.mount(server);
    std::thread loader([&] {
        try {
            service.reload();
            print_manifest(service.model()->manifest());
        } catch (const std::exception& e) {
            std::cerr << "error: model load failed: " << e.what() << '\n';
            server.wait_until_ready();
            server.stop();
        }
    });
    std::cerr << "listening on " << a.host << ':' << a.port << '\n';
    const bool ok = server.listen(a.host, a.port);
    loader.join();
    if (!ok) {
        std::cerr << "error: server stopped or could not bind " << a.host << ':' << a.port << '\n';
        return kExitFailure;
    }
    return kExitOk;
}

void add_query_options(CLI::App* cmd, QueryArgs& q) {
    cmd->add_option("--model", q.model, "Model directory (default: $SCIREC_MODEL_DIR)");
    cmd->add_option("--top,-k", q.top, "Number of results")->check(CLI::PositiveNumber);
    cmd->add_flag("--csv", q.csv, "CSV output (9 significant digits)");
}

void add_threshold_options(CLI::App* cmd, RelationThresholds& t) {
    cmd->add_option("--m-child", t.m_child, "Child threshold on I^g(B, A)")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--m-parent", t.m_parent, "Parent threshold on I^g(A, B)")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--m-sibling", t.m_sibling, "Sibling threshold on S^g(A, B)")->check(CLI::Range(0.0, 1.0));
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"scirec: keyword ranking, inference and recommendation over a citation corpus"};
    app.require_subcommand(1);

    IngestArgs ingest;
    auto* c_ingest = app.add_subcommand("ingest", "Load and validate a corpus, write a model directory");
    c_ingest->add_option("--papers", ingest.papers, "Input file (JSONL) or CSV directory / papers.csv")->required();
    c_ingest->add_option("--format", ingest.format, "jsonl or csv")->check(CLI::IsMember({"jsonl", "csv"}));
    c_ingest->add_option("--out", ingest.out, "Model directory to write")->required();

    BuildArgs build;
    auto* c_build = app.add_subcommand("build", "Compute the stationary vector and sample walks");
    c_build->add_option("--model", build.model, "Model directory (default: $SCIREC_MODEL_DIR)");
    c_build->add_option("--alpha", build.alpha, "Action weights a1,a2,a3,a4");
    c_build->add_option("--eps", build.eps, "Max-norm convergence tolerance");
    c_build->add_option("--max-iter", build.max_iter, "Power-iteration limit");
    c_build->add_option("--n0", build.n0, "Walk length");
    c_build->add_option("--samples", build.samples, "Number of walks");
    c_build->add_option("--seed", build.seed, "Sampler seed");
    c_build->add_option("--threads", build.threads, "Sampler threads (0 = all cores; results do not depend on it)");

    QueryArgs rank_q;
    std::string measure = "g";
    auto* c_rank = app.add_subcommand("rank", "Rank keywords by R^c, R^p or R^g");
    add_query_options(c_rank, rank_q);
    c_rank->add_option("--measure", measure, "c, p or g");

    QueryArgs related_q;
    std::string related_kw;
    RelationThresholds thresholds;
    related_q.top = 5;
    auto* c_related = app.add_subcommand("related", "Children, parents and siblings of a keyword");
    c_related->add_option("keyword", related_kw)->required();
    add_query_options(c_related, related_q);
    add_threshold_options(c_related, thresholds);

    QueryArgs search_q;
    std::string search_kw;
    std::string mode = "universal";
    auto* c_search = app.add_subcommand("search", "Papers of a keyword, universal or keyword-based order");
    c_search->add_option("keyword", search_kw)->required();
    c_search->add_option("--mode", mode, "universal or local");
    add_query_options(c_search, search_q);

    QueryArgs readmore_q;
    std::string rm_paper;
    std::string rm_keyword;
    auto* c_readmore = app.add_subcommand("readmore", "Next papers from a (keyword, paper) state");
    c_readmore->add_option("--paper", rm_paper)->required();
    c_readmore->add_option("--keyword", rm_keyword)->required();
    add_query_options(c_readmore, readmore_q);

    QueryArgs eval_q;
    std::string pairs = "c:g,p:g,c:p";
    double scale = 1.0;
    eval_q.top = 5;
    auto* c_eval = app.add_subcommand("eval", "Spearman rho and top deltas between ranking measures");
    add_query_options(c_eval, eval_q);
    c_eval->add_option("--compare", pairs, "Comma-separated baseline:target pairs, e.g. c:g,p:g,c:p");
    c_eval->add_option("--scale", scale, "Common display scale applied to every ranking");

    ServeArgs serve;
    auto* c_serve = app.add_subcommand("serve", "Run the read-only HTTP query service");
    c_serve->add_option("--model", serve.model, "Model directory (default: $SCIREC_MODEL_DIR)");
    c_serve->add_option("--host", serve.host);
    c_serve->add_option("--port", serve.port);
    c_serve->add_option("--default-k", serve.default_k)->check(CLI::PositiveNumber);
    add_threshold_options(c_serve, serve.thresholds);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitValidation;
    }

    try {
        if (c_ingest->parsed()) return run_ingest(ingest);
        if (c_build->parsed()) return run_build(build);
        if (c_rank->parsed()) return run_rank(rank_q, measure);
        if (c_related->parsed()) return run_related(related_q, related_kw, thresholds);
        if (c_search->parsed()) return run_search(search_q, search_kw, mode);
        if (c_readmore->parsed()) return run_readmore(readmore_q, rm_paper, rm_keyword);
        if (c_eval->parsed()) return run_eval(eval_q, pairs, scale);
        if (c_serve->parsed()) return run_serve(serve);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const InvalidWeights& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const InvalidConfig& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitValidation;
    } catch (const NotConverged& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitNotConverged;
    } catch (const UnknownEntity& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUnknown;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitFailure;
    }
    return kExitFailure;
}
