#include "scirec/recommender.hpp"

#include <algorithm>
#include <string>

#include "scirec/error.hpp"

namespace scirec {

namespace {

// Index order is id order, so index tie-breaks are lexicographic.
void sort_and_truncate(std::vector<RankedPaper>& v, std::size_t k) {
    std::sort(v.begin(), v.end(), [](const RankedPaper& x, const RankedPaper& y) {
        if (x.score != y.score) return x.score > y.score;
        return x.paper < y.paper;
    });
    if (v.size() > k) v.resize(k);
}

void sort_and_truncate(std::vector<RelatedKeyword>& v, std::size_t k) {
    std::sort(v.begin(), v.end(), [](const RelatedKeyword& x, const RelatedKeyword& y) {
        if (x.score != y.score) return x.score > y.score;
        return x.keyword < y.keyword;
    });
    if (v.size() > k) v.resize(k);
}

void check_k(std::size_t k) {
    if (k == 0) throw InvalidConfig("k must be >= 1");
}

}  // namespace

SearchMode parse_search_mode(std::string_view name) {
    if (name == "universal") return SearchMode::universal;
    if (name == "local" || name == "keyword_based" || name == "keyword") return SearchMode::keyword_based;
    throw InvalidConfig("unknown search mode '" + std::string(name) + "' (expected universal or local)");
}

std::string_view search_mode_name(SearchMode m) { return m == SearchMode::universal ? "universal" : "local"; }

std::vector<RankedPaper> search(const TransitionModel& model, const StationaryScores& scores, KeywordIndex a,
                                SearchMode mode, std::size_t k) {
    check_k(k);
    const Corpus& c = model.corpus();
    auto local = keyword_paper_rank(model, scores, a);
    std::vector<RankedPaper> out = std::move(local.scores);
    if (mode == SearchMode::universal) {
        for (auto& e : out) {
            const StateIndex first = model.first_state(e.paper);
            double s = 0.0;
            for (std::size_t i = 0; i < c.keywords_of(e.paper).size(); ++i) s += scores.pr[first + i];
            e.score = s;
        }
    }
    sort_and_truncate(out, k);
    return out;
}

void RelationThresholds::validate() const {
    for (double m : {m_child, m_parent, m_sibling})
        if (!(m >= 0.0 && m <= 1.0)) throw InvalidConfig("relation thresholds must lie in [0, 1]");
}

RelatedKeywords related_keywords(const SequenceSample& sample, KeywordIndex a, const RelationThresholds& t,
                                 std::size_t k) {
    check_k(k);
    t.validate();
    const auto occ_a = sample.occurrences(a);
    if (occ_a == 0)
        throw InsufficientSupport("keyword #" + std::to_string(a) + " never occurs in the sampled sequences");
    const auto pairs = sample.pair_counts_with(a);

    RelatedKeywords out;
    for (KeywordIndex b = 0; b < pairs.size(); ++b) {
        if (b == a || !sample.covers(b)) continue;
        const auto both = static_cast<double>(pairs[b]);
        const auto occ_b = sample.occurrences(b);
        const double parent = both / static_cast<double>(occ_a);
        const double sibling = both / static_cast<double>(occ_a + occ_b - pairs[b]);
        if (occ_b > 0) {
            const double child = both / static_cast<double>(occ_b);
            if (child > t.m_child) out.children.push_back({b, child});
        }
        if (parent > t.m_parent) out.parents.push_back({b, parent});
        if (sibling > t.m_sibling) out.siblings.push_back({b, sibling});
    }
    sort_and_truncate(out.children, k);
    sort_and_truncate(out.parents, k);
    sort_and_truncate(out.siblings, k);
    return out;
}

ReadMoreScore read_more(const TransitionModel& model, State source, std::size_t k) {
    check_k(k);
    const Corpus& c = model.corpus();
    (void)model.state_index(source);
    const auto& w = model.weights();
    const PaperIndex p = source.paper;

    std::vector<double> score(c.paper_count(), 0.0);
    const auto topic = c.postings(source.keyword);
    for (PaperIndex q : topic) score[q] += w.same_topic / static_cast<double>(topic.size());
    if (c.uses_citation_fallback(p)) {
        for (PaperIndex q = 0; q < c.paper_count(); ++q) score[q] += w.citation / static_cast<double>(c.paper_count());
    } else {
        const auto cited = c.raw_citations(p);
        for (PaperIndex q : cited) score[q] += w.citation / static_cast<double>(cited.size());
    }

    ReadMoreScore out{source, {}};
    for (PaperIndex q = 0; q < c.paper_count(); ++q)
        if (q != p && score[q] > 0.0) out.scores.push_back({q, score[q]});
    sort_and_truncate(out.scores, k);
    return out;
}

}  // namespace scirec
