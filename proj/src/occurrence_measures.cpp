#include "scirec/occurrence_measures.hpp"

#include <algorithm>
#include <numeric>

#include "scirec/error.hpp"

namespace scirec {

namespace {

void check_keyword(const Corpus& c, KeywordIndex a) {
    if (a >= c.keyword_count()) throw UnknownKeyword("#" + std::to_string(a));
}

}  // namespace

std::string_view measure_name(Measure m) {
    switch (m) {
        case Measure::counting: return "c";
        case Measure::probability: return "p";
        case Measure::graph: return "g";
    }
    return "?";
}

Measure parse_measure(std::string_view tag) {
    if (tag == "c" || tag == "counting") return Measure::counting;
    if (tag == "p" || tag == "probability") return Measure::probability;
    if (tag == "g" || tag == "graph") return Measure::graph;
    throw InvalidConfig("unknown measure '" + std::string(tag) + "' (expected c, p or g)");
}

double KeywordRanking::total() const { return std::accumulate(scores.begin(), scores.end(), 0.0); }

KeywordRanking rank_counting(const Corpus& c) {
    KeywordRanking r{Measure::counting, std::vector<double>(c.keyword_count())};
    const double total = static_cast<double>(c.stats().state_count);
    for (KeywordIndex a = 0; a < c.keyword_count(); ++a)
        r.scores[a] = static_cast<double>(c.postings(a).size()) / total;
    return r;
}

KeywordRanking rank_probability(const Corpus& c) {
    KeywordRanking r{Measure::probability, std::vector<double>(c.keyword_count(), 0.0)};
    const double n = static_cast<double>(c.paper_count());
    for (KeywordIndex a = 0; a < c.keyword_count(); ++a) {
        double s = 0.0;
        for (PaperIndex p : c.postings(a)) s += 1.0 / static_cast<double>(c.keywords_of(p).size());
        r.scores[a] = s / n;
    }
    return r;
}

std::size_t co_occurrence_count(const Corpus& c, KeywordIndex a, KeywordIndex b) {
    check_keyword(c, a);
    check_keyword(c, b);
    auto pa = c.postings(a);
    auto pb = c.postings(b);
    std::size_t n = 0;
    auto i = pa.begin();
    auto j = pb.begin();
    while (i != pa.end() && j != pb.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            ++n;
            ++i;
            ++j;
        }
    }
    return n;
}

PairScore inference_counting(const Corpus& c, KeywordIndex a, KeywordIndex b) {
    const double both = static_cast<double>(co_occurrence_count(c, a, b));
    return {a, b, both / static_cast<double>(c.postings(a).size())};
}

PairScore inference_counting(const Corpus& c, std::string_view a, std::string_view b) {
    return inference_counting(c, c.keyword_index(a), c.keyword_index(b));
}

PairScore similarity_counting(const Corpus& c, KeywordIndex a, KeywordIndex b) {
    const std::size_t both = co_occurrence_count(c, a, b);
    const std::size_t either = c.postings(a).size() + c.postings(b).size() - both;
    return {a, b, static_cast<double>(both) / static_cast<double>(either)};
}

PairScore similarity_counting(const Corpus& c, std::string_view a, std::string_view b) {
    return similarity_counting(c, c.keyword_index(a), c.keyword_index(b));
}

std::vector<PairScore> top_pairs(const Corpus& c, KeywordIndex a, PairMeasure measure, std::size_t k) {
    check_keyword(c, a);
    if (k == 0) throw InvalidConfig("k must be >= 1");

    // Partners are exactly the keywords of papers in P(a).
    std::vector<KeywordIndex> partners;
    for (PaperIndex p : c.postings(a))
        for (KeywordIndex b : c.keywords_of(p))
            if (b != a) partners.push_back(b);
    std::sort(partners.begin(), partners.end());
    partners.erase(std::unique(partners.begin(), partners.end()), partners.end());

    std::vector<PairScore> out;
    out.reserve(partners.size());
    for (KeywordIndex b : partners) {
        auto s = measure == PairMeasure::inference ? inference_counting(c, a, b) : similarity_counting(c, a, b);
        if (s.value > 0.0) out.push_back(s);
    }
    // Index order equals lexicographic id order.
    std::sort(out.begin(), out.end(), [](const PairScore& x, const PairScore& y) {
        if (x.value != y.value) return x.value > y.value;
        return x.b < y.b;
    });
    if (out.size() > k) out.resize(k);
    return out;
}

}  // namespace scirec
