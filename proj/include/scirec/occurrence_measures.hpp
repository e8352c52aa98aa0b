#pragma once
// Occurrence-based keyword measures: counting rank, probability rank,
// counting inference and counting (Jaccard) similarity.

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "scirec/corpus.hpp"

namespace scirec {

enum class Measure { counting, probability, graph };

std::string_view measure_name(Measure m);
// "c" | "p" | "g" (also accepts the long names)
Measure parse_measure(std::string_view tag);

// A normalized ranking system over all corpus keywords, indexed by
// KeywordIndex.
struct KeywordRanking {
    Measure measure = Measure::counting;
    std::vector<double> scores;

    double operator[](KeywordIndex a) const { return scores.at(a); }
    double total() const;
};

struct PairScore {
    KeywordIndex a = 0;
    KeywordIndex b = 0;
    double value = 0.0;
};

enum class PairMeasure { inference, similarity };

// |P(A)| / sum_B |P(B)|
KeywordRanking rank_counting(const Corpus& c);
// (1/|papers|) * sum_{p in P(A)} 1/|K(p)|
KeywordRanking rank_probability(const Corpus& c);

// Number of papers containing both keywords (sorted-list merge).
std::size_t co_occurrence_count(const Corpus& c, KeywordIndex a, KeywordIndex b);

// |P(a) ∩ P(b)| / |P(a)|
PairScore inference_counting(const Corpus& c, KeywordIndex a, KeywordIndex b);
PairScore inference_counting(const Corpus& c, std::string_view a, std::string_view b);
// |P(a) ∩ P(b)| / |P(a) ∪ P(b)|
PairScore similarity_counting(const Corpus& c, KeywordIndex a, KeywordIndex b);
PairScore similarity_counting(const Corpus& c, std::string_view a, std::string_view b);

// The k best partners of `a` with non-zero score, descending, ties broken by
// keyword id. `a` itself is never listed.
std::vector<PairScore> top_pairs(const Corpus& c, KeywordIndex a, PairMeasure measure, std::size_t k);

}  // namespace scirec
