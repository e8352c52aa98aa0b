#pragma once
// The three reader scenarios: ordering the papers of a keyword, related
// keyword recommendation, and "reading more" from the current paper.

#include <cstddef>
#include <string_view>
#include <utility>
#include <vector>

#include "scirec/graph_measures.hpp"

namespace scirec {

enum class SearchMode { universal, keyword_based };

// "universal" | "local" | "keyword_based"
SearchMode parse_search_mode(std::string_view name);
std::string_view search_mode_name(SearchMode m);

// Candidates are exactly P(a); descending score, ties by paper id; first k.
std::vector<RankedPaper> search(const TransitionModel& model, const StationaryScores& scores, KeywordIndex a,
                                SearchMode mode, std::size_t k);

struct RelationThresholds {
    double m_child = 0.1;
    double m_parent = 0.1;
    double m_sibling = 0.1;

    void validate() const;
};

struct RelatedKeyword {
    KeywordIndex keyword = 0;
    double score = 0.0;
};

struct RelatedKeywords {
    std::vector<RelatedKeyword> children;  // I^g(B, a) > m_child: more detailed topics
    std::vector<RelatedKeyword> parents;   // I^g(a, B) > m_parent: more general topics
    std::vector<RelatedKeyword> siblings;  // S^g(a, B) > m_sibling: similar topics
};

// Throws InsufficientSupport when `a` never occurs in the sample. A
// candidate B with no occurrences has no defined I^g(B, a) and is left out of
// the children list.
RelatedKeywords related_keywords(const SequenceSample& sample, KeywordIndex a, const RelationThresholds& t,
                                 std::size_t k);

struct ReadMoreScore {
    State source;
    std::vector<RankedPaper> scores;  // descending, ties by paper id
};

// One-step mass from `source` = (A, p) into each paper q != p through the
// same-topic and citation actions only:
//   a2 / |P(A)| if q in P(A), plus a3 / |C(p)| if q in C(p).
ReadMoreScore read_more(const TransitionModel& model, State source, std::size_t k);

}  // namespace scirec
