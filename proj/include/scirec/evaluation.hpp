#pragma once
// Comparison of keyword ranking systems: Spearman correlation, per-keyword
// deltas and the top increasing / decreasing keywords between two measures.

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "scirec/occurrence_measures.hpp"

namespace scirec {

// Ranks 1..n with tied values sharing their average rank.
std::vector<double> average_ranks(std::span<const double> values);

// Pearson correlation of the average ranks. Throws MismatchedKeys on size
// mismatch and DegenerateInput when n < 2 or either input is constant.
double spearman(std::span<const double> x, std::span<const double> y);
double spearman(const KeywordRanking& x, const KeywordRanking& y);

struct DeltaRow {
    KeywordIndex keyword = 0;
    double r_i = 0.0;        // scaled
    double r_j = 0.0;        // scaled
    double delta = 0.0;      // r_i - r_j
    double pct_delta = 0.0;  // delta / r_j (a ratio, not multiplied by 100)
};

struct RankComparison {
    Measure measure_i = Measure::counting;
    Measure measure_j = Measure::counting;
    double scale = 1.0;
    double rho = 0.0;  // NaN when either ranking is constant
    double mean_abs_pct_delta = 0.0;  // mean of |pct_delta| over all keywords (ratio)
    std::vector<DeltaRow> rows;            // every keyword, index order
    std::vector<DeltaRow> top_increasing;  // delta > 0, largest first
    std::vector<DeltaRow> top_decreasing;  // delta < 0, most negative first
};

// Both rankings are multiplied by `scale` before deltas are taken. Ties in
// the top lists are broken by keyword id.
RankComparison compare(const KeywordRanking& ranking_i, const KeywordRanking& ranking_j, std::size_t k,
                       double scale = 1.0);

// The three ranking systems side by side, for report rendering.
struct RankingTriple {
    const KeywordRanking* counting = nullptr;
    const KeywordRanking* probability = nullptr;
    const KeywordRanking* graph = nullptr;
};

// Summary CSV: comparison,rho,mean_abs_pct_delta
std::string render_summary_csv(std::span<const RankComparison> comparisons);
// Detail CSV, one row per top-list entry:
// comparison,table,keyword,r_c,r_p,r_g,delta,delta_pct
std::string render_detail_csv(const Corpus& corpus, std::span<const RankComparison> comparisons,
                              const RankingTriple& rankings);
// Human-readable report with the same columns (4 significant digits).
std::string render_markdown(const Corpus& corpus, std::span<const RankComparison> comparisons,
                            const RankingTriple& rankings);

// printf("%.9g") / printf("%.4g")
std::string format_csv_number(double v);
std::string format_display_number(double v);

}  // namespace scirec
