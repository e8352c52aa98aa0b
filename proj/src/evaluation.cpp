#include "scirec/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>

#include "scirec/error.hpp"

namespace scirec {

std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        // positions i..j (0-based) share rank ((i+1) + (j+1)) / 2
        const double r = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = r;
        i = j + 1;
    }
    return ranks;
}

double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw MismatchedKeys("rankings cover different keyword sets");
    const std::size_t n = x.size();
    if (n < 2) throw DegenerateInput("spearman needs at least two keywords");
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    // Both rank vectors have mean (n + 1) / 2.
    const double mean = (static_cast<double>(n) + 1.0) / 2.0;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = rx[i] - mean;
        const double dy = ry[i] - mean;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0) throw DegenerateInput("a ranking assigns every keyword the same value");
    const double rho = sxy / std::sqrt(sxx * syy);
    return std::clamp(rho, -1.0, 1.0);
}

double spearman(const KeywordRanking& x, const KeywordRanking& y) { return spearman(x.scores, y.scores); }

RankComparison compare(const KeywordRanking& ranking_i, const KeywordRanking& ranking_j, std::size_t k, double scale) {
    if (ranking_i.scores.size() != ranking_j.scores.size())
        throw MismatchedKeys("rankings cover different keyword sets");
    if (!(scale > 0.0) || !std::isfinite(scale)) throw InvalidConfig("scale must be a positive number");

    RankComparison out;
    out.measure_i = ranking_i.measure;
    out.measure_j = ranking_j.measure;
    out.scale = scale;
    // A constant ranking has no rank correlation, but its deltas are still
    // meaningful, so the report carries NaN instead of failing.
    try {
        out.rho = spearman(ranking_i, ranking_j);
    } catch (const DegenerateInput&) {
        out.rho = std::numeric_limits<double>::quiet_NaN();
    }

    double abs_pct = 0.0;
    for (KeywordIndex a = 0; a < ranking_i.scores.size(); ++a) {
        DeltaRow row;
        row.keyword = a;
        row.r_i = ranking_i.scores[a] * scale;
        row.r_j = ranking_j.scores[a] * scale;
        row.delta = row.r_i - row.r_j;
        row.pct_delta = row.r_j > 0.0 ? row.delta / row.r_j : 0.0;
        abs_pct += std::abs(row.pct_delta);
        out.rows.push_back(row);
        if (row.delta > 0.0) out.top_increasing.push_back(row);
        if (row.delta < 0.0) out.top_decreasing.push_back(row);
    }
    out.mean_abs_pct_delta = out.rows.empty() ? 0.0 : abs_pct / static_cast<double>(out.rows.size());

    std::sort(out.top_increasing.begin(), out.top_increasing.end(), [](const DeltaRow& a, const DeltaRow& b) {
        if (a.delta != b.delta) return a.delta > b.delta;
        return a.keyword < b.keyword;
    });
    std::sort(out.top_decreasing.begin(), out.top_decreasing.end(), [](const DeltaRow& a, const DeltaRow& b) {
        if (a.delta != b.delta) return a.delta < b.delta;
        return a.keyword < b.keyword;
    });
    if (out.top_increasing.size() > k) out.top_increasing.resize(k);
    if (out.top_decreasing.size() > k) out.top_decreasing.resize(k);
    return out;
}

std::string format_csv_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string format_display_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

namespace {

// Reports name a comparison "baseline:target" (j:i), matching the column
// labels Delta_cg = R^g - R^c used for the increasing/decreasing tables.
std::string comparison_tag(const RankComparison& c) {
    return std::string(measure_name(c.measure_j)) + ":" + std::string(measure_name(c.measure_i));
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out += '"';
        out += ch;
    }
    return out + "\"";
}

double scaled(const KeywordRanking* r, KeywordIndex a, double scale) {
    return r ? r->scores.at(a) * scale : std::nan("");
}

}  // namespace

std::string render_summary_csv(std::span<const RankComparison> comparisons) {
    std::ostringstream os;
    os << "comparison,rho,mean_abs_pct_delta\n";
    for (const auto& c : comparisons)
        os << comparison_tag(c) << ',' << format_csv_number(c.rho) << ','
           << format_csv_number(c.mean_abs_pct_delta * 100.0) << '\n';
    return os.str();
}

std::string render_detail_csv(const Corpus& corpus, std::span<const RankComparison> comparisons,
                              const RankingTriple& rankings) {
    std::ostringstream os;
    os << "comparison,table,keyword,r_c,r_p,r_g,delta,delta_pct\n";
    for (const auto& c : comparisons) {
        auto emit = [&](const char* table, const std::vector<DeltaRow>& rows) {
            for (const auto& r : rows) {
                os << comparison_tag(c) << ',' << table << ',' << csv_field(corpus.keyword_id(r.keyword)) << ','
                   << format_csv_number(scaled(rankings.counting, r.keyword, c.scale)) << ','
                   << format_csv_number(scaled(rankings.probability, r.keyword, c.scale)) << ','
                   << format_csv_number(scaled(rankings.graph, r.keyword, c.scale)) << ','
                   << format_csv_number(r.delta) << ',' << format_csv_number(r.pct_delta * 100.0) << '\n';
            }
        };
        emit("increasing", c.top_increasing);
        emit("decreasing", c.top_decreasing);
    }
    return os.str();
}

std::string render_markdown(const Corpus& corpus, std::span<const RankComparison> comparisons,
                            const RankingTriple& rankings) {
    std::ostringstream os;
    for (const auto& c : comparisons) {
        const std::string i(measure_name(c.measure_j));
        const std::string j(measure_name(c.measure_i));
        os << "## R^" << j << " vs R^" << i << "\n\n";
        os << "- rho_" << i << j << " = " << format_display_number(c.rho) << "\n";
        os << "- mean |%Delta_" << i << j << "| = " << format_display_number(c.mean_abs_pct_delta * 100.0)
           << "%\n";
        os << "- scale = " << format_display_number(c.scale) << "\n\n";
        auto table = [&](const char* title, const std::vector<DeltaRow>& rows) {
            os << "### " << title << "\n\n";
            os << "| Keyword | R^c | R^p | R^g | Delta_" << i << j << " | Delta_" << i << j << "% |\n";
            os << "|---|---|---|---|---|---|\n";
            for (const auto& r : rows) {
                os << "| " << corpus.keyword_id(r.keyword) << " | "
                   << format_display_number(scaled(rankings.counting, r.keyword, c.scale)) << " | "
                   << format_display_number(scaled(rankings.probability, r.keyword, c.scale)) << " | "
                   << format_display_number(scaled(rankings.graph, r.keyword, c.scale)) << " | "
                   << format_display_number(r.delta) << " | " << format_display_number(r.pct_delta * 100.0)
                   << " |\n";
            }
            if (rows.empty()) os << "| (none) | | | | | |\n";
            os << "\n";
        };
        table("Top increasing", c.top_increasing);
        table("Top decreasing", c.top_decreasing);
    }
    return os.str();
}

}  // namespace scirec
