#include "scirec/markov_chain.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace scirec {

void ActionWeights::validate() const {
    for (double a : as_array())
        if (!(a > 0.0) || !std::isfinite(a)) throw InvalidWeights("action weights must be positive: " + to_string());
    if (std::abs(sum() - 1.0) > 1e-12) throw InvalidWeights("action weights must sum to 1: " + to_string());
}

std::string ActionWeights::to_string() const {
    std::ostringstream os;
    os.precision(17);
    os << same_paper << ',' << same_topic << ',' << citation << ',' << random_jump;
    return os.str();
}

ActionWeights ActionWeights::parse(std::string_view text) {
    std::array<double, 4> v{};
    std::size_t n = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find(',', pos);
        if (end == std::string_view::npos) end = text.size();
        auto field = text.substr(pos, end - pos);
        if (n == 4) throw InvalidWeights("expected 4 comma-separated weights: " + std::string(text));
        auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v[n]);
        if (ec != std::errc() || ptr != field.data() + field.size())
            throw InvalidWeights("not a number: '" + std::string(field) + "'");
        ++n;
        pos = end + 1;
    }
    if (n != 4) throw InvalidWeights("expected 4 comma-separated weights: " + std::string(text));
    return {v[0], v[1], v[2], v[3]};
}

TransitionModel::TransitionModel(const Corpus& corpus, ActionWeights weights, WeightCheck check)
    : corpus_(&corpus), weights_(weights) {
    if (check == WeightCheck::enforce) weights_.validate();
    if (corpus.paper_count() == 0) throw InvalidConfig("cannot build a chain over an empty corpus");
    const auto n_states = corpus.stats().state_count;
    if (n_states > std::numeric_limits<StateIndex>::max()) throw InvalidConfig("too many states");

    state_keyword_.reserve(n_states);
    state_paper_.reserve(n_states);
    for (PaperIndex p = 0; p < corpus.paper_count(); ++p) {
        for (KeywordIndex a : corpus.keywords_of(p)) {
            state_keyword_.push_back(a);
            state_paper_.push_back(p);
        }
        if (corpus.uses_citation_fallback(p)) fallback_papers_.push_back(p);
    }

    keyword_state_offsets_.assign(1, 0);
    keyword_states_.reserve(n_states);
    for (KeywordIndex a = 0; a < corpus.keyword_count(); ++a) {
        for (PaperIndex p : corpus.postings(a)) {
            auto k = corpus.keywords_of(p);
            auto pos = std::lower_bound(k.begin(), k.end(), a) - k.begin();
            keyword_states_.push_back(static_cast<StateIndex>(corpus.keyword_offset(p) + pos));
        }
        keyword_state_offsets_.push_back(keyword_states_.size());
    }
}

std::optional<StateIndex> TransitionModel::find_state(State st) const {
    if (st.paper >= corpus_->paper_count()) return std::nullopt;
    auto k = corpus_->keywords_of(st.paper);
    auto it = std::lower_bound(k.begin(), k.end(), st.keyword);
    if (it == k.end() || *it != st.keyword) return std::nullopt;
    return static_cast<StateIndex>(corpus_->keyword_offset(st.paper) + (it - k.begin()));
}

StateIndex TransitionModel::state_index(State st) const {
    if (auto s = find_state(st)) return *s;
    std::string kw = st.keyword < corpus_->keyword_count() ? corpus_->keyword_id(st.keyword) : "#" + std::to_string(st.keyword);
    std::string pp = st.paper < corpus_->paper_count() ? corpus_->paper_id(st.paper) : "#" + std::to_string(st.paper);
    throw UnknownState("(" + kw + ", " + pp + ")");
}

StateIndex TransitionModel::state_index(std::string_view keyword, std::string_view paper) const {
    return state_index(State{corpus_->keyword_index(keyword), corpus_->paper_index(paper)});
}

double TransitionModel::same_paper_probability(StateIndex from, StateIndex to) const {
    const PaperIndex p = state_paper_.at(from);
    if (p != state_paper_.at(to)) return 0.0;
    return weights_.same_paper / static_cast<double>(corpus_->keywords_of(p).size());
}

double TransitionModel::same_topic_probability(StateIndex from, StateIndex to) const {
    const KeywordIndex a = state_keyword_.at(from);
    if (a != state_keyword_.at(to)) return 0.0;
    return weights_.same_topic / static_cast<double>(corpus_->postings(a).size());
}

double TransitionModel::citation_probability(StateIndex from, StateIndex to) const {
    const PaperIndex p = state_paper_.at(from);
    const PaperIndex q = state_paper_.at(to);
    if (!corpus_->in_cited_set(p, q)) return 0.0;
    return weights_.citation /
           (static_cast<double>(corpus_->cited_count(p)) * static_cast<double>(corpus_->keywords_of(q).size()));
}

double TransitionModel::random_jump_probability(StateIndex from, StateIndex to) const {
    (void)state_paper_.at(from);
    const PaperIndex q = state_paper_.at(to);
    return weights_.random_jump /
           (static_cast<double>(corpus_->paper_count()) * static_cast<double>(corpus_->keywords_of(q).size()));
}

double TransitionModel::transition_probability(StateIndex from, StateIndex to) const {
    return same_paper_probability(from, to) + same_topic_probability(from, to) + citation_probability(from, to) +
           random_jump_probability(from, to);
}

std::vector<std::pair<StateIndex, double>> TransitionModel::out_distribution(StateIndex from) const {
    if (from >= state_count()) throw UnknownState("#" + std::to_string(from));
    const Corpus& c = *corpus_;
    const PaperIndex p = state_paper_[from];
    const KeywordIndex a = state_keyword_[from];
    std::vector<double> row(state_count(), 0.0);

    auto spread_over_paper = [&](PaperIndex q, double mass) {
        const auto first = first_state(q);
        const auto n = c.keywords_of(q).size();
        const double each = mass / static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) row[first + i] += each;
    };

    spread_over_paper(p, weights_.same_paper);
    const auto topic = keyword_states(a);
    for (StateIndex t : topic) row[t] += weights_.same_topic / static_cast<double>(topic.size());
    if (c.uses_citation_fallback(p)) {
        for (PaperIndex q = 0; q < c.paper_count(); ++q)
            spread_over_paper(q, weights_.citation / static_cast<double>(c.paper_count()));
    } else {
        const auto cited = c.raw_citations(p);
        for (PaperIndex q : cited) spread_over_paper(q, weights_.citation / static_cast<double>(cited.size()));
    }
    for (PaperIndex q = 0; q < c.paper_count(); ++q)
        spread_over_paper(q, weights_.random_jump / static_cast<double>(c.paper_count()));

    std::vector<std::pair<StateIndex, double>> out;
    for (StateIndex t = 0; t < row.size(); ++t)
        if (row[t] > 0.0) out.emplace_back(t, row[t]);
    return out;
}

void TransitionModel::propagate(std::span<const double> in, std::span<double> out) const {
    const Corpus& c = *corpus_;
    const std::size_t n_papers = c.paper_count();
    if (in.size() != state_count() || out.size() != state_count())
        throw InvalidConfig("propagate: vector size does not match state count");

    std::vector<double> paper_mass(n_papers, 0.0);
    std::vector<double> keyword_mass(c.keyword_count(), 0.0);
    std::vector<double> cited_mass(n_papers, 0.0);
    double total = 0.0;
    for (StateIndex s = 0; s < in.size(); ++s) {
        paper_mass[state_paper_[s]] += in[s];
        keyword_mass[state_keyword_[s]] += in[s];
        total += in[s];
    }

    // Citation action: papers with real citations push mass along their
    // edges; fallback papers spread theirs uniformly over all papers.
    double fallback_mass = 0.0;
    for (PaperIndex p : fallback_papers_) fallback_mass += paper_mass[p];
    for (PaperIndex p = 0; p < n_papers; ++p) {
        const auto cited = c.raw_citations(p);
        if (cited.empty()) continue;
        const double share = paper_mass[p] / static_cast<double>(cited.size());
        for (PaperIndex q : cited) cited_mass[q] += share;
    }
    const double fallback_share = fallback_mass / static_cast<double>(n_papers);
    const double jump_share = weights_.random_jump * total / static_cast<double>(n_papers);

    for (StateIndex s = 0; s < out.size(); ++s) {
        const PaperIndex q = state_paper_[s];
        const KeywordIndex b = state_keyword_[s];
        const double kq = static_cast<double>(c.keywords_of(q).size());
        out[s] = (weights_.same_paper * paper_mass[q] + weights_.citation * (cited_mass[q] + fallback_share) +
                  jump_share) /
                     kq +
                 weights_.same_topic * keyword_mass[b] / static_cast<double>(c.postings(b).size());
    }
}

RowStochasticReport TransitionModel::verify_row_stochastic(double tolerance) const {
    const Corpus& c = *corpus_;
    const std::size_t n_papers = c.paper_count();

    // Row sums depend on the source only through (p, A); each action's row
    // total is accumulated term by term over its actual support.
    auto paper_total = [&](PaperIndex q, double mass) {
        const auto n = c.keywords_of(q).size();
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += mass / static_cast<double>(n);
        return s;
    };
    std::vector<double> same_paper_row(n_papers);
    std::vector<double> citation_row(n_papers);
    double jump_row = 0.0;
    for (PaperIndex q = 0; q < n_papers; ++q) jump_row += paper_total(q, weights_.random_jump / static_cast<double>(n_papers));
    double fallback_row = 0.0;
    for (PaperIndex q = 0; q < n_papers; ++q) fallback_row += paper_total(q, weights_.citation / static_cast<double>(n_papers));
    for (PaperIndex p = 0; p < n_papers; ++p) {
        same_paper_row[p] = paper_total(p, weights_.same_paper);
        const auto cited = c.raw_citations(p);
        if (cited.empty()) {
            citation_row[p] = fallback_row;
        } else {
            double s = 0.0;
            for (PaperIndex q : cited) s += paper_total(q, weights_.citation / static_cast<double>(cited.size()));
            citation_row[p] = s;
        }
    }
    std::vector<double> same_topic_row(c.keyword_count());
    for (KeywordIndex a = 0; a < c.keyword_count(); ++a) {
        const auto n = keyword_states(a).size();
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += weights_.same_topic / static_cast<double>(n);
        same_topic_row[a] = s;
    }

    RowStochasticReport report;
    report.tolerance = tolerance;
    for (StateIndex s = 0; s < state_count(); ++s) {
        const PaperIndex p = state_paper_[s];
        const double row = same_paper_row[p] + same_topic_row[state_keyword_[s]] + citation_row[p] + jump_row;
        const double dev = std::abs(row - 1.0);
        if (dev > report.max_deviation) {
            report.max_deviation = dev;
            report.worst_state = s;
        }
    }
    return report;
}

std::size_t TransitionModel::footprint_bytes() const {
    return state_keyword_.capacity() * sizeof(KeywordIndex) + state_paper_.capacity() * sizeof(PaperIndex) +
           keyword_state_offsets_.capacity() * sizeof(std::uint64_t) + keyword_states_.capacity() * sizeof(StateIndex) +
           fallback_papers_.capacity() * sizeof(PaperIndex);
}

void SolverConfig::validate() const {
    if (!(epsilon > 0.0)) throw InvalidConfig("epsilon must be > 0");
    if (max_iterations == 0) throw InvalidConfig("max_iterations must be >= 1");
}

namespace {

void normalize(std::vector<double>& v) {
    const double total = std::accumulate(v.begin(), v.end(), 0.0);
    for (double& x : v) x /= total;
}

}  // namespace

StationaryScores stationary(const TransitionModel& model, const SolverConfig& cfg, std::span<const double> start) {
    cfg.validate();
    const std::size_t n = model.state_count();
    std::vector<double> prev(n, 1.0 / static_cast<double>(n));
    if (!start.empty()) {
        if (start.size() != n) throw InvalidConfig("start vector size does not match state count");
        double total = 0.0;
        for (double x : start) {
            if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidConfig("start vector must be non-negative");
            total += x;
        }
        if (!(total > 0.0)) throw InvalidConfig("start vector must have positive mass");
        prev.assign(start.begin(), start.end());
        normalize(prev);
    }
    std::vector<double> next(n);

    StationaryScores result;
    for (std::size_t k = 1; k <= cfg.max_iterations; ++k) {
        model.propagate(prev, next);
        normalize(next);
        double residual = 0.0;
        for (std::size_t s = 0; s < n; ++s) residual = std::max(residual, std::abs(next[s] - prev[s]));
        std::swap(prev, next);
        result.iterations = k;
        result.residual = residual;
        if (residual <= cfg.epsilon) {
            result.pr = std::move(prev);
            return result;
        }
    }
    result.pr = std::move(prev);
    throw NotConverged(std::move(result));
}

double stationarity_residual(const TransitionModel& model, std::span<const double> pr) {
    std::vector<double> next(model.state_count());
    model.propagate(pr, next);
    double worst = 0.0;
    for (std::size_t s = 0; s < next.size(); ++s) worst = std::max(worst, std::abs(next[s] - pr[s]));
    return worst;
}

}  // namespace scirec
