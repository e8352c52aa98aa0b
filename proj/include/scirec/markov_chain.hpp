#pragma once
// Reading-process Markov chain over (keyword, paper) states.
//
// From state (A, p) the reader moves to (B, q) by one of four actions:
//
//   same paper, other topic   weight a1 / |K(p)|            if q == p
//   same topic, other paper   weight a2 / |P(A)|            if B == A
//   follow a citation         weight a3 / (|C(p)| |K(q)|)   if q in C(p)
//   random restart            weight a4 / (|papers| |K(q)|)
//
// C(p) falls back to the whole corpus when p cites nothing. The random
// restart (and the citation fallback) make every row dense, so the kernel is
// never materialized: one power-iteration sweep aggregates mass per paper and
// per keyword and redistributes it through the citation lists, which costs
// O(states + citations).

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "scirec/corpus.hpp"
#include "scirec/error.hpp"

namespace scirec {

using StateIndex = std::uint32_t;

struct State {
    KeywordIndex keyword = 0;
    PaperIndex paper = 0;

    bool operator==(const State&) const = default;
};

struct ActionWeights {
    double same_paper = 0.3;   // a1
    double same_topic = 0.3;   // a2
    double citation = 0.2;     // a3
    double random_jump = 0.2;  // a4

    std::array<double, 4> as_array() const { return {same_paper, same_topic, citation, random_jump}; }
    double sum() const { return same_paper + same_topic + citation + random_jump; }
    // Throws InvalidWeights unless every weight is > 0 and they sum to 1 (1e-12).
    void validate() const;
    std::string to_string() const;
    // "a1,a2,a3,a4"
    static ActionWeights parse(std::string_view text);

    bool operator==(const ActionWeights&) const = default;
};

// Test hook: `skip` lets a model be built from weights that do not sum to
// one, so the row-stochasticity check has something to reject.
enum class WeightCheck { enforce, skip };

struct RowStochasticReport {
    double max_deviation = 0.0;
    StateIndex worst_state = 0;
    double tolerance = 0.0;
    bool passed() const { return max_deviation <= tolerance; }
};

class TransitionModel {
public:
    TransitionModel(const Corpus& corpus, ActionWeights weights, WeightCheck check = WeightCheck::enforce);

    const Corpus& corpus() const { return *corpus_; }
    const ActionWeights& weights() const { return weights_; }

    std::size_t state_count() const { return state_keyword_.size(); }
    State state(StateIndex s) const { return {state_keyword_.at(s), state_paper_.at(s)}; }
    std::optional<StateIndex> find_state(State st) const;
    StateIndex state_index(State st) const;  // throws UnknownState
    StateIndex state_index(std::string_view keyword, std::string_view paper) const;

    // States (A, p) for p in P(A), aligned with corpus().postings(A).
    std::span<const StateIndex> keyword_states(KeywordIndex a) const {
        return {keyword_states_.data() + keyword_state_offsets_[a],
                keyword_states_.data() + keyword_state_offsets_[a + 1]};
    }
    // States of paper p are contiguous: [first, first + |K(p)|).
    StateIndex first_state(PaperIndex p) const { return static_cast<StateIndex>(corpus_->keyword_offset(p)); }

    // Single-action terms and their sum, evaluated in closed form.
    double same_paper_probability(StateIndex from, StateIndex to) const;
    double same_topic_probability(StateIndex from, StateIndex to) const;
    double citation_probability(StateIndex from, StateIndex to) const;
    double random_jump_probability(StateIndex from, StateIndex to) const;
    double transition_probability(StateIndex from, StateIndex to) const;

    // Every target with non-zero probability, ascending by state index.
    std::vector<std::pair<StateIndex, double>> out_distribution(StateIndex from) const;

    // out[t] = sum_s in[s] * Pr(s -> t). Spans must both have state_count() entries.
    void propagate(std::span<const double> in, std::span<double> out) const;

    RowStochasticReport verify_row_stochastic(double tolerance) const;

    // Bytes held by the model's own structures (excludes the corpus).
    std::size_t footprint_bytes() const;

private:
    const Corpus* corpus_;
    ActionWeights weights_;
    std::vector<KeywordIndex> state_keyword_;
    std::vector<PaperIndex> state_paper_;
    std::vector<std::uint64_t> keyword_state_offsets_;
    std::vector<StateIndex> keyword_states_;
    std::vector<PaperIndex> fallback_papers_;
};

struct SolverConfig {
    double epsilon = 1e-10;
    std::size_t max_iterations = 10000;

    void validate() const;
};

struct StationaryScores {
    std::vector<double> pr;  // indexed by StateIndex
    std::size_t iterations = 0;
    double residual = 0.0;   // max-norm difference of the last two iterates
};

class NotConverged : public Error {
public:
    explicit NotConverged(StationaryScores best)
        : Error("stationary solve did not converge after " + std::to_string(best.iterations) +
                " iterations (residual " + std::to_string(best.residual) + ")"),
          best_(std::move(best)) {}
    const StationaryScores& best() const { return best_; }

private:
    StationaryScores best_;
};

// Power iteration from the uniform vector (or `start`, which must be
// non-negative with positive sum; it is normalized first). Stops when
// max_s |x_k(s) - x_{k-1}(s)| <= epsilon. The iterate is renormalized to
// unit mass after every sweep.
StationaryScores stationary(const TransitionModel& model, const SolverConfig& cfg,
                            std::span<const double> start = {});

// max_s |x(s) - (x P)(s)|
double stationarity_residual(const TransitionModel& model, std::span<const double> pr);

}  // namespace scirec
