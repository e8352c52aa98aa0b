#pragma once
// Measures derived from the stationary distribution of the reading chain:
// graph keyword rank, universal / keyword-conditional paper ranks, and Monte
// Carlo estimates of graph inference and similarity from sampled walks.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "scirec/markov_chain.hpp"
#include "scirec/occurrence_measures.hpp"

namespace scirec {

// ---------------------------------------------------------------------------
// Stationary-mass rankings

// R^g(A) = sum over p in P(A) of Pr((A, p))
KeywordRanking keyword_rank_graph(const TransitionModel& model, const StationaryScores& scores);

enum class PaperRankMode { universal, keyword_conditional };

struct RankedPaper {
    PaperIndex paper = 0;
    double score = 0.0;
};

struct PaperRanking {
    PaperRankMode mode = PaperRankMode::universal;
    std::optional<KeywordIndex> keyword;
    std::vector<RankedPaper> scores;  // ascending paper index

    double total() const;
};

// Sum of Pr((A, p)) over A in K(p), for every paper.
PaperRanking universal_paper_rank(const TransitionModel& model, const StationaryScores& scores);
// Pr((a, p)) for p in P(a) only.
PaperRanking keyword_paper_rank(const TransitionModel& model, const StationaryScores& scores, KeywordIndex a);

// ---------------------------------------------------------------------------
// Walk sampling

struct SamplerConfig {
    std::uint32_t n0 = 10;                    // walk length in states
    std::uint64_t num_sequences = 1'000'000;  // N
    std::uint64_t seed = 42;
    unsigned threads = 0;                     // 0: hardware concurrency; never changes results

    void validate() const;
};

// Identifies the generator and the substream scheme so estimates can be
// reproduced by another implementation.
//
// Walks are split into fixed blocks of kWalksPerBlock. Block b draws from
// std::mt19937_64 seeded with std::seed_seq{seed_lo32, seed_hi32, b_lo32, b_hi32}. Uniform
// doubles take the top 53 bits of one draw; bounded integers use the
// multiply-high mapping floor(x * n / 2^64). Each step draws one double to
// pick the action, then one or two integers for the target.
inline constexpr std::uint64_t kWalksPerBlock = 4096;
inline constexpr const char* kRngId = "mt19937_64+seed_seq(seed_lo,seed_hi,block_lo,block_hi)/block4096/mulhi-v1";

class WalkRng {
public:
    WalkRng(std::uint64_t seed, std::uint64_t block);
    double uniform();                       // [0, 1)
    std::uint64_t below(std::uint64_t n);  // [0, n)

private:
    std::mt19937_64 engine_;
};

// Per-sequence sets of distinct keywords seen along each walk, restricted to
// the tracked keywords, plus the inverted keyword -> sequences index. Pair
// counts are computed on demand by merging two sequence lists.
class SequenceSample {
public:
    SequenceSample() { config_.num_sequences = 0; }
    SequenceSample(SamplerConfig config, std::vector<bool> tracked, std::vector<std::uint64_t> sequence_offsets,
                   std::vector<KeywordIndex> sequence_keywords);

    const SamplerConfig& config() const { return config_; }
    std::uint64_t total() const { return config_.num_sequences; }
    std::size_t keyword_count() const { return tracked_.size(); }
    bool covers(KeywordIndex a) const { return a < tracked_.size() && tracked_[a]; }
    const std::vector<bool>& tracked() const { return tracked_; }

    // Number of sequences in which `a` occurs at least once.
    std::uint64_t occurrences(KeywordIndex a) const;
    std::uint64_t pair_count(KeywordIndex a, KeywordIndex b) const;
    std::uint64_t union_count(KeywordIndex a, KeywordIndex b) const;
    // pair_count(a, b) for every keyword b in one pass over a's sequences.
    std::vector<std::uint64_t> pair_counts_with(KeywordIndex a) const;

    std::span<const KeywordIndex> sequence(std::uint64_t i) const {
        return {sequence_keywords_.data() + sequence_offsets_[i],
                sequence_keywords_.data() + sequence_offsets_[i + 1]};
    }
    const std::vector<std::uint64_t>& sequence_offsets() const { return sequence_offsets_; }
    const std::vector<KeywordIndex>& sequence_keywords() const { return sequence_keywords_; }

    bool operator==(const SequenceSample& o) const {
        return config_.n0 == o.config_.n0 && config_.num_sequences == o.config_.num_sequences &&
               config_.seed == o.config_.seed && tracked_ == o.tracked_ &&
               sequence_offsets_ == o.sequence_offsets_ && sequence_keywords_ == o.sequence_keywords_;
    }

private:
    void check(KeywordIndex a) const;

    SamplerConfig config_;
    std::vector<bool> tracked_;
    std::vector<std::uint64_t> sequence_offsets_{0};
    std::vector<KeywordIndex> sequence_keywords_;
    std::vector<std::uint64_t> keyword_offsets_{0};
    std::vector<std::uint32_t> keyword_sequences_;
};

// Draws num_sequences walks of n0 states: the first state from the
// stationary distribution, then n0 - 1 kernel steps. An empty
// `keywords_of_interest` tracks every keyword.
SequenceSample sample_sequences(const TransitionModel& model, const StationaryScores& scores,
                                const SamplerConfig& cfg, std::span<const KeywordIndex> keywords_of_interest = {});

// pair(a, b) / occ(a)
PairScore inference_graph(const SequenceSample& sample, KeywordIndex a, KeywordIndex b);
// pair(a, b) / (occ(a) + occ(b) - pair(a, b))
PairScore similarity_graph(const SequenceSample& sample, KeywordIndex a, KeywordIndex b);

}  // namespace scirec
