#include "scirec/graph_measures.hpp"

#include <algorithm>
#include <numeric>
#include <thread>

#include "scirec/error.hpp"

namespace scirec {

KeywordRanking keyword_rank_graph(const TransitionModel& model, const StationaryScores& scores) {
    const Corpus& c = model.corpus();
    if (scores.pr.size() != model.state_count()) throw InvalidConfig("stationary scores do not match the model");
    KeywordRanking r{Measure::graph, std::vector<double>(c.keyword_count(), 0.0)};
    for (KeywordIndex a = 0; a < c.keyword_count(); ++a)
        for (StateIndex s : model.keyword_states(a)) r.scores[a] += scores.pr[s];
    return r;
}

double PaperRanking::total() const {
    double t = 0.0;
    for (const auto& e : scores) t += e.score;
    return t;
}

PaperRanking universal_paper_rank(const TransitionModel& model, const StationaryScores& scores) {
    const Corpus& c = model.corpus();
    if (scores.pr.size() != model.state_count()) throw InvalidConfig("stationary scores do not match the model");
    PaperRanking r;
    r.mode = PaperRankMode::universal;
    r.scores.reserve(c.paper_count());
    for (PaperIndex p = 0; p < c.paper_count(); ++p) {
        const StateIndex first = model.first_state(p);
        double s = 0.0;
        for (std::size_t i = 0; i < c.keywords_of(p).size(); ++i) s += scores.pr[first + i];
        r.scores.push_back({p, s});
    }
    return r;
}

PaperRanking keyword_paper_rank(const TransitionModel& model, const StationaryScores& scores, KeywordIndex a) {
    const Corpus& c = model.corpus();
    if (a >= c.keyword_count()) throw UnknownKeyword("#" + std::to_string(a));
    if (scores.pr.size() != model.state_count()) throw InvalidConfig("stationary scores do not match the model");
    PaperRanking r;
    r.mode = PaperRankMode::keyword_conditional;
    r.keyword = a;
    const auto papers = c.postings(a);
    const auto states = model.keyword_states(a);
    for (std::size_t i = 0; i < papers.size(); ++i) r.scores.push_back({papers[i], scores.pr[states[i]]});
    return r;
}

// ---------------------------------------------------------------------------

void SamplerConfig::validate() const {
    if (n0 < 1) throw InvalidConfig("n0 must be >= 1");
    if (num_sequences < 1) throw InvalidConfig("num_sequences must be >= 1");
    if (num_sequences > std::numeric_limits<std::uint32_t>::max())
        throw InvalidConfig("num_sequences must fit in 32 bits");
}

WalkRng::WalkRng(std::uint64_t seed, std::uint64_t block) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
    engine_.seed(seq);
}

double WalkRng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

std::uint64_t WalkRng::below(std::uint64_t n) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(engine_()) * n) >> 64);
}

SequenceSample::SequenceSample(SamplerConfig config, std::vector<bool> tracked,
                               std::vector<std::uint64_t> sequence_offsets,
                               std::vector<KeywordIndex> sequence_keywords)
    : config_(config),
      tracked_(std::move(tracked)),
      sequence_offsets_(std::move(sequence_offsets)),
      sequence_keywords_(std::move(sequence_keywords)) {
    if (sequence_offsets_.size() != config_.num_sequences + 1 || sequence_offsets_.front() != 0 ||
        sequence_offsets_.back() != sequence_keywords_.size())
        throw InvalidConfig("sequence sample offsets are inconsistent");
    const std::size_t k = tracked_.size();
    std::vector<std::uint64_t> counts(k + 1, 0);
    for (std::uint64_t i = 0; i < config_.num_sequences; ++i) {
        if (sequence_offsets_[i] > sequence_offsets_[i + 1]) throw InvalidConfig("sequence sample offsets decrease");
        for (KeywordIndex a : sequence(i)) {
            if (a >= k || !tracked_[a]) throw InvalidConfig("sequence sample holds an untracked keyword");
            ++counts[a + 1];
        }
    }
    std::partial_sum(counts.begin(), counts.end(), counts.begin());
    keyword_offsets_ = counts;
    keyword_sequences_.resize(sequence_keywords_.size());
    std::vector<std::uint64_t> cursor(counts.begin(), counts.end() - 1);
    for (std::uint64_t i = 0; i < config_.num_sequences; ++i)
        for (KeywordIndex a : sequence(i)) keyword_sequences_[cursor[a]++] = static_cast<std::uint32_t>(i);
}

void SequenceSample::check(KeywordIndex a) const {
    if (!covers(a)) throw UnknownKeyword("#" + std::to_string(a) + " (not tracked by the sample)");
}

std::uint64_t SequenceSample::occurrences(KeywordIndex a) const {
    check(a);
    return keyword_offsets_[a + 1] - keyword_offsets_[a];
}

std::uint64_t SequenceSample::pair_count(KeywordIndex a, KeywordIndex b) const {
    check(a);
    check(b);
    if (a == b) return occurrences(a);
    auto ia = keyword_sequences_.begin() + static_cast<std::ptrdiff_t>(keyword_offsets_[a]);
    auto ea = keyword_sequences_.begin() + static_cast<std::ptrdiff_t>(keyword_offsets_[a + 1]);
    auto ib = keyword_sequences_.begin() + static_cast<std::ptrdiff_t>(keyword_offsets_[b]);
    auto eb = keyword_sequences_.begin() + static_cast<std::ptrdiff_t>(keyword_offsets_[b + 1]);
    std::uint64_t n = 0;
    while (ia != ea && ib != eb) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            ++n;
            ++ia;
            ++ib;
        }
    }
    return n;
}

std::uint64_t SequenceSample::union_count(KeywordIndex a, KeywordIndex b) const {
    return occurrences(a) + occurrences(b) - pair_count(a, b);
}

std::vector<std::uint64_t> SequenceSample::pair_counts_with(KeywordIndex a) const {
    check(a);
    std::vector<std::uint64_t> out(tracked_.size(), 0);
    for (auto i = keyword_offsets_[a]; i < keyword_offsets_[a + 1]; ++i)
        for (KeywordIndex b : sequence(keyword_sequences_[i])) ++out[b];
    return out;
}

namespace {

struct BlockResult {
    std::vector<std::uint32_t> lengths;
    std::vector<KeywordIndex> keywords;
};

class Walker {
public:
    Walker(const TransitionModel& model, const StationaryScores& scores, const SamplerConfig& cfg,
           const std::vector<bool>& tracked)
        : model_(model), corpus_(model.corpus()), cfg_(cfg), tracked_(tracked) {
        cumulative_.resize(scores.pr.size());
        std::partial_sum(scores.pr.begin(), scores.pr.end(), cumulative_.begin());
        const auto w = model.weights().as_array();
        const double total = model.weights().sum();
        double acc = 0.0;
        for (int i = 0; i < 3; ++i) {
            acc += w[i];
            action_cut_[i] = acc / total;
        }
    }

    BlockResult run_block(std::uint64_t block) const {
        const std::uint64_t begin = block * kWalksPerBlock;
        const std::uint64_t end = std::min(cfg_.num_sequences, begin + kWalksPerBlock);
        WalkRng rng(cfg_.seed, block);
        BlockResult out;
        out.lengths.reserve(end - begin);
        std::vector<KeywordIndex> seen;
        for (std::uint64_t w = begin; w < end; ++w) {
            seen.clear();
            StateIndex s = initial(rng);
            record(s, seen);
            for (std::uint32_t step = 1; step < cfg_.n0; ++step) {
                s = next(s, rng);
                record(s, seen);
            }
            std::sort(seen.begin(), seen.end());
            seen.erase(std::unique(seen.begin(), seen.end()), seen.end());
            out.lengths.push_back(static_cast<std::uint32_t>(seen.size()));
            out.keywords.insert(out.keywords.end(), seen.begin(), seen.end());
        }
        return out;
    }

private:
    void record(StateIndex s, std::vector<KeywordIndex>& seen) const {
        const KeywordIndex a = model_.state(s).keyword;
        if (tracked_[a]) seen.push_back(a);
    }

    StateIndex initial(WalkRng& rng) const {
        const double u = rng.uniform() * cumulative_.back();
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        if (it == cumulative_.end()) --it;
        return static_cast<StateIndex>(it - cumulative_.begin());
    }

    StateIndex random_state_of(PaperIndex q, WalkRng& rng) const {
        return model_.first_state(q) + static_cast<StateIndex>(rng.below(corpus_.keywords_of(q).size()));
    }

    StateIndex next(StateIndex from, WalkRng& rng) const {
        const State st = model_.state(from);
        const double u = rng.uniform();
        if (u < action_cut_[0]) return random_state_of(st.paper, rng);
        if (u < action_cut_[1]) {
            const auto topic = model_.keyword_states(st.keyword);
            return topic[rng.below(topic.size())];
        }
        if (u < action_cut_[2]) {
            const auto cited = corpus_.raw_citations(st.paper);
            const PaperIndex q = cited.empty() ? static_cast<PaperIndex>(rng.below(corpus_.paper_count()))
                                               : cited[rng.below(cited.size())];
            return random_state_of(q, rng);
        }
        return random_state_of(static_cast<PaperIndex>(rng.below(corpus_.paper_count())), rng);
    }

    const TransitionModel& model_;
    const Corpus& corpus_;
    const SamplerConfig& cfg_;
    const std::vector<bool>& tracked_;
    std::vector<double> cumulative_;
    double action_cut_[3]{};
};

}  // namespace

SequenceSample sample_sequences(const TransitionModel& model, const StationaryScores& scores,
                                const SamplerConfig& cfg, std::span<const KeywordIndex> keywords_of_interest) {
    cfg.validate();
    const Corpus& c = model.corpus();
    if (scores.pr.size() != model.state_count()) throw InvalidConfig("stationary scores do not match the model");

    std::vector<bool> tracked(c.keyword_count(), keywords_of_interest.empty());
    for (KeywordIndex a : keywords_of_interest) {
        if (a >= c.keyword_count()) throw UnknownKeyword("#" + std::to_string(a));
        tracked[a] = true;
    }

    const Walker walker(model, scores, cfg, tracked);
    const std::uint64_t blocks = (cfg.num_sequences + kWalksPerBlock - 1) / kWalksPerBlock;
    std::vector<BlockResult> results(blocks);
    unsigned threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::uint64_t>(threads, blocks));

    // Block b is always handled by worker b % threads; the merged output is
    // in block order regardless.
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> failures(threads);
    for (unsigned t = 0; t < threads; ++t) {
        pool.emplace_back([&, t] {
            try {
                for (std::uint64_t b = t; b < blocks; b += threads) results[b] = walker.run_block(b);
            } catch (...) {
                failures[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& f : failures)
        if (f) std::rethrow_exception(f);

    std::vector<std::uint64_t> offsets;
    offsets.reserve(cfg.num_sequences + 1);
    offsets.push_back(0);
    std::vector<KeywordIndex> keywords;
    std::size_t total_keywords = 0;
    for (const auto& r : results) total_keywords += r.keywords.size();
    keywords.reserve(total_keywords);
    for (auto& r : results) {
        for (auto len : r.lengths) offsets.push_back(offsets.back() + len);
        keywords.insert(keywords.end(), r.keywords.begin(), r.keywords.end());
        r = BlockResult{};
    }
    return SequenceSample(cfg, std::move(tracked), std::move(offsets), std::move(keywords));
}

PairScore inference_graph(const SequenceSample& sample, KeywordIndex a, KeywordIndex b) {
    const auto occ = sample.occurrences(a);
    const auto both = sample.pair_count(a, b);
    if (occ == 0)
        throw InsufficientSupport("keyword #" + std::to_string(a) + " never occurs in the sampled sequences");
    return {a, b, static_cast<double>(both) / static_cast<double>(occ)};
}

PairScore similarity_graph(const SequenceSample& sample, KeywordIndex a, KeywordIndex b) {
    const auto both = sample.pair_count(a, b);
    const auto either = sample.occurrences(a) + sample.occurrences(b) - both;
    if (either == 0)
        throw InsufficientSupport("neither keyword occurs in the sampled sequences");
    return {a, b, static_cast<double>(both) / static_cast<double>(either)};
}

}  // namespace scirec
