#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "scirec/error.hpp"
#include "scirec/graph_measures.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace scirec;
using namespace scirec::testing;

namespace {

struct Solved {
    Corpus corpus;
    std::unique_ptr<TransitionModel> model;
    StationaryScores scores;

    explicit Solved(Corpus c, ActionWeights w = {}) : corpus(std::move(c)) {
        model = std::make_unique<TransitionModel>(corpus, w);
        scores = stationary(*model, {});
    }
};

double binomial_se(double p, double n) { return std::sqrt(p * (1 - p) / n); }

}  // namespace

TEST(KeywordRankGraph, Fixtures) {
    Solved sym(symmetric_fixture());
    auto r = keyword_rank_graph(*sym.model, sym.scores);
    EXPECT_EQ(r.measure, Measure::graph);
    EXPECT_NEAR(r[0], 0.5, 1e-12);
    EXPECT_NEAR(r[1], 0.5, 1e-12);

    Solved cit(citation_fixture());
    auto g = keyword_rank_graph(*cit.model, cit.scores);
    EXPECT_NEAR(g[cit.corpus.keyword_index("k1")], 0.4, 1e-9);
    EXPECT_NEAR(g[cit.corpus.keyword_index("k2")], 0.6, 1e-9);
}

TEST(UniversalPaperRank, Fixtures) {
    Solved one(single_state_fixture());
    auto u1 = universal_paper_rank(*one.model, one.scores);
    ASSERT_EQ(u1.scores.size(), 1u);
    EXPECT_DOUBLE_EQ(u1.scores[0].score, 1.0);

    Solved cit(citation_fixture());
    auto u = universal_paper_rank(*cit.model, cit.scores);
    EXPECT_EQ(u.mode, PaperRankMode::universal);
    EXPECT_NEAR(u.scores[cit.corpus.paper_index("p1")].score, 0.4, 1e-9);
    EXPECT_NEAR(u.scores[cit.corpus.paper_index("p2")].score, 0.6, 1e-9);
}

TEST(GraphRanks, PartitionAndConsistencyOnRandomCorpora) {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 25; ++t) {
        Solved s(random_corpus(rng, {20, 15, 4, 80, 0.25}));
        const auto& c = s.corpus;
        auto kw = keyword_rank_graph(*s.model, s.scores);
        auto uni = universal_paper_rank(*s.model, s.scores);
        EXPECT_NEAR(kw.total(), 1.0, 1e-9);
        EXPECT_NEAR(uni.total(), 1.0, 1e-9);
        std::vector<double> by_paper(c.paper_count(), 0.0);
        for (KeywordIndex a = 0; a < c.keyword_count(); ++a) {
            auto local = keyword_paper_rank(*s.model, s.scores, a);
            EXPECT_EQ(local.keyword, a);
            ASSERT_EQ(local.scores.size(), c.postings(a).size());
            EXPECT_NEAR(local.total(), kw[a], 1e-15);
            for (auto [p, v] : local.scores) {
                EXPECT_TRUE(c.has_keyword(p, a));
                by_paper[p] += v;
            }
        }
        for (PaperIndex p = 0; p < c.paper_count(); ++p) EXPECT_NEAR(by_paper[p], uni.scores[p].score, 1e-15);
    }
}

TEST(KeywordPaperRank, HeavilyCitedBeatsUncited) {
    auto c = corpus_of({rec("q", {"k", "x"}), rec("r", {"k", "y"}), rec("c1", {"z"}, {"q"}),
                        rec("c2", {"z"}, {"q"}), rec("c3", {"w"}, {"q"})});
    Solved s(c);
    auto local = keyword_paper_rank(*s.model, s.scores, s.corpus.keyword_index("k"));
    ASSERT_EQ(local.scores.size(), 2u);
    const double q = local.scores[0].paper == s.corpus.paper_index("q") ? local.scores[0].score : local.scores[1].score;
    const double r = local.scores[0].paper == s.corpus.paper_index("r") ? local.scores[0].score : local.scores[1].score;
    EXPECT_GT(q, r);
    auto oracle = dense_stationary(dense_kernel(s.corpus, {}));
    EXPECT_NEAR(q, oracle[s.model->state_index("k", "q")], 1e-9);
    EXPECT_NEAR(r, oracle[s.model->state_index("k", "r")], 1e-9);
    EXPECT_THROW(keyword_paper_rank(*s.model, s.scores, 99), UnknownKeyword);
}

TEST(KeywordPaperRank, SinglePaperKeyword) {
    Solved s(citation_fixture());
    auto local = keyword_paper_rank(*s.model, s.scores, s.corpus.keyword_index("k1"));
    ASSERT_EQ(local.scores.size(), 1u);
    EXPECT_EQ(local.scores[0].paper, s.corpus.paper_index("p1"));
}

TEST(SamplerConfig, Validation) {
    EXPECT_THROW((SamplerConfig{0, 10, 1, 1}.validate()), InvalidConfig);
    EXPECT_THROW((SamplerConfig{1, 0, 1, 1}.validate()), InvalidConfig);
    EXPECT_NO_THROW(SamplerConfig{}.validate());
}

TEST(WalkRng, DeterministicAndBounded) {
    WalkRng a(42, 3), b(42, 3), c(42, 4);
    bool differs = false;
    for (int i = 0; i < 100; ++i) {
        const auto x = a.below(7);
        EXPECT_EQ(x, b.below(7));
        EXPECT_LT(x, 7u);
        differs |= x != c.below(7);
        const double u = a.uniform();
        EXPECT_EQ(u, b.uniform());
        EXPECT_GE(u, 0.0);
        EXPECT_LT(u, 1.0);
        c.uniform();
    }
    EXPECT_TRUE(differs);
}

TEST(Sampling, SingleStepEstimatesGraphRank) {
    Solved s(citation_fixture());
    const double n = 1'000'000;
    auto sample = sample_sequences(*s.model, s.scores, {1, 1'000'000, 42, 0});
    auto rg = keyword_rank_graph(*s.model, s.scores);
    for (KeywordIndex a = 0; a < 2; ++a) {
        const double est = static_cast<double>(sample.occurrences(a)) / n;
        EXPECT_LE(std::abs(est - rg[a]), 4 * binomial_se(rg[a], n));
    }
}

TEST(Sampling, TwoStepSymmetricFixtureValues) {
    Solved s(symmetric_fixture());
    const double n = 1'000'000;
    auto sample = sample_sequences(*s.model, s.scores, {2, 1'000'000, 42, 0});
    const auto k1 = s.corpus.keyword_index("k1"), k2 = s.corpus.keyword_index("k2");
    const double occ = static_cast<double>(sample.occurrences(k1)) / n;
    EXPECT_LE(std::abs(occ - 0.675), 3 * binomial_se(0.675, n));
    EXPECT_NEAR(inference_graph(sample, k1, k2).value, 0.35 / 0.675, 0.01);
    EXPECT_NEAR(similarity_graph(sample, k1, k2).value, 0.35, 0.01);
    EXPECT_EQ(sample.union_count(k1, k2), sample.total());
}

TEST(Sampling, EnumerationOracleOnSmallCorpus) {
    auto c = corpus_of({rec("p1", {"a", "b"}, {"p2"}), rec("p2", {"b", "c"}), rec("p3", {"c"}, {"p1"})});
    Solved s(c);
    const double n = 400'000;
    for (unsigned n0 : {2u, 3u}) {
        auto sample = sample_sequences(*s.model, s.scores, {n0, 400'000, 9, 0});
        auto oracle = sequence_oracle(s.corpus, {}, n0);
        for (KeywordIndex a = 0; a < 3; ++a) {
            const double est = static_cast<double>(sample.occurrences(a)) / n;
            EXPECT_LE(std::abs(est - oracle.occ[a]), 4 * binomial_se(oracle.occ[a], n)) << "n0=" << n0;
            for (KeywordIndex b = 0; b < 3; ++b) {
                const double pair = static_cast<double>(sample.pair_count(a, b)) / n;
                EXPECT_LE(std::abs(pair - oracle.pair[a][b]), 4 * binomial_se(oracle.pair[a][b], n) + 1e-12);
            }
        }
    }
}

TEST(Sampling, DeterministicAcrossRunsAndThreadCounts) {
    std::mt19937_64 rng(12);
    Solved s(random_corpus(rng, {15, 10, 3, 40, 0.3}));
    auto a = sample_sequences(*s.model, s.scores, {4, 20'000, 7, 1});
    auto b = sample_sequences(*s.model, s.scores, {4, 20'000, 7, 5});
    auto c = sample_sequences(*s.model, s.scores, {4, 20'000, 7, 0});
    auto d = sample_sequences(*s.model, s.scores, {4, 20'000, 8, 0});
    EXPECT_EQ(a, b);
    EXPECT_EQ(a, c);
    EXPECT_FALSE(a == d);
}

TEST(Sampling, KeywordsOfInterestRestrictTracking) {
    std::mt19937_64 rng(13);
    Solved s(random_corpus(rng, {15, 10, 3, 40, 0.3}));
    ASSERT_GE(s.corpus.keyword_count(), 2u);
    const std::vector<KeywordIndex> wanted{0, 1};
    auto sample = sample_sequences(*s.model, s.scores, {3, 5'000, 1, 0}, wanted);
    EXPECT_TRUE(sample.covers(0));
    EXPECT_TRUE(sample.covers(1));
    for (KeywordIndex a : sample.sequence_keywords()) EXPECT_LT(a, 2u);
    if (s.corpus.keyword_count() > 2) EXPECT_THROW(sample.occurrences(2), UnknownKeyword);
    auto full = sample_sequences(*s.model, s.scores, {3, 5'000, 1, 0});
    EXPECT_EQ(sample.occurrences(0), full.occurrences(0));
    EXPECT_EQ(sample.pair_count(0, 1), full.pair_count(0, 1));
}

TEST(Sampling, CountInvariants) {
    std::mt19937_64 rng(14);
    Solved s(random_corpus(rng, {15, 10, 3, 40, 0.3}));
    auto sample = sample_sequences(*s.model, s.scores, {5, 10'000, 3, 0});
    const auto k = static_cast<KeywordIndex>(s.corpus.keyword_count());
    for (KeywordIndex a = 0; a < k; ++a) {
        auto with = sample.pair_counts_with(a);
        EXPECT_EQ(sample.pair_count(a, a), sample.occurrences(a));
        for (KeywordIndex b = 0; b < k; ++b) {
            const auto pair = sample.pair_count(a, b);
            EXPECT_EQ(pair, with[b]);
            EXPECT_EQ(pair, sample.pair_count(b, a));
            EXPECT_LE(pair, std::min(sample.occurrences(a), sample.occurrences(b)));
            EXPECT_EQ(sample.union_count(a, b), sample.occurrences(a) + sample.occurrences(b) - pair);
            if (sample.occurrences(a) > 0 && sample.occurrences(b) > 0) {
                EXPECT_DOUBLE_EQ(inference_graph(sample, a, b).value * double(sample.occurrences(a)),
                                 inference_graph(sample, b, a).value * double(sample.occurrences(b)));
                EXPECT_EQ(similarity_graph(sample, a, b).value, similarity_graph(sample, b, a).value);
            }
        }
        if (sample.occurrences(a) > 0) EXPECT_DOUBLE_EQ(inference_graph(sample, a, a).value, 1.0);
    }
}

TEST(Sampling, MonotoneSetBound) {
    Solved s(hub_focused_fixture());
    const double n = 200'000;
    auto sample = sample_sequences(*s.model, s.scores, {4, 200'000, 5, 0});
    auto rg = keyword_rank_graph(*s.model, s.scores);
    for (KeywordIndex a = 0; a < s.corpus.keyword_count(); ++a)
        EXPECT_GE(double(sample.occurrences(a)) / n, rg[a] - 4 * binomial_se(rg[a], n));
}

TEST(Sampling, InsufficientSupport) {
    SamplerConfig cfg{2, 2, 1, 1};
    SequenceSample sample(cfg, {true, true}, {0, 1, 1}, {0});
    EXPECT_EQ(sample.occurrences(1), 0u);
    EXPECT_THROW(inference_graph(sample, 1, 0), InsufficientSupport);
    EXPECT_THROW(similarity_graph(sample, 1, 1), InsufficientSupport);
    EXPECT_DOUBLE_EQ(inference_graph(sample, 0, 1).value, 0.0);
    EXPECT_DOUBLE_EQ(similarity_graph(sample, 0, 1).value, 0.0);
    EXPECT_THROW(inference_graph(sample, 0, 5), UnknownKeyword);
}
