#include <gtest/gtest.h>

#include <random>

#include "scirec/error.hpp"
#include "scirec/markov_chain.hpp"
#include "fixtures.hpp"
#include "oracles.hpp"

using namespace scirec;
using namespace scirec::testing;

namespace {

ActionWeights random_weights(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.05, 1.0);
    double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
    const double s = a + b + c + d;
    ActionWeights w{a / s, b / s, c / s, 0.0};
    w.random_jump = 1.0 - w.same_paper - w.same_topic - w.citation;
    return w;
}

}  // namespace

TEST(ActionWeights, Validation) {
    EXPECT_NO_THROW(ActionWeights{}.validate());
    EXPECT_THROW((ActionWeights{0.3, 0.3, 0.2, 0.1}.validate()), InvalidWeights);
    EXPECT_THROW((ActionWeights{0.5, 0.5, 0.0, 0.0}.validate()), InvalidWeights);
    EXPECT_THROW((ActionWeights{0.6, 0.3, 0.2, -0.1}.validate()), InvalidWeights);
    EXPECT_EQ(ActionWeights::parse("0.1,0.2,0.3,0.4"), (ActionWeights{0.1, 0.2, 0.3, 0.4}));
    EXPECT_THROW(ActionWeights::parse("0.1,0.2,0.3"), InvalidWeights);
    EXPECT_THROW(TransitionModel(symmetric_fixture(), ActionWeights{0.3, 0.3, 0.2, 0.1}), InvalidWeights);
}

TEST(TransitionModel, SingleStateSelfLoop) {
    auto c = single_state_fixture();
    TransitionModel m(c, {});
    ASSERT_EQ(m.state_count(), 1u);
    EXPECT_NEAR(m.transition_probability(0, 0), 1.0, 1e-15);
}

TEST(TransitionModel, SymmetricFixtureHandValues) {
    auto c = symmetric_fixture();
    TransitionModel m(c, {});
    const auto k1 = m.state_index("k1", "p1");
    const auto k2 = m.state_index("k2", "p1");
    EXPECT_NEAR(m.transition_probability(k2, k2), 0.65, 1e-15);
    EXPECT_NEAR(m.transition_probability(k2, k1), 0.35, 1e-15);
}

TEST(TransitionModel, CitationFixtureHandValues) {
    auto c = citation_fixture();
    TransitionModel m(c, {});
    const auto s1 = m.state_index("k1", "p1");
    const auto s2 = m.state_index("k2", "p2");
    EXPECT_NEAR(m.transition_probability(s1, s2), 0.3, 1e-15);
    EXPECT_NEAR(m.transition_probability(s2, s1), 0.2, 1e-15);
}

TEST(TransitionModel, StateOrderAndLookup) {
    auto c = corpus_of({rec("p2", {"b", "a"}), rec("p1", {"c"})});
    TransitionModel m(c, {});
    ASSERT_EQ(m.state_count(), c.stats().state_count);
    const auto oracle = oracle_states(c);
    for (StateIndex s = 0; s < m.state_count(); ++s) {
        EXPECT_EQ(m.state(s).paper, oracle[s].paper);
        EXPECT_EQ(m.state(s).keyword, oracle[s].keyword);
    }
    EXPECT_THROW(m.state_index("c", "p2"), UnknownState);
    EXPECT_THROW(m.state_index("zz", "p2"), UnknownKeyword);
    EXPECT_FALSE(m.find_state({c.keyword_index("a"), c.paper_index("p1")}).has_value());
}

TEST(TransitionModel, ActionsMatchIndicatorOracle) {
    std::mt19937_64 rng(1);
    for (int t = 0; t < 40; ++t) {
        auto c = random_corpus(rng, {});
        auto w = random_weights(rng);
        TransitionModel m(c, w);
        const auto states = oracle_states(c);
        for (StateIndex i = 0; i < m.state_count(); ++i) {
            auto out = m.out_distribution(i);
            std::vector<double> dense(m.state_count(), 0.0);
            for (auto [j, v] : out) dense[j] = v;
            for (StateIndex j = 0; j < m.state_count(); ++j) {
                const auto o = oracle_actions(c, w, states[i], states[j]);
                EXPECT_NEAR(m.same_paper_probability(i, j), o.a1, 1e-15);
                EXPECT_NEAR(m.same_topic_probability(i, j), o.a2, 1e-15);
                EXPECT_NEAR(m.citation_probability(i, j), o.a3, 1e-15);
                EXPECT_NEAR(m.random_jump_probability(i, j), o.a4, 1e-15);
                EXPECT_NEAR(m.transition_probability(i, j), o.total(), 1e-14);
                EXPECT_NEAR(dense[j], o.total(), 1e-14);
                EXPECT_EQ(dense[j] > 0, o.total() > 0);
            }
        }
    }
}

TEST(TransitionModel, OutDistributionSumsToOne) {
    std::mt19937_64 rng(2);
    for (int t = 0; t < 30; ++t) {
        auto c = random_corpus(rng, {});
        TransitionModel m(c, random_weights(rng));
        for (StateIndex i = 0; i < m.state_count(); ++i) {
            double s = 0;
            for (auto [j, v] : m.out_distribution(i)) s += v;
            EXPECT_NEAR(s, 1.0, 1e-9);
        }
    }
}

TEST(TransitionModel, FallbackSpreadsCitationMassOverAllPapers) {
    auto c = corpus_of({rec("p1", {"a"}), rec("p2", {"b"}), rec("p3", {"c"})});
    TransitionModel m(c, {});
    const auto from = m.state_index("a", "p1");
    for (StateIndex j = 0; j < m.state_count(); ++j) EXPECT_NEAR(m.citation_probability(from, j), 0.2 / 3, 1e-15);
}

TEST(TransitionModel, PropagateMatchesDenseProduct) {
    std::mt19937_64 rng(3);
    for (int t = 0; t < 20; ++t) {
        auto c = random_corpus(rng, {});
        auto w = random_weights(rng);
        TransitionModel m(c, w);
        const auto k = dense_kernel(c, w);
        std::vector<double> in(m.state_count()), out(m.state_count());
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (auto& v : in) v = u(rng);
        m.propagate(in, out);
        for (StateIndex j = 0; j < m.state_count(); ++j) {
            double want = 0;
            for (StateIndex i = 0; i < m.state_count(); ++i) want += in[i] * k(i, j);
            EXPECT_NEAR(out[j], want, 1e-13);
        }
    }
}

TEST(RowStochastic, PassesOnFixtures) {
    for (auto c : {single_state_fixture(), symmetric_fixture(), citation_fixture(), hub_focused_fixture()}) {
        TransitionModel m(c, {});
        EXPECT_TRUE(m.verify_row_stochastic(1e-9).passed());
    }
}

TEST(RowStochastic, DetectsWeightsSummingToPointNine) {
    auto c = hub_focused_fixture();
    TransitionModel m(c, {0.3, 0.2, 0.2, 0.2}, WeightCheck::skip);
    auto report = m.verify_row_stochastic(1e-9);
    EXPECT_FALSE(report.passed());
    EXPECT_NEAR(report.max_deviation, 0.1, 1e-12);
}

TEST(Stationary, SingleState) {
    auto c = single_state_fixture();
    TransitionModel m(c, {});
    auto s = stationary(m, {});
    ASSERT_EQ(s.pr.size(), 1u);
    EXPECT_DOUBLE_EQ(s.pr[0], 1.0);
    EXPECT_EQ(s.iterations, 1u);
}

TEST(Stationary, Symmetric) {
    auto c = symmetric_fixture();
    TransitionModel m(c, {});
    auto s = stationary(m, {});
    EXPECT_NEAR(s.pr[0], 0.5, 1e-12);
    EXPECT_NEAR(s.pr[1], 0.5, 1e-12);
}

TEST(Stationary, CitationFixtureBalance) {
    auto c = citation_fixture();
    TransitionModel m(c, {});
    auto s = stationary(m, {});
    EXPECT_NEAR(s.pr[m.state_index("k1", "p1")], 0.4, 1e-9);
    EXPECT_NEAR(s.pr[m.state_index("k2", "p2")], 0.6, 1e-9);
    auto dense = dense_stationary(dense_kernel(c, {}));
    EXPECT_NEAR(dense[0], 0.4, 1e-12);
}

TEST(Stationary, MatchesDenseEigenvectorOracle) {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 30; ++t) {
        auto c = random_corpus(rng, {});
        auto w = random_weights(rng);
        TransitionModel m(c, w);
        auto s = stationary(m, {});
        auto oracle = dense_stationary(dense_kernel(c, w));
        double l1 = 0, total = 0;
        for (StateIndex i = 0; i < m.state_count(); ++i) {
            l1 += std::abs(s.pr[i] - oracle[i]);
            total += s.pr[i];
            EXPECT_GT(s.pr[i], 0.0);
        }
        EXPECT_LE(l1, 1e-8);
        EXPECT_NEAR(total, 1.0, 1e-9);
        EXPECT_LE(stationarity_residual(m, s.pr), 10 * 1e-10);
        EXPECT_LE(s.residual, 1e-10);
    }
}

TEST(Stationary, UniqueFromDifferentStarts) {
    std::mt19937_64 rng(6);
    auto c = random_corpus(rng, {});
    TransitionModel m(c, {});
    std::vector<double> start(m.state_count());
    for (std::size_t i = 0; i < start.size(); ++i) start[i] = 1.0 + static_cast<double>(i * i % 7);
    auto a = stationary(m, {});
    auto b = stationary(m, {}, start);
    for (std::size_t i = 0; i < start.size(); ++i) EXPECT_NEAR(a.pr[i], b.pr[i], 10 * 1e-10);
}

TEST(Stationary, NotConvergedCarriesBestIterate) {
    auto c = citation_fixture();
    TransitionModel m(c, {});
    try {
        stationary(m, {1e-300, 3});
        FAIL();
    } catch (const NotConverged& e) {
        EXPECT_EQ(e.best().iterations, 3u);
        EXPECT_EQ(e.best().pr.size(), 2u);
        EXPECT_GT(e.best().residual, 0.0);
    }
}

TEST(Stationary, ConfigValidation) {
    auto c = citation_fixture();
    TransitionModel m(c, {});
    EXPECT_THROW(stationary(m, {0.0, 10}), InvalidConfig);
    EXPECT_THROW(stationary(m, {1e-10, 0}), InvalidConfig);
    const std::vector<double> bad{1.0};
    EXPECT_THROW(stationary(m, {}, bad), InvalidConfig);
}
