#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "scirec/error.hpp"
#include "scirec/recommender.hpp"
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

std::vector<std::string> ids(const Corpus& c, const std::vector<RankedPaper>& v) {
    std::vector<std::string> out;
    for (auto& r : v) out.push_back(c.paper_id(r.paper));
    return out;
}

}  // namespace

TEST(SearchMode, Names) {
    EXPECT_EQ(parse_search_mode("universal"), SearchMode::universal);
    EXPECT_EQ(parse_search_mode("local"), SearchMode::keyword_based);
    EXPECT_EQ(parse_search_mode("keyword_based"), SearchMode::keyword_based);
    EXPECT_EQ(search_mode_name(SearchMode::keyword_based), "local");
    EXPECT_THROW(parse_search_mode("global"), InvalidConfig);
}

TEST(Search, SinglePaperKeywordSameInBothModes) {
    Solved s(citation_fixture());
    const auto a = s.corpus.keyword_index("k1");
    auto u = search(*s.model, s.scores, a, SearchMode::universal, 5);
    auto l = search(*s.model, s.scores, a, SearchMode::keyword_based, 5);
    EXPECT_EQ(ids(s.corpus, u), (std::vector<std::string>{"p1"}));
    EXPECT_EQ(ids(s.corpus, l), (std::vector<std::string>{"p1"}));
}

TEST(Search, HubVersusFocused) {
    Solved s(hub_focused_fixture());
    const auto a = s.corpus.keyword_index("a");
    auto u = search(*s.model, s.scores, a, SearchMode::universal, 5);
    auto l = search(*s.model, s.scores, a, SearchMode::keyword_based, 5);
    EXPECT_EQ(ids(s.corpus, u), (std::vector<std::string>{"hub", "focused"}));
    EXPECT_EQ(ids(s.corpus, l), (std::vector<std::string>{"focused", "hub"}));

    // Scores agree with the dense oracle.
    auto oracle = dense_stationary(dense_kernel(s.corpus, {}));
    EXPECT_NEAR(l[0].score, oracle[s.model->state_index("a", "focused")], 1e-9);
    double hub_total = 0;
    for (auto b : s.corpus.keywords_of(s.corpus.paper_index("hub")))
        hub_total += oracle[s.model->state_index({b, s.corpus.paper_index("hub")})];
    EXPECT_NEAR(u[0].score, hub_total, 1e-9);
}

TEST(Search, ModesPermuteTheSamePostings) {
    std::mt19937_64 rng(31);
    for (int t = 0; t < 20; ++t) {
        Solved s(random_corpus(rng, {25, 10, 4, 90, 0.2}));
        for (KeywordIndex a = 0; a < s.corpus.keyword_count(); ++a) {
            auto u = search(*s.model, s.scores, a, SearchMode::universal, 1000);
            auto l = search(*s.model, s.scores, a, SearchMode::keyword_based, 1000);
            std::vector<PaperIndex> pu, pl;
            for (auto& r : u) pu.push_back(r.paper);
            for (auto& r : l) pl.push_back(r.paper);
            for (std::size_t i = 1; i < u.size(); ++i) EXPECT_GE(u[i - 1].score, u[i].score);
            std::sort(pu.begin(), pu.end());
            std::sort(pl.begin(), pl.end());
            auto post = s.corpus.postings(a);
            EXPECT_EQ(pu, std::vector<PaperIndex>(post.begin(), post.end()));
            EXPECT_EQ(pl, pu);
        }
    }
}

TEST(Search, Truncation) {
    Solved s(hub_focused_fixture());
    EXPECT_EQ(search(*s.model, s.scores, 0, SearchMode::universal, 1).size(), 1u);
    EXPECT_THROW(search(*s.model, s.scores, 0, SearchMode::universal, 0), InvalidConfig);
    EXPECT_THROW(search(*s.model, s.scores, 77, SearchMode::universal, 3), UnknownKeyword);
}

TEST(RelatedKeywords, VacuousAndFullThresholds) {
    Solved s(symmetric_fixture());
    auto sample = sample_sequences(*s.model, s.scores, {2, 100'000, 42, 0});
    const auto k1 = s.corpus.keyword_index("k1"), k2 = s.corpus.keyword_index("k2");

    auto none = related_keywords(sample, k1, {1.0, 1.0, 1.0}, 5);
    EXPECT_TRUE(none.children.empty());
    EXPECT_TRUE(none.parents.empty());
    EXPECT_TRUE(none.siblings.empty());

    auto all = related_keywords(sample, k1, {0.0, 0.0, 0.0}, 5);
    for (auto* list : {&all.children, &all.parents, &all.siblings}) {
        ASSERT_EQ(list->size(), 1u);
        EXPECT_EQ((*list)[0].keyword, k2);
    }
    EXPECT_DOUBLE_EQ(all.children[0].score, inference_graph(sample, k2, k1).value);
    EXPECT_DOUBLE_EQ(all.parents[0].score, inference_graph(sample, k1, k2).value);
    EXPECT_DOUBLE_EQ(all.siblings[0].score, similarity_graph(sample, k1, k2).value);
}

TEST(RelatedKeywords, ParentCanAlsoBeSibling) {
    Solved s(hub_focused_fixture());
    auto sample = sample_sequences(*s.model, s.scores, {6, 50'000, 42, 0});
    auto rel = related_keywords(sample, s.corpus.keyword_index("e"), {}, 10);
    bool both = false;
    for (auto& p : rel.parents)
        for (auto& q : rel.siblings) both |= p.keyword == q.keyword;
    EXPECT_TRUE(both);
}

TEST(RelatedKeywords, ThresholdMonotoneAndSorted) {
    std::mt19937_64 rng(32);
    Solved s(random_corpus(rng, {20, 10, 3, 50, 0.3}));
    auto sample = sample_sequences(*s.model, s.scores, {4, 20'000, 42, 0});
    for (KeywordIndex a = 0; a < s.corpus.keyword_count(); ++a) {
        auto loose = related_keywords(sample, a, {0.05, 0.05, 0.05}, 100);
        auto tight = related_keywords(sample, a, {0.3, 0.3, 0.3}, 100);
        EXPECT_LE(tight.children.size(), loose.children.size());
        EXPECT_LE(tight.parents.size(), loose.parents.size());
        EXPECT_LE(tight.siblings.size(), loose.siblings.size());
        for (auto* list : {&loose.children, &loose.parents, &loose.siblings})
            for (std::size_t i = 0; i < list->size(); ++i) {
                EXPECT_NE((*list)[i].keyword, a);
                if (i) {
                    const auto& x = (*list)[i - 1];
                    const auto& y = (*list)[i];
                    EXPECT_TRUE(x.score > y.score || (x.score == y.score && x.keyword < y.keyword));
                }
            }
        for (auto& p : tight.parents) EXPECT_GT(p.score, 0.3);
    }
}

TEST(RelatedKeywords, Errors) {
    SequenceSample sample({2, 2, 1, 1}, {true, true}, {0, 1, 1}, {0});
    EXPECT_THROW(related_keywords(sample, 1, {}, 5), InsufficientSupport);
    EXPECT_THROW(related_keywords(sample, 0, {}, 0), InvalidConfig);
    EXPECT_THROW(related_keywords(sample, 0, {1.5, 0.1, 0.1}, 5), InvalidConfig);
    EXPECT_THROW(related_keywords(sample, 4, {}, 5), UnknownKeyword);
}

TEST(ReadMore, FallbackIsUniform) {
    auto c = corpus_of({rec("p1", {"a"}), rec("p2", {"b"}), rec("p3", {"c"}), rec("p4", {"c"})});
    TransitionModel m(c, {});
    auto r = read_more(m, m.state(m.state_index("a", "p1")), 10);
    ASSERT_EQ(r.scores.size(), 3u);
    for (auto& e : r.scores) {
        EXPECT_NE(c.paper_id(e.paper), "p1");
        EXPECT_NEAR(e.score, 0.2 / 4, 1e-15);
    }
    EXPECT_EQ(ids(c, r.scores), (std::vector<std::string>{"p2", "p3", "p4"}));
}

TEST(ReadMore, BothTermsWhenCitedPaperSharesKeyword) {
    auto c = corpus_of({rec("p1", {"a"}, {"q"}), rec("q", {"a", "b"}), rec("r", {"a"})});
    TransitionModel m(c, {});
    auto res = read_more(m, m.state(m.state_index("a", "p1")), 10);
    ASSERT_EQ(res.scores.size(), 2u);
    EXPECT_EQ(c.paper_id(res.scores[0].paper), "q");
    EXPECT_NEAR(res.scores[0].score, 0.3 / 3 + 0.2 / 1, 1e-15);
    EXPECT_EQ(c.paper_id(res.scores[1].paper), "r");
    EXPECT_NEAR(res.scores[1].score, 0.3 / 3, 1e-15);
}

TEST(ReadMore, MatchesBruteForceOverTargetStates) {
    std::mt19937_64 rng(33);
    for (int t = 0; t < 40; ++t) {
        auto c = random_corpus(rng, {});
        ActionWeights w{0.1, 0.4, 0.3, 0.2};
        TransitionModel m(c, w);
        const auto states = oracle_states(c);
        for (StateIndex i = 0; i < m.state_count(); ++i) {
            std::vector<double> want(c.paper_count(), 0.0);
            for (std::size_t j = 0; j < states.size(); ++j) {
                const auto o = oracle_actions(c, w, states[i], states[j]);
                want[states[j].paper] += o.a2 + o.a3;
            }
            auto got = read_more(m, m.state(i), c.paper_count());
            std::vector<double> have(c.paper_count(), 0.0);
            for (auto& e : got.scores) {
                EXPECT_NE(e.paper, states[i].paper);
                EXPECT_GT(e.score, 0.0);
                have[e.paper] = e.score;
            }
            for (PaperIndex q = 0; q < c.paper_count(); ++q)
                if (q != states[i].paper) EXPECT_NEAR(have[q], want[q], 1e-15);
        }
    }
}

TEST(ReadMore, Errors) {
    auto c = citation_fixture();
    TransitionModel m(c, {});
    EXPECT_THROW(read_more(m, {c.keyword_index("k2"), c.paper_index("p1")}, 5), UnknownState);
    EXPECT_THROW(read_more(m, m.state(0), 0), InvalidConfig);
}
