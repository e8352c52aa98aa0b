#pragma once
// Small hand-built corpora shared by the unit and acceptance tests, plus a
// random corpus generator for property checks.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "scirec/corpus.hpp"

namespace scirec::testing {

inline PaperRecord rec(std::string id, std::vector<std::string> keywords, std::vector<std::string> cites = {}) {
    PaperRecord r;
    r.id = std::move(id);
    r.title = "Title of " + r.id;
    r.keywords = std::move(keywords);
    r.cites = std::move(cites);
    return r;
}

inline Corpus corpus_of(std::vector<PaperRecord> records) { return Corpus::from_records(std::move(records)); }

// p1 = {k1, k2}, no citations.
inline Corpus symmetric_fixture() { return corpus_of({rec("p1", {"k1", "k2"})}); }

// p1 = {k1} cites p2 = {k2}; p2 cites nothing.
inline Corpus citation_fixture() { return corpus_of({rec("p1", {"k1"}, {"p2"}), rec("p2", {"k2"})}); }

inline Corpus single_state_fixture() { return corpus_of({rec("p1", {"k1"})}); }

// Keywords "a" and "b" never share a paper but p1 cites p2.
inline Corpus missing_cooccurrence_fixture() {
    return corpus_of({rec("p1", {"a"}, {"p2"}), rec("p2", {"b"}), rec("p3", {"c"})});
}

// "hub" spreads its mass over five keywords, "focused" carries only "a".
// Both are cited by the same three papers.
inline Corpus hub_focused_fixture() {
    return corpus_of({
        rec("hub", {"a", "b", "c", "d", "e"}),
        rec("focused", {"a"}),
        rec("x1", {"b"}, {"hub", "focused"}),
        rec("x2", {"c"}, {"hub", "focused"}),
        rec("x3", {"d"}, {"hub", "focused"}),
    });
}

struct RandomShape {
    std::size_t max_papers = 12;
    std::size_t max_pool = 8;        // distinct keyword strings to draw from
    std::size_t max_per_paper = 3;
    std::size_t max_states = 50;
    double cite_probability = 0.3;
};

// Random corpus whose state count never exceeds shape.max_states. Keyword
// strings come in mixed case and spacing, and some citations point at the
// citing paper itself or at unknown ids, so ingest normalization is
// exercised on every draw.
inline Corpus random_corpus(std::mt19937_64& rng, const RandomShape& shape) {
    auto pick = [&rng](std::size_t lo, std::size_t hi) {
        return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
    };
    for (;;) {
        const std::size_t papers = pick(1, shape.max_papers);
        const std::size_t pool = pick(1, shape.max_pool);
        std::vector<PaperRecord> records;
        std::size_t states = 0;
        for (std::size_t i = 0; i < papers; ++i) {
            PaperRecord r;
            r.id = "p" + std::to_string(i);
            const std::size_t n = pick(1, std::min(pool, shape.max_per_paper));
            std::vector<std::size_t> kws(pool);
            for (std::size_t j = 0; j < pool; ++j) kws[j] = j;
            std::shuffle(kws.begin(), kws.end(), rng);
            for (std::size_t j = 0; j < n; ++j)
                r.keywords.push_back((pick(0, 1) ? "Kw " : "kw  ") + std::to_string(kws[j]));
            states += n;
            records.push_back(std::move(r));
        }
        if (states > shape.max_states) continue;
        std::bernoulli_distribution cite(shape.cite_probability);
        for (std::size_t i = 0; i < papers; ++i) {
            for (std::size_t j = 0; j < papers; ++j)
                if (cite(rng)) records[i].cites.push_back("p" + std::to_string(j));
            if (cite(rng)) records[i].cites.push_back("outside-" + std::to_string(i));
        }
        return Corpus::from_records(std::move(records));
    }
}

}  // namespace scirec::testing
