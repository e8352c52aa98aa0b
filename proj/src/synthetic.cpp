#include "scirec/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <unordered_set>

#include <json.hpp>

#include "scirec/error.hpp"

namespace scirec {

namespace {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    std::uint64_t below(std::uint64_t n) {
        return static_cast<std::uint64_t>((static_cast<unsigned __int128>(engine_()) * n) >> 64);
    }
    template <class T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[below(i)]);
    }

private:
    std::mt19937_64 engine_;
};

std::string numbered(const char* prefix, std::uint64_t i, int width) {
    std::string digits = std::to_string(i);
    if (static_cast<int>(digits.size()) < width) digits.insert(0, width - digits.size(), '0');
    return prefix + digits;
}

int digits(std::uint64_t n) {
    int d = 1;
    while (n >= 10) {
        n /= 10;
        ++d;
    }
    return d;
}

}  // namespace

void SyntheticShape::validate() const {
    if (papers == 0 || keywords == 0) throw InvalidConfig("synthetic corpus needs papers and keywords");
    if (states < papers || states < keywords)
        throw InvalidConfig("states must be at least max(papers, keywords)");
    const std::uint64_t per_paper_max = (states + papers - 1) / papers;
    if (per_paper_max > keywords) throw InvalidConfig("too many states per paper for the keyword count");
    if (citations > papers * (papers - 1) / 2) throw InvalidConfig("too many citations for an acyclic citation graph");
}

std::vector<PaperRecord> generate_synthetic(const SyntheticShape& shape) {
    shape.validate();
    Rng rng(shape.seed);
    const auto n = shape.papers;
    const auto k = shape.keywords;
    const int pw = digits(n);
    const int kw = digits(k);

    std::vector<PaperRecord> records(n);
    for (std::uint64_t i = 0; i < n; ++i) {
        records[i].id = numbered("paper-", i, pw);
        records[i].title = "Synthetic paper " + std::to_string(i);
    }

    // Keyword slots per paper: base or base + 1, exactly `states` in total.
    std::vector<std::uint64_t> slots(n, shape.states / n);
    std::vector<std::uint64_t> order(n);
    for (std::uint64_t i = 0; i < n; ++i) order[i] = i;
    rng.shuffle(order);
    for (std::uint64_t i = 0; i < shape.states % n; ++i) ++slots[order[i]];

    std::vector<std::vector<std::uint64_t>> assigned(n);
    // Every keyword is used once first; distinct keywords cannot collide.
    std::vector<std::uint64_t> open;
    for (std::uint64_t p = 0; p < n; ++p)
        for (std::uint64_t s = 0; s < slots[p]; ++s) open.push_back(p);
    rng.shuffle(open);
    for (std::uint64_t a = 0; a < k; ++a) assigned[open[a]].push_back(a);

    // Remaining slots draw Zipf(1)-distributed keywords via inverse CDF.
    std::vector<double> cdf(k);
    double acc = 0.0;
    for (std::uint64_t a = 0; a < k; ++a) {
        acc += 1.0 / static_cast<double>(a + 1);
        cdf[a] = acc;
    }
    for (std::uint64_t i = k; i < open.size(); ++i) {
        auto& mine = assigned[open[i]];
        while (true) {
            const double u = rng.uniform() * acc;
            auto a = static_cast<std::uint64_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
            if (a >= k) a = k - 1;
            if (std::find(mine.begin(), mine.end(), a) == mine.end()) {
                mine.push_back(a);
                break;
            }
        }
    }
    for (std::uint64_t p = 0; p < n; ++p)
        for (auto a : assigned[p]) records[p].keywords.push_back(numbered("topic ", a, kw));

    // Citations from a later paper to an earlier one; u^2 skews toward old papers.
    std::unordered_set<std::uint64_t> edges;
    edges.reserve(shape.citations * 2);
    while (edges.size() < shape.citations) {
        const auto from = 1 + rng.below(n - 1);
        const double u = rng.uniform();
        const auto to = static_cast<std::uint64_t>(u * u * static_cast<double>(from));
        if (edges.insert(from * n + to).second) records[from].cites.push_back(records[to].id);
    }
    return records;
}

void write_jsonl(const std::vector<PaperRecord>& records, const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::trunc);
    if (!out) throw IoError("cannot write " + file.string());
    for (const auto& r : records) {
        nlohmann::json j{{"id", r.id}, {"title", r.title}, {"keywords", r.keywords}, {"cites", r.cites}};
        out << j.dump() << '\n';
    }
    if (!out) throw IoError("write failed: " + file.string());
}

}  // namespace scirec
