#pragma once
// Deterministic synthetic corpora with exact shape targets (paper, keyword,
// citation and state counts). Used for scale tests and demos.

#include <cstdint>
#include <filesystem>
#include <vector>

#include "scirec/corpus.hpp"

namespace scirec {

struct SyntheticShape {
    std::uint64_t papers = 9291;
    std::uint64_t keywords = 4676;
    std::uint64_t citations = 125610;
    std::uint64_t states = 28736;
    std::uint64_t seed = 7;

    // Throws InvalidConfig when the counts cannot be met simultaneously.
    void validate() const;
};

// The conference-scale shape used throughout the scale tests.
inline constexpr SyntheticShape kBenchmarkShape{};

// Keyword popularity is Zipf-like; citations point from later to earlier
// papers with a preference for early (popular) targets. Loading the records
// yields exactly the requested stats.
std::vector<PaperRecord> generate_synthetic(const SyntheticShape& shape);

void write_jsonl(const std::vector<PaperRecord>& records, const std::filesystem::path& file);

}  // namespace scirec
