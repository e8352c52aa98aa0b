#pragma once
// On-disk model directory:
//
//   manifest.json    {"schema_version": 1, "counts": {...}, "corpus_hash": ...,
//                     "stationary": {...}, "sample": {...}}
//   corpus.bin       papers, titles, canonical keywords, citations
//   stationary.bin   stationary vector + solver outcome
//   sample.bin       per-walk keyword sets
//
// Every .bin file starts with an 8-byte magic and a u32 format version and
// ends with an FNV-1a 64 checksum of the preceding bytes. Integers and
// doubles are little-endian. A version mismatch raises VersionMismatch; any
// truncation, checksum or structural failure raises ParseError.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "scirec/corpus.hpp"
#include "scirec/graph_measures.hpp"
#include "scirec/markov_chain.hpp"

namespace scirec {

inline constexpr int kSchemaVersion = 1;
inline constexpr std::uint32_t kBinaryFormatVersion = 1;

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h = 0xcbf29ce484222325ULL);

// Checksum of the canonical corpus serialization, as "fnv1a64:<16 hex>".
std::string corpus_hash(const Corpus& c);

struct StationaryManifest {
    ActionWeights alpha;
    SolverConfig solver;
    std::size_t iterations = 0;
    double residual = 0.0;
    std::string corpus_hash;
};

struct SampleManifest {
    std::uint32_t n0 = 0;
    std::uint64_t num_sequences = 0;
    std::uint64_t seed = 0;
    std::string rng_id;
    ActionWeights alpha;
    std::string corpus_hash;
    std::size_t tracked_keywords = 0;
};

struct ModelManifest {
    int schema_version = kSchemaVersion;
    CorpusStats counts;
    std::string corpus_hash;
    std::optional<StationaryManifest> stationary;
    std::optional<SampleManifest> sample;

    nlohmann::json to_json() const;
    static ModelManifest from_json(const nlohmann::json& j);  // throws VersionMismatch / ParseError
};

// Writes corpus.bin and a fresh manifest (dropping any stale stationary or
// sample entries).
void save_model(const Corpus& c, const std::filesystem::path& dir);
Corpus load_model(const std::filesystem::path& dir);

ModelManifest read_manifest(const std::filesystem::path& dir);
void write_manifest(const std::filesystem::path& dir, const ModelManifest& m);

void save_stationary(const std::filesystem::path& dir, const StationaryScores& s);
StationaryScores load_stationary(const std::filesystem::path& dir, std::size_t expected_states);

void save_sample(const std::filesystem::path& dir, const SequenceSample& s);
SequenceSample load_sample(const std::filesystem::path& dir, std::size_t expected_keywords);

// Serializations used for persistence; exposed for hashing and tests.
std::string encode_corpus(const Corpus& c);
Corpus decode_corpus(std::string_view bytes);
std::string encode_stationary(const StationaryScores& s);
StationaryScores decode_stationary(std::string_view bytes);

}  // namespace scirec
