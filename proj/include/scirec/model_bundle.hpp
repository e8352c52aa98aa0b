#pragma once
// Everything query-time code needs from a built model directory, loaded once
// and shared read-only.

#include <filesystem>
#include <memory>
#include <optional>

#include "scirec/graph_measures.hpp"
#include "scirec/markov_chain.hpp"
#include "scirec/model_store.hpp"
#include "scirec/occurrence_measures.hpp"

namespace scirec {

class ModelBundle {
public:
    struct Parts {
        bool stationary = true;
        bool sample = true;
    };

    // Throws IoError / ParseError / VersionMismatch; also ParseError when a
    // requested part was never built or was built from a different corpus.
    static std::shared_ptr<const ModelBundle> load(const std::filesystem::path& dir, Parts parts);
    static std::shared_ptr<const ModelBundle> load(const std::filesystem::path& dir) { return load(dir, Parts{}); }

    ModelBundle(const ModelBundle&) = delete;
    ModelBundle& operator=(const ModelBundle&) = delete;

    const Corpus& corpus() const { return corpus_; }
    const ModelManifest& manifest() const { return manifest_; }
    bool has_stationary() const { return stationary_.has_value(); }
    bool has_sample() const { return sample_.has_value(); }

    // Available when the stationary part is loaded.
    const TransitionModel& model() const { return *model_; }
    const StationaryScores& stationary() const { return *stationary_; }
    const KeywordRanking& rank_graph() const { return *rank_graph_; }
    const SequenceSample& sample() const { return *sample_; }

    const KeywordRanking& rank_counting() const { return rank_counting_; }
    const KeywordRanking& rank_probability() const { return rank_probability_; }

private:
    ModelBundle() = default;

    Corpus corpus_;
    ModelManifest manifest_;
    KeywordRanking rank_counting_;
    KeywordRanking rank_probability_;
    std::optional<TransitionModel> model_;
    std::optional<StationaryScores> stationary_;
    std::optional<KeywordRanking> rank_graph_;
    std::optional<SequenceSample> sample_;
};

// Offline build step over an ingested model directory: row check, stationary
// solve, walk sampling, then stationary.bin + sample.bin + manifest update.
// Throws NotConverged (nothing persisted) or Error when the row check fails.
struct BuildReport {
    RowStochasticReport row_check;
    std::size_t state_count = 0;
    std::size_t iterations = 0;
    double residual = 0.0;
    std::uint64_t sequences = 0;
    ModelManifest manifest;
};

BuildReport build_model(const std::filesystem::path& dir, const ActionWeights& weights, const SolverConfig& solver,
                        const SamplerConfig& sampler);

}  // namespace scirec
