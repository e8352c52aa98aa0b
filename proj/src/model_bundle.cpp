#include "scirec/model_bundle.hpp"

#include "scirec/error.hpp"

namespace scirec {

std::shared_ptr<const ModelBundle> ModelBundle::load(const std::filesystem::path& dir, Parts parts) {
    std::shared_ptr<ModelBundle> b(new ModelBundle());
    b->manifest_ = read_manifest(dir);
    b->corpus_ = load_model(dir);
    b->rank_counting_ = scirec::rank_counting(b->corpus_);
    b->rank_probability_ = scirec::rank_probability(b->corpus_);

    if (parts.stationary) {
        const auto& sm = b->manifest_.stationary;
        if (!sm) throw ParseError("model has no stationary vector; run `scirec build` first");
        if (sm->corpus_hash != b->manifest_.corpus_hash)
            throw ParseError("stationary vector was built from a different corpus");
        b->model_.emplace(b->corpus_, sm->alpha);
        b->stationary_ = load_stationary(dir, b->model_->state_count());
        b->rank_graph_ = keyword_rank_graph(*b->model_, *b->stationary_);
    }
    if (parts.sample) {
        const auto& sm = b->manifest_.sample;
        if (!sm) throw ParseError("model has no sequence sample; run `scirec build` first");
        if (sm->corpus_hash != b->manifest_.corpus_hash)
            throw ParseError("sequence sample was built from a different corpus");
        b->sample_ = load_sample(dir, b->corpus_.keyword_count());
        const auto& cfg = b->sample_->config();
        if (cfg.n0 != sm->n0 || cfg.num_sequences != sm->num_sequences || cfg.seed != sm->seed)
            throw ParseError("sample.bin does not match the manifest");
    }
    return b;
}

BuildReport build_model(const std::filesystem::path& dir, const ActionWeights& weights, const SolverConfig& solver,
                        const SamplerConfig& sampler) {
    weights.validate();
    solver.validate();
    sampler.validate();

    BuildReport report;
    report.manifest = read_manifest(dir);
    const Corpus corpus = load_model(dir);
    const TransitionModel model(corpus, weights);
    report.state_count = model.state_count();
    report.row_check = model.verify_row_stochastic(1e-9);
    if (!report.row_check.passed())
        throw Error("row-stochasticity check failed: max deviation " + std::to_string(report.row_check.max_deviation));

    const StationaryScores scores = stationary(model, solver);
    const SequenceSample sample = sample_sequences(model, scores, sampler);
    report.iterations = scores.iterations;
    report.residual = scores.residual;
    report.sequences = sample.total();

    auto& m = report.manifest;
    m.stationary = StationaryManifest{weights, solver, scores.iterations, scores.residual, m.corpus_hash};
    m.sample = SampleManifest{sampler.n0,    sampler.num_sequences, sampler.seed,          kRngId,
                              weights,       m.corpus_hash,         corpus.keyword_count()};
    save_stationary(dir, scores);
    save_sample(dir, sample);
    write_manifest(dir, m);
    return report;
}

}  // namespace scirec
