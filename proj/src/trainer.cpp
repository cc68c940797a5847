#include "igmtf/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "igmtf/rng.hpp"

namespace igmtf {

void TrainConfig::validate() const {
    if (window < 1) throw ConfigError("window (d) must be >= 1");
    if (horizon < 1) throw ConfigError("horizon (h) must be >= 1");
    if (hidden < 1) throw ConfigError("hidden size (l) must be >= 1");
    if (k < 1) throw ConfigError("k must be >= 1");
    if (top_n < 1) throw ConfigError("neighbor count (N) must be >= 1");
    if (lr <= 0.0) throw ConfigError("learning rate must be > 0");
    if (lambda < 0.0) throw ConfigError("lambda must be >= 0");
    if (epochs < 1) throw ConfigError("epochs must be >= 1");
    if (patience < 0) throw ConfigError("patience must be >= 0");
}

double corr_or_nan(const EvalPair& pair) {
    try {
        return corr(pair);
    } catch (const Error&) {
        return std::nan("");
    }
}

namespace {

double rrse_or_nan(const EvalPair& pair) {
    try {
        return rrse(pair);
    } catch (const Error&) {
        return std::nan("");
    }
}

EvalPair denormalized(Matrix predictions, Matrix labels, const std::vector<double>& scalers) {
    EvalPair pair;
    pair.predictions = denormalize(predictions, scalers);
    pair.labels = denormalize(labels, scalers);
    return pair;
}

}  // namespace

EvalPair evaluate(const SeriesMatrix& series, const Segment& eval_seg, const Segment& train_seg,
                  const ModelParams& params, const TrainConfig& config) {
    const bool use_maps = config.variant != Variant::nw;
    const EmbeddingBank bank = build_bank(series, train_seg, params.gru, params.mlp, config.window,
                                          config.horizon, /*epoch_tag=*/-1);
    const std::vector<Index> stamps = valid_timestamps(eval_seg, config.window, config.horizon);
    const std::vector<Matrix> embeddings =
        encode_windows_detached(series, stamps, params.gru, params.mlp, config.window);

    const ModelRefs<ValueExec> refs = bind_model_values(params, use_maps);
    ValueExec ex;
    const Index n = series.variables();
    Matrix predictions(n, static_cast<Index>(stamps.size()));
    Matrix labels(n, static_cast<Index>(stamps.size()));
    for (std::size_t idx = 0; idx < stamps.size(); ++idx) {
        const Index t = stamps[idx];
        SamplerFn sampler;
        if (config.variant == Variant::ns) {
            sampler = [&](const Matrix&) {
                auto rng = make_rng(config.seed, rng_tag::sampler, static_cast<std::uint64_t>(t));
                return select_random(bank, config.k, rng);
            };
        } else {
            sampler = [&](const Matrix& mean) { return select_top_k(bank, mean, config.k); };
        }
        const ForwardOut<ValueExec> out =
            forward_tail(ex, embeddings[idx], refs, config.top_n, sampler);
        for (Index i = 0; i < n; ++i) {
            predictions(i, static_cast<Index>(idx)) = out.prediction(i, 0);
            labels(i, static_cast<Index>(idx)) = series.values(t + config.horizon, i);
        }
    }
    return denormalized(std::move(predictions), std::move(labels), series.scalers);
}

TrainResult train(const SeriesMatrix& series, const TrainConfig& config) {
    config.validate();
    if (series.timestamps() < config.window + config.horizon + 1)
        throw ConfigError("series has " + std::to_string(series.timestamps()) +
                          " timestamps, need at least d+h+1 = " +
                          std::to_string(config.window + config.horizon + 1));
    const SplitSpec split =
        split_chronological(series.timestamps(), config.fractions, config.window, config.horizon);
    const Segment tr = train_segment(split);
    const Segment va = valid_segment(split);
    const Segment te = test_segment(split);

    const bool use_maps = config.variant != Variant::nw;
    ModelParams params = ModelParams::init(config.hidden, config.seed);
    std::vector<ParamEntry> entries = params.entries(use_maps);
    AdamState adam;

    ModelParams best = params;
    double best_rrse = std::numeric_limits<double>::infinity();
    Index best_epoch = 0;
    std::vector<EpochStats> stats;

    const std::vector<Index> train_stamps = valid_timestamps(tr, config.window, config.horizon);
    const auto t0 = std::chrono::steady_clock::now();

    for (Index epoch = 1; epoch <= config.epochs; ++epoch) {
        const EmbeddingBank bank =
            build_bank(series, tr, params.gru, params.mlp, config.window, config.horizon, epoch);

        std::vector<Index> order = train_stamps;
        auto shuffle_rng = make_rng(config.seed, rng_tag::shuffle, static_cast<std::uint64_t>(epoch));
        std::shuffle(order.begin(), order.end(), shuffle_rng);
        auto ns_rng = make_rng(config.seed, rng_tag::sampler, static_cast<std::uint64_t>(epoch));

        double loss_sum = 0.0;
        for (const Index t : order) {
            const InstanceBatch batch = make_batch(series, t, config.window, config.horizon);
            Tape tape;
            TapeExec ex{tape};
            const ModelRefs<TapeExec> refs = bind_model(tape, params, use_maps);
            SamplerFn sampler;
            if (config.variant == Variant::ns) {
                sampler = [&](const Matrix&) { return select_random(bank, config.k, ns_rng); };
            } else {
                sampler = [&](const Matrix& mean) {
                    return select_top_k(bank, mean, config.k,
                                        config.exclude_self ? t : Index{-1});
                };
            }
            const ForwardOut<TapeExec> out =
                forward_tail(ex, encode_batch_grad(tape, batch.features, refs.encoder, config.hidden),
                             refs, config.top_n, sampler);
            const NodeId loss = attach_loss(ex, out.prediction, batch.labels, refs, config.lambda);
            const double loss_value = tape.value(loss)(0, 0);
            if (!std::isfinite(loss_value))
                throw Error("training aborted: non-finite loss at epoch " + std::to_string(epoch) +
                            ", batch timestamp " + std::to_string(t));
            tape.backward(loss);

            std::vector<Matrix*> param_ptrs;
            std::vector<const Matrix*> grad_ptrs;
            std::vector<Matrix> zero_grads;
            param_ptrs.reserve(entries.size());
            grad_ptrs.reserve(entries.size());
            zero_grads.reserve(entries.size());
            for (std::size_t i = 0; i < entries.size(); ++i) {
                param_ptrs.push_back(entries[i].matrix);
                if (tape.has_grad(refs.all[i])) {
                    grad_ptrs.push_back(&tape.grad(refs.all[i]));
                } else {
                    zero_grads.emplace_back(entries[i].matrix->rows(), entries[i].matrix->cols());
                    grad_ptrs.push_back(&zero_grads.back());
                }
            }
            adam_step(param_ptrs, grad_ptrs, adam, config.lr);
            loss_sum += loss_value;
        }

        const EvalPair valid_pair = evaluate(series, va, tr, params, config);
        EpochStats es;
        es.train_loss = loss_sum / static_cast<double>(order.size());
        es.valid_rrse = rrse(valid_pair);
        es.valid_corr = corr_or_nan(valid_pair);
        stats.push_back(es);

        if (es.valid_rrse < best_rrse) {
            best_rrse = es.valid_rrse;
            best = params;
            best_epoch = epoch;
        }
        if (config.patience > 0 && epoch - best_epoch >= config.patience) break;
    }

    const EvalPair test_pair = evaluate(series, te, tr, best, config);
    EvalPair naive = naive_baseline(series, te, config.window, config.horizon);
    naive = denormalized(std::move(naive.predictions), std::move(naive.labels), series.scalers);

    TrainResult result;
    result.params = std::move(best);
    result.report.test_rrse = rrse(test_pair);
    result.report.test_corr = corr_or_nan(test_pair);
    result.report.valid_rrse = best_rrse;
    result.report.valid_corr = stats[static_cast<std::size_t>(best_epoch - 1)].valid_corr;
    result.report.naive_rrse = rrse_or_nan(naive);
    result.report.naive_corr = corr_or_nan(naive);
    result.report.epochs = std::move(stats);
    result.report.best_epoch = best_epoch;
    result.report.wall_clock_sec =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return result;
}

Report assemble_report(const TrainConfig& config, const ForecastReport& fr,
                       const std::string& dataset_label) {
    Report r;
    r.set("rrse", fr.test_rrse);
    r.set("corr", fr.test_corr);
    r.set("valid_rrse", fr.valid_rrse);
    r.set("valid_corr", fr.valid_corr);
    r.set("naive_rrse", fr.naive_rrse);
    r.set("naive_corr", fr.naive_corr);
    r.set("epochs", static_cast<std::int64_t>(fr.epochs.size()));
    r.set("best_epoch", static_cast<std::int64_t>(fr.best_epoch));
    r.set("seed", config.seed);
    r.set("wall_clock_sec", fr.wall_clock_sec);
    r.set("config.data", dataset_label);
    r.set("config.horizon", static_cast<std::int64_t>(config.horizon));
    r.set("config.window", static_cast<std::int64_t>(config.window));
    r.set("config.hidden", static_cast<std::int64_t>(config.hidden));
    r.set("config.k", static_cast<std::int64_t>(config.k));
    r.set("config.neighbors", static_cast<std::int64_t>(config.top_n));
    r.set("config.lr", config.lr);
    r.set("config.lambda", config.lambda);
    r.set("config.epochs", static_cast<std::int64_t>(config.epochs));
    r.set("config.seed", config.seed);
    r.set("config.variant", std::string(variant_name(config.variant)));
    r.set("config.normalize", std::string(norm_scheme_name(config.norm)));
    r.set("config.patience", static_cast<std::int64_t>(config.patience));
    r.set("config.exclude_self", std::string(config.exclude_self ? "true" : "false"));
    for (std::size_t e = 0; e < fr.epochs.size(); ++e) {
        const std::string n = std::to_string(e + 1);
        r.set("train_loss." + n, fr.epochs[e].train_loss);
        r.set("valid_rrse." + n, fr.epochs[e].valid_rrse);
        r.set("valid_corr." + n, fr.epochs[e].valid_corr);
    }
    return r;
}

}  // namespace igmtf
