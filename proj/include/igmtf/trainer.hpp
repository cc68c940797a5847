#pragma once

#include <array>

#include "igmtf/adam.hpp"
#include "igmtf/metrics.hpp"
#include "igmtf/model.hpp"
#include "igmtf/report.hpp"

namespace igmtf {

struct TrainConfig {
    Index window = 168;
    Index horizon = 3;
    Index hidden = 256;
    Index k = 10;       // sampled training timestamps
    Index top_n = 10;   // retained neighbors per mini-batch instance
    double lr = 1e-4;
    double lambda = 1e-4;
    Index epochs = 100;
    std::uint64_t seed = 1;
    Variant variant = Variant::full;
    NormScheme norm = NormScheme::max;
    Index patience = 0;  // 0: fixed epoch budget, no early stop
    bool exclude_self = false;
    std::array<double, 3> fractions = {0.6, 0.2, 0.2};

    void validate() const;
};

struct EpochStats {
    double train_loss = 0.0;
    double valid_rrse = 0.0;
    double valid_corr = 0.0;
};

struct ForecastReport {
    double test_rrse = 0.0;
    double test_corr = 0.0;
    double valid_rrse = 0.0;
    double valid_corr = 0.0;
    double naive_rrse = 0.0;
    double naive_corr = 0.0;
    std::vector<EpochStats> epochs;
    Index best_epoch = 0;  // 1-based
    double wall_clock_sec = 0.0;
};

struct TrainResult {
    ModelParams params;
    ForecastReport report;
};

/// Full training loop over a normalized series: per epoch, rebuild the
/// embedding bank, run every training batch in seeded shuffled order
/// (encode → sample → aggregate → predict → loss → backward → Adam), then
/// score the validation split. Parameters with the best validation RRSE win.
TrainResult train(const SeriesMatrix& series, const TrainConfig& config);

/// Chronological forecasting pass over a segment with fixed parameters; the
/// candidate pool is always the training segment. Returns de-normalized
/// predictions and labels aligned per valid_timestamps().
EvalPair evaluate(const SeriesMatrix& series, const Segment& eval_seg, const Segment& train_seg,
                  const ModelParams& params, const TrainConfig& config);

/// corr() with degenerate evaluation sets reported as NaN instead of thrown.
double corr_or_nan(const EvalPair& pair);

/// The report document a run emits: metrics, config echo, loss curves.
/// Deterministic for a fixed config+seed except the wall_clock_sec field.
Report assemble_report(const TrainConfig& config, const ForecastReport& fr,
                       const std::string& dataset_label);

}  // namespace igmtf
