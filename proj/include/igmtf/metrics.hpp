#pragma once

#include "igmtf/data.hpp"

namespace igmtf {

/// Aligned prediction/label matrices, one row per variable, one column per
/// evaluated timestamp, in the original (de-normalized) scale.
struct EvalPair {
    Matrix predictions;
    Matrix labels;
};

/// sqrt(Σ(p−y)²) / sqrt(Σ(y−ȳ)²) pooled over all variables and timestamps,
/// ȳ the grand mean of the labels. 0 iff perfect, 1 for predicting ȳ
/// everywhere. Throws when the labels have zero variance.
double rrse(const EvalPair& pair);

/// Per-variable Pearson correlation across time, averaged over the variables
/// where both labels and predictions have nonzero variance. Throws when
/// every variable is degenerate.
double corr(const EvalPair& pair);

/// Last observed value as the forecast, p_i^t = x_i^t, aligned with the
/// timestamps evaluate() would use on the same segment.
EvalPair naive_baseline(const SeriesMatrix& series, const Segment& segment, Index window,
                        Index horizon);

}  // namespace igmtf
