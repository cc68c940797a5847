#pragma once

#include <array>
#include <cmath>
#include <random>

#include "igmtf/data.hpp"
#include "igmtf/trainer.hpp"

namespace igmtf::testfix {

inline Matrix random_matrix(Index rows, Index cols, std::mt19937_64& rng, double lo = -1.0,
                            double hi = 1.0) {
    std::uniform_real_distribution<double> dist(lo, hi);
    Matrix m(rows, cols);
    for (Index i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
    return m;
}

/// Like random_matrix but keeps every entry away from zero, for kinked ops
/// (abs, leaky_relu) where finite differences straddle the corner.
inline Matrix random_matrix_away_from_zero(Index rows, Index cols, std::mt19937_64& rng,
                                           double margin = 0.05) {
    Matrix m = random_matrix(rows, cols, rng);
    for (Index i = 0; i < m.size(); ++i) {
        double& v = m.data()[i];
        if (std::abs(v) < margin) v = v < 0.0 ? v - margin : v + margin;
    }
    return m;
}

/// Every variable is a different constant; cross-variable spread keeps the
/// pooled RRSE denominator nonzero while each series is flat.
inline SeriesMatrix constant_series(Index timestamps, Index variables) {
    SeriesMatrix s;
    s.values = Matrix(timestamps, variables);
    for (Index t = 0; t < timestamps; ++t)
        for (Index i = 0; i < variables; ++i)
            s.values(t, i) = 0.1 + 0.1 * static_cast<double>(i);
    s.scalers.assign(static_cast<std::size_t>(variables), 1.0);
    return s;
}

/// Settings calibrated by pilot runs so the constant fixture fits to
/// MAE < 1e-3 within 5 epochs.
inline TrainConfig constant_config() {
    TrainConfig cfg;
    cfg.window = 4;
    cfg.horizon = 1;
    cfg.hidden = 8;
    cfg.k = 2;
    cfg.top_n = 3;
    cfg.lr = 5e-4;
    cfg.lambda = 0.0;
    cfg.epochs = 5;
    cfg.seed = 1;
    cfg.norm = NormScheme::none;
    return cfg;
}

/// Noiseless sinusoid mixture on one global cycle: every variable shares the
/// same long periods at a different offset, so a short window is
/// phase-ambiguous on its own while similar historical instances pin the
/// phase down.
inline SeriesMatrix sinusoid_series(Index timestamps = 400, Index variables = 4) {
    constexpr std::array<double, 4> offsets = {0.0, 16.0, 29.0, 47.0};
    SeriesMatrix s;
    s.values = Matrix(timestamps, variables);
    for (Index i = 0; i < variables; ++i) {
        const double a1 = 0.7;
        const double a2 = 0.25 + 0.02 * static_cast<double>(i);
        const double offset = offsets[static_cast<std::size_t>(i) % offsets.size()];
        for (Index t = 0; t < timestamps; ++t) {
            const double u = static_cast<double>(t) + offset;
            s.values(t, i) = a1 * std::sin(2.0 * M_PI * u / 64.0) +
                             a2 * std::sin(2.0 * M_PI * u / 40.0) + 0.05;
        }
    }
    s.scalers.assign(static_cast<std::size_t>(variables), 1.0);
    return s;
}

/// The micro-config used by the gradient suite: n=3, d=5, l=4, k=2, N=2.
inline TrainConfig micro_config() {
    TrainConfig cfg;
    cfg.window = 5;
    cfg.horizon = 1;
    cfg.hidden = 4;
    cfg.k = 2;
    cfg.top_n = 2;
    cfg.lr = 1e-3;
    cfg.lambda = 1e-4;
    cfg.epochs = 1;
    cfg.seed = 7;
    return cfg;
}

/// Overfit settings for the sinusoid fixture (pilot-calibrated).
inline TrainConfig sinusoid_config() {
    TrainConfig cfg;
    cfg.window = 8;
    cfg.horizon = 3;
    cfg.hidden = 16;
    cfg.k = 3;
    cfg.top_n = 5;
    cfg.lr = 1e-3;
    cfg.lambda = 0.0;
    cfg.epochs = 50;
    cfg.seed = 1;
    cfg.norm = NormScheme::max;
    return cfg;
}

}  // namespace igmtf::testfix
