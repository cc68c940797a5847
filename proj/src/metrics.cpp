#include "igmtf/metrics.hpp"

#include <cmath>

namespace igmtf {

double rrse(const EvalPair& pair) {
    const Matrix& p = pair.predictions;
    const Matrix& y = pair.labels;
    if (!p.same_shape(y)) throw Error("rrse: shape mismatch " + p.shape_str() + " vs " + y.shape_str());
    if (y.size() == 0) throw Error("rrse: empty evaluation pair");

    double mean = 0.0;
    for (Index i = 0; i < y.size(); ++i) mean += y.data()[i];
    mean /= static_cast<double>(y.size());

    double num = 0.0, den = 0.0;
    for (Index i = 0; i < y.size(); ++i) {
        const double d = p.data()[i] - y.data()[i];
        const double c = y.data()[i] - mean;
        num += d * d;
        den += c * c;
    }
    if (den == 0.0) throw Error("rrse: labels have zero variance (degenerate evaluation set)");
    return std::sqrt(num) / std::sqrt(den);
}

double corr(const EvalPair& pair) {
    const Matrix& p = pair.predictions;
    const Matrix& y = pair.labels;
    if (!p.same_shape(y)) throw Error("corr: shape mismatch " + p.shape_str() + " vs " + y.shape_str());
    const Index n = y.rows();
    const Index m = y.cols();
    if (m < 2) throw Error("corr: need at least two timestamps");

    double total = 0.0;
    Index used = 0;
    for (Index i = 0; i < n; ++i) {
        double mp = 0.0, my = 0.0;
        for (Index t = 0; t < m; ++t) {
            mp += p(i, t);
            my += y(i, t);
        }
        mp /= static_cast<double>(m);
        my /= static_cast<double>(m);
        double spp = 0.0, syy = 0.0, spy = 0.0;
        for (Index t = 0; t < m; ++t) {
            const double dp = p(i, t) - mp;
            const double dy = y(i, t) - my;
            spp += dp * dp;
            syy += dy * dy;
            spy += dp * dy;
        }
        if (spp == 0.0 || syy == 0.0) continue;  // zero-variance variable, skipped
        total += spy / std::sqrt(spp * syy);
        ++used;
    }
    if (used == 0) throw Error("corr: every variable has zero variance");
    return total / static_cast<double>(used);
}

EvalPair naive_baseline(const SeriesMatrix& series, const Segment& segment, Index window,
                        Index horizon) {
    const std::vector<Index> stamps = valid_timestamps(segment, window, horizon);
    const Index n = series.variables();
    EvalPair pair;
    pair.predictions = Matrix(n, static_cast<Index>(stamps.size()));
    pair.labels = Matrix(n, static_cast<Index>(stamps.size()));
    for (std::size_t c = 0; c < stamps.size(); ++c) {
        const Index t = stamps[c];
        for (Index i = 0; i < n; ++i) {
            pair.predictions(i, static_cast<Index>(c)) = series.values(t, i);
            pair.labels(i, static_cast<Index>(c)) = series.values(t + horizon, i);
        }
    }
    return pair;
}

}  // namespace igmtf
