#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "igmtf/data.hpp"
#include "igmtf/tape.hpp"

namespace igmtf {

inline constexpr double kLeakySlope = 0.01;

/// Single-layer GRU over a scalar input series. Input weights are stored 1×l
/// and recurrent weights l×l, both applied on the right (x·w, h·u), so the
/// hidden state is a row per instance.
struct GruParams {
    Matrix w_r, w_z, w_c;  // 1×l
    Matrix u_r, u_z, u_c;  // l×l
    Matrix b_r, b_z, b_c;  // 1×l

    static GruParams init(Index hidden, std::mt19937_64& rng);
    Index hidden() const { return w_r.cols(); }
};

/// Three l→l linear layers, LeakyReLU after each (including the last).
struct MlpParams {
    std::array<Matrix, 3> weights;  // l×l
    std::array<Matrix, 3> biases;   // 1×l

    static MlpParams init(Index hidden, std::mt19937_64& rng);
};

/// Uniform [−1/√fan_in, +1/√fan_in] weights, zero biases.
Matrix init_weight(Index rows, Index cols, Index fan_in, std::mt19937_64& rng);

template <class Ex>
struct EncoderRefs {
    using Ref = typename Ex::Ref;
    Ref w_r, w_z, w_c;
    Ref u_r, u_z, u_c;
    Ref b_r, b_z, b_c;
    std::array<Ref, 3> mlp_w;
    std::array<Ref, 3> mlp_b;
};

/// GRU over the columns of `features` (n×d, oldest observation first),
/// starting from a zero hidden state; returns the final hidden state (n×l).
/// Gate convention: h ← (1−z)⊙h + z⊙c.
template <class Ex>
typename Ex::Ref gru_hidden(Ex& ex, const Matrix& features, const EncoderRefs<Ex>& p, Index hidden) {
    using Ref = typename Ex::Ref;
    const Index n = features.rows();
    Ref h = ex.constant(Matrix::zeros(n, hidden));
    const Ref one = ex.constant(Matrix::ones(n, hidden));
    for (Index t = 0; t < features.cols(); ++t) {
        const Ref x = ex.constant(features.col(t));
        const Ref r = ex.sigmoid(ex.add(ex.add(ex.matmul(x, p.w_r), ex.matmul(h, p.u_r)), p.b_r));
        const Ref z = ex.sigmoid(ex.add(ex.add(ex.matmul(x, p.w_z), ex.matmul(h, p.u_z)), p.b_z));
        const Ref c = ex.tanh(
            ex.add(ex.add(ex.matmul(x, p.w_c), ex.matmul(ex.multiply(r, h), p.u_c)), p.b_c));
        h = ex.add(ex.multiply(ex.subtract(one, z), h), ex.multiply(z, c));
    }
    return h;
}

template <class Ex>
typename Ex::Ref mlp_project(Ex& ex, typename Ex::Ref h, const EncoderRefs<Ex>& p) {
    for (std::size_t layer = 0; layer < 3; ++layer)
        h = ex.leaky_relu(ex.add(ex.matmul(h, p.mlp_w[layer]), p.mlp_b[layer]), kLeakySlope);
    return h;
}

template <class Ex>
typename Ex::Ref encode_rows(Ex& ex, const Matrix& features, const EncoderRefs<Ex>& p,
                             Index hidden) {
    return mlp_project(ex, gru_hidden(ex, features, p, hidden), p);
}

EncoderRefs<ValueExec> bind_encoder_values(const GruParams& gru, const MlpParams& mlp);
EncoderRefs<TapeExec> bind_encoder_params(Tape& tape, const GruParams& gru, const MlpParams& mlp);

/// Final GRU hidden state for a single window, 1×l.
Matrix gru_forward(std::span<const double> window, const GruParams& gru);

/// Detached encoder pass: plain values, nothing recorded.
Matrix encode_batch_detached(const Matrix& features, const GruParams& gru, const MlpParams& mlp);

/// Gradient-mode encoder pass on an existing tape with already-bound params.
NodeId encode_batch_grad(Tape& tape, const Matrix& features, const EncoderRefs<TapeExec>& refs,
                         Index hidden);

/// Detached embeddings of one batch (n×l) per listed timestamp. Timestamps
/// are encoded in groups: rows are independent, so stacking several batches
/// only fattens the matmuls.
std::vector<Matrix> encode_windows_detached(const SeriesMatrix& series,
                                            std::span<const Index> stamps, const GruParams& gru,
                                            const MlpParams& mlp, Index window);

/// Detached embeddings of every valid training timestamp, plus the
/// per-timestamp mean embeddings (one row per bank entry).
struct EmbeddingBank {
    std::vector<Index> timestamps;
    std::vector<Matrix> embeddings;  // n×l each
    Matrix means;                    // bank_size×l
    std::int64_t epoch_tag = -1;

    Index size() const { return static_cast<Index>(timestamps.size()); }
};

EmbeddingBank build_bank(const SeriesMatrix& series, const Segment& train_seg,
                         const GruParams& gru, const MlpParams& mlp, Index window, Index horizon,
                         std::int64_t epoch_tag);

}  // namespace igmtf
