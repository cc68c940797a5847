#include "igmtf/encoder.hpp"

#include <cmath>

namespace igmtf {

Matrix init_weight(Index rows, Index cols, Index fan_in, std::mt19937_64& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    Matrix m(rows, cols);
    for (Index i = 0; i < m.size(); ++i) m.data()[i] = dist(rng);
    return m;
}

GruParams GruParams::init(Index hidden, std::mt19937_64& rng) {
    GruParams p;
    p.w_r = init_weight(1, hidden, 1, rng);
    p.w_z = init_weight(1, hidden, 1, rng);
    p.w_c = init_weight(1, hidden, 1, rng);
    p.u_r = init_weight(hidden, hidden, hidden, rng);
    p.u_z = init_weight(hidden, hidden, hidden, rng);
    p.u_c = init_weight(hidden, hidden, hidden, rng);
    p.b_r = Matrix(1, hidden);
    p.b_z = Matrix(1, hidden);
    p.b_c = Matrix(1, hidden);
    return p;
}

MlpParams MlpParams::init(Index hidden, std::mt19937_64& rng) {
    MlpParams p;
    for (std::size_t i = 0; i < 3; ++i) {
        p.weights[i] = init_weight(hidden, hidden, hidden, rng);
        p.biases[i] = Matrix(1, hidden);
    }
    return p;
}

EncoderRefs<ValueExec> bind_encoder_values(const GruParams& gru, const MlpParams& mlp) {
    EncoderRefs<ValueExec> r;
    r.w_r = gru.w_r;
    r.w_z = gru.w_z;
    r.w_c = gru.w_c;
    r.u_r = gru.u_r;
    r.u_z = gru.u_z;
    r.u_c = gru.u_c;
    r.b_r = gru.b_r;
    r.b_z = gru.b_z;
    r.b_c = gru.b_c;
    r.mlp_w = mlp.weights;
    r.mlp_b = mlp.biases;
    return r;
}

EncoderRefs<TapeExec> bind_encoder_params(Tape& tape, const GruParams& gru, const MlpParams& mlp) {
    EncoderRefs<TapeExec> r;
    r.w_r = tape.parameter(gru.w_r);
    r.w_z = tape.parameter(gru.w_z);
    r.w_c = tape.parameter(gru.w_c);
    r.u_r = tape.parameter(gru.u_r);
    r.u_z = tape.parameter(gru.u_z);
    r.u_c = tape.parameter(gru.u_c);
    r.b_r = tape.parameter(gru.b_r);
    r.b_z = tape.parameter(gru.b_z);
    r.b_c = tape.parameter(gru.b_c);
    for (std::size_t i = 0; i < 3; ++i) {
        r.mlp_w[i] = tape.parameter(mlp.weights[i]);
        r.mlp_b[i] = tape.parameter(mlp.biases[i]);
    }
    return r;
}

Matrix gru_forward(std::span<const double> window, const GruParams& gru) {
    Matrix features(1, static_cast<Index>(window.size()));
    for (std::size_t i = 0; i < window.size(); ++i) features(0, static_cast<Index>(i)) = window[i];
    ValueExec ex;
    EncoderRefs<ValueExec> refs = bind_encoder_values(gru, MlpParams{});
    return gru_hidden(ex, features, refs, gru.hidden());
}

Matrix encode_batch_detached(const Matrix& features, const GruParams& gru, const MlpParams& mlp) {
    ValueExec ex;
    EncoderRefs<ValueExec> refs = bind_encoder_values(gru, mlp);
    return encode_rows(ex, features, refs, gru.hidden());
}

NodeId encode_batch_grad(Tape& tape, const Matrix& features, const EncoderRefs<TapeExec>& refs,
                         Index hidden) {
    TapeExec ex{tape};
    return encode_rows(ex, features, refs, hidden);
}

std::vector<Matrix> encode_windows_detached(const SeriesMatrix& series,
                                            std::span<const Index> stamps, const GruParams& gru,
                                            const MlpParams& mlp, Index window) {
    const Index n = series.variables();
    const Index hidden = gru.hidden();
    const Index group = std::max<Index>(1, 4096 / std::max<Index>(1, n));
    ValueExec ex;
    EncoderRefs<ValueExec> refs = bind_encoder_values(gru, mlp);

    std::vector<Matrix> out;
    out.reserve(stamps.size());
    for (std::size_t start = 0; start < stamps.size(); start += static_cast<std::size_t>(group)) {
        const std::size_t count = std::min(static_cast<std::size_t>(group), stamps.size() - start);
        Matrix stacked(static_cast<Index>(count) * n, window);
        for (std::size_t b = 0; b < count; ++b) {
            const Index t = stamps[start + b];
            for (Index i = 0; i < n; ++i)
                for (Index s = 0; s < window; ++s)
                    stacked(static_cast<Index>(b) * n + i, s) =
                        series.values(t - window + 1 + s, i);
        }
        const Matrix encoded = encode_rows(ex, stacked, refs, hidden);
        for (std::size_t b = 0; b < count; ++b) {
            Matrix emb(n, hidden);
            for (Index i = 0; i < n; ++i)
                for (Index j = 0; j < hidden; ++j)
                    emb(i, j) = encoded(static_cast<Index>(b) * n + i, j);
            out.push_back(std::move(emb));
        }
    }
    return out;
}

EmbeddingBank build_bank(const SeriesMatrix& series, const Segment& train_seg,
                         const GruParams& gru, const MlpParams& mlp, Index window, Index horizon,
                         std::int64_t epoch_tag) {
    if (train_seg.length() <= 0) throw Error("build_bank: empty training segment");
    const std::vector<Index> stamps = valid_timestamps(train_seg, window, horizon);
    const Index hidden = gru.hidden();

    EmbeddingBank bank;
    bank.timestamps = stamps;
    bank.epoch_tag = epoch_tag;
    bank.embeddings = encode_windows_detached(series, stamps, gru, mlp, window);
    bank.means = Matrix(static_cast<Index>(stamps.size()), hidden);
    for (std::size_t b = 0; b < bank.embeddings.size(); ++b) {
        const Matrix mean = ops::mean_rows(bank.embeddings[b]);
        for (Index j = 0; j < hidden; ++j) bank.means(static_cast<Index>(b), j) = mean(0, j);
    }
    return bank;
}

}  // namespace igmtf
