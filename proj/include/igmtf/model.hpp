#pragma once

#include <functional>
#include <string>

#include "igmtf/graph_agg.hpp"
#include "igmtf/sampler.hpp"

namespace igmtf {

enum class Variant { full, ns, nw };

Variant parse_variant(const std::string& s);
const char* variant_name(Variant v);

/// Output head: Linear(Concat(aggregated, batch embedding)) → 1, with bias.
struct HeadParams {
    Matrix weight;  // 2l×1
    Matrix bias;    // 1×1

    static HeadParams init(Index hidden, std::mt19937_64& rng);
};

struct ParamEntry {
    std::string name;
    Matrix* matrix;
};

/// Θ: encoder, mapping matrices and output head. The nw variant removes the
/// maps from the parameter set entirely.
struct ModelParams {
    Index hidden = 0;
    GruParams gru;
    MlpParams mlp;
    MappingParams maps;
    HeadParams head;

    static ModelParams init(Index hidden, std::uint64_t seed);
    std::vector<ParamEntry> entries(bool include_maps);
    std::vector<ParamEntry> entries(bool include_maps) const;
};

template <class Ex>
struct ModelRefs {
    using Ref = typename Ex::Ref;
    EncoderRefs<Ex> encoder;
    std::optional<std::pair<Ref, Ref>> maps;
    Ref head_w, head_b;
    std::vector<Ref> all;  // same order as ModelParams::entries(use_maps)
};

template <class Ex, class BindFn>
ModelRefs<Ex> bind_model_with(BindFn bind, const ModelParams& p, bool use_maps) {
    ModelRefs<Ex> r;
    r.encoder.w_r = bind(p.gru.w_r);
    r.encoder.w_z = bind(p.gru.w_z);
    r.encoder.w_c = bind(p.gru.w_c);
    r.encoder.u_r = bind(p.gru.u_r);
    r.encoder.u_z = bind(p.gru.u_z);
    r.encoder.u_c = bind(p.gru.u_c);
    r.encoder.b_r = bind(p.gru.b_r);
    r.encoder.b_z = bind(p.gru.b_z);
    r.encoder.b_c = bind(p.gru.b_c);
    for (std::size_t i = 0; i < 3; ++i) {
        r.encoder.mlp_w[i] = bind(p.mlp.weights[i]);
        r.encoder.mlp_b[i] = bind(p.mlp.biases[i]);
    }
    if (use_maps) r.maps = std::pair{bind(p.maps.map_h), bind(p.maps.map_e)};
    r.head_w = bind(p.head.weight);
    r.head_b = bind(p.head.bias);

    r.all = {r.encoder.w_r, r.encoder.w_z, r.encoder.w_c, r.encoder.u_r, r.encoder.u_z,
             r.encoder.u_c, r.encoder.b_r, r.encoder.b_z, r.encoder.b_c};
    for (std::size_t i = 0; i < 3; ++i) {
        r.all.push_back(r.encoder.mlp_w[i]);
        r.all.push_back(r.encoder.mlp_b[i]);
    }
    if (use_maps) {
        r.all.push_back(r.maps->first);
        r.all.push_back(r.maps->second);
    }
    r.all.push_back(r.head_w);
    r.all.push_back(r.head_b);
    return r;
}

inline ModelRefs<TapeExec> bind_model(Tape& tape, const ModelParams& p, bool use_maps) {
    return bind_model_with<TapeExec>([&tape](const Matrix& m) { return tape.parameter(m); }, p,
                                     use_maps);
}

inline ModelRefs<ValueExec> bind_model_values(const ModelParams& p, bool use_maps) {
    return bind_model_with<ValueExec>([](const Matrix& m) { return m; }, p, use_maps);
}

/// Chooses the sampled training instances given the mini-batch mean
/// embedding (forward value; ranking carries no gradient).
using SamplerFn = std::function<SampleSelection(const Matrix& batch_mean_value)>;

template <class Ex>
struct ForwardOut {
    using Ref = typename Ex::Ref;
    Ref batch_emb;   // n×l
    Ref batch_mean;  // 1×l
    Ref prediction;  // n×1
    GraphRefs<Ex> graph;
    SampleSelection selection;
};

/// Mean → sample → masked cosine graph → aggregate → head, starting from
/// already-encoded batch embeddings.
template <class Ex>
ForwardOut<Ex> forward_tail(Ex& ex, typename Ex::Ref batch_emb, const ModelRefs<Ex>& refs,
                            Index top_n, const SamplerFn& sampler,
                            const Matrix* frozen_mask = nullptr) {
    ForwardOut<Ex> out;
    out.batch_emb = std::move(batch_emb);
    out.batch_mean = ex.mean_rows(out.batch_emb);
    out.selection = sampler(ex.value(out.batch_mean));
    typename Ex::Ref sampled = ex.constant(out.selection.embeddings);
    out.graph = build_graph(ex, out.batch_emb, sampled, refs.maps, top_n, frozen_mask);
    typename Ex::Ref aggregated = aggregate(ex, out.graph);
    out.prediction =
        ex.add(ex.matmul(ex.concat_cols(aggregated, out.batch_emb), refs.head_w), refs.head_b);
    return out;
}

/// Encode → mean → sample → masked cosine graph → aggregate → head.
template <class Ex>
ForwardOut<Ex> forward_model(Ex& ex, const Matrix& features, const ModelRefs<Ex>& refs,
                             Index hidden, Index top_n, const SamplerFn& sampler,
                             const Matrix* frozen_mask = nullptr) {
    return forward_tail(ex, encode_rows(ex, features, refs.encoder, hidden), refs, top_n, sampler,
                        frozen_mask);
}

/// Eq-style objective: mean |p − y| over the batch plus λ·Σ‖θ‖² over every
/// bound parameter.
template <class Ex>
typename Ex::Ref attach_loss(Ex& ex, typename Ex::Ref prediction, const Matrix& labels,
                             const ModelRefs<Ex>& refs, double lambda) {
    typename Ex::Ref mae = ex.mean_all(ex.abs(ex.subtract(prediction, ex.constant(labels))));
    if (lambda == 0.0) return mae;
    typename Ex::Ref penalty = ex.sum(ex.multiply(refs.all[0], refs.all[0]));
    for (std::size_t i = 1; i < refs.all.size(); ++i)
        penalty = ex.add(penalty, ex.sum(ex.multiply(refs.all[i], refs.all[i])));
    return ex.add(mae, ex.scale(penalty, lambda));
}

void save_checkpoint(const std::string& path, const ModelParams& params);
ModelParams load_checkpoint(const std::string& path);

}  // namespace igmtf
