#pragma once

#include <optional>
#include <random>
#include <string>

#include "igmtf/tape.hpp"

namespace igmtf {

/// Mapping matrices applied on the right of the row embeddings (they store
/// the transpose of the paper-style left-multiplied maps; a pure
/// parametrization choice, the layout is fixed in the checkpoint format).
struct MappingParams {
    Matrix map_h;  // l×l
    Matrix map_e;  // l×l

    static MappingParams init(Index hidden, std::mt19937_64& rng);
};

/// Per row, 1 on the positions of the N numerically largest weights (all if
/// m ≤ N), ties broken by smaller column index; 0 elsewhere. Constant with
/// respect to differentiation.
Matrix top_n_mask(const Matrix& weights, Index top_n);

/// Cosine-weight graph from sampled training instances to mini-batch
/// instances, already masked to the top-N neighbors per mini-batch instance.
struct Adjacency {
    Matrix weights;  // n×m raw cosine weights
    Matrix mask;     // n×m, 0/1
    Index neighbor_count = 0;
};

template <class Ex>
struct GraphRefs {
    using Ref = typename Ex::Ref;
    Ref weights;         // n×m cosine, before masking
    Ref masked;          // weights ⊙ mask
    Ref mapped_sampled;  // W_e e, shared by the edge weights and aggregation
    Matrix mask;
    Index neighbor_count = 0;
};

/// Edge weights per Cosine(W_h h_i, W_e e_j) with optional maps; the sampled
/// side stays detached (it enters as a constant). The mask is computed from
/// forward values only; a caller may pin it (`frozen_mask`) to probe the
/// differentiable surface at a fixed neighbor structure, e.g. for gradient
/// checks near ranking ties.
template <class Ex>
GraphRefs<Ex> build_graph(Ex& ex, typename Ex::Ref batch_emb, typename Ex::Ref sampled_emb,
                          const std::optional<std::pair<typename Ex::Ref, typename Ex::Ref>>& maps,
                          Index top_n, const Matrix* frozen_mask = nullptr) {
    GraphRefs<Ex> g;
    typename Ex::Ref mapped_batch = maps ? ex.matmul(batch_emb, maps->first) : batch_emb;
    g.mapped_sampled = maps ? ex.matmul(sampled_emb, maps->second) : sampled_emb;
    g.weights = ex.cosine_rows(mapped_batch, g.mapped_sampled);
    g.mask = frozen_mask != nullptr ? *frozen_mask : top_n_mask(ex.value(g.weights), top_n);
    g.masked = ex.multiply(g.weights, ex.constant(g.mask));
    g.neighbor_count = std::min(top_n, ex.value(g.weights).cols());
    return g;
}

/// ĥ_i = (1/|N_i|) Σ_j Â_ij (W_e e_j), |N_i| = min(N, m).
template <class Ex>
typename Ex::Ref aggregate(Ex& ex, const GraphRefs<Ex>& g) {
    return ex.scale(ex.matmul(g.masked, g.mapped_sampled),
                    1.0 / static_cast<double>(g.neighbor_count));
}

/// Value-mode wrappers.
Adjacency build_adjacency(const Matrix& batch_emb, const Matrix& sampled_emb,
                          const MappingParams* maps, Index top_n);
Matrix aggregate(const Adjacency& adj, const Matrix& sampled_emb, const MappingParams* maps);

/// Tab-separated dump of the raw weights and the mask, for inspection.
void dump_adjacency(const std::string& path, const Adjacency& adj);

}  // namespace igmtf
