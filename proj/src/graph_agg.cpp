#include "igmtf/graph_agg.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "igmtf/encoder.hpp"

namespace igmtf {

MappingParams MappingParams::init(Index hidden, std::mt19937_64& rng) {
    MappingParams p;
    p.map_h = init_weight(hidden, hidden, hidden, rng);
    p.map_e = init_weight(hidden, hidden, hidden, rng);
    return p;
}

Matrix top_n_mask(const Matrix& weights, Index top_n) {
    if (top_n < 1) throw Error("top_n_mask: N must be >= 1");
    const Index m = weights.cols();
    const Index keep = std::min(top_n, m);
    Matrix mask(weights.rows(), m);
    std::vector<Index> order(static_cast<std::size_t>(m));
    for (Index i = 0; i < weights.rows(); ++i) {
        std::iota(order.begin(), order.end(), Index{0});
        std::partial_sort(order.begin(), order.begin() + keep, order.end(), [&](Index a, Index b) {
            if (weights(i, a) != weights(i, b)) return weights(i, a) > weights(i, b);
            return a < b;
        });
        for (Index r = 0; r < keep; ++r) mask(i, order[static_cast<std::size_t>(r)]) = 1.0;
    }
    return mask;
}

Adjacency build_adjacency(const Matrix& batch_emb, const Matrix& sampled_emb,
                          const MappingParams* maps, Index top_n) {
    ValueExec ex;
    std::optional<std::pair<Matrix, Matrix>> map_refs;
    if (maps != nullptr) map_refs = std::pair{maps->map_h, maps->map_e};
    GraphRefs<ValueExec> g = build_graph(ex, batch_emb, sampled_emb, map_refs, top_n);
    return Adjacency{std::move(g.weights), std::move(g.mask), g.neighbor_count};
}

Matrix aggregate(const Adjacency& adj, const Matrix& sampled_emb, const MappingParams* maps) {
    const Matrix mapped = maps != nullptr ? ops::matmul(sampled_emb, maps->map_e) : sampled_emb;
    const Matrix masked = ops::multiply(adj.weights, adj.mask);
    return ops::scale(ops::matmul(masked, mapped), 1.0 / static_cast<double>(adj.neighbor_count));
}

void dump_adjacency(const std::string& path, const Adjacency& adj) {
    std::ofstream out(path);
    if (!out) throw Error("dump_adjacency: cannot open " + path);
    out.precision(17);
    out << "# weights " << adj.weights.rows() << "x" << adj.weights.cols() << ", top-"
        << adj.neighbor_count << " mask\n";
    for (Index i = 0; i < adj.weights.rows(); ++i) {
        for (Index j = 0; j < adj.weights.cols(); ++j)
            out << adj.weights(i, j) << (j + 1 < adj.weights.cols() ? '\t' : '\n');
    }
    for (Index i = 0; i < adj.mask.rows(); ++i) {
        for (Index j = 0; j < adj.mask.cols(); ++j)
            out << static_cast<int>(adj.mask(i, j)) << (j + 1 < adj.mask.cols() ? '\t' : '\n');
    }
}

}  // namespace igmtf
