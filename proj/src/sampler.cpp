#include "igmtf/sampler.hpp"

#include <algorithm>
#include <numeric>

namespace igmtf {

namespace {

SampleSelection gather(const EmbeddingBank& bank, std::vector<Index> chosen_positions) {
    SampleSelection sel;
    const Index n = bank.embeddings.empty() ? 0 : bank.embeddings.front().rows();
    const Index hidden = bank.means.cols();
    sel.embeddings = Matrix(static_cast<Index>(chosen_positions.size()) * n, hidden);
    Index row = 0;
    for (Index pos : chosen_positions) {
        const Index t = bank.timestamps[static_cast<std::size_t>(pos)];
        sel.timestamps.push_back(t);
        const Matrix& emb = bank.embeddings[static_cast<std::size_t>(pos)];
        for (Index i = 0; i < n; ++i) {
            sel.refs.push_back({t, i});
            for (Index j = 0; j < hidden; ++j) sel.embeddings(row, j) = emb(i, j);
            ++row;
        }
    }
    return sel;
}

}  // namespace

Matrix batch_mean(const Matrix& embeddings) {
    if (embeddings.rows() < 1) throw Error("batch_mean: empty batch");
    return ops::mean_rows(embeddings);
}

SampleSelection select_top_k(const EmbeddingBank& bank, const Matrix& query, Index k,
                             Index exclude_timestamp) {
    if (query.rows() != 1 || query.cols() != bank.means.cols())
        throw Error("select_top_k: query must be 1x" + std::to_string(bank.means.cols()));

    std::vector<Index> candidates;
    candidates.reserve(static_cast<std::size_t>(bank.size()));
    for (Index pos = 0; pos < bank.size(); ++pos)
        if (bank.timestamps[static_cast<std::size_t>(pos)] != exclude_timestamp)
            candidates.push_back(pos);
    if (k < 1 || k > static_cast<Index>(candidates.size()))
        throw Error("select_top_k: k=" + std::to_string(k) + " out of range for bank of " +
                    std::to_string(candidates.size()) + " candidates");

    const Matrix sims = ops::cosine_rows(bank.means, query);  // bank_size×1
    std::partial_sort(candidates.begin(), candidates.begin() + k, candidates.end(),
                      [&](Index a, Index b) {
                          if (sims(a, 0) != sims(b, 0)) return sims(a, 0) > sims(b, 0);
                          return bank.timestamps[static_cast<std::size_t>(a)] <
                                 bank.timestamps[static_cast<std::size_t>(b)];
                      });
    candidates.resize(static_cast<std::size_t>(k));
    return gather(bank, std::move(candidates));
}

SampleSelection select_random(const EmbeddingBank& bank, Index k, std::mt19937_64& rng) {
    if (k < 1 || k > bank.size())
        throw Error("select_random: k=" + std::to_string(k) + " out of range for bank of " +
                    std::to_string(bank.size()));
    std::vector<Index> positions(static_cast<std::size_t>(bank.size()));
    std::iota(positions.begin(), positions.end(), Index{0});
    std::vector<Index> chosen;
    chosen.reserve(static_cast<std::size_t>(k));
    std::sample(positions.begin(), positions.end(), std::back_inserter(chosen),
                static_cast<std::size_t>(k), rng);
    return gather(bank, std::move(chosen));
}

}  // namespace igmtf
