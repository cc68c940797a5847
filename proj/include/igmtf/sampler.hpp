#pragma once

#include <random>
#include <vector>

#include "igmtf/encoder.hpp"

namespace igmtf {

struct InstanceRef {
    Index timestamp = 0;
    Index variable = 0;
};

/// k distinct training timestamps and all m = n×k instances living at them,
/// with their embeddings gathered from the bank (detached).
struct SampleSelection {
    std::vector<Index> timestamps;
    std::vector<InstanceRef> refs;
    Matrix embeddings;  // m×l
};

/// Column-wise mean of the batch embeddings, 1×l.
Matrix batch_mean(const Matrix& embeddings);

/// Ranks bank timestamps by cosine similarity between their mean embedding
/// and `query`, descending, ties broken by smaller timestamp index. Ranking
/// is a constant with respect to differentiation. `exclude_timestamp` (−1 to
/// disable) drops one candidate before ranking.
SampleSelection select_top_k(const EmbeddingBank& bank, const Matrix& query, Index k,
                             Index exclude_timestamp = -1);

/// k distinct uniformly random bank timestamps.
SampleSelection select_random(const EmbeddingBank& bank, Index k, std::mt19937_64& rng);

}  // namespace igmtf
