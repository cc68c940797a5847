#pragma once

#include <vector>

#include "igmtf/matrix.hpp"

namespace igmtf {

/// Shared optimizer state: one step counter, first/second moments per
/// parameter. Moments are allocated on the first step.
struct AdamState {
    long step = 0;
    std::vector<Matrix> m;
    std::vector<Matrix> v;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

/// One bias-corrected update, p ← p − lr·m̂/(√v̂ + eps), applied to every
/// parameter. A parameter whose gradient is entirely zero is left untouched
/// (parameter and moments), so a zero-gradient step is the identity.
/// Throws on non-finite gradients.
void adam_step(const std::vector<Matrix*>& params, const std::vector<const Matrix*>& grads,
               AdamState& state, double lr);

}  // namespace igmtf
