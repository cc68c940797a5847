#include "igmtf/adam.hpp"

#include <cmath>

namespace igmtf {

void adam_step(const std::vector<Matrix*>& params, const std::vector<const Matrix*>& grads,
               AdamState& state, double lr) {
    if (params.size() != grads.size()) throw Error("adam_step: params/grads count mismatch");
    if (lr <= 0.0) throw Error("adam_step: learning rate must be positive");

    if (state.m.empty()) {
        for (const Matrix* p : params) {
            state.m.emplace_back(p->rows(), p->cols());
            state.v.emplace_back(p->rows(), p->cols());
        }
    }
    if (state.m.size() != params.size()) throw Error("adam_step: state does not match params");

    state.step += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));

    for (std::size_t i = 0; i < params.size(); ++i) {
        Matrix& p = *params[i];
        const Matrix& g = *grads[i];
        if (!p.same_shape(g))
            throw Error("adam_step: gradient shape " + g.shape_str() + " does not match parameter " +
                        p.shape_str());
        if (!g.all_finite()) throw Error("adam_step: non-finite gradient for parameter " +
                                         std::to_string(i));

        bool all_zero = true;
        for (Index e = 0; e < g.size(); ++e)
            if (g.data()[e] != 0.0) {
                all_zero = false;
                break;
            }
        if (all_zero) continue;

        Matrix& m = state.m[i];
        Matrix& v = state.v[i];
        for (Index e = 0; e < g.size(); ++e) {
            const double ge = g.data()[e];
            m.data()[e] = state.beta1 * m.data()[e] + (1.0 - state.beta1) * ge;
            v.data()[e] = state.beta2 * v.data()[e] + (1.0 - state.beta2) * ge * ge;
            const double m_hat = m.data()[e] / bc1;
            const double v_hat = v.data()[e] / bc2;
            p.data()[e] -= lr * m_hat / (std::sqrt(v_hat) + state.eps);
        }
    }
}

}  // namespace igmtf
