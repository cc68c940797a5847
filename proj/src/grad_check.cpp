#include "igmtf/grad_check.hpp"

#include <cmath>
#include <limits>

namespace igmtf {

namespace {

double eval_scalar(const GraphBuilder& build) {
    Tape tape;
    BuiltGraph g = build(tape);
    const Matrix& v = tape.value(g.root);
    if (v.rows() != 1 || v.cols() != 1) throw Error("finite_difference_check: root is not scalar");
    return v(0, 0);
}

}  // namespace

double finite_difference_check(const GraphBuilder& build, std::span<Matrix* const> params,
                               double epsilon) {
    if (epsilon <= 0.0) throw Error("finite_difference_check: epsilon must be positive");
    constexpr double kInf = std::numeric_limits<double>::infinity();

    Tape tape;
    BuiltGraph graph = build(tape);
    if (graph.params.size() != params.size())
        throw Error("finite_difference_check: builder reported a different parameter count");
    tape.backward(graph.root);

    std::vector<Matrix> analytic;
    analytic.reserve(params.size());
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (tape.has_grad(graph.params[i]))
            analytic.push_back(tape.grad(graph.params[i]));
        else
            analytic.push_back(Matrix(params[i]->rows(), params[i]->cols()));
    }

    double worst = 0.0;
    for (std::size_t i = 0; i < params.size(); ++i) {
        Matrix& p = *params[i];
        for (Index e = 0; e < p.size(); ++e) {
            const double saved = p.data()[e];
            p.data()[e] = saved + epsilon;
            const double up = eval_scalar(build);
            p.data()[e] = saved - epsilon;
            const double down = eval_scalar(build);
            p.data()[e] = saved;

            const double numeric = (up - down) / (2.0 * epsilon);
            const double a = analytic[i].data()[e];
            if (!std::isfinite(numeric) || !std::isfinite(a)) return kInf;
            const double rel = std::abs(a - numeric) / std::max(1.0, std::abs(a));
            if (rel > worst) worst = rel;
        }
    }
    return worst;
}

}  // namespace igmtf
