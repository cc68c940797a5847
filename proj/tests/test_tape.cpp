#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fixtures.hpp"
#include "igmtf/grad_check.hpp"
#include "igmtf/rng.hpp"
#include "igmtf/tape.hpp"

using namespace igmtf;
using testfix::random_matrix;
using testfix::random_matrix_away_from_zero;

TEST_CASE("forward values of hand-computable cases") {
    Tape tape;
    const NodeId a = tape.constant(Matrix::from_rows({{1, 2}, {3, 4}}));
    const NodeId b = tape.constant(Matrix::from_rows({{1}, {1}}));
    const NodeId mm = tape.forward(OpKind::matmul, a, b);
    CHECK(tape.value(mm)(0, 0) == 3.0);
    CHECK(tape.value(mm)(1, 0) == 7.0);

    const NodeId c = tape.constant(Matrix::from_rows({{-1, 2}}));
    const NodeId lr = tape.forward(OpKind::leaky_relu, c, 0.01);
    CHECK(tape.value(lr)(0, 0) == doctest::Approx(-0.01));
    CHECK(tape.value(lr)(0, 1) == 2.0);

    const NodeId q = tape.constant(Matrix::from_rows({{1, 0}}));
    const NodeId r = tape.constant(Matrix::from_rows({{0, 1}, {2, 0}}));
    const NodeId cos = tape.forward(OpKind::cosine_rows, q, r);
    CHECK(tape.value(cos)(0, 0) == doctest::Approx(0.0));
    CHECK(tape.value(cos)(0, 1) == doctest::Approx(1.0));
}

TEST_CASE("backward of linear reductions") {
    {
        Tape tape;
        const NodeId x = tape.parameter(Matrix::from_rows({{1, -2}, {3, 4}}));
        tape.backward(tape.forward(OpKind::sum, x));
        CHECK(ops::bitwise_equal(tape.grad(x), Matrix::ones(2, 2)));
    }
    {
        Tape tape;
        const NodeId x = tape.parameter(Matrix::from_rows({{1, 2, 3, 4}}));
        tape.backward(tape.forward(OpKind::mean_all, x));
        CHECK(ops::bitwise_equal(tape.grad(x), Matrix::full(1, 4, 0.25)));
    }
    {
        // abs-sum of (x − y) at x=2, y=1: d/dx = sign(1) = 1
        Tape tape;
        const NodeId x = tape.parameter(Matrix::from_rows({{2}}));
        const NodeId y = tape.constant(Matrix::from_rows({{1}}));
        const NodeId diff = tape.forward(OpKind::subtract, x, y);
        tape.backward(tape.forward(OpKind::sum, tape.forward(OpKind::abs, diff)));
        CHECK(tape.grad(x)(0, 0) == 1.0);
    }
}

TEST_CASE("errors: shape mismatch names the op, non-scalar root rejected") {
    Tape tape;
    const NodeId a = tape.constant(Matrix::zeros(2, 3));
    const NodeId b = tape.constant(Matrix::zeros(2, 2));
    CHECK_THROWS_WITH_AS(tape.forward(OpKind::matmul, a, b),
                         doctest::Contains("matmul"), Error);
    CHECK_THROWS_AS(tape.forward(OpKind::add, a, b), Error);
    CHECK_THROWS_AS(tape.backward(a), Error);
}

TEST_CASE("detach stops gradient exactly") {
    Tape tape;
    const NodeId x = tape.parameter(Matrix::from_rows({{1.5, -0.5}}));
    const NodeId y = tape.forward(OpKind::tanh, x);
    const NodeId cut = tape.detach(y);
    const NodeId loss = tape.forward(OpKind::sum, tape.forward(OpKind::multiply, cut, cut));
    tape.backward(loss);
    CHECK(ops::bitwise_equal(tape.value(cut), tape.value(y)));
    CHECK(tape.has_grad(cut));
    CHECK_FALSE(tape.has_grad(y));
    CHECK_FALSE(tape.has_grad(x));
}

TEST_CASE("cosine with a zero-norm row: similarity 0, gradient 0") {
    Tape tape;
    const NodeId a = tape.parameter(Matrix::from_rows({{0, 0}, {1, 2}}));
    const NodeId b = tape.parameter(Matrix::from_rows({{3, -1}}));
    const NodeId cos = tape.forward(OpKind::cosine_rows, a, b);
    CHECK(tape.value(cos)(0, 0) == 0.0);
    tape.backward(tape.forward(OpKind::sum, cos));
    CHECK(tape.grad(a)(0, 0) == 0.0);
    CHECK(tape.grad(a)(0, 1) == 0.0);
    CHECK(tape.grad(a)(1, 0) != 0.0);
}

TEST_CASE("cosine output stays in [-1, 1] for nonzero rows") {
    auto rng = make_rng(11, 0);
    for (int trial = 0; trial < 50; ++trial) {
        const Matrix a = random_matrix_away_from_zero(4, 6, rng);
        const Matrix b = random_matrix_away_from_zero(5, 6, rng);
        const Matrix c = ops::cosine_rows(a, b);
        for (Index i = 0; i < c.size(); ++i) {
            CHECK(c.data()[i] <= 1.0 + 1e-12);
            CHECK(c.data()[i] >= -1.0 - 1e-12);
        }
    }
}

namespace {

// Loss = sum(f(x[, y]) ⊙ C) with a random constant C, so wrong transposes in
// a backward rule cannot cancel out.
double check_binary(OpKind op, Matrix x0, Matrix y0, std::mt19937_64& rng) {
    const Matrix weight = [&] {
        Tape probe;
        const NodeId out =
            probe.forward(op, probe.constant(x0), probe.constant(y0));
        return random_matrix(probe.value(out).rows(), probe.value(out).cols(), rng);
    }();
    Matrix x = std::move(x0);
    Matrix y = std::move(y0);
    std::vector<Matrix*> params = {&x, &y};
    const GraphBuilder build = [&](Tape& tape) {
        BuiltGraph g;
        const NodeId xn = tape.parameter(x);
        const NodeId yn = tape.parameter(y);
        const NodeId out = tape.forward(op, xn, yn);
        g.root = tape.forward(OpKind::sum,
                              tape.forward(OpKind::multiply, out, tape.constant(weight)));
        g.params = {xn, yn};
        return g;
    };
    return finite_difference_check(build, params);
}

double check_unary(OpKind op, Matrix x0, double attr, std::mt19937_64& rng) {
    const Matrix weight = [&] {
        Tape probe;
        const NodeId out = probe.forward(op, probe.constant(x0), attr);
        return random_matrix(probe.value(out).rows(), probe.value(out).cols(), rng);
    }();
    Matrix x = std::move(x0);
    std::vector<Matrix*> params = {&x};
    const GraphBuilder build = [&](Tape& tape) {
        BuiltGraph g;
        const NodeId xn = tape.parameter(x);
        const NodeId out = tape.forward(op, xn, attr);
        g.root = tape.forward(OpKind::sum,
                              tape.forward(OpKind::multiply, out, tape.constant(weight)));
        g.params = {xn};
        return g;
    };
    return finite_difference_check(build, params);
}

}  // namespace

TEST_CASE("analytic gradients match central differences for every op") {
    auto rng = make_rng(23, 0);
    constexpr double kTol = 1e-4;

    CHECK(check_binary(OpKind::matmul, random_matrix(3, 4, rng), random_matrix(4, 2, rng), rng) < kTol);
    CHECK(check_binary(OpKind::add, random_matrix(3, 4, rng), random_matrix(3, 4, rng), rng) < kTol);
    CHECK(check_binary(OpKind::add, random_matrix(3, 4, rng), random_matrix(1, 4, rng), rng) < kTol);
    CHECK(check_binary(OpKind::subtract, random_matrix(3, 4, rng), random_matrix(3, 4, rng), rng) < kTol);
    CHECK(check_binary(OpKind::multiply, random_matrix(3, 4, rng), random_matrix(3, 4, rng), rng) < kTol);
    CHECK(check_binary(OpKind::concat_cols, random_matrix(3, 2, rng), random_matrix(3, 4, rng), rng) < kTol);
    CHECK(check_binary(OpKind::cosine_rows, random_matrix_away_from_zero(3, 5, rng),
                       random_matrix_away_from_zero(4, 5, rng), rng) < kTol);

    CHECK(check_unary(OpKind::scale, random_matrix(3, 4, rng), -1.7, rng) < kTol);
    CHECK(check_unary(OpKind::sigmoid, random_matrix(3, 4, rng), 0.0, rng) < kTol);
    CHECK(check_unary(OpKind::tanh, random_matrix(3, 4, rng), 0.0, rng) < kTol);
    CHECK(check_unary(OpKind::leaky_relu, random_matrix_away_from_zero(3, 4, rng), 0.01, rng) < kTol);
    CHECK(check_unary(OpKind::mean_rows, random_matrix(5, 3, rng), 0.0, rng) < kTol);
    CHECK(check_unary(OpKind::mean_all, random_matrix(3, 4, rng), 0.0, rng) < kTol);
    CHECK(check_unary(OpKind::l2_norm_rows, random_matrix_away_from_zero(4, 3, rng), 0.0, rng) < kTol);
    CHECK(check_unary(OpKind::abs, random_matrix_away_from_zero(3, 4, rng), 0.0, rng) < kTol);
    CHECK(check_unary(OpKind::sum, random_matrix(3, 4, rng), 0.0, rng) < kTol);
}

TEST_CASE("gradients accumulate across fan-out") {
    // loss = sum(x ⊙ x) + sum(x): grad = 2x + 1
    Tape tape;
    const Matrix x0 = Matrix::from_rows({{0.5, -1.25}});
    const NodeId x = tape.parameter(x0);
    const NodeId left = tape.forward(OpKind::sum, tape.forward(OpKind::multiply, x, x));
    const NodeId right = tape.forward(OpKind::sum, x);
    tape.backward(tape.forward(OpKind::add, left, right));
    for (Index j = 0; j < 2; ++j)
        CHECK(tape.grad(x)(0, j) == doctest::Approx(2.0 * x0(0, j) + 1.0));
}
