#pragma once

#include <cstdint>
#include <vector>

#include "igmtf/matrix.hpp"

namespace igmtf {

enum class OpKind : std::uint8_t {
    constant,
    parameter,
    detach,
    matmul,
    add,  // rhs may be a 1×m bias row, broadcast over rows
    subtract,
    multiply,
    scale,
    sigmoid,
    tanh,
    leaky_relu,
    concat_cols,
    mean_rows,
    mean_all,
    l2_norm_rows,
    cosine_rows,
    abs,
    sum,
};

const char* op_name(OpKind op);

/// Reference to a node on a Tape. Only valid for the tape that produced it.
struct NodeId {
    std::uint32_t index = 0;
};

struct TapeNode {
    OpKind op = OpKind::constant;
    NodeId a{};
    NodeId b{};
    std::uint8_t arity = 0;
    bool stop_gradient = false;  // constants and detach nodes end propagation
    double attr = 0.0;           // leaky_relu slope / scale factor
    Matrix value;
    Matrix grad;  // allocated on first accumulation during backward
    bool has_grad = false;
};

/// Append-only record of one forward pass. Inputs of a node always reference
/// strictly earlier nodes, so a reverse index sweep is a reverse topological
/// order.
class Tape {
public:
    NodeId constant(Matrix value);
    NodeId parameter(Matrix value);
    NodeId detach(NodeId x);

    NodeId forward(OpKind op, NodeId a);
    NodeId forward(OpKind op, NodeId a, NodeId b);
    NodeId forward(OpKind op, NodeId a, double attr);

    const Matrix& value(NodeId id) const { return nodes_[id.index].value; }
    std::size_t size() const { return nodes_.size(); }

    /// Reverse sweep from a scalar (1×1) root. Gradients accumulate on every
    /// reached node; detached nodes receive but never propagate.
    void backward(NodeId root);

    bool has_grad(NodeId id) const { return nodes_[id.index].has_grad; }
    const Matrix& grad(NodeId id) const;

private:
    NodeId push(TapeNode node);
    void check_input(NodeId id) const;

    std::vector<TapeNode> nodes_;
};

/// Executor that records onto a tape; Ref is a node handle.
struct TapeExec {
    using Ref = NodeId;
    Tape& tape;

    Ref constant(Matrix m) { return tape.constant(std::move(m)); }
    Ref matmul(Ref a, Ref b) { return tape.forward(OpKind::matmul, a, b); }
    Ref add(Ref a, Ref b) { return tape.forward(OpKind::add, a, b); }
    Ref subtract(Ref a, Ref b) { return tape.forward(OpKind::subtract, a, b); }
    Ref multiply(Ref a, Ref b) { return tape.forward(OpKind::multiply, a, b); }
    Ref scale(Ref a, double s) { return tape.forward(OpKind::scale, a, s); }
    Ref sigmoid(Ref a) { return tape.forward(OpKind::sigmoid, a); }
    Ref tanh(Ref a) { return tape.forward(OpKind::tanh, a); }
    Ref leaky_relu(Ref a, double slope) { return tape.forward(OpKind::leaky_relu, a, slope); }
    Ref concat_cols(Ref a, Ref b) { return tape.forward(OpKind::concat_cols, a, b); }
    Ref mean_rows(Ref a) { return tape.forward(OpKind::mean_rows, a); }
    Ref mean_all(Ref a) { return tape.forward(OpKind::mean_all, a); }
    Ref cosine_rows(Ref a, Ref b) { return tape.forward(OpKind::cosine_rows, a, b); }
    Ref abs(Ref a) { return tape.forward(OpKind::abs, a); }
    Ref sum(Ref a) { return tape.forward(OpKind::sum, a); }
    const Matrix& value(Ref r) const { return tape.value(r); }
};

/// Executor that evaluates immediately; Ref is the value itself. Runs the
/// exact same kernels in the same order as TapeExec, so both modes produce
/// bit-identical values.
struct ValueExec {
    using Ref = Matrix;

    Ref constant(Matrix m) { return m; }
    Ref matmul(const Ref& a, const Ref& b) { return ops::matmul(a, b); }
    Ref add(const Ref& a, const Ref& b) { return ops::add(a, b); }
    Ref subtract(const Ref& a, const Ref& b) { return ops::subtract(a, b); }
    Ref multiply(const Ref& a, const Ref& b) { return ops::multiply(a, b); }
    Ref scale(const Ref& a, double s) { return ops::scale(a, s); }
    Ref sigmoid(const Ref& a) { return ops::sigmoid(a); }
    Ref tanh(const Ref& a) { return ops::tanh(a); }
    Ref leaky_relu(const Ref& a, double slope) { return ops::leaky_relu(a, slope); }
    Ref concat_cols(const Ref& a, const Ref& b) { return ops::concat_cols(a, b); }
    Ref mean_rows(const Ref& a) { return ops::mean_rows(a); }
    Ref mean_all(const Ref& a) { return ops::mean_all(a); }
    Ref cosine_rows(const Ref& a, const Ref& b) { return ops::cosine_rows(a, b); }
    Ref abs(const Ref& a) { return ops::abs(a); }
    Ref sum(const Ref& a) { return ops::sum(a); }
    const Matrix& value(const Ref& r) const { return r; }
};

}  // namespace igmtf
