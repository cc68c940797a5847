#include "igmtf/tape.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace igmtf {

const char* op_name(OpKind op) {
    switch (op) {
        case OpKind::constant: return "constant";
        case OpKind::parameter: return "parameter";
        case OpKind::detach: return "detach";
        case OpKind::matmul: return "matmul";
        case OpKind::add: return "add";
        case OpKind::subtract: return "subtract";
        case OpKind::multiply: return "multiply";
        case OpKind::scale: return "scale";
        case OpKind::sigmoid: return "sigmoid";
        case OpKind::tanh: return "tanh";
        case OpKind::leaky_relu: return "leaky_relu";
        case OpKind::concat_cols: return "concat_cols";
        case OpKind::mean_rows: return "mean_rows";
        case OpKind::mean_all: return "mean_all";
        case OpKind::l2_norm_rows: return "l2_norm_rows";
        case OpKind::cosine_rows: return "cosine_rows";
        case OpKind::abs: return "abs";
        case OpKind::sum: return "sum";
    }
    return "unknown";
}

NodeId Tape::push(TapeNode node) {
    nodes_.push_back(std::move(node));
    return NodeId{static_cast<std::uint32_t>(nodes_.size() - 1)};
}

void Tape::check_input(NodeId id) const {
    if (id.index >= nodes_.size()) throw Error("tape: input references a node not on this tape");
}

NodeId Tape::constant(Matrix value) {
    TapeNode n;
    n.op = OpKind::constant;
    n.stop_gradient = true;
    n.value = std::move(value);
    return push(std::move(n));
}

NodeId Tape::parameter(Matrix value) {
    TapeNode n;
    n.op = OpKind::parameter;
    n.value = std::move(value);
    return push(std::move(n));
}

NodeId Tape::detach(NodeId x) {
    check_input(x);
    TapeNode n;
    n.op = OpKind::detach;
    n.a = x;
    n.arity = 1;
    n.stop_gradient = true;
    n.value = nodes_[x.index].value;
    return push(std::move(n));
}

NodeId Tape::forward(OpKind op, NodeId a) { return forward(op, a, 0.0); }

NodeId Tape::forward(OpKind op, NodeId a, double attr) {
    check_input(a);
    const Matrix& av = nodes_[a.index].value;
    TapeNode n;
    n.op = op;
    n.a = a;
    n.arity = 1;
    n.attr = attr;
    switch (op) {
        case OpKind::scale: n.value = ops::scale(av, attr); break;
        case OpKind::sigmoid: n.value = ops::sigmoid(av); break;
        case OpKind::tanh: n.value = ops::tanh(av); break;
        case OpKind::leaky_relu: n.value = ops::leaky_relu(av, attr); break;
        case OpKind::mean_rows: n.value = ops::mean_rows(av); break;
        case OpKind::mean_all: n.value = ops::mean_all(av); break;
        case OpKind::l2_norm_rows: n.value = ops::l2_norm_rows(av); break;
        case OpKind::abs: n.value = ops::abs(av); break;
        case OpKind::sum: n.value = ops::sum(av); break;
        case OpKind::detach: return detach(a);
        default:
            throw Error(std::string("tape: ") + op_name(op) + " is not a unary op");
    }
    return push(std::move(n));
}

NodeId Tape::forward(OpKind op, NodeId a, NodeId b) {
    check_input(a);
    check_input(b);
    const Matrix& av = nodes_[a.index].value;
    const Matrix& bv = nodes_[b.index].value;
    TapeNode n;
    n.op = op;
    n.a = a;
    n.b = b;
    n.arity = 2;
    switch (op) {
        case OpKind::matmul: n.value = ops::matmul(av, bv); break;
        case OpKind::add: n.value = ops::add(av, bv); break;
        case OpKind::subtract: n.value = ops::subtract(av, bv); break;
        case OpKind::multiply: n.value = ops::multiply(av, bv); break;
        case OpKind::concat_cols: n.value = ops::concat_cols(av, bv); break;
        case OpKind::cosine_rows: n.value = ops::cosine_rows(av, bv); break;
        default:
            throw Error(std::string("tape: ") + op_name(op) + " is not a binary op");
    }
    return push(std::move(n));
}

const Matrix& Tape::grad(NodeId id) const {
    const TapeNode& n = nodes_[id.index];
    if (!n.has_grad) throw Error("tape: node has no gradient (not reached by backward)");
    return n.grad;
}

namespace {

void accumulate(TapeNode& node, const Matrix& delta) {
    if (!node.has_grad) {
        node.grad = delta;
        node.has_grad = true;
    } else {
        for (Index i = 0; i < delta.size(); ++i) node.grad.data()[i] += delta.data()[i];
    }
}

}  // namespace

void Tape::backward(NodeId root) {
    TapeNode& r = nodes_[root.index];
    if (r.value.rows() != 1 || r.value.cols() != 1)
        throw Error("backward: root must be scalar (1x1), got " + r.value.shape_str());
    accumulate(r, Matrix::ones(1, 1));

    for (std::uint32_t idx = root.index + 1; idx-- > 0;) {
        TapeNode& n = nodes_[idx];
        if (!n.has_grad || n.stop_gradient || n.arity == 0) continue;
        const Matrix& g = n.grad;
        TapeNode& na = nodes_[n.a.index];
        switch (n.op) {
            case OpKind::matmul: {
                accumulate(na, ops::matmul_nt(g, nodes_[n.b.index].value));
                accumulate(nodes_[n.b.index], ops::matmul_tn(na.value, g));
                break;
            }
            case OpKind::add: {
                accumulate(na, g);
                TapeNode& nb = nodes_[n.b.index];
                if (nb.value.rows() == 1 && na.value.rows() > 1)
                    accumulate(nb, ops::col_sums(g));
                else
                    accumulate(nb, g);
                break;
            }
            case OpKind::subtract: {
                accumulate(na, g);
                accumulate(nodes_[n.b.index], ops::scale(g, -1.0));
                break;
            }
            case OpKind::multiply: {
                accumulate(na, ops::multiply(g, nodes_[n.b.index].value));
                accumulate(nodes_[n.b.index], ops::multiply(g, na.value));
                break;
            }
            case OpKind::scale: {
                accumulate(na, ops::scale(g, n.attr));
                break;
            }
            case OpKind::sigmoid: {
                Matrix d(g.rows(), g.cols());
                for (Index i = 0; i < g.size(); ++i) {
                    const double y = n.value.data()[i];
                    d.data()[i] = g.data()[i] * y * (1.0 - y);
                }
                accumulate(na, d);
                break;
            }
            case OpKind::tanh: {
                Matrix d(g.rows(), g.cols());
                for (Index i = 0; i < g.size(); ++i) {
                    const double y = n.value.data()[i];
                    d.data()[i] = g.data()[i] * (1.0 - y * y);
                }
                accumulate(na, d);
                break;
            }
            case OpKind::leaky_relu: {
                Matrix d(g.rows(), g.cols());
                for (Index i = 0; i < g.size(); ++i)
                    d.data()[i] = g.data()[i] * (na.value.data()[i] > 0.0 ? 1.0 : n.attr);
                accumulate(na, d);
                break;
            }
            case OpKind::concat_cols: {
                TapeNode& nb = nodes_[n.b.index];
                Matrix da(na.value.rows(), na.value.cols());
                Matrix db(nb.value.rows(), nb.value.cols());
                for (Index i = 0; i < g.rows(); ++i) {
                    for (Index j = 0; j < da.cols(); ++j) da(i, j) = g(i, j);
                    for (Index j = 0; j < db.cols(); ++j) db(i, j) = g(i, da.cols() + j);
                }
                accumulate(na, da);
                accumulate(nb, db);
                break;
            }
            case OpKind::mean_rows: {
                const double inv = 1.0 / static_cast<double>(na.value.rows());
                Matrix d(na.value.rows(), na.value.cols());
                for (Index i = 0; i < d.rows(); ++i)
                    for (Index j = 0; j < d.cols(); ++j) d(i, j) = g(0, j) * inv;
                accumulate(na, d);
                break;
            }
            case OpKind::mean_all: {
                const double v = g(0, 0) / static_cast<double>(na.value.size());
                accumulate(na, Matrix::full(na.value.rows(), na.value.cols(), v));
                break;
            }
            case OpKind::l2_norm_rows: {
                Matrix d(na.value.rows(), na.value.cols());
                for (Index i = 0; i < d.rows(); ++i) {
                    const double norm = std::max(n.value(i, 0), ops::kNormFloor);
                    for (Index j = 0; j < d.cols(); ++j)
                        d(i, j) = g(i, 0) * na.value(i, j) / norm;
                }
                accumulate(na, d);
                break;
            }
            case OpKind::cosine_rows: {
                TapeNode& nb = nodes_[n.b.index];
                const Matrix& A = na.value;
                const Matrix& B = nb.value;
                const Matrix norm_a = ops::l2_norm_rows(A);
                const Matrix norm_b = ops::l2_norm_rows(B);
                Matrix da(A.rows(), A.cols());
                Matrix db(B.rows(), B.cols());
                for (Index i = 0; i < A.rows(); ++i) {
                    const double pa = norm_a(i, 0);
                    if (pa < ops::kNormFloor) continue;  // zero similarity, zero gradient
                    for (Index j = 0; j < B.rows(); ++j) {
                        const double pb = norm_b(j, 0);
                        if (pb < ops::kNormFloor) continue;
                        const double gij = g(i, j);
                        if (gij == 0.0) continue;
                        const double c = n.value(i, j);
                        const double inv_ab = 1.0 / (pa * pb);
                        const double inv_aa = c / (pa * pa);
                        const double inv_bb = c / (pb * pb);
                        for (Index t = 0; t < A.cols(); ++t) {
                            da(i, t) += gij * (B(j, t) * inv_ab - A(i, t) * inv_aa);
                            db(j, t) += gij * (A(i, t) * inv_ab - B(j, t) * inv_bb);
                        }
                    }
                }
                accumulate(na, da);
                accumulate(nb, db);
                break;
            }
            case OpKind::abs: {
                Matrix d(g.rows(), g.cols());
                for (Index i = 0; i < g.size(); ++i) {
                    const double x = na.value.data()[i];
                    d.data()[i] = g.data()[i] * (x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0));
                }
                accumulate(na, d);
                break;
            }
            case OpKind::sum: {
                accumulate(na, Matrix::full(na.value.rows(), na.value.cols(), g(0, 0)));
                break;
            }
            case OpKind::constant:
            case OpKind::parameter:
            case OpKind::detach:
                break;
        }
    }
}

}  // namespace igmtf
