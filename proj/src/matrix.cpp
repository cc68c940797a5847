#include "igmtf/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#ifdef IGMTF_USE_CBLAS
#include <cblas.h>
#endif

namespace igmtf {

Matrix Matrix::full(Index rows, Index cols, double v) {
    Matrix m(rows, cols);
    std::fill(m.data_.begin(), m.data_.end(), v);
    return m;
}

Matrix Matrix::identity(Index n) {
    Matrix m(n, n);
    for (Index i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
    const Index r = static_cast<Index>(rows.size());
    const Index c = r == 0 ? 0 : static_cast<Index>(rows.begin()->size());
    Matrix m(r, c);
    Index i = 0;
    for (const auto& row : rows) {
        if (static_cast<Index>(row.size()) != c) throw Error("from_rows: ragged rows");
        Index j = 0;
        for (double v : row) m(i, j++) = v;
        ++i;
    }
    return m;
}

Matrix Matrix::col(Index c) const {
    Matrix out(rows_, 1);
    for (Index i = 0; i < rows_; ++i) out(i, 0) = (*this)(i, c);
    return out;
}

bool Matrix::all_finite() const {
    for (double v : data_)
        if (!std::isfinite(v)) return false;
    return true;
}

namespace ops {

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw Error(msg);
}

#ifndef IGMTF_USE_CBLAS
// Blocked fallback kernel, used only when no BLAS was found at configure time.
void gemm_fallback(bool trans_a, bool trans_b, Index m, Index n, Index k, const Matrix& a,
                   const Matrix& b, Matrix& c) {
    constexpr Index kBlock = 64;
    auto at = [&](Index i, Index p) { return trans_a ? a(p, i) : a(i, p); };
    auto bt = [&](Index p, Index j) { return trans_b ? b(j, p) : b(p, j); };
    for (Index i0 = 0; i0 < m; i0 += kBlock)
        for (Index p0 = 0; p0 < k; p0 += kBlock)
            for (Index j0 = 0; j0 < n; j0 += kBlock)
                for (Index i = i0; i < std::min(i0 + kBlock, m); ++i)
                    for (Index p = p0; p < std::min(p0 + kBlock, k); ++p) {
                        const double av = at(i, p);
                        for (Index j = j0; j < std::min(j0 + kBlock, n); ++j)
                            c(i, j) += av * bt(p, j);
                    }
}
#endif

Matrix gemm(bool trans_a, bool trans_b, const Matrix& a, const Matrix& b, const char* what) {
    const Index m = trans_a ? a.cols() : a.rows();
    const Index k = trans_a ? a.rows() : a.cols();
    const Index kb = trans_b ? b.cols() : b.rows();
    const Index n = trans_b ? b.rows() : b.cols();
    require(k == kb, std::string(what) + ": inner dimensions differ, " + a.shape_str() + " vs " +
                         b.shape_str());
    Matrix c(m, n);
    if (m == 0 || n == 0 || k == 0) return c;
#ifdef IGMTF_USE_CBLAS
    cblas_dgemm(CblasRowMajor, trans_a ? CblasTrans : CblasNoTrans,
                trans_b ? CblasTrans : CblasNoTrans, static_cast<int>(m), static_cast<int>(n),
                static_cast<int>(k), 1.0, a.data(), static_cast<int>(a.cols()), b.data(),
                static_cast<int>(b.cols()), 0.0, c.data(), static_cast<int>(c.cols()));
#else
    gemm_fallback(trans_a, trans_b, m, n, k, a, b, c);
#endif
    return c;
}

template <class F>
Matrix unary(const Matrix& a, F f) {
    Matrix out(a.rows(), a.cols());
    const double* src = a.data();
    double* dst = out.data();
    for (Index i = 0; i < a.size(); ++i) dst[i] = f(src[i]);
    return out;
}

}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b) { return gemm(false, false, a, b, "matmul"); }
Matrix matmul_nt(const Matrix& a, const Matrix& b) { return gemm(false, true, a, b, "matmul_nt"); }
Matrix matmul_tn(const Matrix& a, const Matrix& b) { return gemm(true, false, a, b, "matmul_tn"); }

Matrix add(const Matrix& a, const Matrix& b) {
    if (b.rows() == 1 && a.rows() > 1 && a.cols() == b.cols()) {
        Matrix out(a.rows(), a.cols());
        for (Index i = 0; i < a.rows(); ++i)
            for (Index j = 0; j < a.cols(); ++j) out(i, j) = a(i, j) + b(0, j);
        return out;
    }
    require(a.same_shape(b), "add: shape mismatch " + a.shape_str() + " vs " + b.shape_str());
    Matrix out(a.rows(), a.cols());
    for (Index i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] + b.data()[i];
    return out;
}

Matrix subtract(const Matrix& a, const Matrix& b) {
    require(a.same_shape(b), "subtract: shape mismatch " + a.shape_str() + " vs " + b.shape_str());
    Matrix out(a.rows(), a.cols());
    for (Index i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] - b.data()[i];
    return out;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
    require(a.same_shape(b), "multiply: shape mismatch " + a.shape_str() + " vs " + b.shape_str());
    Matrix out(a.rows(), a.cols());
    for (Index i = 0; i < a.size(); ++i) out.data()[i] = a.data()[i] * b.data()[i];
    return out;
}

Matrix scale(const Matrix& a, double s) {
    return unary(a, [s](double v) { return s * v; });
}

Matrix sigmoid(const Matrix& a) {
    return unary(a, [](double v) { return 1.0 / (1.0 + std::exp(-v)); });
}

Matrix tanh(const Matrix& a) {
    return unary(a, [](double v) { return std::tanh(v); });
}

Matrix leaky_relu(const Matrix& a, double slope) {
    return unary(a, [slope](double v) { return v > 0.0 ? v : slope * v; });
}

Matrix concat_cols(const Matrix& a, const Matrix& b) {
    require(a.rows() == b.rows(),
            "concat_cols: row counts differ, " + a.shape_str() + " vs " + b.shape_str());
    Matrix out(a.rows(), a.cols() + b.cols());
    for (Index i = 0; i < a.rows(); ++i) {
        std::memcpy(out.row(i).data(), a.row(i).data(), sizeof(double) * a.cols());
        std::memcpy(out.row(i).data() + a.cols(), b.row(i).data(), sizeof(double) * b.cols());
    }
    return out;
}

Matrix mean_rows(const Matrix& a) {
    require(a.rows() > 0, "mean_rows: empty matrix");
    Matrix out(1, a.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j) out(0, j) += a(i, j);
    for (Index j = 0; j < a.cols(); ++j) out(0, j) /= static_cast<double>(a.rows());
    return out;
}

Matrix mean_all(const Matrix& a) {
    require(a.size() > 0, "mean_all: empty matrix");
    double s = 0.0;
    for (Index i = 0; i < a.size(); ++i) s += a.data()[i];
    Matrix out(1, 1);
    out(0, 0) = s / static_cast<double>(a.size());
    return out;
}

Matrix l2_norm_rows(const Matrix& a) {
    Matrix out(a.rows(), 1);
    for (Index i = 0; i < a.rows(); ++i) {
        double s = 0.0;
        for (Index j = 0; j < a.cols(); ++j) s += a(i, j) * a(i, j);
        out(i, 0) = std::sqrt(s);
    }
    return out;
}

Matrix cosine_rows(const Matrix& a, const Matrix& b) {
    require(a.cols() == b.cols(),
            "cosine_rows: feature dimensions differ, " + a.shape_str() + " vs " + b.shape_str());
    const Matrix na = l2_norm_rows(a);
    const Matrix nb = l2_norm_rows(b);
    Matrix out = matmul_nt(a, b);
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < b.rows(); ++j) {
            if (na(i, 0) < kNormFloor || nb(j, 0) < kNormFloor)
                out(i, j) = 0.0;
            else
                out(i, j) /= na(i, 0) * nb(j, 0);
        }
    return out;
}

Matrix abs(const Matrix& a) {
    return unary(a, [](double v) { return std::abs(v); });
}

Matrix sum(const Matrix& a) {
    double s = 0.0;
    for (Index i = 0; i < a.size(); ++i) s += a.data()[i];
    Matrix out(1, 1);
    out(0, 0) = s;
    return out;
}

Matrix transpose(const Matrix& a) {
    Matrix out(a.cols(), a.rows());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
    return out;
}

Matrix col_sums(const Matrix& a) {
    Matrix out(1, a.cols());
    for (Index i = 0; i < a.rows(); ++i)
        for (Index j = 0; j < a.cols(); ++j) out(0, j) += a(i, j);
    return out;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    require(a.same_shape(b), "max_abs_diff: shape mismatch");
    double m = 0.0;
    for (Index i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

bool bitwise_equal(const Matrix& a, const Matrix& b) {
    if (!a.same_shape(b)) return false;
    return std::memcmp(a.data(), b.data(), sizeof(double) * a.size()) == 0;
}

}  // namespace ops
}  // namespace igmtf
