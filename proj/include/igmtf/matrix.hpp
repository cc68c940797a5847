#pragma once

#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace igmtf {

using Index = std::int64_t;

/// Base error for every failure the library reports.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Bad user input: files, flags, configuration. The CLI maps this to a
/// distinct exit code from runtime failures.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

/// Dense row-major matrix of 64-bit floats. The one storage type of the
/// project: series data, embeddings, parameters and gradients all live here.
class Matrix {
public:
    Matrix() = default;
    Matrix(Index rows, Index cols)
        : rows_(rows), cols_(cols), data_(static_cast<std::size_t>(rows * cols), 0.0) {
        if (rows < 0 || cols < 0) throw Error("Matrix: negative dimension");
    }
    Matrix(Index rows, Index cols, std::vector<double> data)
        : rows_(rows), cols_(cols), data_(std::move(data)) {
        if (static_cast<std::size_t>(rows * cols) != data_.size())
            throw Error("Matrix: data length " + std::to_string(data_.size()) +
                        " does not match " + std::to_string(rows) + "x" + std::to_string(cols));
    }

    static Matrix zeros(Index rows, Index cols) { return Matrix(rows, cols); }
    static Matrix full(Index rows, Index cols, double v);
    static Matrix ones(Index rows, Index cols) { return full(rows, cols, 1.0); }
    static Matrix identity(Index n);
    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);

    Index rows() const { return rows_; }
    Index cols() const { return cols_; }
    Index size() const { return rows_ * cols_; }
    bool empty() const { return data_.empty(); }

    double& operator()(Index r, Index c) { return data_[static_cast<std::size_t>(r * cols_ + c)]; }
    double operator()(Index r, Index c) const {
        return data_[static_cast<std::size_t>(r * cols_ + c)];
    }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    std::span<double> row(Index r) {
        return {data_.data() + r * cols_, static_cast<std::size_t>(cols_)};
    }
    std::span<const double> row(Index r) const {
        return {data_.data() + r * cols_, static_cast<std::size_t>(cols_)};
    }

    /// Copy of column c as an rows×1 matrix.
    Matrix col(Index c) const;

    bool same_shape(const Matrix& other) const {
        return rows_ == other.rows_ && cols_ == other.cols_;
    }
    std::string shape_str() const {
        return std::to_string(rows_) + "x" + std::to_string(cols_);
    }
    bool all_finite() const;

private:
    Index rows_ = 0;
    Index cols_ = 0;
    std::vector<double> data_;
};

namespace ops {

// Row norms below this are treated as zero when dividing (cosine, row norms):
// the similarity of a zero vector is defined as 0 with zero gradient.
inline constexpr double kNormFloor = 1e-12;

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix matmul_nt(const Matrix& a, const Matrix& b);  // a * b^T
Matrix matmul_tn(const Matrix& a, const Matrix& b);  // a^T * b

// add accepts equal shapes or a 1×m rhs broadcast over the rows of lhs.
Matrix add(const Matrix& a, const Matrix& b);
Matrix subtract(const Matrix& a, const Matrix& b);
Matrix multiply(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, double s);
Matrix sigmoid(const Matrix& a);
Matrix tanh(const Matrix& a);
Matrix leaky_relu(const Matrix& a, double slope);
Matrix concat_cols(const Matrix& a, const Matrix& b);
Matrix mean_rows(const Matrix& a);  // column-wise mean over rows, 1×m
Matrix mean_all(const Matrix& a);   // 1×1
Matrix l2_norm_rows(const Matrix& a);  // n×1
// Pairwise cosine between rows of a (n×l) and rows of b (m×l), n×m.
Matrix cosine_rows(const Matrix& a, const Matrix& b);
Matrix abs(const Matrix& a);
Matrix sum(const Matrix& a);  // 1×1

Matrix transpose(const Matrix& a);
Matrix col_sums(const Matrix& a);  // 1×m

double max_abs_diff(const Matrix& a, const Matrix& b);
bool bitwise_equal(const Matrix& a, const Matrix& b);

}  // namespace ops

}  // namespace igmtf
