#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "qschur/errors.hpp"
#include "qschur/quaternion.hpp"

namespace qschur {

/// Dense row-major matrix over H. Zero-dimensional shapes are legal and
/// behave as the empty operators (products through them are zero matrices).
class QMatrix {
public:
    QMatrix() = default;
    QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

    QMatrix(std::initializer_list<std::initializer_list<Quaternion>> rows) {
        rows_ = rows.size();
        cols_ = rows_ ? rows.begin()->size() : 0;
        data_.reserve(rows_ * cols_);
        for (const auto& r : rows) {
            if (r.size() != cols_) raise(Errc::ShapeMismatch, "ragged initializer");
            data_.insert(data_.end(), r.begin(), r.end());
        }
    }

    static QMatrix identity(std::size_t n) {
        QMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) m(i, i) = Quaternion{1.0};
        return m;
    }

    static QMatrix scalar(const Quaternion& q) {
        QMatrix m(1, 1);
        m(0, 0) = q;
        return m;
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0 || cols_ == 0; }

    Quaternion& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
    const Quaternion& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

    const std::vector<Quaternion>& data() const { return data_; }

    QMatrix& operator+=(const QMatrix& r) {
        require_same_shape(r, "add");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += r.data_[k];
        return *this;
    }
    QMatrix& operator-=(const QMatrix& r) {
        require_same_shape(r, "subtract");
        for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= r.data_[k];
        return *this;
    }
    QMatrix& operator*=(double s) {
        for (auto& q : data_) q *= s;
        return *this;
    }

    QMatrix adjoint() const {
        QMatrix m(cols_, rows_);
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = 0; j < cols_; ++j) m(j, i) = conj((*this)(i, j));
        return m;
    }

    /// Entrywise left scaling q*M (quaternion scalars do not commute with entries).
    QMatrix scaled_left(const Quaternion& q) const {
        QMatrix m(rows_, cols_);
        for (std::size_t k = 0; k < data_.size(); ++k) m.data_[k] = q * data_[k];
        return m;
    }

    QMatrix scaled_right(const Quaternion& q) const {
        QMatrix m(rows_, cols_);
        for (std::size_t k = 0; k < data_.size(); ++k) m.data_[k] = data_[k] * q;
        return m;
    }

    void set_block(std::size_t i0, std::size_t j0, const QMatrix& b) {
        for (std::size_t i = 0; i < b.rows_; ++i)
            for (std::size_t j = 0; j < b.cols_; ++j) (*this)(i0 + i, j0 + j) = b(i, j);
    }

    QMatrix block(std::size_t i0, std::size_t j0, std::size_t r, std::size_t c) const {
        QMatrix b(r, c);
        for (std::size_t i = 0; i < r; ++i)
            for (std::size_t j = 0; j < c; ++j) b(i, j) = (*this)(i0 + i, j0 + j);
        return b;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& q : data_) m = std::max(m, norm(q));
        return m;
    }

    bool is_hermitian(double tol = 1e-10) const {
        if (rows_ != cols_) return false;
        const double scale = std::max(1.0, max_abs());
        for (std::size_t i = 0; i < rows_; ++i)
            for (std::size_t j = i; j < cols_; ++j)
                if (norm((*this)(i, j) - conj((*this)(j, i))) > tol * scale) return false;
        return true;
    }

private:
    void require_same_shape(const QMatrix& r, const char* op) const {
        if (rows_ != r.rows_ || cols_ != r.cols_) raise(Errc::ShapeMismatch, op);
    }

    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Quaternion> data_;
};

inline QMatrix operator+(QMatrix a, const QMatrix& b) { return a += b; }
inline QMatrix operator-(QMatrix a, const QMatrix& b) { return a -= b; }
inline QMatrix operator*(QMatrix a, double s) { return a *= s; }
inline QMatrix operator*(double s, QMatrix a) { return a *= s; }
inline QMatrix operator-(const QMatrix& a) { return a * -1.0; }

inline QMatrix operator*(const QMatrix& a, const QMatrix& b) {
    if (a.cols() != b.rows()) raise(Errc::ShapeMismatch, "matrix product");
    QMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < b.cols(); ++j) {
            Quaternion acc{};
            for (std::size_t l = 0; l < a.cols(); ++l) acc += a(i, l) * b(l, j);
            c(i, j) = acc;
        }
    return c;
}

inline QMatrix hstack(const QMatrix& a, const QMatrix& b) {
    if (a.rows() != b.rows()) raise(Errc::ShapeMismatch, "hstack");
    QMatrix c(a.rows(), a.cols() + b.cols());
    c.set_block(0, 0, a);
    c.set_block(0, a.cols(), b);
    return c;
}

inline QMatrix vstack(const QMatrix& a, const QMatrix& b) {
    if (a.cols() != b.cols()) raise(Errc::ShapeMismatch, "vstack");
    QMatrix c(a.rows() + b.rows(), a.cols());
    c.set_block(0, 0, a);
    c.set_block(a.rows(), 0, b);
    return c;
}

inline bool approx_eq(const QMatrix& a, const QMatrix& b, double tol = 1e-10) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
    const double scale = std::max({1.0, a.max_abs(), b.max_abs()});
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j)
            if (norm(a(i, j) - b(i, j)) > tol * scale) return false;
    return true;
}

} // namespace qschur
