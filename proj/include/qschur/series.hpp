#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <vector>

#include "qschur/qlinalg.hpp"
#include "qschur/qmatrix.hpp"
#include "qschur/quaternion.hpp"

namespace qschur {

/// Truncated slice-regular power series sum_{n<=N} p^n a_n, coefficients on
/// the right. The coefficient list is the series (zeros beyond it); trunc()
/// is the degree through which *-arithmetic results stay valid. Arithmetic is
/// performed modulo p^(N+1) with N the minimum of the operands' truncations.
class QSeries {
public:
    QSeries() : coeffs_(1) {}
    explicit QSeries(std::vector<Quaternion> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) coeffs_.resize(1);
    }
    QSeries(std::initializer_list<Quaternion> coeffs) : coeffs_(coeffs) {
        if (coeffs_.empty()) coeffs_.resize(1);
    }

    static QSeries unit(std::size_t trunc) {
        QSeries s;
        s.coeffs_.assign(trunc + 1, Quaternion{});
        s.coeffs_[0] = Quaternion{1.0};
        return s;
    }

    static QSeries zero(std::size_t trunc) {
        QSeries s;
        s.coeffs_.assign(trunc + 1, Quaternion{});
        return s;
    }

    std::size_t trunc() const { return coeffs_.size() - 1; }

    const Quaternion& operator[](std::size_t n) const { return coeffs_[n]; }
    Quaternion& operator[](std::size_t n) { return coeffs_[n]; }

    Quaternion coeff(std::size_t n) const {
        return n < coeffs_.size() ? coeffs_[n] : Quaternion{};
    }

    const std::vector<Quaternion>& coeffs() const { return coeffs_; }

    QSeries resized(std::size_t trunc) const {
        std::vector<Quaternion> c(trunc + 1);
        for (std::size_t n = 0; n <= trunc; ++n) c[n] = coeff(n);
        return QSeries(std::move(c));
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& q : coeffs_) m = std::max(m, norm(q));
        return m;
    }

    bool has_real_coeffs(double tol = 1e-12) const {
        const double scale = std::max(1.0, max_abs());
        for (const auto& q : coeffs_)
            if (norm(imag_part(q)) > tol * scale) return false;
        return true;
    }

private:
    std::vector<Quaternion> coeffs_;
};

/// c_n = sum_{r<=n} a_r b_{n-r} (Cauchy convolution of the coefficient
/// sequences); associative and distributive, commutative only against
/// real-coefficient factors.
inline QSeries star_mul(const QSeries& f, const QSeries& g) {
    const std::size_t trunc = std::min(f.trunc(), g.trunc());
    std::vector<Quaternion> c(trunc + 1);
    for (std::size_t n = 0; n <= trunc; ++n) {
        Quaternion acc{};
        for (std::size_t r = 0; r <= n; ++r) acc += f[r] * g[n - r];
        c[n] = acc;
    }
    return QSeries(std::move(c));
}

/// f^c: coefficient-wise conjugation.
inline QSeries conj_series(const QSeries& f) {
    std::vector<Quaternion> c(f.trunc() + 1);
    for (std::size_t n = 0; n <= f.trunc(); ++n) c[n] = conj(f[n]);
    return QSeries(std::move(c));
}

/// f^s = f^c * f. The convolution sum_r conj(a_r) a_{n-r} pairs each term
/// with its conjugate, so the result is real; residual imaginary parts below
/// 1e-12 * scale are zeroed.
inline QSeries symmetrize(const QSeries& f) {
    QSeries s = star_mul(conj_series(f), f);
    const double scale = std::max(1.0, s.max_abs());
    for (std::size_t n = 0; n <= s.trunc(); ++n) {
        if (norm(imag_part(s[n])) > 1e-12 * scale)
            raise(Errc::NotHermitian, "symmetrization produced a non-real coefficient");
        s[n] = Quaternion{s[n].w};
    }
    return s;
}

namespace detail {

/// Formal reciprocal of a real-coefficient series (standard recursion).
inline std::vector<double> real_series_reciprocal(const QSeries& s) {
    std::vector<double> t(s.trunc() + 1);
    const double s0 = s[0].w;
    t[0] = 1.0 / s0;
    for (std::size_t n = 1; n <= s.trunc(); ++n) {
        double acc = 0.0;
        for (std::size_t r = 1; r <= n; ++r) acc += s[r].w * t[n - r];
        t[n] = -acc / s0;
    }
    return t;
}

} // namespace detail

/// f^{-*} = (f^s)^{-1} f^c. The symmetrization has real coefficients, so its
/// formal inverse commutes with everything and the *-reciprocal reduces to a
/// real-series reciprocal followed by one convolution.
inline QSeries star_reciprocal(const QSeries& f) {
    if (norm(f[0]) < 1e-12) raise(Errc::NonUnit, "leading coefficient too small");
    const QSeries fs = symmetrize(f);
    const std::vector<double> inv = detail::real_series_reciprocal(fs);
    const QSeries fc = conj_series(f);
    std::vector<Quaternion> c(f.trunc() + 1);
    for (std::size_t n = 0; n <= f.trunc(); ++n) {
        Quaternion acc{};
        for (std::size_t r = 0; r <= n; ++r) acc += inv[r] * fc[n - r];
        c[n] = acc;
    }
    return QSeries(std::move(c));
}

/// Horner evaluation of sum p^n a_n with p multiplying from the left.
inline Quaternion evaluate(const QSeries& f, const Quaternion& p) {
    Quaternion acc = f[f.trunc()];
    for (std::size_t n = f.trunc(); n-- > 0;) acc = f[n] + p * acc;
    return acc;
}

/// Root-test radius estimate over the top quartile of indices. Advisory only;
/// returns +inf when the tail is zero.
inline double radius_estimate(const QSeries& f) {
    const std::size_t N = f.trunc();
    if (N == 0) return std::numeric_limits<double>::infinity();
    const std::size_t start = std::max<std::size_t>(1, N - N / 4);
    double limsup = 0.0;
    for (std::size_t n = start; n <= N; ++n) {
        const double a = norm(f[n]);
        if (a > 0.0) limsup = std::max(limsup, std::pow(a, 1.0 / static_cast<double>(n)));
    }
    return limsup > 0.0 ? 1.0 / limsup : std::numeric_limits<double>::infinity();
}

inline bool inside_radius_estimate(const QSeries& f, const Quaternion& p) {
    return norm(p) < radius_estimate(f);
}

struct EvalResult {
    Quaternion value;
    bool inside_radius = true;  // advisory root-test flag, never an error
};

inline EvalResult evaluate_checked(const QSeries& f, const Quaternion& p) {
    return {evaluate(f, p), inside_radius_estimate(f, p)};
}

/// Representation-Formula extension: from the values of a holomorphic
/// f on the slice C_I, recover the slice-regular value at p = x + I_p y as
/// (f(z) + f(zbar))/2 + I_p I (f(zbar) - f(z))/2 with z = x + Iy.
/// Real p collapses the formula to f(x), independent of I.
inline Quaternion extend_from_slice(const std::function<Quaternion(std::complex<double>)>& f_on_slice,
                                    const UnitImaginary& I, const Quaternion& p) {
    const SliceDecomposition d = decompose(p);
    if (!d.axis) return f_on_slice(std::complex<double>(d.re, 0.0));
    const std::complex<double> zc(d.re, d.im_norm);
    const Quaternion fz = f_on_slice(zc);
    const Quaternion fzb = f_on_slice(std::conj(zc));
    return (fz + fzb) * 0.5 + (d.axis->axis() * I.axis()) * ((fzb - fz) * 0.5);
}

/// Truncated power series with matrix coefficients of a common shape.
class MatrixQSeries {
public:
    MatrixQSeries() : coeffs_(1) {}
    explicit MatrixQSeries(std::vector<QMatrix> coeffs) : coeffs_(std::move(coeffs)) {
        if (coeffs_.empty()) raise(Errc::ShapeMismatch, "matrix series needs a leading coefficient");
        for (const auto& c : coeffs_)
            if (c.rows() != coeffs_[0].rows() || c.cols() != coeffs_[0].cols())
                raise(Errc::ShapeMismatch, "matrix series coefficients must share a shape");
    }

    static MatrixQSeries unit(std::size_t dim, std::size_t trunc) {
        std::vector<QMatrix> c(trunc + 1, QMatrix(dim, dim));
        c[0] = QMatrix::identity(dim);
        return MatrixQSeries(std::move(c));
    }

    std::size_t trunc() const { return coeffs_.size() - 1; }
    std::size_t rows() const { return coeffs_[0].rows(); }
    std::size_t cols() const { return coeffs_[0].cols(); }

    const QMatrix& operator[](std::size_t n) const { return coeffs_[n]; }
    QMatrix& operator[](std::size_t n) { return coeffs_[n]; }

    QMatrix coeff(std::size_t n) const {
        return n < coeffs_.size() ? coeffs_[n] : QMatrix(rows(), cols());
    }

    const std::vector<QMatrix>& coeffs() const { return coeffs_; }

    double max_abs() const {
        double m = 0.0;
        for (const auto& c : coeffs_) m = std::max(m, c.max_abs());
        return m;
    }

    /// Scalar view of a 1x1 matrix series.
    QSeries as_scalar() const {
        if (rows() != 1 || cols() != 1) raise(Errc::ShapeMismatch, "not a 1x1 series");
        std::vector<Quaternion> c(coeffs_.size());
        for (std::size_t n = 0; n < coeffs_.size(); ++n) c[n] = coeffs_[n](0, 0);
        return QSeries(std::move(c));
    }

    static MatrixQSeries from_scalar(const QSeries& s) {
        std::vector<QMatrix> c(s.trunc() + 1);
        for (std::size_t n = 0; n <= s.trunc(); ++n) c[n] = QMatrix::scalar(s[n]);
        return MatrixQSeries(std::move(c));
    }

private:
    std::vector<QMatrix> coeffs_;
};

inline MatrixQSeries star_mul(const MatrixQSeries& f, const MatrixQSeries& g) {
    if (f.cols() != g.rows()) raise(Errc::ShapeMismatch, "matrix series product");
    const std::size_t trunc = std::min(f.trunc(), g.trunc());
    std::vector<QMatrix> c(trunc + 1, QMatrix(f.rows(), g.cols()));
    for (std::size_t n = 0; n <= trunc; ++n)
        for (std::size_t r = 0; r <= n; ++r) c[n] += f[r] * g[n - r];
    return MatrixQSeries(std::move(c));
}

/// Formal reciprocal in the convolution algebra: G_0 invertible, then
/// Ginv_n = -G_0^{-1} sum_{r>=1} G_r Ginv_{n-r}. Two-sided inverse modulo
/// p^(N+1); for 1x1 series it agrees with the scalar star_reciprocal.
inline MatrixQSeries star_reciprocal(const MatrixQSeries& g) {
    if (g.rows() != g.cols()) raise(Errc::ShapeMismatch, "reciprocal of non-square series");
    QMatrix g0_inv;
    try {
        g0_inv = inverse(g[0]);
    } catch (const Error& e) {
        if (e.code() == Errc::Singular) raise(Errc::NonUnit, "leading coefficient singular");
        throw;
    }
    std::vector<QMatrix> c(g.trunc() + 1, QMatrix(g.rows(), g.cols()));
    c[0] = g0_inv;
    for (std::size_t n = 1; n <= g.trunc(); ++n) {
        QMatrix acc(g.rows(), g.cols());
        for (std::size_t r = 1; r <= n; ++r) acc += g[r] * c[n - r];
        c[n] = -(g0_inv * acc);
    }
    return MatrixQSeries(std::move(c));
}

inline QMatrix evaluate(const MatrixQSeries& f, const Quaternion& p) {
    QMatrix acc = f[f.trunc()];
    for (std::size_t n = f.trunc(); n-- > 0;) acc = f[n] + acc.scaled_left(p);
    return acc;
}

inline double max_coeff_gap(const MatrixQSeries& a, const MatrixQSeries& b) {
    const std::size_t trunc = std::min(a.trunc(), b.trunc());
    double m = 0.0;
    for (std::size_t n = 0; n <= trunc; ++n) m = std::max(m, (a[n] - b[n]).max_abs());
    return m;
}

inline double max_coeff_gap(const QSeries& a, const QSeries& b) {
    const std::size_t trunc = std::min(a.trunc(), b.trunc());
    double m = 0.0;
    for (std::size_t n = 0; n <= trunc; ++n) m = std::max(m, norm(a[n] - b[n]));
    return m;
}

} // namespace qschur
