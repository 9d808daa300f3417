#pragma once

#include "qschur/qlinalg.hpp"
#include "qschur/qmatrix.hpp"
#include "qschur/quaternion.hpp"

namespace qschur {

enum class Side { Left, Right };

/// A^2 - 2 Re(r) A + |r|^2 I, the pencil whose invertibility defines the
/// S-resolvent set. Real scalar coefficients only, so it commutes with A.
inline QMatrix spectral_pencil(const QMatrix& a, const Quaternion& r) {
    if (a.rows() != a.cols()) raise(Errc::ShapeMismatch, "pencil of non-square matrix");
    return a * a - 2.0 * real_part(r) * a + norm_sq(r) * QMatrix::identity(a.rows());
}

/// One probe of the S-spectrum test at a point.
struct SpectralProbe {
    QMatrix matrix;
    Quaternion point;
    QMatrix pencil;
    double min_singular = 0.0;
    double max_singular = 0.0;
    double input_scale = 0.0;  // magnitude of the terms the pencil is built from
};

inline SpectralProbe probe_spectrum(const QMatrix& a, const Quaternion& r) {
    SpectralProbe p;
    p.matrix = a;
    p.point = r;
    p.pencil = spectral_pencil(a, r);
    const auto [mx, mn] = singular_extremes(p.pencil);
    p.max_singular = mx;
    p.min_singular = mn;
    const double m = std::max(operator_norm(a), norm(r));
    p.input_scale = m * m;
    return p;
}

/// Thresholded membership test; the S-spectrum is axially symmetric, so a hit
/// at r is a hit for the whole sphere [r]. The threshold is scaled by the
/// pencil's input magnitude: when the pencil cancels to zero entirely (whole
/// spheres of spectrum), its own sigma_max is rounding noise.
inline bool in_s_spectrum(const QMatrix& a, const Quaternion& r, double tol = 1e-10) {
    const SpectralProbe p = probe_spectrum(a, r);
    return p.min_singular <= tol * std::max(p.max_singular, p.input_scale);
}

/// S_L^{-1}(r,A) = -(A^2-2Re(r)A+|r|^2 I)^{-1}(A - conj(r) I) and its right
/// mirror. For real r both collapse to the classical resolvent (rI-A)^{-1}.
inline QMatrix s_resolvent(Side side, const Quaternion& r, const QMatrix& a) {
    const QMatrix pencil = spectral_pencil(a, r);
    QMatrix pencil_inv;
    try {
        pencil_inv = inverse(pencil);
    } catch (const Error& e) {
        if (e.code() == Errc::Singular) raise(Errc::SpectrumHit, "r lies in the S-spectrum");
        throw;
    }
    const QMatrix shifted = a - QMatrix::identity(a.rows()).scaled_left(conj(r));
    return side == Side::Left ? -(pencil_inv * shifted) : -(shifted * pencil_inv);
}

/// Residual of the left S-resolvent equation S r - A S = I.
inline double left_resolvent_equation_residual(const QMatrix& a, const Quaternion& r) {
    const QMatrix s = s_resolvent(Side::Left, r, a);
    return operator_norm(s.scaled_right(r) - a * s - QMatrix::identity(a.rows()));
}

/// Residual of the right S-resolvent equation r S - S A = I.
inline double right_resolvent_equation_residual(const QMatrix& a, const Quaternion& r) {
    const QMatrix s = s_resolvent(Side::Right, r, a);
    return operator_norm(s.scaled_left(r) - s * a - QMatrix::identity(a.rows()));
}

struct NeumannReport {
    QMatrix sum;
    QMatrix closed;
    double gap = 0.0;
    double tail_bound = 0.0;
    double contraction = 0.0;  // |p| * ||A||
};

/// Compares sum_{n<=N} p^n A^n against the closed form
/// (I - conj(p) A)(|p|^2 A^2 - 2 Re(p) A + I)^{-1}. The bound carries the
/// slack factor 2 on the geometric tail to absorb rounding.
inline NeumannReport neumann_vs_closed(const Quaternion& p, const QMatrix& a, std::size_t n_terms) {
    NeumannReport rep;
    const double t = norm(p) * operator_norm(a);
    rep.contraction = t;
    if (t >= 1.0) raise(Errc::DivergenceRegion, "|p| * ||A|| >= 1");

    const std::size_t n = a.rows();
    QMatrix sum(n, n);
    QMatrix a_pow = QMatrix::identity(n);
    Quaternion p_pow{1.0};
    for (std::size_t m = 0; m <= n_terms; ++m) {
        sum += a_pow.scaled_left(p_pow);
        a_pow = a_pow * a;
        p_pow = p_pow * p;
    }
    rep.sum = sum;

    const QMatrix pencil =
        norm_sq(p) * (a * a) - 2.0 * real_part(p) * a + QMatrix::identity(n);
    rep.closed = (QMatrix::identity(n) - a.scaled_left(conj(p))) * inverse(pencil);
    rep.gap = operator_norm(rep.sum - rep.closed);
    // Geometric tail with slack factor 2, plus a machine floor: once the tail
    // drops below round-off the observed gap is summation noise, not tail.
    const double rounding =
        1e-14 * static_cast<double>(n_terms + n) * std::max(1.0, operator_norm(rep.closed));
    rep.tail_bound = 2.0 * std::pow(t, static_cast<double>(n_terms + 1)) / (1.0 - t) + rounding;
    return rep;
}

} // namespace qschur
