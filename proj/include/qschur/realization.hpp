#pragma once

#include <optional>
#include <vector>

#include "qschur/qlinalg.hpp"
#include "qschur/qmatrix.hpp"
#include "qschur/series.hpp"

namespace qschur {

/// State-space quadruple (A,B,C,D) over H realizing the transfer function
/// D + p C * (I - pA)^{-*} B. A zero state dimension is legal and encodes the
/// constant function D.
struct Realization {
    QMatrix A;  // n x n
    QMatrix B;  // n x m
    QMatrix C;  // k x n
    QMatrix D;  // k x m

    Realization() = default;
    Realization(QMatrix a, QMatrix b, QMatrix c, QMatrix d)
        : A(std::move(a)), B(std::move(b)), C(std::move(c)), D(std::move(d)) {
        if (A.rows() != A.cols() || B.rows() != A.rows() || C.cols() != A.rows() ||
            D.rows() != C.rows() || D.cols() != B.cols())
            raise(Errc::ShapeMismatch, "realization blocks do not compose");
    }

    std::size_t state_dim() const { return A.rows(); }
    std::size_t in_dim() const { return B.cols(); }
    std::size_t out_dim() const { return C.rows(); }

    /// [[A,B],[C,D]] as one (n+k) x (n+m) matrix.
    QMatrix block_matrix() const {
        QMatrix m(state_dim() + out_dim(), state_dim() + in_dim());
        m.set_block(0, 0, A);
        m.set_block(0, state_dim(), B);
        m.set_block(state_dim(), 0, C);
        m.set_block(state_dim(), state_dim(), D);
        return m;
    }

    double coisometry_defect() const {
        const QMatrix m = block_matrix();
        return operator_norm(m * m.adjoint() - QMatrix::identity(m.rows()));
    }

    bool is_coisometric(double tol = 1e-10) const { return coisometry_defect() <= tol; }
};

/// Markov parameters f_0 = D, f_n = C A^{n-1} B. The product chain is
/// C (A (A ... (A B))), matching the state recursion of a simulation step by
/// step so that impulse responses agree bit for bit.
inline QMatrix markov(const Realization& r, std::size_t n) {
    if (n == 0) return r.D;
    QMatrix v = r.B;
    for (std::size_t m = 1; m < n; ++m) v = r.A * v;
    return r.C * v;
}

/// Coefficients of the transfer function through degree N.
inline MatrixQSeries transfer_series(const Realization& r, std::size_t n_trunc) {
    std::vector<QMatrix> c;
    c.reserve(n_trunc + 1);
    c.push_back(r.D);
    QMatrix v = r.B;
    for (std::size_t n = 1; n <= n_trunc; ++n) {
        c.push_back(r.C * v);
        v = r.A * v;
    }
    return MatrixQSeries(std::move(c));
}

/// Star-free closed form D + (pC - |p|^2 CA)(|p|^2 A^2 - 2Re(p) A + I)^{-1} B,
/// valid inside |p| ||A|| < 1.
inline QMatrix transfer_eval_closed(const Realization& r, const Quaternion& p) {
    const std::size_t n = r.state_dim();
    if (n == 0) return r.D;
    const QMatrix pencil =
        norm_sq(p) * (r.A * r.A) - 2.0 * real_part(p) * r.A + QMatrix::identity(n);
    const QMatrix lead = r.C.scaled_left(p) - norm_sq(p) * (r.C * r.A);
    return r.D + lead * inverse(pencil) * r.B;
}

/// Realization of the *-product f1 * f2 (cascade blocks).
inline Realization product(const Realization& r1, const Realization& r2) {
    if (r1.in_dim() != r2.out_dim()) raise(Errc::ShapeMismatch, "product inner dimensions");
    const std::size_t n1 = r1.state_dim(), n2 = r2.state_dim();
    QMatrix a(n1 + n2, n1 + n2);
    a.set_block(0, 0, r1.A);
    a.set_block(0, n1, r1.B * r2.C);
    a.set_block(n1, n1, r2.A);
    const QMatrix b = vstack(r1.B * r2.D, r2.B);
    const QMatrix c = hstack(r1.C, r1.D * r2.C);
    return Realization(a, b, c, r1.D * r2.D);
}

/// Realization of the row concatenation (f1 f2).
inline Realization concat(const Realization& r1, const Realization& r2) {
    if (r1.out_dim() != r2.out_dim()) raise(Errc::ShapeMismatch, "concat output dimensions");
    const std::size_t n1 = r1.state_dim(), n2 = r2.state_dim();
    QMatrix a(n1 + n2, n1 + n2);
    a.set_block(0, 0, r1.A);
    a.set_block(n1, n1, r2.A);
    QMatrix b(n1 + n2, r1.in_dim() + r2.in_dim());
    b.set_block(0, 0, r1.B);
    b.set_block(n1, r1.in_dim(), r2.B);
    const QMatrix c = hstack(r1.C, r2.C);
    return Realization(a, b, c, hstack(r1.D, r2.D));
}

/// Realization of the *-inverse: state matrix A - B D^{-1} C, with D^{-1}
/// wrapped around both C and B so that the series convolves to the unit.
inline Realization inverse(const Realization& r) {
    if (r.D.rows() != r.D.cols()) raise(Errc::NonInvertibleD, "D must be square");
    QMatrix d_inv;
    try {
        d_inv = inverse(r.D);
    } catch (const Error& e) {
        if (e.code() == Errc::Singular) raise(Errc::NonInvertibleD, "D is singular");
        throw;
    }
    return Realization(r.A - r.B * d_inv * r.C, r.B * d_inv, -(d_inv * r.C), d_inv);
}

/// Companion realization of the polynomial sum p^j M_j: block upshift state
/// matrix, last-column B, C = (M_J ... M_1), D = M_0 (degree zero gives the
/// empty state).
inline Realization companion(const std::vector<QMatrix>& m_coeffs) {
    if (m_coeffs.empty()) raise(Errc::ShapeMismatch, "empty coefficient list");
    const std::size_t deg = m_coeffs.size() - 1;
    const std::size_t rows = m_coeffs[0].rows(), cols = m_coeffs[0].cols();
    QMatrix a(deg * cols, deg * cols);
    for (std::size_t jblk = 0; jblk + 1 < deg; ++jblk)
        a.set_block(jblk * cols, (jblk + 1) * cols, QMatrix::identity(cols));
    QMatrix b(deg * cols, cols);
    if (deg > 0) b.set_block((deg - 1) * cols, 0, QMatrix::identity(cols));
    QMatrix c(rows, deg * cols);
    for (std::size_t jblk = 0; jblk < deg; ++jblk) c.set_block(0, jblk * cols, m_coeffs[deg - jblk]);
    return Realization(a, b, c, m_coeffs[0]);
}

/// T x T block Hankel of the coefficients, block (i,j) = f_{i+j+offset}.
inline QMatrix block_hankel(const std::vector<QMatrix>& f, std::size_t t, std::size_t offset) {
    const std::size_t k = f[0].rows(), m = f[0].cols();
    QMatrix h(t * k, t * m);
    for (std::size_t i = 0; i < t; ++i)
        for (std::size_t j = 0; j < t; ++j) h.set_block(i * k, j * m, f[i + j + offset]);
    return h;
}

/// Quaternionic Ho-Kalman. Factors the block Hankel H = [f_{i+j+1}] through
/// an orthonormal column basis over H; the shifted Hankel then yields the
/// state matrix. State dimension equals the right-H-rank of H. Raises
/// RankDeficientData when the factorization cannot reproduce the data.
inline Realization minimal_realization(const std::vector<QMatrix>& f, double tol = 1e-10) {
    if (f.size() < 3) raise(Errc::ShapeMismatch, "need at least f_0, f_1, f_2");
    const std::size_t k = f[0].rows(), m = f[0].cols();
    const std::size_t t = (f.size() - 1) / 2;  // uses f_1 .. f_{2t}

    const QMatrix h = block_hankel(f, t, 1);
    const QMatrix h_shift = block_hankel(f, t, 2);
    const std::size_t rank = rank_h(h, tol);

    if (rank == 0)  // zero Hankel: the function is the constant f_0
        return Realization(QMatrix(0, 0), QMatrix(0, m), QMatrix(k, 0), f[0]);

    const QMatrix obs = orthonormal_columns(h, rank);        // (t*k) x rank
    const QMatrix ctrl = obs.adjoint() * h;                  // rank x (t*m)
    const QMatrix a = obs.adjoint() * h_shift * pinv(ctrl);  // rank x rank
    const QMatrix b = ctrl.block(0, 0, rank, m);
    const QMatrix c = obs.block(0, 0, k, rank);
    Realization result(a, b, c, f[0]);

    double err = 0.0;
    const double scale = std::max(1.0, h.max_abs());
    for (std::size_t n = 0; n < f.size(); ++n)
        err = std::max(err, (markov(result, n) - f[n]).max_abs());
    if (err > 1e-8 * scale)
        raise(Errc::RankDeficientData, "shifted-Hankel factorization inconsistent");
    return result;
}

/// P * Q^{-*}; left quotient of polynomial data, Q(0) != 0.
inline QSeries rational_quotient(const QSeries& p, const QSeries& q) {
    return star_mul(p, star_reciprocal(q));
}

/// Stacked observability matrix [C; CA; ...; CA^{T-1}].
inline QMatrix observability(const Realization& r, std::size_t t) {
    QMatrix o(t * r.out_dim(), r.state_dim());
    QMatrix row = r.C;
    for (std::size_t i = 0; i < t; ++i) {
        o.set_block(i * r.out_dim(), 0, row);
        row = row * r.A;
    }
    return o;
}

/// Unitary state-space intertwiner between two closely outer connected
/// realizations of the same function: U A1 = A2 U, C1 = C2 U, U B1 = B2.
/// Returns nothing when the Markov parameters disagree.
inline std::optional<QMatrix> unitary_equivalence(const Realization& r1, const Realization& r2,
                                                  std::size_t t, double tol = 1e-8) {
    if (r1.state_dim() != r2.state_dim() || r1.in_dim() != r2.in_dim() ||
        r1.out_dim() != r2.out_dim())
        raise(Errc::ShapeMismatch, "realizations of different sizes");
    const std::size_t n = r1.state_dim();

    double scale = 1.0;
    for (std::size_t m = 0; m <= 2 * t; ++m)
        scale = std::max({scale, markov(r1, m).max_abs(), markov(r2, m).max_abs()});
    for (std::size_t m = 0; m <= 2 * t; ++m)
        if ((markov(r1, m) - markov(r2, m)).max_abs() > tol * scale) return std::nullopt;

    const QMatrix o1 = observability(r1, t);
    const QMatrix o2 = observability(r2, t);
    if (rank_h(o1) < n || rank_h(o2) < n)
        raise(Errc::NotOuterConnected, "observability matrix rank deficient");

    // The pairing ((A1*)^m C1* u, (A2*)^m C2* u) is the graph of U, i.e.
    // U O1* = O2*, solved in least squares through the embedding.
    const QMatrix u = (pinv(o1) * o2).adjoint();

    const QMatrix id = QMatrix::identity(n);
    const double residual =
        std::max({operator_norm(u * r1.A - r2.A * u), operator_norm(r1.C - r2.C * u),
                  operator_norm(u * r1.B - r2.B), operator_norm(u * u.adjoint() - id),
                  operator_norm(u.adjoint() * u - id)});
    if (residual > tol * scale) return std::nullopt;
    return u;
}

} // namespace qschur
