#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qschur/qlinalg.hpp"
#include "qschur/realization.hpp"
#include "qschur/series.hpp"

namespace qschur {

/// Hardy-space kernel sum p^n conj(q)^n in closed form:
/// (1 - 2Re(q) p + |q|^2 p^2)^{-1} (1 - pq). Defined off the pole sphere
/// [q^{-1}]; Hermitian in the sense conj(k(p,q)) = k(q,p).
inline Quaternion hardy_kernel(const Quaternion& p, const Quaternion& q) {
    const Quaternion den =
        Quaternion{1.0} - 2.0 * real_part(q) * p + norm_sq(q) * (p * p);
    if (norm(den) < 1e-12) raise(Errc::SpherePole, "p on the pole sphere of q");
    return inverse(den) * (Quaternion{1.0} - p * q);
}

/// Truncated de Branges-Rovnyak kernel
/// sum_{n<=N} p^n (1 - s(p) conj(s(q))) conj(q)^n.
inline Quaternion ks_kernel(const QSeries& s, const Quaternion& p, const Quaternion& q,
                            std::size_t n_trunc) {
    const Quaternion mid = Quaternion{1.0} - evaluate(s, p) * conj(evaluate(s, q));
    Quaternion acc{};
    Quaternion p_pow{1.0}, qb_pow{1.0};
    const Quaternion qb = conj(q);
    for (std::size_t n = 0; n <= n_trunc; ++n) {
        acc += p_pow * mid * qb_pow;
        p_pow = p_pow * p;
        qb_pow = qb_pow * qb;
    }
    return acc;
}

inline Quaternion ks_kernel(const QSeries& s, const Quaternion& p, const Quaternion& q) {
    return ks_kernel(s, p, q, s.trunc());
}

/// Two-line closed form printed after the multiplier theorem. It matches the
/// series only on commuting data (e.g. a common slice); for generic
/// quaternions the displayed term p s(p) q conj(s(q)) misorders the
/// noncommuting factors, so this is kept as a diagnostic, not a definition.
inline Quaternion ks_kernel_closed_form(const QSeries& s, const Quaternion& p, const Quaternion& q) {
    const Quaternion sp = evaluate(s, p);
    const Quaternion sq_bar = conj(evaluate(s, q));
    const Quaternion den =
        Quaternion{1.0} - 2.0 * real_part(q) * p + norm_sq(q) * (p * p);
    if (norm(den) < 1e-12) raise(Errc::SpherePole, "p on the pole sphere of q");
    const Quaternion rest = Quaternion{1.0} - p * q - sp * sq_bar + p * sp * q * sq_bar;
    return inverse(den) * rest;
}

/// Residual of the difference identity
/// k_s(p,q) - p k_s(p,q) conj(q) = 1 - s(p) conj(s(q)); for the truncated
/// kernel the residual is exactly the telescoped tail term.
inline double ks_difference_identity_residual(const QSeries& s, const Quaternion& p,
                                              const Quaternion& q, std::size_t n_trunc) {
    const Quaternion k = ks_kernel(s, p, q, n_trunc);
    const Quaternion lhs = k - p * k * conj(q);
    const Quaternion rhs = Quaternion{1.0} - evaluate(s, p) * conj(evaluate(s, q));
    return norm(lhs - rhs);
}

inline double ks_difference_identity_tail_bound(const QSeries& s, const Quaternion& p,
                                                const Quaternion& q, std::size_t n_trunc) {
    const double mid = norm(Quaternion{1.0} - evaluate(s, p) * conj(evaluate(s, q)));
    return 2.0 * mid * std::pow(norm(p) * norm(q), static_cast<double>(n_trunc + 1));
}

/// Lower-triangular compression of the *-multiplication operator M_s on
/// truncated coefficient space: entry (n, m) = s_{n-m}, acting by left
/// multiplication, so toeplitz(s) x = coeffs(s * x).
inline QMatrix toeplitz(const QSeries& s, std::size_t n_trunc) {
    QMatrix t(n_trunc + 1, n_trunc + 1);
    for (std::size_t n = 0; n <= n_trunc; ++n)
        for (std::size_t m = 0; m <= n; ++m) t(n, m) = s.coeff(n - m);
    return t;
}

/// Sampled/truncated Schur-multiplier evidence: the Gram of k_s at the sample
/// points must be PSD (up to the rigorous truncation-tail allowance) and the
/// Toeplitz compression must be a contraction. Necessary conditions, not a
/// proof; the certificate records the data that was checked.
struct GramCertificate {
    std::vector<Quaternion> points;
    QMatrix gram;
    std::size_t trunc = 0;
    double tol = 1e-8;
    bool psd = false;
    double gram_min_eigenvalue = 0.0;
    double psd_margin = 0.0;      // tol * ||gram|| + tail allowance
    double tail_allowance = 0.0;  // Frobenius bound on the truncation perturbation
    double toeplitz_norm = 0.0;
    bool certified = false;
};

struct SchurMultiplier {
    QSeries series;
    std::optional<GramCertificate> certificate;
};

inline GramCertificate certify_multiplier(const QSeries& s, const std::vector<Quaternion>& points,
                                          std::size_t n_trunc, double tol = 1e-8) {
    if (points.size() < 2) raise(Errc::ShapeMismatch, "need at least two sample points");
    for (const auto& q : points)
        if (norm(q) >= 1.0) raise(Errc::PointOutsideBall, "sample point outside the unit ball");

    GramCertificate cert;
    cert.points = points;
    cert.trunc = n_trunc;
    cert.tol = tol;

    const std::size_t m = points.size();
    QMatrix gram(m, m);
    double tail_sq = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j) {
            gram(i, j) = ks_kernel(s, points[i], points[j], n_trunc);
            // Entrywise tail of the dropped terms sum_{n>N} p^n (...) qbar^n.
            const double pq = norm(points[i]) * norm(points[j]);
            const double mid =
                norm(Quaternion{1.0} - evaluate(s, points[i]) * conj(evaluate(s, points[j])));
            const double entry_tail =
                mid * std::pow(pq, static_cast<double>(n_trunc + 1)) / (1.0 - pq);
            tail_sq += entry_tail * entry_tail;
        }
    // Exact symmetrization: the exact kernel is Hermitian, the truncated one
    // is Hermitian up to the tail already accounted for.
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < i; ++j) {
            const Quaternion sym = (gram(i, j) + conj(gram(j, i))) * 0.5;
            gram(i, j) = sym;
            gram(j, i) = conj(sym);
        }
    for (std::size_t i = 0; i < m; ++i) gram(i, i) = Quaternion{gram(i, i).w};

    cert.gram = gram;
    cert.tail_allowance = std::sqrt(tail_sq);
    cert.gram_min_eigenvalue = min_eigenvalue_h(gram);
    cert.psd_margin = tol * operator_norm(gram) + cert.tail_allowance;
    cert.psd = cert.gram_min_eigenvalue >= -cert.psd_margin;

    cert.toeplitz_norm = operator_norm(toeplitz(s, n_trunc));
    cert.certified = cert.psd && cert.toeplitz_norm <= 1.0 + tol;
    return cert;
}

/// Schur transform s^(1) = (1 - s * conj(s_0))^{-*} * sigma_1 with
/// s(p) - s(0) = p sigma_1(p); one truncation degree is consumed per step.
inline QSeries schur_transform(const QSeries& s) {
    const Quaternion s0 = s[0];
    if (norm(s0) >= 1.0 - 1e-12) raise(Errc::UnimodularStop, "|s(0)| at the unit sphere");
    if (s.trunc() < 1) raise(Errc::DegreeExhausted, "no degree left to deflate");

    std::vector<Quaternion> sigma(s.trunc());
    for (std::size_t n = 0; n < sigma.size(); ++n) sigma[n] = s[n + 1];

    std::vector<Quaternion> den(s.trunc() + 1);
    const Quaternion s0_bar = conj(s0);
    for (std::size_t n = 0; n <= s.trunc(); ++n)
        den[n] = (n == 0 ? Quaternion{1.0} : Quaternion{}) - s[n] * s0_bar;

    return star_mul(star_reciprocal(QSeries(std::move(den))), QSeries(std::move(sigma)));
}

struct SchurSequence {
    enum class Stop { KmaxReached, Unimodular, Exhausted };
    std::vector<Quaternion> coefficients;  // rho_n = s^(n)(0)
    Stop reason = Stop::KmaxReached;
};

inline const char* stop_name(SchurSequence::Stop s) {
    switch (s) {
        case SchurSequence::Stop::KmaxReached: return "kmax-reached";
        case SchurSequence::Stop::Unimodular:  return "unimodular";
        case SchurSequence::Stop::Exhausted:   return "truncation-exhausted";
    }
    return "unknown";
}

/// The Schur algorithm: iterate the transform, reading rho_n = s^(n)(0).
/// Stops at kmax, at a unimodular coefficient (Blaschke-type termination), or
/// when the truncation budget is exhausted rather than extrapolating.
inline SchurSequence schur_algorithm(const QSeries& s, std::size_t kmax) {
    SchurSequence seq;
    QSeries cur = s;
    for (std::size_t k = 0; k < kmax; ++k) {
        seq.coefficients.push_back(cur[0]);
        if (norm(cur[0]) >= 1.0 - 1e-12) {
            seq.reason = SchurSequence::Stop::Unimodular;
            return seq;
        }
        if (cur.trunc() < 1) {
            seq.reason = SchurSequence::Stop::Exhausted;
            return seq;
        }
        cur = schur_transform(cur);
    }
    seq.reason = SchurSequence::Stop::KmaxReached;
    return seq;
}

/// Elementary Blaschke factor s_a = (p - a) * (1 - p conj(a))^{-*} together
/// with its unitary 1-state realization [[conj(a), t],[t, -a]], t = sqrt(1-|a|^2).
struct BlaschkeFactor {
    SchurMultiplier multiplier;
    Realization realization;
};

inline BlaschkeFactor blaschke(const Quaternion& a, std::size_t n_trunc = 32) {
    if (norm(a) >= 1.0) raise(Errc::NotInBall, "Blaschke parameter outside the unit ball");
    const double t = std::sqrt(1.0 - norm_sq(a));

    QSeries p_minus_a = QSeries::zero(n_trunc);
    p_minus_a[0] = -a;
    p_minus_a[1] = Quaternion{1.0};
    QSeries one_minus_pa = QSeries::zero(n_trunc);
    one_minus_pa[0] = Quaternion{1.0};
    one_minus_pa[1] = -conj(a);

    BlaschkeFactor f;
    f.multiplier.series = rational_quotient(p_minus_a, one_minus_pa);
    f.realization = Realization(QMatrix::scalar(conj(a)), QMatrix::scalar(Quaternion{t}),
                                QMatrix::scalar(Quaternion{t}), QMatrix::scalar(-a));
    return f;
}

/// Backward-shift realization on the truncated coefficient space: A drops the
/// leading coefficient, B carries the shifted multiplier coefficients, C reads
/// coefficient zero, D = s_0. The identity s_n = C A^{n-1} B 1 is exact
/// coefficient bookkeeping for 1 <= n <= N.
struct ShiftRealization {
    Realization realization;
    std::size_t trunc = 0;
};

inline ShiftRealization shift_realization(const QSeries& s) {
    const std::size_t n = s.trunc() + 1;  // state dimension
    QMatrix a(n, n);
    for (std::size_t i = 0; i + 1 < n; ++i) a(i, i + 1) = Quaternion{1.0};
    QMatrix b(n, 1);
    for (std::size_t i = 0; i + 1 < n; ++i) b(i, 0) = s[i + 1];
    QMatrix c(1, n);
    c(0, 0) = Quaternion{1.0};
    return ShiftRealization{Realization(a, b, c, QMatrix::scalar(s[0])), s.trunc()};
}

/// Outcome of the coisometric-realization kernel checks at sampled points.
struct CoisometryCheck {
    std::size_t trunc = 0;
    double coisometry_defect = 0.0;
    double max_eq75_residual = 0.0;      // 1 - s(p)conj(s(q)) vs U(p)U(q)* - p U(p)U(q)* conj(q)
    double eq75_bound = 0.0;
    double max_kernel_gap = 0.0;         // truncated k_s vs U(p)U(q)*
    double kernel_bound = 0.0;
    double diagonal_display_gap = 0.0;   // gap to the diagonal-sum display (reported, not gated)
    bool pass = false;
};

/// U(p) = sum_{n<=N} p^n C A^n, the row function whose Gram realizes k_s.
inline QMatrix u_function(const Realization& r, const Quaternion& p, std::size_t n_trunc) {
    QMatrix acc(r.out_dim(), r.state_dim());
    QMatrix row = r.C;
    Quaternion p_pow{1.0};
    for (std::size_t n = 0; n <= n_trunc; ++n) {
        acc += row.scaled_left(p_pow);
        row = row * r.A;
        p_pow = p_pow * p;
    }
    return acc;
}

/// Verifies, for a coisometric scalar realization, the kernel identity
/// 1 - s(p)conj(s(q)) = U(p)U(q)* - p U(p)U(q)* conj(q) and the induced-kernel
/// equality k_s = U(p)U(q)* at every sampled pair. The diagonal-sum display
/// sum p^n C A^n A*^n C* qbar^n is reported as a gap only: its cross terms do
/// not vanish for generic data.
inline CoisometryCheck coisometry_kernel_check(const Realization& r,
                                               const std::vector<Quaternion>& points,
                                               std::size_t n_trunc) {
    if (r.in_dim() != 1 || r.out_dim() != 1)
        raise(Errc::ShapeMismatch, "kernel check is for scalar multipliers");
    CoisometryCheck chk;
    chk.trunc = n_trunc;
    chk.coisometry_defect = r.coisometry_defect();
    if (chk.coisometry_defect > 1e-10)
        raise(Errc::NotCoisometric, "block matrix is not a coisometry");

    const QSeries s = transfer_series(r, n_trunc).as_scalar();
    const double a_norm = operator_norm(r.A);
    const double c_norm = operator_norm(r.C);

    for (const auto& p : points) {
        for (const auto& q : points) {
            const QMatrix up = u_function(r, p, n_trunc);
            const QMatrix uq = u_function(r, q, n_trunc);
            const Quaternion uu = (up * uq.adjoint())(0, 0);

            const Quaternion lhs = Quaternion{1.0} - evaluate(s, p) * conj(evaluate(s, q));
            const Quaternion rhs = uu - p * uu * conj(q);
            chk.max_eq75_residual = std::max(chk.max_eq75_residual, norm(lhs - rhs));

            const Quaternion ks = ks_kernel(s, p, q, n_trunc);
            chk.max_kernel_gap = std::max(chk.max_kernel_gap, norm(ks - uu));

            Quaternion diag{};
            QMatrix ca = r.C;
            Quaternion p_pow{1.0}, qb_pow{1.0};
            for (std::size_t n = 0; n <= n_trunc; ++n) {
                diag += p_pow * (ca * ca.adjoint())(0, 0) * qb_pow;
                ca = ca * r.A;
                p_pow = p_pow * p;
                qb_pow = qb_pow * conj(q);
            }
            chk.diagonal_display_gap = std::max(chk.diagonal_display_gap, norm(ks - diag));

            // Tails of the two truncated geometric factors; ||A|| <= 1 for a
            // coisometry, so U's tail is governed by |p| ||A||.
            const double tp = norm(p) * std::max(a_norm, 1e-12);
            const double tq = norm(q) * std::max(a_norm, 1e-12);
            const double u_tail = c_norm * (std::pow(tp, static_cast<double>(n_trunc + 1)) / (1.0 - tp) +
                                            std::pow(tq, static_cast<double>(n_trunc + 1)) / (1.0 - tq));
            const double u_mag = c_norm / (1.0 - std::min(std::max(tp, tq), 0.999));
            const double pair_bound = 4.0 * u_tail * u_mag + 1e-12;
            chk.eq75_bound = std::max(chk.eq75_bound, pair_bound);
            const double pq = norm(p) * norm(q);
            chk.kernel_bound = std::max(
                chk.kernel_bound,
                pair_bound + 2.0 * std::pow(pq, static_cast<double>(n_trunc + 1)) / (1.0 - pq));
        }
    }
    chk.pass = chk.max_eq75_residual <= chk.eq75_bound && chk.max_kernel_gap <= chk.kernel_bound;
    return chk;
}

} // namespace qschur
