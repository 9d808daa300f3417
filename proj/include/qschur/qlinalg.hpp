#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "qschur/qmatrix.hpp"

namespace qschur {

using ComplexMatrix = Eigen::MatrixXcd;

/// chi-embedding: each entry p = z1 + z2*j becomes the 2x2 block
/// [[z1, z2], [-conj(z2), conj(z1)]]. chi is a *-homomorphism, so inversion,
/// singular values, ranks and Hermitian spectra over H reduce to complex ones.
inline ComplexMatrix complex_adjoint(const QMatrix& m) {
    ComplexMatrix x(2 * m.rows(), 2 * m.cols());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const Quaternion& p = m(i, j);
            const std::complex<double> z1(p.w, p.x), z2(p.y, p.z);
            x(2 * i, 2 * j) = z1;
            x(2 * i, 2 * j + 1) = z2;
            x(2 * i + 1, 2 * j) = -std::conj(z2);
            x(2 * i + 1, 2 * j + 1) = std::conj(z1);
        }
    return x;
}

/// Inverse of the embedding. Blocks are averaged with their mirror entries,
/// which projects small symmetry-breaking rounding back onto the chi image.
inline QMatrix from_complex_adjoint(const ComplexMatrix& x) {
    QMatrix m(static_cast<std::size_t>(x.rows()) / 2, static_cast<std::size_t>(x.cols()) / 2);
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j) {
            const auto z1 = 0.5 * (x(2 * i, 2 * j) + std::conj(x(2 * i + 1, 2 * j + 1)));
            const auto z2 = 0.5 * (x(2 * i, 2 * j + 1) - std::conj(x(2 * i + 1, 2 * j)));
            m(i, j) = Quaternion{z1.real(), z1.imag(), z2.real(), z2.imag()};
        }
    return m;
}

/// Singular values of chi(M) come in pairs; every other one is returned.
inline std::vector<double> singular_values_h(const QMatrix& m) {
    if (m.empty()) return {};
    Eigen::JacobiSVD<ComplexMatrix> svd(complex_adjoint(m));
    const auto& sv = svd.singularValues();
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(sv.size()) / 2);
    for (Eigen::Index k = 0; k < sv.size(); k += 2) out.push_back(sv(k));
    return out;
}

inline double operator_norm(const QMatrix& m) {
    if (m.empty()) return 0.0;
    Eigen::JacobiSVD<ComplexMatrix> svd(complex_adjoint(m));
    return svd.singularValues()(0);
}

/// Largest and smallest singular value in one decomposition.
inline std::pair<double, double> singular_extremes(const QMatrix& m) {
    if (m.empty()) return {0.0, 0.0};
    Eigen::JacobiSVD<ComplexMatrix> svd(complex_adjoint(m));
    const auto& sv = svd.singularValues();
    return {sv(0), sv(sv.size() - 1)};
}

/// Inverse over H via the embedding. Scale-invariant gate: the matrix is
/// declared singular when sigma_min <= tol * sigma_max.
inline QMatrix inverse(const QMatrix& m, double tol = 1e-12) {
    if (m.rows() != m.cols()) raise(Errc::ShapeMismatch, "inverse of non-square matrix");
    if (m.empty()) return m;
    const ComplexMatrix x = complex_adjoint(m);
    Eigen::JacobiSVD<ComplexMatrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= tol * sv(0)) raise(Errc::Singular, "singular-value gate failed");
    Eigen::VectorXcd inv_sv = sv.cast<std::complex<double>>().cwiseInverse();
    return from_complex_adjoint(svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().adjoint());
}

/// Moore-Penrose pseudo-inverse over H. pinv commutes with the symmetry that
/// defines the chi image, so the complex pinv maps back to a quaternion matrix.
inline QMatrix pinv(const QMatrix& m, double tol = 1e-12) {
    if (m.empty()) return QMatrix(m.cols(), m.rows());
    Eigen::JacobiSVD<ComplexMatrix> svd(complex_adjoint(m), Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    const double cut = tol * sv(0);
    Eigen::VectorXcd inv_sv(sv.size());
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        inv_sv(k) = sv(k) > cut ? 1.0 / sv(k) : 0.0;
    return from_complex_adjoint(svd.matrixV() * inv_sv.asDiagonal() * svd.matrixU().adjoint());
}

/// PSD test for a Hermitian G: all eigenvalues of chi(G) must exceed
/// -tol * ||chi(G)||.
inline bool herm_psd(const QMatrix& g, double tol = 1e-8) {
    if (g.rows() != g.cols()) raise(Errc::ShapeMismatch, "herm_psd of non-square matrix");
    if (!g.is_hermitian()) raise(Errc::NotHermitian, "herm_psd requires G = G*");
    if (g.empty()) return true;
    ComplexMatrix x = complex_adjoint(g);
    x = 0.5 * (x + ComplexMatrix(x.adjoint()));
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(x, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    const double scale = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
    return ev(0) >= -tol * scale;
}

inline double min_eigenvalue_h(const QMatrix& g) {
    if (g.empty()) return 0.0;
    ComplexMatrix x = complex_adjoint(g);
    x = 0.5 * (x + ComplexMatrix(x.adjoint()));
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(x, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

/// Right-H-rank: complex rank of chi(M) halved. A threshold falling inside a
/// chi singular-value pair signals an inconsistent rank decision.
inline std::size_t rank_h(const QMatrix& m, double tol = 1e-10) {
    if (m.empty()) return 0;
    Eigen::JacobiSVD<ComplexMatrix> svd(complex_adjoint(m));
    const auto& sv = svd.singularValues();
    if (sv(0) == 0.0) return 0;
    const double cut = tol * sv(0);
    std::size_t count = 0;
    for (Eigen::Index k = 0; k < sv.size(); ++k)
        if (sv(k) > cut) ++count;
    if (count % 2 != 0) raise(Errc::OddComplexRank, "threshold splits a chi singular-value pair");
    return count / 2;
}

/// H-valued inner product of columns, right-linear in the first argument:
/// <u q, v> = <u, v> q.
inline Quaternion column_dot(const std::vector<Quaternion>& u, const std::vector<Quaternion>& v) {
    Quaternion acc{};
    for (std::size_t i = 0; i < u.size(); ++i) acc += conj(v[i]) * u[i];
    return acc;
}

/// Pivoted Gram-Schmidt over H: an orthonormal basis (as matrix columns) of
/// the right-linear column span of M. `rank` columns are extracted; callers
/// decide the rank (typically via rank_h).
inline QMatrix orthonormal_columns(const QMatrix& m, std::size_t rank) {
    const std::size_t rows = m.rows(), cols = m.cols();
    std::vector<std::vector<Quaternion>> work(cols, std::vector<Quaternion>(rows));
    for (std::size_t j = 0; j < cols; ++j)
        for (std::size_t i = 0; i < rows; ++i) work[j][i] = m(i, j);

    std::vector<std::vector<Quaternion>> basis;
    auto col_norm = [](const std::vector<Quaternion>& v) {
        double s = 0.0;
        for (const auto& q : v) s += norm_sq(q);
        return std::sqrt(s);
    };
    auto deflate = [&](std::vector<Quaternion>& v, const std::vector<Quaternion>& e) {
        const Quaternion c = column_dot(v, e);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= e[i] * c;
    };

    for (std::size_t r = 0; r < rank; ++r) {
        std::size_t piv = 0;
        double best = -1.0;
        for (std::size_t j = 0; j < cols; ++j) {
            const double n = col_norm(work[j]);
            if (n > best) { best = n; piv = j; }
        }
        if (best <= 0.0) raise(Errc::RankDeficientData, "column span smaller than requested rank");
        std::vector<Quaternion> v = work[piv];
        for (const auto& e : basis) deflate(v, e);  // second pass for stability
        const double n = col_norm(v);
        if (n <= 0.0) raise(Errc::RankDeficientData, "column span smaller than requested rank");
        for (auto& q : v) q = q / n;
        for (auto& col : work) deflate(col, v);
        basis.push_back(std::move(v));
    }

    QMatrix q(rows, rank);
    for (std::size_t j = 0; j < rank; ++j)
        for (std::size_t i = 0; i < rows; ++i) q(i, j) = basis[j][i];
    return q;
}

} // namespace qschur
