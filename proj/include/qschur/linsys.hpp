#pragma once

#include <type_traits>
#include <vector>

#include "qschur/qlinalg.hpp"
#include "qschur/realization.hpp"
#include "qschur/series.hpp"

namespace qschur {

/// Trajectory of the right-acting state recursion
/// x_{n+1} = A x_n + B u_n, y_n = C x_n + D u_n. The input columns are run in
/// parallel, so u_n may be a matrix (u_0 = I gives the impulse response).
struct SystemTrace {
    std::vector<QMatrix> inputs;
    std::vector<QMatrix> states;
    std::vector<QMatrix> outputs;
    std::size_t horizon = 0;
};

inline SystemTrace simulate(const Realization& r, const std::vector<QMatrix>& u, std::size_t horizon,
                            const QMatrix* x0 = nullptr) {
    const std::size_t in_cols = u.empty() ? 1 : u[0].cols();
    for (const auto& un : u)
        if (un.rows() != r.in_dim() || un.cols() != in_cols)
            raise(Errc::ShapeMismatch, "input shape");
    QMatrix x = x0 ? *x0 : QMatrix(r.state_dim(), in_cols);
    if (x.rows() != r.state_dim() || x.cols() != in_cols) raise(Errc::ShapeMismatch, "x0 shape");

    SystemTrace trace;
    trace.horizon = horizon;
    for (std::size_t n = 0; n < horizon; ++n) {
        const QMatrix un = n < u.size() ? u[n] : QMatrix(r.in_dim(), in_cols);
        trace.inputs.push_back(un);
        trace.states.push_back(x);
        trace.outputs.push_back(r.C * x + r.D * un);
        x = r.A * x + r.B * un;
    }
    return trace;
}

/// Inputs of the impulse experiment: u_0 = I, all later inputs zero.
inline std::vector<QMatrix> impulse_inputs(std::size_t in_dim) {
    return {QMatrix::identity(in_dim)};
}

/// Z-transform: the formal series sum p^n u_n. Coefficients are copied, so
/// right-linearity and the shift rule hold exactly.
inline MatrixQSeries z_transform(const std::vector<QMatrix>& seq, std::size_t n_trunc) {
    if (seq.empty()) raise(Errc::ShapeMismatch, "empty sequence");
    std::vector<QMatrix> c(n_trunc + 1, QMatrix(seq[0].rows(), seq[0].cols()));
    for (std::size_t n = 0; n <= n_trunc && n < seq.size(); ++n) c[n] = seq[n];
    return MatrixQSeries(std::move(c));
}

inline QSeries z_transform(const std::vector<Quaternion>& seq, std::size_t n_trunc) {
    std::vector<Quaternion> c(n_trunc + 1);
    for (std::size_t n = 0; n <= n_trunc && n < seq.size(); ++n) c[n] = seq[n];
    return QSeries(std::move(c));
}

/// tau_{-1}: drop the leading element; defined only when u_0 = 0, in which
/// case Z(tau_{-1} U) = p^{-1} Z(U).
template <typename Seq>
inline Seq z_shift(const Seq& seq) {
    if (seq.empty()) raise(Errc::ShapeMismatch, "empty sequence");
    bool zero_head;
    if constexpr (std::is_same_v<typename Seq::value_type, Quaternion>)
        zero_head = norm(seq[0]) == 0.0;
    else
        zero_head = seq[0].max_abs() == 0.0;
    if (!zero_head) raise(Errc::ShiftWithoutZero, "shift rule needs u_0 = 0");
    return Seq(seq.begin() + 1, seq.end());
}

/// Evidence that the *-quotient Y * U^{-*} is input-independent while the
/// pointwise quotient U(p)^{-1} Y(p) is not.
struct TransferConsistencyReport {
    MatrixQSeries star_quotient1;
    MatrixQSeries star_quotient2;
    MatrixQSeries transfer;
    std::size_t compare_degree = 0;   // star-quotient agreement checked through this degree
    double star_gap12 = 0.0;          // max coefficient gap between the two star-quotients
    double star_gap_transfer = 0.0;   // max gap of either star-quotient to the transfer series
    double star_tol = 1e-9;
    bool star_consistent = false;

    Quaternion p_sample;
    QMatrix pointwise1;               // U1(p)^{-1} Y1(p)
    QMatrix pointwise2;
    double pointwise_gap = 0.0;
    double pointwise_threshold = 1e-6;
    bool pointwise_unequal = false;
};

/// Simulates the system on two input sequences of square blocks (so the
/// Z-transforms are invertible series) and compares both quotients.
inline TransferConsistencyReport transfer_consistency(const Realization& r,
                                                      const std::vector<QMatrix>& u1,
                                                      const std::vector<QMatrix>& u2,
                                                      std::size_t n_trunc,
                                                      const Quaternion& p_sample) {
    TransferConsistencyReport rep;
    rep.p_sample = p_sample;
    rep.transfer = transfer_series(r, n_trunc);

    auto star_quotient = [&](const std::vector<QMatrix>& u) {
        const SystemTrace trace = simulate(r, u, n_trunc + 1);
        const MatrixQSeries uu = z_transform(u, n_trunc);
        const MatrixQSeries yy = z_transform(trace.outputs, n_trunc);
        return std::pair{star_mul(yy, star_reciprocal(uu)), std::pair{uu, yy}};
    };

    auto [q1, zu1] = star_quotient(u1);
    auto [q2, zu2] = star_quotient(u2);
    rep.star_quotient1 = q1;
    rep.star_quotient2 = q2;

    // Convolutional cancellation loses accuracy near the truncation edge;
    // agreement is asserted through half the working degree.
    rep.compare_degree = n_trunc / 2;
    for (std::size_t n = 0; n <= rep.compare_degree; ++n) {
        rep.star_gap12 = std::max(rep.star_gap12, (q1[n] - q2[n]).max_abs());
        rep.star_gap_transfer = std::max({rep.star_gap_transfer,
                                          (q1[n] - rep.transfer[n]).max_abs(),
                                          (q2[n] - rep.transfer[n]).max_abs()});
    }
    rep.star_consistent =
        rep.star_gap12 <= rep.star_tol && rep.star_gap_transfer <= rep.star_tol;

    const QMatrix u1p = evaluate(zu1.first, p_sample);
    const QMatrix y1p = evaluate(zu1.second, p_sample);
    const QMatrix u2p = evaluate(zu2.first, p_sample);
    const QMatrix y2p = evaluate(zu2.second, p_sample);
    rep.pointwise1 = inverse(u1p) * y1p;
    rep.pointwise2 = inverse(u2p) * y2p;
    rep.pointwise_gap = (rep.pointwise1 - rep.pointwise2).max_abs();
    rep.pointwise_unequal = rep.pointwise_gap > rep.pointwise_threshold;
    return rep;
}

} // namespace qschur
