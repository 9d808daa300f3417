#include <catch2/catch_amalgamated.hpp>

#include "qschur/realization.hpp"
#include "qschur/sampling.hpp"
#include "qschur/schur.hpp"

using namespace qschur;

namespace {

// Convolution oracle on matrix coefficient lists, independent of star_mul.
std::vector<QMatrix> conv_oracle(const std::vector<QMatrix>& f, const std::vector<QMatrix>& g) {
    std::vector<QMatrix> c(std::min(f.size(), g.size()),
                           QMatrix(f[0].rows(), g[0].cols()));
    for (std::size_t n = 0; n < c.size(); ++n)
        for (std::size_t r = 0; r <= n; ++r) c[n] += f[r] * g[n - r];
    return c;
}

std::vector<QMatrix> markov_list(const Realization& r, std::size_t count) {
    std::vector<QMatrix> f;
    for (std::size_t n = 0; n < count; ++n) f.push_back(markov(r, n));
    return f;
}

} // namespace

TEST_CASE("markov parameters") {
    Sampler rng(301);
    SECTION("A = 0 stops after f_1") {
        const Realization r(QMatrix(2, 2), rng.matrix(2, 1), rng.matrix(1, 2), rng.matrix(1, 1));
        CHECK(approx_eq(markov(r, 1), r.C * r.B, 1e-15));
        CHECK(markov(r, 2).max_abs() == 0.0);
        CHECK(markov(r, 5).max_abs() == 0.0);
    }
    SECTION("Blaschke quadruple has geometric parameters") {
        const Quaternion a{0, 0.25, 0.25, 0};
        const auto [mult, real] = blaschke(a, 16);
        const double t2 = 1.0 - norm_sq(a);
        Quaternion ab_pow{1.0};
        for (std::size_t n = 1; n <= 8; ++n) {
            CHECK(approx_eq(markov(real, n)(0, 0), t2 * ab_pow, 1e-13));
            ab_pow = ab_pow * conj(a);
        }
        CHECK(approx_eq(markov(real, 0)(0, 0), -a, 1e-15));
    }
}

TEST_CASE("companion realization of a polynomial") {
    SECTION("constant polynomial has empty state") {
        const Realization r = companion({QMatrix::scalar(Quaternion{2})});
        CHECK(r.state_dim() == 0);
        CHECK(markov(r, 0)(0, 0) == Quaternion{2});
        CHECK(markov(r, 1).max_abs() == 0.0);
    }
    SECTION("scalar [1, i, j]") {
        const Realization r = companion(
            {QMatrix::scalar(Quaternion{1}), QMatrix::scalar(Quaternion::i()), QMatrix::scalar(Quaternion::j())});
        CHECK(markov(r, 0)(0, 0) == Quaternion{1});
        CHECK(markov(r, 1)(0, 0) == Quaternion::i());
        CHECK(markov(r, 2)(0, 0) == Quaternion::j());
        CHECK(markov(r, 3).max_abs() == 0.0);
        CHECK(r.state_dim() == 2);
    }
    SECTION("matrix polynomial of degree J has state dimension J*N") {
        Sampler rng(307);
        std::vector<QMatrix> coeffs{rng.matrix(2, 2), rng.matrix(2, 2), rng.matrix(2, 2),
                                    rng.matrix(2, 2)};
        const Realization r = companion(coeffs);
        CHECK(r.state_dim() == 3 * 2);
        for (std::size_t n = 0; n < coeffs.size(); ++n)
            CHECK(approx_eq(markov(r, n), coeffs[n], 1e-13));
        CHECK(markov(r, 4).max_abs() <= 1e-14);
    }
}

TEST_CASE("transfer series") {
    Sampler rng(311);
    SECTION("A = 0") {
        const Realization r(QMatrix(2, 2), rng.matrix(2, 1), rng.matrix(1, 2), rng.matrix(1, 1));
        const MatrixQSeries h = transfer_series(r, 4);
        CHECK(approx_eq(h[0], r.D, 1e-15));
        CHECK(approx_eq(h[1], r.C * r.B, 1e-15));
        CHECK(h[2].max_abs() == 0.0);
    }
    SECTION("closed form agrees with the truncated series inside the gate") {
        for (int t = 0; t < 10; ++t) {
            const Realization r = rng.realization(3, 1, 1, 0.6);
            const Quaternion p{0, 0, 0.3, 0};
            const std::size_t N = 60;
            const QMatrix closed = transfer_eval_closed(r, p);
            const QMatrix series = evaluate(transfer_series(r, N), p);
            const double contraction = norm(p) * operator_norm(r.A);
            const double tail = 2.0 * operator_norm(r.C) * operator_norm(r.B) *
                                std::pow(contraction, static_cast<double>(N)) /
                                (1.0 - contraction);
            CHECK((closed - series).max_abs() <= tail + 1e-12);
        }
    }
    SECTION("real scalar quadruple matches classical state space on the reals") {
        const double a = 0.5, b = 1.3, c = -0.7, d = 0.2, x = 0.6;
        const Realization r(QMatrix::scalar(Quaternion{a}), QMatrix::scalar(Quaternion{b}),
                            QMatrix::scalar(Quaternion{c}), QMatrix::scalar(Quaternion{d}));
        const double classical = d + x * c * (1.0 / (1.0 - x * a)) * b;
        const QMatrix h = evaluate(transfer_series(r, 200), Quaternion{x});
        CHECK(h(0, 0).w == Catch::Approx(classical).epsilon(1e-12));
    }
}

TEST_CASE("realization algebra") {
    Sampler rng(313);
    SECTION("product against the identity system") {
        const Realization r = rng.realization(3, 2, 2, 0.7);
        const Realization id(QMatrix(0, 0), QMatrix(0, 2), QMatrix(2, 0), QMatrix::identity(2));
        const Realization p = product(r, id);
        for (std::size_t n = 0; n < 8; ++n) CHECK(approx_eq(markov(p, n), markov(r, n), 1e-12));
    }
    SECTION("product convolves Markov parameters") {
        for (int t = 0; t < 10; ++t) {
            const Realization r1 = rng.realization(2, 1, 2, 0.7);
            const Realization r2 = rng.realization(3, 2, 1, 0.7);
            const Realization p = product(r1, r2);
            const auto oracle = conv_oracle(markov_list(r1, 9), markov_list(r2, 9));
            for (std::size_t n = 0; n < 9; ++n)
                CHECK((markov(p, n) - oracle[n]).max_abs() <= 1e-10);
        }
    }
    SECTION("Blaschke product coefficient c_2 matches the convolution") {
        const auto b1 = blaschke(Quaternion{0, 0.5, 0, 0}, 8);
        const auto b2 = blaschke(Quaternion{0, 0, 0.4, 0.2}, 8);
        const Realization p = product(b1.realization, b2.realization);
        Quaternion c2{};
        for (std::size_t r = 0; r <= 2; ++r)
            c2 += b1.multiplier.series[r] * b2.multiplier.series[2 - r];
        CHECK(approx_eq(markov(p, 2)(0, 0), c2, 1e-13));
    }
    SECTION("concat stacks columns") {
        const Realization r1 = rng.realization(2, 2, 1, 0.7);
        const Realization r2 = rng.realization(1, 2, 3, 0.7);
        const Realization c = concat(r1, r2);
        for (std::size_t n = 0; n < 6; ++n) {
            const QMatrix stacked = hstack(markov(r1, n), markov(r2, n));
            CHECK(approx_eq(markov(c, n), stacked, 1e-12));
        }
    }
    SECTION("inverse of a D-only system") {
        const QMatrix d = rng.matrix(2, 2) + 3.0 * QMatrix::identity(2);
        const Realization r(QMatrix(0, 0), QMatrix(0, 2), QMatrix(2, 0), d);
        const Realization ri = inverse(r);
        CHECK(ri.state_dim() == 0);
        CHECK(approx_eq(ri.D, inverse(d), 1e-12));
    }
    SECTION("inverse convolves to the unit series") {
        for (int t = 0; t < 10; ++t) {
            Realization r = rng.realization(3, 2, 2, 0.7, /*invertible_d=*/true);
            r.B = r.B * 0.4;  // keeps ||A - B D^{-1} C|| moderate, so the
            r.C = r.C * 0.4;  // inverse's Markov parameters do not blow up
            const Realization ri = inverse(r);
            const auto prod = conv_oracle(markov_list(r, 11), markov_list(ri, 11));
            CHECK(approx_eq(prod[0], QMatrix::identity(2), 1e-11));
            for (std::size_t n = 1; n < prod.size(); ++n) CHECK(prod[n].max_abs() <= 1e-10);
        }
    }
    SECTION("inverse requires invertible D") {
        const Realization r(QMatrix(0, 0), QMatrix(0, 2), QMatrix(2, 0), QMatrix(2, 2));
        CHECK_THROWS_MATCHES(inverse(r), Error, Catch::Matchers::Predicate<Error>([](const Error& e) {
                                 return e.code() == Errc::NonInvertibleD;
                             }));
    }
}

TEST_CASE("rational quotient") {
    SECTION("P = p, Q = 1") {
        const QSeries p = QSeries{Quaternion{}, Quaternion{1}}.resized(6);
        const QSeries one = QSeries::unit(6);
        const QSeries q = rational_quotient(p, one);
        CHECK(q[0] == Quaternion{});
        CHECK(q[1] == Quaternion{1});
        CHECK(q[2] == Quaternion{});
    }
    SECTION("Blaschke data (p - a) * (1 - p conj(a))^{-*}") {
        const Quaternion a{0, 0.35, 0.35, 0};  // (i+j) scaled inside the ball
        QSeries num = QSeries::zero(10);
        num[0] = -a;
        num[1] = Quaternion{1};
        QSeries den = QSeries::zero(10);
        den[0] = Quaternion{1};
        den[1] = -conj(a);
        const QSeries s = rational_quotient(num, den);
        CHECK(approx_eq(s[0], -a, 1e-14));
        Quaternion ab_pow{1.0};
        const double t2 = 1.0 - norm_sq(a);
        for (std::size_t n = 1; n <= 10; ++n) {
            CHECK(approx_eq(s[n], t2 * ab_pow, 1e-13));
            ab_pow = ab_pow * conj(a);
        }
    }
    SECTION("real data restricts to the pointwise quotient on the reals") {
        const QSeries p{Quaternion{1}, Quaternion{2}, Quaternion{-1}};
        const QSeries q = QSeries{Quaternion{2}, Quaternion{0.5}}.resized(2);
        const QSeries quot = rational_quotient(p, q);
        const double x = 0.3;
        const double px = 1 + 2 * x - x * x, qx = 2 + 0.5 * x;
        // tail of the truncated reciprocal: small at this x
        CHECK(evaluate(quot, Quaternion{x}).w == Catch::Approx(px / qx).epsilon(1e-2));
    }
}

TEST_CASE("Ho-Kalman minimal realization") {
    Sampler rng(317);
    SECTION("rank-1 geometric coefficients give one state") {
        const Quaternion a{0, 0.5, 0, 0.5};  // (i+k)/2
        std::vector<QMatrix> f{QMatrix::scalar(Quaternion{0.3})};
        Quaternion pow{1.0};
        const double t2 = 1.0 - norm_sq(a);
        for (std::size_t n = 1; n <= 12; ++n) {
            f.push_back(QMatrix::scalar(t2 * pow));
            pow = pow * conj(a);
        }
        const Realization r = minimal_realization(f);
        CHECK(r.state_dim() == 1);
        for (std::size_t n = 0; n < f.size(); ++n)
            CHECK((markov(r, n) - f[n]).max_abs() <= 1e-10);
    }
    SECTION("all-zero coefficients give a zero-state constant") {
        std::vector<QMatrix> f(10, QMatrix(2, 3));
        f[0] = rng.matrix(2, 3);
        const Realization r = minimal_realization(f);
        CHECK(r.state_dim() == 0);
        CHECK(approx_eq(r.D, f[0], 1e-15));
    }
    SECTION("degree-2 polynomial data recovers dimension 2") {
        std::vector<QMatrix> coeffs{QMatrix::scalar(Quaternion{1}), QMatrix::scalar(Quaternion::i()),
                                    QMatrix::scalar(Quaternion::j())};
        const Realization comp = companion(coeffs);
        const auto f = markov_list(comp, 12);
        const Realization r = minimal_realization(f);
        CHECK(r.state_dim() == 2);
        for (std::size_t n = 0; n < f.size(); ++n)
            CHECK((markov(r, n) - f[n]).max_abs() <= 1e-10);
    }
    SECTION("round trip on random MIMO realizations") {
        for (int t = 0; t < 10; ++t) {
            const Realization r = rng.realization(3, 2, 2, 0.7);
            const auto f = markov_list(r, 25);
            const Realization m = minimal_realization(f);
            CHECK(m.state_dim() <= r.state_dim());
            for (std::size_t n = 0; n < f.size(); ++n)
                CHECK((markov(m, n) - f[n]).max_abs() <= 1e-8 * std::max(1.0, f[n].max_abs()));
            // idempotence of minimality
            const Realization m2 = minimal_realization(markov_list(m, 25));
            CHECK(m2.state_dim() == m.state_dim());
        }
    }
}

TEST_CASE("unitary equivalence") {
    Sampler rng(331);
    SECTION("recovers the conjugating unitary") {
        for (int t = 0; t < 8; ++t) {
            const Realization r1 = rng.realization(3, 1, 1, 0.7);
            const QMatrix u = rng.unitary(3);
            const Realization r2(u * r1.A * u.adjoint(), u * r1.B, r1.C * u.adjoint(), r1.D);
            const auto w = unitary_equivalence(r1, r2, 8, 1e-8);
            REQUIRE(w.has_value());
            CHECK(operator_norm(*w * w->adjoint() - QMatrix::identity(3)) <= 1e-8);
            CHECK(operator_norm(*w * r1.A - r2.A * *w) <= 1e-8);
            CHECK(operator_norm(r1.C - r2.C * *w) <= 1e-8);
            CHECK(operator_norm(*w * r1.B - r2.B) <= 1e-8);
        }
    }
    SECTION("identity pair gives the identity intertwiner") {
        const Realization r = rng.realization(2, 1, 1, 0.7);
        const auto w = unitary_equivalence(r, r, 6, 1e-8);
        REQUIRE(w.has_value());
        CHECK(approx_eq(*w, QMatrix::identity(2), 1e-8));
    }
    SECTION("different Markov parameters give nothing") {
        const Realization r1 = rng.realization(2, 1, 1, 0.7);
        Realization r2 = r1;
        r2.D = r2.D + QMatrix::identity(1);
        CHECK_FALSE(unitary_equivalence(r1, r2, 6, 1e-8).has_value());
    }
    SECTION("unobservable pair is flagged") {
        // C = 0 kills observability
        const Realization r1(rng.matrix_with_norm(2, 0.5), rng.matrix(2, 1), QMatrix(1, 2),
                             rng.matrix(1, 1));
        CHECK_THROWS_MATCHES(unitary_equivalence(r1, r1, 6, 1e-8), Error,
                             Catch::Matchers::Predicate<Error>([](const Error& e) {
                                 return e.code() == Errc::NotOuterConnected;
                             }));
    }
}

TEST_CASE("coisometric flag on the block matrix") {
    const auto b = blaschke(Quaternion{0, 0.6, 0, 0}, 8);
    CHECK(b.realization.is_coisometric(1e-12));
    Sampler rng(337);
    const Realization generic = rng.realization(2, 1, 1, 0.7);
    CHECK_FALSE(generic.is_coisometric(1e-6));
}
