#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "qschur/qlinalg.hpp"
#include "qschur/qmatrix.hpp"
#include "qschur/quaternion.hpp"
#include "qschur/realization.hpp"
#include "qschur/series.hpp"

namespace qschur {

/// Deterministic sampler. Uniform/Gaussian variates are derived from raw
/// mt19937_64 words (std:: distributions are implementation-defined, which
/// would break byte-stable seeded CLI output across platforms).
class Sampler {
public:
    explicit Sampler(std::uint64_t seed = 0x5eed) : eng_(seed) {}

    double uniform() {  // [0, 1)
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double gauss() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        constexpr double two_pi = 6.283185307179586476925286766559;
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(two_pi * u2);
        have_spare_ = true;
        return r * std::cos(two_pi * u2);
    }

    Quaternion quaternion(double scale = 1.0) {
        return Quaternion{gauss(), gauss(), gauss(), gauss()} * scale;
    }

    UnitImaginary unit_imaginary() {
        while (true) {
            const Quaternion v{0.0, gauss(), gauss(), gauss()};
            if (norm(v) > 1e-6) return UnitImaginary::from_imag(v);
        }
    }

    /// Point in the ball |q| <= r_max, direction uniform on S^3, radii spread
    /// toward the boundary.
    Quaternion ball_point(double r_max = 0.8) {
        while (true) {
            const Quaternion v = quaternion();
            const double n = norm(v);
            if (n > 1e-6) return v * (r_max * std::sqrt(uniform(0.1, 1.0)) / n);
        }
    }

    std::vector<Quaternion> ball_points(std::size_t count, double r_max = 0.8) {
        std::vector<Quaternion> pts(count);
        for (auto& p : pts) p = ball_point(r_max);
        return pts;
    }

    QMatrix matrix(std::size_t rows, std::size_t cols, double scale = 1.0) {
        QMatrix m(rows, cols);
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) m(i, j) = quaternion(scale);
        return m;
    }

    /// Random matrix rescaled to the requested operator norm.
    QMatrix matrix_with_norm(std::size_t n, double target_norm) {
        QMatrix m = matrix(n, n);
        const double nrm = operator_norm(m);
        return nrm > 0.0 ? m * (target_norm / nrm) : m;
    }

    QSeries series(std::size_t trunc, double scale = 1.0) {
        std::vector<Quaternion> c(trunc + 1);
        for (auto& q : c) q = quaternion(scale);
        return QSeries(std::move(c));
    }

    /// Random unitary over H: pivoted Gram-Schmidt of a square Gaussian matrix.
    QMatrix unitary(std::size_t n) {
        if (n == 0) return QMatrix(0, 0);
        while (true) {
            const QMatrix g = matrix(n, n);
            try {
                return orthonormal_columns(g, n);
            } catch (const Error&) {
                // re-draw on the measure-zero degenerate sample
            }
        }
    }

    /// Random realization with ||A|| <= a_norm and D bounded away from
    /// singular (useful when the inverse realization is wanted).
    Realization realization(std::size_t state, std::size_t out, std::size_t in, double a_norm = 0.7,
                            bool invertible_d = false) {
        QMatrix a = state > 0 ? matrix_with_norm(state, a_norm * uniform(0.5, 1.0)) : QMatrix(0, 0);
        QMatrix d = matrix(out, in);
        if (invertible_d && out == in) {
            // dominant identity keeps sigma_min(D) bounded away from zero
            d = d * 0.5 + QMatrix::identity(out) * (2.0 + uniform());
        }
        return Realization(std::move(a), matrix(state, in), matrix(out, state), std::move(d));
    }

    std::mt19937_64& engine() { return eng_; }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace qschur
