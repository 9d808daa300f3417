#pragma once

#include <cmath>
#include <complex>
#include <optional>
#include <ostream>

#include "qschur/errors.hpp"

namespace qschur {

/// Element of the skew field H, stored as w + x*i + y*j + z*k.
struct Quaternion {
    double w = 0.0;
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    constexpr Quaternion() = default;
    constexpr Quaternion(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {}
    constexpr Quaternion(double real) : w(real) {}

    static constexpr Quaternion i() { return {0.0, 1.0, 0.0, 0.0}; }
    static constexpr Quaternion j() { return {0.0, 0.0, 1.0, 0.0}; }
    static constexpr Quaternion k() { return {0.0, 0.0, 0.0, 1.0}; }

    constexpr Quaternion operator-() const { return {-w, -x, -y, -z}; }

    constexpr Quaternion& operator+=(const Quaternion& r) {
        w += r.w; x += r.x; y += r.y; z += r.z;
        return *this;
    }
    constexpr Quaternion& operator-=(const Quaternion& r) {
        w -= r.w; x -= r.x; y -= r.y; z -= r.z;
        return *this;
    }
    constexpr Quaternion& operator*=(double s) {
        w *= s; x *= s; y *= s; z *= s;
        return *this;
    }
};

constexpr Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
constexpr Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
constexpr Quaternion operator*(Quaternion a, double s) { return a *= s; }
constexpr Quaternion operator*(double s, Quaternion a) { return a *= s; }
constexpr Quaternion operator/(Quaternion a, double s) { return a *= (1.0 / s); }

/// Hamilton product; i*j = k, j*i = -k.
constexpr Quaternion hamilton(const Quaternion& a, const Quaternion& b) {
    return {a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w};
}

constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) { return hamilton(a, b); }

constexpr Quaternion conj(const Quaternion& p) { return {p.w, -p.x, -p.y, -p.z}; }
constexpr double norm_sq(const Quaternion& p) { return p.w * p.w + p.x * p.x + p.y * p.y + p.z * p.z; }
inline double norm(const Quaternion& p) { return std::sqrt(norm_sq(p)); }
constexpr double real_part(const Quaternion& p) { return p.w; }
constexpr Quaternion imag_part(const Quaternion& p) { return {0.0, p.x, p.y, p.z}; }

inline Quaternion inverse(const Quaternion& p) {
    const double n2 = norm_sq(p);
    if (n2 == 0.0) raise(Errc::DivisionByZero, "inverse of zero quaternion");
    return conj(p) / n2;
}

constexpr bool operator==(const Quaternion& a, const Quaternion& b) {
    return a.w == b.w && a.x == b.x && a.y == b.y && a.z == b.z;
}
constexpr bool operator!=(const Quaternion& a, const Quaternion& b) { return !(a == b); }

/// |a - b| <= tol * max(1, |a|, |b|); default tolerance per the library-wide comparison policy.
inline bool approx_eq(const Quaternion& a, const Quaternion& b, double tol = 1e-10) {
    const double scale = std::max({1.0, norm(a), norm(b)});
    return norm(a - b) <= tol * scale;
}

inline Quaternion pow_n(Quaternion p, unsigned n) {
    Quaternion acc{1.0};
    for (unsigned m = 0; m < n; ++m) acc = acc * p;
    return acc;
}

inline std::ostream& operator<<(std::ostream& os, const Quaternion& p) {
    return os << "[" << p.w << ", " << p.x << ", " << p.y << ", " << p.z << "]";
}

/// Unit purely imaginary quaternion (element of the sphere S); satisfies axis^2 = -1.
class UnitImaginary {
public:
    /// Normalizes the imaginary part of `v`; the real component must be negligible.
    static UnitImaginary from_imag(const Quaternion& v) {
        const Quaternion im = imag_part(v);
        const double n = norm(im);
        if (n == 0.0) raise(Errc::DivisionByZero, "no imaginary direction to normalize");
        return UnitImaginary(im / n);
    }

    static UnitImaginary i() { return UnitImaginary(Quaternion::i()); }
    static UnitImaginary j() { return UnitImaginary(Quaternion::j()); }
    static UnitImaginary k() { return UnitImaginary(Quaternion::k()); }

    const Quaternion& axis() const { return axis_; }
    operator const Quaternion&() const { return axis_; }

private:
    explicit UnitImaginary(const Quaternion& axis) : axis_(axis) {}
    Quaternion axis_;
};

/// p = re + axis * im_norm; axis is empty exactly when p is real.
struct SliceDecomposition {
    double re = 0.0;
    double im_norm = 0.0;
    std::optional<UnitImaginary> axis;
};

inline SliceDecomposition decompose(const Quaternion& p) {
    SliceDecomposition d;
    d.re = p.w;
    d.im_norm = norm(imag_part(p));
    if (d.im_norm != 0.0) d.axis = UnitImaginary::from_imag(p);
    return d;
}

/// Point Re(p) + J*|Im(p)| on the 2-sphere [p].
inline Quaternion sphere_point(const Quaternion& p, const UnitImaginary& J) {
    const double im = norm(imag_part(p));
    return Quaternion{p.w} + J.axis() * im;
}

} // namespace qschur
