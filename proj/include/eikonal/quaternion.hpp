#pragma once

#include <array>
#include <complex>

#include "eikonal/error.hpp"

namespace eikonal {

using Complex = std::complex<double>;
using Mat2c = std::array<std::array<Complex, 2>, 2>;

inline bool is_finite(Complex c) noexcept {
    return std::isfinite(c.real()) && std::isfinite(c.imag());
}

/// Throws NonFinite if `c` has a NaN or infinite component.
Complex checked(Complex c, const char* what = "value");

/// Real quaternion in its 2x2 complex representation [[z, -conj(w)], [w, conj(z)]].
/// Only (z, w) is stored; the matrix is rebuilt on demand.
class Quaternion {
public:
    constexpr Quaternion() = default;
    Quaternion(Complex z, Complex w);

    static Quaternion identity() { return {Complex{1.0, 0.0}, Complex{}}; }

    Complex z() const noexcept { return z_; }
    Complex w() const noexcept { return w_; }

    /// |z|^2 + |w|^2, the determinant of the matrix form.
    double norm_sq() const noexcept { return std::norm(z_) + std::norm(w_); }

    Mat2c matrix() const noexcept;
    static Quaternion from_matrix(const Mat2c& m);

    Quaternion conj_transpose() const noexcept { return {std::conj(z_), -w_, Unchecked{}}; }
    Quaternion operator-() const noexcept { return {-z_, -w_, Unchecked{}}; }

    friend Quaternion operator+(const Quaternion& a, const Quaternion& b) {
        return {a.z_ + b.z_, a.w_ + b.w_};
    }
    friend Quaternion operator-(const Quaternion& a, const Quaternion& b) {
        return {a.z_ - b.z_, a.w_ - b.w_};
    }
    friend Quaternion operator*(double s, const Quaternion& a) { return {s * a.z_, s * a.w_}; }
    friend bool operator==(const Quaternion&, const Quaternion&) = default;

private:
    struct Unchecked {};
    Quaternion(Complex z, Complex w, Unchecked) noexcept : z_(z), w_(w) {}

    Complex z_{};
    Complex w_{};
};

Quaternion quat_mul(const Quaternion& a, const Quaternion& b);

/// Throws SingularQuaternion when |z|^2 + |w|^2 == 0.
Quaternion quat_inverse(const Quaternion& a);

/// Canonical pair (Q, P). P is stored as a quaternion so that the resolvent
/// matrix is its transpose: G = P^T.
struct QuaternionPair {
    Quaternion q;
    Quaternion p;

    Complex p_z() const noexcept { return p.z(); }  // G_11
    Complex p_w() const noexcept { return p.w(); }  // G_12

    /// Quaternionic resolvent G = P^T in matrix form.
    Mat2c resolvent() const noexcept;
};

}  // namespace eikonal
