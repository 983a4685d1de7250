#pragma once

#include <vector>

#include "eikonal/quaternion.hpp"

namespace eikonal {

/// Dense complex polynomial, coefficients in ascending powers.
class Polynomial {
public:
    Polynomial() = default;
    explicit Polynomial(std::vector<Complex> coeffs);

    static Polynomial constant(Complex c) { return Polynomial({c}); }
    /// x - root
    static Polynomial linear_factor(Complex root) { return Polynomial({-root, Complex{1.0}}); }
    static Polynomial x() { return Polynomial({Complex{}, Complex{1.0}}); }

    int degree() const noexcept { return static_cast<int>(c_.size()) - 1; }
    const std::vector<Complex>& coeffs() const noexcept { return c_; }

    Complex operator()(Complex x) const noexcept;
    Polynomial derivative() const;

    friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
    friend Polynomial operator*(Complex s, const Polynomial& a);

    /// All roots: eigenvalues of the companion matrix, each polished by Newton
    /// on the polynomial itself. Leading coefficients below `tiny` relative to
    /// the largest are dropped first.
    std::vector<Complex> roots(double tiny = 1e-300) const;

private:
    void trim();
    std::vector<Complex> c_;
};

/// Newton refinement of a root of p. Stops when the step falls below
/// `tol * max(1, |x|)` or after `max_iter` iterations.
Complex newton_polish(const Polynomial& p, const Polynomial& dp, Complex x, double tol = 1e-15, int max_iter = 50);

}  // namespace eikonal
