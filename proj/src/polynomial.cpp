#include "eikonal/polynomial.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace eikonal {

Polynomial::Polynomial(std::vector<Complex> coeffs) : c_(std::move(coeffs)) { trim(); }

void Polynomial::trim() {
    while (c_.size() > 1 && c_.back() == Complex{}) c_.pop_back();
    if (c_.empty()) c_.push_back(Complex{});
}

Complex Polynomial::operator()(Complex x) const noexcept {
    Complex acc{};
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (c_.size() <= 1) return constant(Complex{});
    std::vector<Complex> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = static_cast<double>(k) * c_[k];
    return Polynomial(std::move(d));
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<Complex> c(std::max(a.c_.size(), b.c_.size()));
    for (std::size_t k = 0; k < a.c_.size(); ++k) c[k] += a.c_[k];
    for (std::size_t k = 0; k < b.c_.size(); ++k) c[k] += b.c_[k];
    return Polynomial(std::move(c));
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + Complex{-1.0} * b; }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    std::vector<Complex> c(a.c_.size() + b.c_.size() - 1);
    for (std::size_t i = 0; i < a.c_.size(); ++i)
        for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return Polynomial(std::move(c));
}

Polynomial operator*(Complex s, const Polynomial& a) {
    std::vector<Complex> c = a.c_;
    for (auto& x : c) x *= s;
    return Polynomial(std::move(c));
}

Complex newton_polish(const Polynomial& p, const Polynomial& dp, Complex x, double tol, int max_iter) {
    // Keep the best iterate so a clustered root cannot pull us away.
    Complex best = x;
    double best_res = std::abs(p(x));
    for (int it = 0; it < max_iter; ++it) {
        const Complex d = dp(x);
        if (d == Complex{}) break;
        const Complex step = p(x) / d;
        if (!is_finite(step)) break;
        x -= step;
        const double res = std::abs(p(x));
        if (res < best_res) {
            best = x;
            best_res = res;
        }
        if (std::abs(step) <= tol * std::max(1.0, std::abs(x))) break;
    }
    return best;
}

std::vector<Complex> Polynomial::roots(double tiny) const {
    std::vector<Complex> c = c_;
    double scale = 0.0;
    for (const auto& v : c) scale = std::max(scale, std::abs(v));
    while (c.size() > 1 && std::abs(c.back()) <= tiny * scale) c.pop_back();
    const int n = static_cast<int>(c.size()) - 1;
    if (n <= 0) return {};

    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(n, n);
    for (int i = 1; i < n; ++i) companion(i, i - 1) = 1.0;
    for (int i = 0; i < n; ++i) companion(i, n - 1) = -c[static_cast<std::size_t>(i)] / c.back();

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    const Polynomial reduced(c);
    const Polynomial dreduced = reduced.derivative();
    std::vector<Complex> out;
    out.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) out.push_back(newton_polish(reduced, dreduced, solver.eigenvalues()(i)));
    return out;
}

}  // namespace eikonal
