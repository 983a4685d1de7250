#include "eikonal/unitary_flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "parallel.hpp"

namespace eikonal {

namespace {

constexpr double kPi = std::numbers::pi;
const Complex kI{0.0, 1.0};

Complex cot(Complex x) { return std::cos(x) / std::sin(x); }

double trapezoid_periodic(const std::vector<double>& x, const std::vector<double>& y) {
    double acc = 0.0;
    for (std::size_t i = 1; i < x.size(); ++i) acc += 0.5 * (x[i] - x[i - 1]) * (y[i] + y[i - 1]);
    return acc;
}

}  // namespace

double wrap_angle(double theta) noexcept {
    double w = std::remainder(theta, 2.0 * kPi);  // [-pi, pi]
    if (w <= -kPi) w += 2.0 * kPi;
    return w;
}

AngularMeasure::AngularMeasure(std::vector<std::pair<double, double>> phases) : phases_(std::move(phases)) {
    if (phases_.empty()) fail(ErrorKind::InvalidParameter, "angular measure needs at least one atom");
    double total = 0.0;
    for (auto& [theta, w] : phases_) {
        if (!std::isfinite(theta) || !std::isfinite(w) || !(w > 0.0))
            fail(ErrorKind::InvalidParameter, "phases must be finite with positive weights");
        theta = wrap_angle(theta);
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12) fail(ErrorKind::InvalidParameter, "weights must sum to 1");
}

AngularMeasure AngularMeasure::uniform(const std::vector<double>& thetas) {
    std::vector<std::pair<double, double>> p;
    for (double th : thetas) p.emplace_back(th, 1.0 / static_cast<double>(thetas.size()));
    if (p.empty()) fail(ErrorKind::InvalidParameter, "angular measure needs at least one atom");
    double total = 0.0;
    for (const auto& x : p) total += x.second;
    for (auto& x : p) x.second /= total;
    return AngularMeasure(std::move(p));
}

Complex cot_resolvent(const AngularMeasure& m, Complex theta) {
    checked(theta, "theta");
    Complex acc{};
    for (const auto& [th, w] : m.phases()) {
        const Complex x = 0.5 * (theta - th);
        if (theta.imag() == 0.0 && std::abs(wrap_angle(theta.real() - th)) == 0.0)
            fail(ErrorKind::AtomCollision, "theta coincides with an atom");
        acc += w * cot(x);
    }
    return 0.5 * acc;
}

Complex cot_resolvent_derivative(const AngularMeasure& m, Complex theta) {
    Complex acc{};
    for (const auto& [th, w] : m.phases()) {
        const Complex s = std::sin(0.5 * (theta - th));
        acc += w / (s * s);
    }
    return -0.25 * acc;
}

double AngularField::mass() const { return trapezoid_periodic(theta, rho); }

namespace {

/// Newton for theta0 + t J0(theta0) = theta from `guess`.
Complex solve_theta0(const AngularMeasure& m, Complex theta, double t, Complex guess) {
    Complex x = guess;
    for (int it = 0; it < 60; ++it) {
        const Complex f = x + t * cot_resolvent(m, x) - theta;
        const Complex df = 1.0 + t * cot_resolvent_derivative(m, x);
        const Complex step = f / df;
        if (!is_finite(step)) break;
        // keep the iterate in the upper half plane
        Complex next = x - step;
        while (next.imag() <= 0.0) next = 0.5 * (next + x);
        x = next;
        if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(x))) break;
    }
    return x;
}

}  // namespace

AngularField unitary_density(const AngularMeasure& initial, const std::vector<double>& theta_grid, double t,
                             double epsilon) {
    if (!(t >= 0.0)) fail(ErrorKind::InvalidParameter, "t must be non-negative");
    if (!(epsilon > 0.0)) fail(ErrorKind::InvalidParameter, "epsilon must be positive");
    AngularField f;
    f.theta = theta_grid;
    f.t = t;
    f.epsilon = epsilon;
    f.J.resize(theta_grid.size());
    f.rho.resize(theta_grid.size());
    f.caustic.assign(theta_grid.size(), 0);
    detail::parallel_for(theta_grid.size(), [&](std::size_t k) {
        const double x = theta_grid[k];
        const double y_top = 12.0 + t;
        constexpr int kRungs = 100;
        Complex x0{x, y_top + 0.5 * t};
        for (int r = 0; r <= kRungs; ++r) {
            const double y = y_top * std::pow(epsilon / y_top, static_cast<double>(r) / kRungs);
            x0 = solve_theta0(initial, Complex{x, y}, t, x0);
        }
        const Complex theta{x, epsilon};
        const double res = std::abs(x0 + t * cot_resolvent(initial, x0) - theta);
        if (!(res < 1e-9)) fail(ErrorKind::BranchAmbiguity, "angular characteristic did not converge");
        f.J[k] = cot_resolvent(initial, x0);
        f.rho[k] = std::max(0.0, -f.J[k].imag() / kPi);
        f.caustic[k] = std::abs(1.0 + t * cot_resolvent_derivative(initial, x0)) < 1e-6;
    });
    return f;
}

AngularField unitary_density_z(const AngularMeasure& initial, const std::vector<double>& theta_grid, double t,
                               double epsilon) {
    if (!(t >= 0.0)) fail(ErrorKind::InvalidParameter, "t must be non-negative");
    if (!(epsilon > 0.0)) fail(ErrorKind::InvalidParameter, "epsilon must be positive");
    std::vector<Complex> lambda;
    for (const auto& p : initial.phases()) lambda.push_back(std::polar(1.0, p.first));
    auto psi = [&](Complex u, Complex* dpsi) {
        Complex v{}, dv{};
        for (std::size_t i = 0; i < lambda.size(); ++i) {
            const double w = initial.phases()[i].second;
            const Complex d = u - lambda[i];
            v += w * u / d;
            dv -= w * lambda[i] / (d * d);
        }
        if (dpsi) *dpsi = dv;
        return v;
    };
    AngularField f;
    f.theta = theta_grid;
    f.t = t;
    f.epsilon = epsilon;
    f.J.resize(theta_grid.size());
    f.rho.resize(theta_grid.size());
    f.caustic.assign(theta_grid.size(), 0);
    detail::parallel_for(theta_grid.size(), [&](std::size_t k) {
        const Complex dir = std::polar(1.0, theta_grid[k]);
        constexpr double kR = 1e3;
        constexpr int kRungs = 100;
        Complex c{1.0};
        for (int r = 0; r <= kRungs; ++r) {
            const double rad = 1.0 + (kR - 1.0) * std::pow(epsilon / (kR - 1.0), static_cast<double>(r) / kRungs);
            const Complex z = rad * dir;
            for (int it = 0; it < 60; ++it) {
                const Complex u = z * std::exp(t * (c - 0.5));
                Complex dpsi;
                const Complex fval = c - psi(u, &dpsi);
                const Complex step = fval / (1.0 - dpsi * u * t);
                if (!is_finite(step)) break;
                c -= step;
                if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(c))) break;
            }
        }
        const Complex u = (1.0 + epsilon) * dir * std::exp(t * (c - 0.5));
        Complex dpsi;
        const double res = std::abs(c - psi(u, &dpsi));
        if (!(res < 1e-9)) fail(ErrorKind::BranchAmbiguity, "z-plane characteristic did not converge");
        // the implicit equation for c degenerates exactly where dz/dz0 = 0
        f.caustic[k] = std::abs(1.0 - dpsi * u * t) < 1e-6;
        f.J[k] = kI * (c - 0.5);
        f.rho[k] = std::max(0.0, (2.0 * c.real() - 1.0) / (2.0 * kPi));
    });
    return f;
}

namespace {

/// -J0'(theta) on the real axis and its derivative -J0''.
double neg_dj(const AngularMeasure& m, double th) { return -cot_resolvent_derivative(m, Complex{th}).real(); }

double neg_d2j(const AngularMeasure& m, double th) {
    double acc = 0.0;
    for (const auto& [a, w] : m.phases()) {
        const double x = 0.5 * (th - a);
        const double s = std::sin(x);
        acc += w * std::cos(x) / (s * s * s);
    }
    return -0.25 * acc;
}

template <class F>
double bisect(F f, double a, double b) {
    double fa = f(a);
    for (int it = 0; it < 200 && b - a > 1e-15 * std::max(1.0, std::abs(b)); ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = f(mid);
        if ((fm > 0.0) == (fa > 0.0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

/// Gaps between consecutive atoms as (start, end) with end - start in (0, 2 pi].
std::vector<std::pair<double, double>> gaps(const AngularMeasure& m) {
    std::vector<double> th;
    for (const auto& p : m.phases()) th.push_back(p.first);
    std::sort(th.begin(), th.end());
    th.erase(std::unique(th.begin(), th.end()), th.end());
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < th.size(); ++i) {
        const double a = th[i];
        const double b = (i + 1 < th.size()) ? th[i + 1] : th[0] + 2.0 * kPi;
        out.emplace_back(a, b);
    }
    return out;
}

constexpr int kScan = 4000;

}  // namespace

std::vector<double> unitary_edges(const AngularMeasure& initial, double t) {
    if (!(t > 0.0)) fail(ErrorKind::InvalidParameter, "unitary_edges requires t > 0");
    std::vector<double> edges;
    for (const auto& [a, b] : gaps(initial)) {
        // 1 + t J0' = 1 - t (-J0'): scan the open gap for sign changes
        auto f = [&](double th) { return 1.0 - t * neg_dj(initial, th); };
        const double h = (b - a) / kScan;
        double prev = f(a + 0.5 * h);
        for (int k = 1; k < kScan; ++k) {
            const double x = a + (k + 0.5) * h;
            const double cur = f(x);
            if ((cur > 0.0) != (prev > 0.0)) {
                const double th0 = bisect(f, x - h, x);
                edges.push_back(wrap_angle(th0 + t * cot_resolvent(initial, Complex{th0}).real()));
            }
            prev = cur;
        }
    }
    std::sort(edges.begin(), edges.end());
    return edges;
}

double gap_closing_time(const AngularMeasure& initial) {
    double t_close = 0.0;
    for (const auto& [a, b] : gaps(initial)) {
        const double h = (b - a) / kScan;
        double best = std::numeric_limits<double>::infinity();
        double prev = neg_d2j(initial, a + 0.5 * h);
        for (int k = 1; k < kScan; ++k) {
            const double x = a + (k + 0.5) * h;
            const double cur = neg_d2j(initial, x);
            if (prev < 0.0 && cur >= 0.0) {
                const double th = bisect([&](double y) { return neg_d2j(initial, y); }, x - h, x);
                best = std::min(best, neg_dj(initial, th));
            }
            prev = cur;
        }
        if (std::isfinite(best)) t_close = std::max(t_close, 1.0 / best);
    }
    return t_close;
}

}  // namespace eikonal
