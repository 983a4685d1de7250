#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "eikonal/characteristics.hpp"
#include "eikonal/error.hpp"
#include "eikonal/hciz.hpp"
#include "eikonal/spectra.hpp"

using namespace eikonal;

namespace {

constexpr double kPi = std::numbers::pi;

HCIZProblem zero_problem() { return {SpectralMeasure::point(0.0), SpectralMeasure::point(0.0), 2.0}; }

HCIZProblem pm_one_problem() {
    return {SpectralMeasure({{Complex{-1.0}, 0.5}, {Complex{1.0}, 0.5}}), SpectralMeasure::point(0.0), 2.0};
}

double rho_sem(double x, double t) {
    const double s = t * (1.0 - t);
    return x * x >= 4.0 * s ? 0.0 : std::sqrt(4.0 * s - x * x) / (2.0 * kPi * s);
}

}  // namespace

TEST_CASE("bridge resolvent at A = B = 0 is a semicircle") {
    const auto p = zero_problem();
    CHECK(-bridge_resolvent(p, Complex{0.0, 1e-9}, 0.5).imag() / kPi == doctest::Approx(2.0 / kPi).epsilon(1e-8));
    double worst = 0.0;
    for (double t : {0.1, 0.3, 0.5, 0.8}) {
        const double r = 2.0 * std::sqrt(t * (1.0 - t));
        for (int k = 1; k < 200; ++k) {
            const double x = -1.2 + 2.4 * k / 200.0;
            if (std::abs(std::abs(x) - r) < 1e-3) continue;
            const double rho = -bridge_resolvent(p, Complex{x, 1e-10}, t).imag() / kPi;
            worst = std::max(worst, std::abs(rho - rho_sem(x, t)));
        }
        const auto e = bridge_edges(p, t);
        REQUIRE(e.size() == 2);
        CHECK(e[0] == doctest::Approx(-r).epsilon(1e-10));
        CHECK(e[1] == doctest::Approx(r).epsilon(1e-10));
    }
    CHECK(worst < 1e-6);
}

TEST_CASE("bridge resolvent endpoints and swap symmetry") {
    const auto p = pm_one_problem();
    auto g_a = [](Complex z) { return 0.5 / (z - 1.0) + 0.5 / (z + 1.0); };
    double err0 = 0.0, err1 = 0.0, swap = 0.0;
    for (int k = 1; k < 100; ++k) {
        const Complex z = 2.0 * std::exp(Complex{0.0, kPi * k / 100.0});
        err0 = std::max(err0, std::abs(bridge_resolvent(p, z, 1e-6) - g_a(z)));
        err1 = std::max(err1, std::abs(bridge_resolvent(p, z, 1.0 - 1e-6) - 1.0 / z));
        swap = std::max(swap, std::abs(bridge_resolvent(p, z, 0.3) - bridge_resolvent(p.swapped(), z, 0.7)));
    }
    CHECK(err0 < 1e-4);
    CHECK(err1 < 1e-4);
    CHECK(swap < 1e-12);
    CHECK_THROWS_AS(bridge_resolvent(p, Complex{0.0, -1.0}, 0.3), Error);
    CHECK_THROWS_AS(bridge_resolvent(p, Complex{0.0, 1.0}, 1.0), Error);
}

TEST_CASE("bridge density mass on a 20-point time grid") {
    const auto p = pm_one_problem();
    const auto x = linspace(-2.5, 2.5, 4001);
    for (int k = 1; k <= 20; ++k) {
        const double t = k / 21.0;
        std::vector<double> rho(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) rho[i] = -bridge_resolvent(p, Complex{x[i], 1e-9}, t).imag() / kPi;
        CHECK(trapezoid(x, rho) == doctest::Approx(1.0).epsilon(5e-3));
    }
}

TEST_CASE("quantile coupling pairs sorted atoms") {
    const SpectralMeasure a({{Complex{2.0}, 0.25}, {Complex{-1.0}, 0.75}});
    const SpectralMeasure b({{Complex{0.0}, 0.5}, {Complex{5.0}, 0.5}});
    const auto c = quantile_coupling(a, b);
    REQUIRE(c.size() == 3);
    CHECK(c[0].a == -1.0);
    CHECK(c[0].b == 0.0);
    CHECK(c[0].weight == doctest::Approx(0.5));
    CHECK(c[1].a == -1.0);
    CHECK(c[1].b == 5.0);
    CHECK(c[1].weight == doctest::Approx(0.25));
    CHECK(c[2].a == 2.0);
    CHECK(c[2].b == 5.0);
    const auto m = bridge_base_measure({a, b, 2.0}, 0.5);
    CHECK(m.atoms().size() == 3);
}

TEST_CASE("bridge characteristic map") {
    const auto p = zero_problem();
    const auto id = bridge_characteristic_map(p, Complex{0.3, 0.7}, Complex{0.1, 0.0}, 0.0);
    CHECK(std::abs(id.q[0] - Complex{0.3, 0.7}) < 1e-15);
    CHECK(std::abs(id.q[1] - Complex{0.1, 0.0}) < 1e-15);

    const auto x = bridge_characteristic_map(p, Complex{0.0, 1.0}, Complex{}, 0.5);
    CHECK(std::abs(x.q[0]) < 1e-15);
    CHECK(std::abs(x.p[0] - Complex{0.0, -2.0}) < 1e-15);
    CHECK_THROWS_AS(bridge_characteristic_map(p, Complex{0.0, 1.0}, Complex{}, 1.0), Error);

    const auto q = pm_one_problem();
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0;
    for (int k = 0; k < 50; ++k) {
        const Complex z0{2.0 * u(rng), 0.5 + std::abs(u(rng))};
        const Complex a0{0.3 * u(rng), 0.3 * u(rng)};
        const auto closed = bridge_characteristic_map(q, z0, a0, 0.7);
        const auto tr = integrate_hamilton(ensemble::Bridge{1.0}, bridge_initial_state(q, z0, a0), {0.0, 0.7}, 1e-3);
        const auto& num = tr.states.back();
        for (int i = 0; i < 2; ++i) {
            worst = std::max(worst, std::abs(num.q[i] - closed.q[i]));
            worst = std::max(worst, std::abs(num.p[i] - closed.p[i]));
        }
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("logistic grid and finite difference weights") {
    const auto t = logistic_grid(0.01, 11);
    CHECK(t.front() == doctest::Approx(0.01));
    CHECK(t[5] == 0.5);
    for (std::size_t k = 0; k < t.size(); ++k) CHECK(t[k] + t[t.size() - 1 - k] == 1.0);
    const auto w = fd_weights(0.0, {-2.0, -1.0, 0.0, 1.0, 2.0}, 1);
    CHECK(w[0] == doctest::Approx(1.0 / 12.0));
    CHECK(w[1] == doctest::Approx(-8.0 / 12.0));
    CHECK(std::abs(w[2]) < 1e-15);
    // exact on quartics, uneven nodes
    const std::vector<double> n{0.1, 0.25, 0.3, 0.6, 0.65};
    const auto v = fd_weights(0.3, n, 1);
    double d = 0.0;
    for (int k = 0; k < 5; ++k) d += v[k] * std::pow(n[k], 4);
    CHECK(d == doctest::Approx(4.0 * std::pow(0.3, 3)).epsilon(1e-12));
    CHECK_THROWS_AS(logistic_grid(0.6, 10), Error);
}

TEST_CASE("fluid field at A = B = 0 on a 400 x 400 grid") {
    auto f = bridge_fluid_field(zero_problem(), linspace(-1.05, 1.05, 400), logistic_grid(0.01, 400));
    euler_match_velocity(f);
    double rho_err = 0.0, coef_err = 0.0, force_err = 0.0;
    const auto mask = interior_mask(f);
    for (std::size_t it = 0; it < f.nt(); ++it) {
        const double t = f.t[it];
        for (std::size_t ix = 0; ix < f.nx(); ++ix) {
            const double x = f.x[ix];
            rho_err = std::max(rho_err, std::abs(f.rho[f.idx(ix, it)] - rho_sem(x, t)));
            if (!mask[f.idx(ix, it)]) continue;
            const double expect = std::abs(1.0 - 2.0 * t) * std::abs(x) / (2.0 * t * (1.0 - t));
            coef_err = std::max(coef_err, std::abs(std::abs(f.mu[f.idx(ix, it)]) - expect));
            // force term by central differences in x
            const double h = 1e-4;
            const double r1 = rho_sem(x + h, t), r0 = rho_sem(x - h, t);
            const double force = 0.5 * kPi * kPi * (r1 * r1 - r0 * r0) / (2.0 * h);
            force_err = std::max(force_err, std::abs(force + x / (4.0 * t * t * (1.0 - t) * (1.0 - t))) /
                                                (1.0 + std::abs(force)));
        }
    }
    CHECK(rho_err < 1e-6);
    CHECK(coef_err < 1e-3);
    CHECK(force_err < 1e-6);
    // matched sign
    const std::size_t it = 100, ix = 250;
    REQUIRE(mask[f.idx(ix, it)]);
    CHECK(f.mu[f.idx(ix, it)] * f.x[ix] * (1.0 - 2.0 * f.t[it]) > 0.0);
    const auto r = fluid_residuals(f, mask);
    MESSAGE("euler residual ", r.euler, " burgers residual ", r.burgers, " points ", r.points);
    CHECK(r.points > 10000);
    CHECK(r.euler < 1e-2);
    CHECK(r.burgers < 1e-2);
}

TEST_CASE("velocity vanishes at the midpoint and slice action is one half") {
    auto f = bridge_fluid_field(zero_problem(), linspace(-1.02, 1.02, 2001), logistic_grid(0.01, 201));
    euler_match_velocity(f);
    REQUIRE(f.t[100] == 0.5);
    double worst = 0.0;
    for (std::size_t ix = 0; ix < f.nx(); ++ix) worst = std::max(worst, std::abs(f.mu[f.idx(ix, 100)]));
    CHECK(worst < 1e-10);
    const auto I = slice_integrand(f);
    CHECK(0.5 * I[100] == doctest::Approx(0.5).epsilon(1e-3));
    // analytic slice 1/(2t(1-t)) - 1
    for (std::size_t it : {20u, 60u, 140u}) {
        const double t = f.t[it];
        CHECK(I[it] == doctest::Approx(1.0 / (2.0 * t * (1.0 - t)) - 1.0).epsilon(2e-3));
    }
}

TEST_CASE("log divergence coefficient of the action") {
    auto f = bridge_fluid_field(zero_problem(), linspace(-1.02, 1.02, 4001), logistic_grid(5e-4, 201));
    euler_match_velocity(f);
    const auto a = action_evaluate(f, {1e-3, 2e-3, 5e-3, 1e-2, 2e-2});
    CHECK(a.log_coefficient == doctest::Approx(0.5).epsilon(0.04));
    for (std::size_t k = 1; k < a.s_of_delta.size(); ++k) CHECK(a.s_of_delta[k].second < a.s_of_delta[k - 1].second);
    for (const auto& [d, s] : a.s_of_delta) {
        const double exact = 0.5 * std::log((1.0 - d) / d) - 0.5 * (1.0 - 2.0 * d);
        CHECK(s == doctest::Approx(exact).epsilon(1e-2));
    }
    CHECK_THROWS_AS(action_evaluate(f, {1e-5}), Error);
    const auto j = to_json(a);
    CHECK(j.contains("log_coefficient"));
}

TEST_CASE("static fluid action") {
    FluidField f;
    f.x = linspace(-1.0, 1.0, 201);
    f.t = linspace(0.01, 0.99, 99);
    f.rho.assign(f.nx() * f.nt(), 0.0);
    f.mu.assign(f.nx() * f.nt(), 0.0);
    f.cdf.assign(f.nx() * f.nt(), 0.0);
    f.support.assign(f.nt(), {{-1.0, 1.0}});
    std::vector<double> cube(f.nx());
    for (std::size_t ix = 0; ix < f.nx(); ++ix) {
        const double r = 0.5 * (1.0 + 0.3 * f.x[ix]);
        cube[ix] = r * r * r;
        for (std::size_t it = 0; it < f.nt(); ++it) f.rho[f.idx(ix, it)] = r;
    }
    const double rho3 = trapezoid(f.x, cube);
    const auto a = action_evaluate(f, {0.05, 0.1, 0.2});
    for (const auto& [d, s] : a.s_of_delta) CHECK(s == doctest::Approx(kPi * kPi / 6.0 * rho3 * (1.0 - 2.0 * d)).epsilon(1e-12));
}

TEST_CASE("degenerate density inside claimed support") {
    FluidField f;
    f.x = linspace(-1.0, 1.0, 21);
    f.t = linspace(0.1, 0.9, 9);
    f.rho.assign(f.nx() * f.nt(), 0.3);
    f.mu.assign(f.nx() * f.nt(), 0.0);
    f.cdf.assign(f.nx() * f.nt(), 0.0);
    f.support.assign(f.nt(), {{-1.0, 1.0}});
    f.rho[f.idx(10, 4)] = 0.0;
    CHECK_THROWS_AS(euler_match_velocity(f), Error);
    try {
        euler_match_velocity(f);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::DegenerateDensity);
    }
}

TEST_CASE("time reversal of the bridge") {
    const auto p = pm_one_problem();
    const auto x = linspace(-1.5, 1.5, 121);
    const auto t = logistic_grid(0.02, 41);
    std::vector<double> tr(t.rbegin(), t.rend());
    for (auto& v : tr) v = 1.0 - v;
    auto f = bridge_fluid_field(p, x, t);
    auto g = bridge_fluid_field(p.swapped(), x, tr);
    euler_match_velocity(f);
    euler_match_velocity(g);
    double drho = 0.0, dmu = 0.0;
    for (std::size_t it = 0; it < t.size(); ++it)
        for (std::size_t ix = 0; ix < x.size(); ++ix) {
            const std::size_t jt = t.size() - 1 - it;
            drho = std::max(drho, std::abs(f.rho[f.idx(ix, it)] - g.rho[g.idx(ix, jt)]));
            dmu = std::max(dmu, std::abs(f.mu[f.idx(ix, it)] + g.mu[g.idx(ix, jt)]));
        }
    CHECK(drho < 1e-10);
    CHECK(dmu < 1e-6);
}

TEST_CASE("problem from JSON") {
    const auto j = nlohmann::json::parse(R"({"atoms_a":[[-1,0.5],[1,0.5]],"atoms_b":[[0,1]],"beta":2})");
    const auto p = hciz_problem_from_json(j);
    CHECK(p.a.atoms().size() == 2);
    CHECK(p.beta == 2.0);
    CHECK_THROWS_AS(hciz_problem_from_json(nlohmann::json::parse(R"({"atoms_a":[[0,1]],"atoms_b":[[0,1]],"beta":3})")),
                    ConfigError);
    CHECK_THROWS_AS(hciz_problem_from_json(nlohmann::json::parse(R"({"atoms_a":[[0,1]]})")), ConfigError);
    CHECK_THROWS_AS(HCIZProblem(SpectralMeasure::point(Complex{0.0, 1.0}), SpectralMeasure::point(0.0)), Error);
}
