#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "eikonal/characteristics.hpp"
#include "eikonal/spectra.hpp"
#include "eikonal/unitary_flow.hpp"

using namespace eikonal;
using std::numbers::pi;

namespace {

std::vector<double> circle_grid(std::size_t n) { return linspace(-pi, pi, n); }

}  // namespace

TEST_CASE("cot kernel") {
    const auto one = AngularMeasure::point(0.0);
    for (double th : {0.3, 1.0, -2.0, 3.0}) CHECK(std::abs(cot_resolvent(one, Complex{th}) - 0.5 / std::tan(th / 2)) < 1e-15);
    const auto two = AngularMeasure::uniform({0.0, pi});
    CHECK(std::abs(cot_resolvent(two, Complex{pi / 2})) < 1e-15);
    // periodicity
    const Complex z{0.7, 0.2};
    CHECK(std::abs(cot_resolvent(two, z) - cot_resolvent(two, z + 2.0 * pi)) < 1e-13);
    try {
        cot_resolvent(one, Complex{0.0});
        CHECK(false);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::AtomCollision);
    }
    // dense uniform grid approaches Haar, where J vanishes on the real axis
    std::vector<double> th;
    for (int k = 0; k < 2000; ++k) th.push_back(-pi + 2.0 * pi * (k + 0.5) / 2000);
    const auto haar = AngularMeasure::uniform(th);
    CHECK(std::abs(cot_resolvent(haar, Complex{0.0})) < 1e-10);
    CHECK(std::abs(cot_resolvent(haar, Complex{0.3, 0.1}) + Complex{0.0, 0.5}) < 1e-10);
    const double h = 1e-6;
    const Complex fd = (cot_resolvent(two, z + h) - cot_resolvent(two, z - h)) / (2.0 * h);
    CHECK(std::abs(fd - cot_resolvent_derivative(two, z)) < 1e-8);
}

TEST_CASE("mass conservation and chart agreement") {
    const auto one = AngularMeasure::point(0.0);
    const auto grid = circle_grid(2001);
    for (double t : {1.0, 2.0, 3.0, 5.0}) {
        CAPTURE(t);
        const auto a = unitary_density(one, grid, t, 1e-6);
        const auto z = unitary_density_z(one, grid, t, 1e-6);
        CHECK(std::abs(a.mass() - 1.0) < 5e-3);
        CHECK(std::abs(z.mass() - 1.0) < 5e-3);
        const auto edges = t < 4.0 ? unitary_edges(one, t) : std::vector<double>{};
        double worst = 0.0;
        for (std::size_t k = 0; k < grid.size(); ++k) {
            bool near_edge = false;
            for (double e : edges) near_edge |= std::abs(wrap_angle(grid[k] - e)) < 0.02;
            if (!near_edge) worst = std::max(worst, std::abs(a.rho[k] - z.rho[k]));
        }
        CHECK(worst < 1e-6);
        // parity of symmetric data
        for (std::size_t k = 0; k < grid.size(); ++k) CHECK(std::abs(a.rho[k] - a.rho[grid.size() - 1 - k]) < 1e-10);
    }
}

TEST_CASE("short time: arc of width ~ 4 sqrt t, semicircle-like") {
    const auto one = AngularMeasure::point(0.0);
    const double t = 0.01;
    const auto e = unitary_edges(one, t);
    REQUIRE(e.size() == 2);
    CHECK(std::abs(e[1] - e[0] - 4.0 * std::sqrt(t)) < 0.01);
    CHECK(std::abs(e[0] + e[1]) < 1e-12);
    const auto d = unitary_density(one, {0.0}, t, 1e-6);
    CHECK(std::abs(d.rho[0] - 1.0 / (pi * std::sqrt(t))) < 0.01 / std::sqrt(t));
}

TEST_CASE("long time approaches Haar") {
    const auto d = unitary_density(AngularMeasure::point(0.0), circle_grid(65), 40.0, 1e-6);
    for (double r : d.rho) CHECK(std::abs(r - 1.0 / (2.0 * pi)) < 1e-6);
}

TEST_CASE("gap closing") {
    CHECK(std::abs(gap_closing_time(AngularMeasure::point(0.0)) - 4.0) < 1e-10);
    CHECK(std::abs(gap_closing_time(AngularMeasure::point(1.3)) - 4.0) < 1e-10);
    const double two = gap_closing_time(AngularMeasure::uniform({0.0, pi}));
    CHECK(std::abs(two - 2.0) < 1e-10);
    // gap near pi at t = 3, none at t = 5
    const auto one = AngularMeasure::point(0.0);
    const auto e3 = unitary_edges(one, 3.0);
    REQUIRE(e3.size() == 2);
    CHECK(e3[1] < pi);
    CHECK(unitary_edges(one, 5.0).empty());
    const auto d = unitary_density(one, {pi}, 3.0, 1e-6);
    CHECK(d.rho[0] < 1e-6);
}

TEST_CASE("UnitaryZ characteristics conserve zp") {
    PhasePoint x0;
    x0.q[0] = std::polar(1.2, 0.4);
    x0.p[0] = Complex{0.3, 0.1};
    const auto traj = integrate_hamilton(ensemble::UnitaryZ{}, x0, {0.0, 2.0}, 1e-3);
    for (const auto& s : traj.states) CHECK(std::abs(s.q[0] * s.p[0] - x0.q[0] * x0.p[0]) < 1e-10);
}
