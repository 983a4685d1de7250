#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "eikonal/io.hpp"
#include "eikonal/spectra.hpp"

using namespace eikonal;
using std::numbers::pi;

namespace {

double semicircle(double x, double t) {
    const double d = 4.0 * t - x * x;
    return d > 0.0 ? std::sqrt(d) / (2.0 * pi * t) : 0.0;
}

ResolventFn gue_from_zero(double t) {
    return [t](Complex z) { return pastur_solve(SpectralMeasure::point(), ensemble::Gue{}, z, t); };
}

FieldSampler field_of(EnsembleSpec spec, double t, SpectralMeasure mu = SpectralMeasure::point()) {
    return [=](Complex z) { return quaternionic_field(mu, spec, z, t); };
}

}  // namespace

TEST_CASE("semicircle density") {
    const auto d = density_1d(gue_from_zero(1.0), {0.0, 3.0}, 1e-6);
    CHECK(std::abs(d.rho[0] - 1.0 / pi) < 1e-6);
    CHECK(d.rho[1] < 1e-3);
    CHECK(d.epsilon == 1e-6);
    for (double t : {0.25, 1.0, 4.0}) {
        const double r = 2.0 * std::sqrt(t);
        const auto grid = density_1d(gue_from_zero(t), linspace(-1.5 * r, 1.5 * r, 601), 1e-6);
        double err = 0.0;
        for (std::size_t i = 0; i < grid.x.size(); ++i)
            if (std::abs(grid.x[i]) < r - 0.01) err = std::max(err, std::abs(grid.rho[i] - semicircle(grid.x[i], t)));
        CHECK(err < 1e-6);
        CHECK(std::abs(grid.mass() - 1.0) < 5e-3);
    }
}

TEST_CASE("density converges at O(eps)") {
    const auto g = gue_from_zero(1.0);
    std::vector<double> err;
    for (double eps : {1e-4, 1e-5, 1e-6}) err.push_back(std::abs(density_1d(g, {0.5}, eps).rho[0] - semicircle(0.5, 1.0)));
    for (int k = 0; k < 2; ++k) {
        const double ratio = err[k + 1] / err[k];
        CHECK(ratio >= 0.05);
        CHECK(ratio <= 0.2);
    }
}

TEST_CASE("Marchenko-Pastur mass") {
    // grid clustered at the hard edge x = 0 where rho ~ x^{-1/2}
    std::vector<double> x;
    const int n = 40000;
    for (int k = 0; k <= n; ++k) x.push_back(4.0 * std::pow(static_cast<double>(k) / n, 2));
    const auto d = density_1d(
        [](Complex z) { return pastur_solve(SpectralMeasure::point(), ensemble::Wishart{1.0}, z, 1.0); }, x, 1e-9);
    CHECK(std::abs(d.mass() - 1.0) < 1e-3);
    // interior value against (1 / 2 pi) sqrt((4 - x) / x)
    const auto mid = density_1d(
        [](Complex z) { return pastur_solve(SpectralMeasure::point(), ensemble::Wishart{1.0}, z, 1.0); }, {1.0}, 1e-9);
    CHECK(std::abs(mid.rho[0] - std::sqrt(3.0) / (2.0 * pi)) < 1e-8);
}

TEST_CASE("Ginibre 2D density and overlap") {
    const double t = 1.0;
    const auto field = sample_field(field_of(ensemble::Ginibre{}, t), -0.3, -0.2, 1e-3, 21, 21);
    const auto rho = density_2d(field);
    CHECK(rho.re.size() == 19);
    for (double v : rho.value) CHECK(std::abs(v - 1.0 / (pi * t)) < 1e-6);

    const auto out = density_2d(sample_field(field_of(ensemble::Ginibre{}, t), 1.3, 0.1, 1e-3, 5, 5));
    for (double v : out.value) CHECK(std::abs(v) < 1e-12);

    const auto ov = overlap_correlator(sample_field(field_of(ensemble::Ginibre{}, t), 0.0, 0.0, 0.1, 11, 1));
    CHECK(std::abs(ov.value[0] - 1.0 / pi) < 1e-12);
    for (std::size_t i = 0; i < ov.re.size(); ++i) {
        const double x = ov.re[i];
        const double want = x * x < t ? (t - x * x) / (pi * t * t) : 0.0;
        CHECK(std::abs(ov.value[i] - want) < 1e-12);
    }
    CHECK(ov.value[10] < 1e-12);  // |z| = 1
}

TEST_CASE("2D mass over the disk") {
    for (double t : {0.5, 1.0}) {
        const double h = 0.01;
        const double half = 1.2 * std::sqrt(t);
        const auto n = static_cast<std::size_t>(std::round(2.0 * half / h)) + 1;
        const auto rho = density_2d(sample_field(field_of(ensemble::Ginibre{}, t), -half, -half, h, n, n));
        CHECK(std::abs(grid_mass(rho) - 1.0) < 1e-3);
    }
}

TEST_CASE("overlap is invariant under refinement") {
    const auto coarse = overlap_correlator(sample_field(field_of(ensemble::Elliptic{0.3}, 1.0), -1.0, -0.5, 0.1, 21, 11));
    const auto fine = overlap_correlator(sample_field(field_of(ensemble::Elliptic{0.3}, 1.0), -1.0, -0.5, 0.05, 41, 21));
    for (std::size_t j = 0; j < coarse.im.size(); ++j)
        for (std::size_t i = 0; i < coarse.re.size(); ++i)
            CHECK(std::abs(coarse.at(i, j) - fine.at(2 * i, 2 * j)) < 1e-8);
}

TEST_CASE("elliptic density") {
    const double tau = 0.5, t = 1.0;
    const auto rho = density_2d(sample_field(field_of(ensemble::Elliptic{tau}, t), -0.2, -0.1, 1e-3, 9, 9));
    for (double v : rho.value) CHECK(std::abs(v - 1.0 / (pi * t * (1.0 - tau * tau))) < 1e-6);
}

TEST_CASE("support boundaries") {
    for (double t : {0.5, 1.0, 2.0}) {
        const auto c = support_boundary(field_of(ensemble::Ginibre{}, t), {}, 3.0 * std::sqrt(t));
        REQUIRE(c.size() == 256);
        for (Complex z : c) CHECK(std::abs(std::abs(z) - std::sqrt(t)) < 1e-6);
        const auto b = support_boundary(field_of(ensemble::BiUnitary{{1.0}}, t), {}, 3.0 * std::sqrt(t));
        for (std::size_t k = 0; k < c.size(); ++k) CHECK(b[k] == c[k]);
    }
    const auto e = support_boundary(field_of(ensemble::Elliptic{0.5}, 1.0), {}, 3.0, 1e-12, 64);
    for (Complex z : e) CHECK(std::abs(std::norm(z.real() / 1.5) + std::norm(z.imag() / 0.5) - 1.0) < 1e-6);
    CHECK(std::abs(e[0].real() - 1.5) < 1e-6);
    CHECK(std::abs(e[16].imag() - 0.5) < 1e-6);

    try {
        support_boundary([](Complex z) { return FieldSample{z}; }, {}, 1.0);
        CHECK(false);
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::EmptySupport);
    }
}

TEST_CASE("BiUnitary fields are rotationally symmetric") {
    const EnsembleSpec spec{ensemble::BiUnitary{{1.0, 0.5, 0.2}}};
    for (double r : {0.2, 0.5, 0.8, 1.5}) {
        const auto ref = quaternionic_field(SpectralMeasure::point(), spec, Complex{r, 0.0}, 1.0);
        for (int k = 1; k < 16; ++k) {
            const auto s = quaternionic_field(SpectralMeasure::point(), spec, std::polar(r, 0.39 * k), 1.0);
            CHECK(s.inside_support == ref.inside_support);
            CHECK(std::abs(s.pw_sq - ref.pw_sq) < 1e-8);
            CHECK(std::abs(std::abs(s.g) - std::abs(ref.g)) < 1e-8);
        }
    }
}

TEST_CASE("fine grid across the support edge stays non-negative") {
    const auto rho = density_2d(sample_field(field_of(ensemble::Ginibre{}, 1.0), -1.2, -1.2, 0.02, 121, 121));
    for (double v : rho.value) CHECK(v >= 0.0);
    CHECK(std::abs(grid_mass(rho) - 1.0) < 0.01);
}

TEST_CASE("density_2d errors") {
    const auto tiny = sample_field(field_of(ensemble::Ginibre{}, 1.0), 0.0, 0.0, 0.1, 2, 5);
    CHECK_THROWS_AS(density_2d(tiny), Error);
    FieldGrid2D bad;
    bad.h = 0.1;
    bad.re = {0.0, 0.1, 0.2};
    bad.im = {0.0, 0.1, 0.2};
    bad.samples.resize(9);
    for (std::size_t k = 0; k < 9; ++k) bad.samples[k].g = Complex{-static_cast<double>(k % 3), 0.0};
    try {
        density_2d(bad);
        CHECK(false);
    } catch (const Error& err) {
        CHECK(err.kind() == ErrorKind::NegativeDensity);
    }
}

TEST_CASE("CSV formatting") {
    io::Table t{{"x", "rho"}, {{0.0, 1.5}, {1.0 / 3.0, -2e-7}}};
    CHECK(io::to_csv(t) == "x,rho\n0.000000000000e+00,3.333333333333e-01\n1.500000000000e+00,-2.000000000000e-07\n");
    const auto m = io::measure_from_json(nlohmann::json::parse("[[-1, 0.25], [[0.5, 1], 0.75]]"));
    CHECK(m.atoms()[1].location == Complex{0.5, 1.0});
    CHECK(io::measure_from_json(nlohmann::json::parse("[1, 2, 3, 4]")).atoms()[2].weight == 0.25);
    CHECK_THROWS_AS(io::measure_from_json(nlohmann::json::parse("[[0, 0.5]]")), ConfigError);
    CHECK_THROWS_AS(io::measure_from_json(nlohmann::json::parse("[]")), ConfigError);
}
