#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "eikonal/measure.hpp"
#include "eikonal/polynomial.hpp"

using namespace eikonal;

TEST_CASE("arithmetic and evaluation") {
    const Polynomial p = Polynomial::linear_factor(1.0) * Polynomial::linear_factor(-2.0);  // x^2 + x - 2
    REQUIRE(p.degree() == 2);
    CHECK(p.coeffs()[0] == Complex{-2.0});
    CHECK(p.coeffs()[1] == Complex{1.0});
    CHECK(p(Complex{3.0}) == Complex{10.0});
    CHECK(p.derivative()(Complex{0.5}) == Complex{2.0});
    const Polynomial zero = p - p;
    CHECK(zero.degree() == 0);
    CHECK(zero(Complex{4.0}) == Complex{});
}

TEST_CASE("roots of products of known factors") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int deg = 1 + trial % 9;
        std::vector<Complex> want;
        Polynomial p = Polynomial::constant(Complex{0.5, -1.0});
        for (int k = 0; k < deg; ++k) {
            want.emplace_back(u(rng), u(rng));
            p = p * Polynomial::linear_factor(want.back());
        }
        auto got = p.roots();
        REQUIRE(got.size() == want.size());
        for (const Complex& w : want) {
            double best = 1e300;
            for (const Complex& g : got) best = std::min(best, std::abs(g - w));
            CHECK(best < 1e-10);
        }
    }
}

TEST_CASE("leading zeros are dropped") {
    Polynomial p(std::vector<Complex>{Complex{-1.0}, Complex{1.0}, Complex{1e-320}});
    const auto r = p.roots(1e-300);
    REQUIRE(r.size() == 1);
    CHECK(std::abs(r[0] - 1.0) < 1e-15);
    CHECK(Polynomial::constant(3.0).roots().empty());
}

TEST_CASE("measure validation and resolvent") {
    CHECK_THROWS_AS(SpectralMeasure(std::vector<Atom>{}), Error);
    CHECK_THROWS_AS(SpectralMeasure({{0.0, 0.5}, {1.0, 0.4}}), Error);
    CHECK_THROWS_AS(SpectralMeasure({{0.0, -0.5}, {1.0, 1.5}}), Error);
    const SpectralMeasure m = SpectralMeasure::uniform(std::vector<double>{-1.0, 1.0});
    const Complex z{0.3, 0.7};
    CHECK(std::abs(m.resolvent(z) - z / (z * z - 1.0)) < 1e-15);
    const double h = 1e-6;
    const Complex fd = (m.resolvent(z + h) - m.resolvent(z - h)) / (2.0 * h);
    CHECK(std::abs(fd - m.resolvent_derivative(z)) < 1e-8);
    CHECK(m.is_real());
    CHECK_FALSE(SpectralMeasure::point(Complex{0.0, 1.0}).is_real());
}
