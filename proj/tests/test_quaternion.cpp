#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "eikonal/quaternion.hpp"

using namespace eikonal;

namespace {

Mat2c matmul(const Mat2c& a, const Mat2c& b) {
    Mat2c c{};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k) c[i][j] += a[i][k] * b[k][j];
    return c;
}

Complex rnd(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    return {u(rng), u(rng)};
}

}  // namespace

TEST_CASE("identity and i*j algebra") {
    const Quaternion a{{0.3, -1.2}, {2.0, 0.5}};
    CHECK(quat_mul(Quaternion::identity(), a) == a);
    CHECK(quat_mul(a, Quaternion::identity()) == a);
    const Quaternion j{Complex{}, Complex{1.0}};
    const Quaternion jj = quat_mul(j, j);
    CHECK(jj.z() == Complex{-1.0});
    CHECK(jj.w() == Complex{});
}

TEST_CASE("product matches 2x2 matrix product") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const Quaternion a{rnd(rng), rnd(rng)};
        const Quaternion b{rnd(rng), rnd(rng)};
        const Mat2c direct = matmul(a.matrix(), b.matrix());
        const Mat2c via = quat_mul(a, b).matrix();
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) CHECK(std::abs(direct[i][j] - via[i][j]) < 1e-15 * 16);
    }
}

TEST_CASE("associativity") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 100; ++trial) {
        const Quaternion a{rnd(rng), rnd(rng)}, b{rnd(rng), rnd(rng)}, c{rnd(rng), rnd(rng)};
        const Quaternion l = quat_mul(quat_mul(a, b), c);
        const Quaternion r = quat_mul(a, quat_mul(b, c));
        CHECK(std::abs(l.z() - r.z()) < 1e-13);
        CHECK(std::abs(l.w() - r.w()) < 1e-13);
    }
}

TEST_CASE("inverse") {
    CHECK(quat_inverse(Quaternion::identity()) == Quaternion::identity());
    const Complex w{0.6, -0.8};
    const Quaternion inv = quat_inverse(Quaternion{Complex{}, w});
    CHECK(std::abs(inv.z()) == 0.0);
    CHECK(std::abs(inv.w() + w / std::norm(w)) < 1e-16);

    const Quaternion a{Complex{0.0, 2.0}, Complex{1.0}};
    const Quaternion one = quat_mul(a, quat_inverse(a));
    CHECK(std::abs(one.z() - 1.0) < 1e-13);
    CHECK(std::abs(one.w()) < 1e-13);

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 500; ++trial) {
        const Quaternion q{rnd(rng), rnd(rng)};
        const Quaternion l = quat_mul(q, quat_inverse(q));
        const Quaternion r = quat_mul(quat_inverse(q), q);
        CHECK(std::abs(l.z() - 1.0) < 1e-13);
        CHECK(std::abs(l.w()) < 1e-13);
        CHECK(std::abs(r.z() - 1.0) < 1e-13);
        CHECK(std::abs(r.w()) < 1e-13);
    }
    CHECK_THROWS_AS(quat_inverse(Quaternion{}), Error);
    try {
        quat_inverse(Quaternion{});
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::SingularQuaternion);
    }
}

TEST_CASE("determinant on dyadic rationals") {
    // dyadic inputs keep every product exact
    const double vals[] = {0.5, -1.25, 3.0, 0.125, -2.75};
    for (double a : vals)
        for (double b : vals) {
            const Quaternion q{{a, b}, {b, -a * 0.5}};
            const Mat2c m = q.matrix();
            const Complex det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            CHECK(det.imag() == 0.0);
            CHECK(det.real() == q.norm_sq());
        }
}

TEST_CASE("matrix round trip and non-finite rejection") {
    const Quaternion q{{1.5, -0.25}, {0.75, 2.0}};
    CHECK(Quaternion::from_matrix(q.matrix()) == q);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK_THROWS_AS(Quaternion(Complex{nan, 0.0}, Complex{}), Error);
    CHECK_THROWS_AS(Quaternion(Complex{}, Complex{0.0, INFINITY}), Error);
}

TEST_CASE("pair accessors read the resolvent entries") {
    const QuaternionPair pair{Quaternion{{1.0, 1.0}, {0.0, 0.0}}, Quaternion{{0.2, -0.3}, {0.7, 0.1}}};
    const Mat2c g = pair.resolvent();
    CHECK(pair.p_z() == g[0][0]);
    CHECK(pair.p_w() == g[0][1]);
}
