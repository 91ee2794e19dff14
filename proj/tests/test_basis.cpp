#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gmfs/basis.hpp"
#include "gmfs/bessel.hpp"
#include "gmfs/error.hpp"
#include "support.hpp"

using namespace gmfs;

TEST_SUITE("basis") {

TEST_CASE("evaluation examples") {
    Interval u(0.0, 1.0);
    CHECK(eval_basis(OrthonormalSystem::legendre(u), 0, 0.3) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(eval_basis(OrthonormalSystem::trigonometric(u), 0, 0.7) == doctest::Approx(1.0).epsilon(1e-15));
    auto h = OrthonormalSystem::haar(u);
    CHECK(h(1, 0.25) == 1.0);
    CHECK(h(1, 0.75) == -1.0);
    CHECK(h(2, 0.1) == doctest::Approx(std::numbers::sqrt2));
    CHECK(h(2, 0.3) == doctest::Approx(-std::numbers::sqrt2));
    CHECK(h(2, 0.6) == 0.0);
    auto rw = OrthonormalSystem::rademacher_walsh(u);
    // j = 3 -> r_1 r_2
    CHECK(rw(3, 0.1) == 1.0);
    CHECK(rw(3, 0.3) == -1.0);
    CHECK(rw(3, 0.6) == -1.0);
    CHECK(rw(3, 0.9) == 1.0);
}

TEST_CASE("legendre matches std::legendre on a shifted interval") {
    Interval iv(2.0, 3.5);
    auto s = OrthonormalSystem::legendre(iv);
    for (int j = 0; j < 30; ++j)
        for (double x : {2.0, 2.13, 2.75, 3.4, 3.5})
            CHECK(s(j, x) == doctest::Approx(ref::legendre(j, x, 2.0, 3.5)).epsilon(1e-12));
}

TEST_CASE("gram matrices are the identity") {
    Interval iv(0.0, 2.0);
    auto check = [](const OrthonormalSystem& s, int count) {
        auto G = gram_matrix(s, count);
        CAPTURE(s.name());
        CHECK(identity_deviation(G) < gram_tolerance(s));
        CHECK(identity_deviation(G) < 1e-9);
    };
    check(OrthonormalSystem::legendre(iv), 25);
    check(OrthonormalSystem::trigonometric(iv), 25);
    check(OrthonormalSystem::haar(iv), 32);
    check(OrthonormalSystem::rademacher_walsh(iv), 32);
    check(OrthonormalSystem::bessel_weighted(2.0, 0, 16), 16);
    check(OrthonormalSystem::bessel_unit(Interval(0.5, 2.0), 1, 16), 16);
}

TEST_CASE("weighted bessel gram against an independent quadrature") {
    const double T = 1.5;
    auto s = OrthonormalSystem::bessel_weighted(T, 2, 6);
    for (int a = 0; a < 6; ++a)
        for (int b = 0; b <= a; ++b) {
            double g = ref::integrate([&](double x) { return x * s(a, x) * s(b, x); }, 0.0, T, 128);
            CHECK(g == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-10).scale(1.0));
        }
}

TEST_CASE("right continuity at breakpoints") {
    Interval u(0.0, 1.0);
    auto h = OrthonormalSystem::haar(u);
    for (long j = 1; j < 16; ++j) {
        for (double b : h.breakpoints(j)) {
            CHECK(h(j, b) == h(j, b + 1e-12));
        }
    }
    CHECK(h(1, 0.5) == -1.0);
    auto rw = OrthonormalSystem::rademacher_walsh(u);
    CHECK(rw(1, 0.5) == -1.0);
    CHECK(h.breakpoints(0).empty());
    CHECK(OrthonormalSystem::legendre(u).breakpoints(5).empty());
}

TEST_CASE("index range errors") {
    Interval u(0.0, 1.0);
    auto rw = OrthonormalSystem::rademacher_walsh(u, 4);
    CHECK(rw.capacity() == 16);
    CHECK_NOTHROW(rw(15, 0.5));
    CHECK_THROWS_AS(rw(16, 0.5), RangeError);
    CHECK_THROWS_AS(OrthonormalSystem::legendre(u)(-1, 0.5), RangeError);
    auto b = OrthonormalSystem::bessel_weighted(1.0, 0, 5);
    CHECK(b.capacity() == 5);
    CHECK_THROWS_AS(b(5, 0.5), RangeError);
    CHECK_THROWS_AS(OrthonormalSystem::haar(u)(1L << 31, 0.5), RangeError);
}

TEST_CASE("bessel_j against std::cyl_bessel_j") {
    for (int n = 0; n <= 5; ++n)
        for (double x : {0.0, 1e-3, 0.5, 2.0, 7.3, 15.0, 40.0, 90.0})
            CHECK(bessel_j(n, x) == doctest::Approx(std::cyl_bessel_j(n, x)).epsilon(1e-12).scale(1.0));
}

TEST_CASE("bessel roots") {
    for (int n : {0, 1, 3}) {
        auto table = bessel_roots(n, 40);
        auto want = ref::bessel_zeros(n, 40);
        REQUIRE(table.roots.size() == 40);
        for (int i = 0; i < 40; ++i) {
            CHECK(std::abs(table.roots[i] - want[i]) < 1e-12);
            if (i > 0) {
                CHECK(table.roots[i] > table.roots[i - 1]);
                CHECK(table.roots[i] - table.roots[i - 1] < std::numbers::pi + 1.0);
            }
        }
    }
    CHECK(bessel_roots(0, 1).roots[0] == doctest::Approx(2.404825557695773).epsilon(1e-14));
}

TEST_CASE("projection error of x decreases") {
    Interval u(0.0, 1.0);
    auto proj_err = [&](const OrthonormalSystem& s, int p) {
        // ||f||^2 - sum <f, phi_j>^2 for f(x) = x
        double sum = 0.0;
        for (int j = 0; j <= p; ++j) {
            double c = ref::integrate([&](double x) { return x * s(j, x) * s.weight()(x); }, 0.0, 1.0, 256);
            sum += c * c;
        }
        return 1.0 / 3.0 - sum;
    };
    auto leg = OrthonormalSystem::legendre(u);
    CHECK(std::abs(proj_err(leg, 1)) < 1e-12);
    auto trig = OrthonormalSystem::trigonometric(u);
    CHECK(proj_err(trig, 4) < proj_err(trig, 2));
    CHECK(proj_err(trig, 16) < proj_err(trig, 4));
    CHECK(proj_err(trig, 16) > 0.0);
}

TEST_CASE("make_system names") {
    Interval u(0.0, 1.0);
    CHECK(make_system("legendre", u, 4).kind() == OrthonormalSystem::Kind::legendre);
    CHECK(make_system("trig", u, 4).kind() == OrthonormalSystem::Kind::trigonometric);
    CHECK(make_system("walsh", u, 4).kind() == OrthonormalSystem::Kind::rademacher_walsh);
    CHECK(make_system("haar", u, 4).kind() == OrthonormalSystem::Kind::haar);
    auto b = make_system("bessel1", u, 12);
    CHECK(b.kind() == OrthonormalSystem::Kind::bessel_weighted);
    CHECK(b.bessel_order() == 1);
    CHECK(b.capacity() >= 12);
    CHECK(make_system("bessel_unit0", Interval(1.0, 2.0), 4).kind() == OrthonormalSystem::Kind::bessel_unit);
    CHECK_THROWS_AS(make_system("nosuch", u, 4), ArgumentError);
    CHECK_THROWS(make_system("bessel2", Interval(0.5, 1.0), 4));
}

}
