#include <doctest.h>

#include <omp.h>

#include <cmath>
#include <vector>

#include "gmfs/coeff.hpp"
#include "gmfs/error.hpp"
#include "gmfs/kernel.hpp"
#include "support.hpp"

using namespace gmfs;

TEST_SUITE("coeff") {

TEST_CASE("kernel evaluation") {
    Interval iv(1.0, 3.0);
    Kernel K(iv, {KernelFactor::constant(2.0), KernelFactor::power(2.0), KernelFactor::sqrt_shift()});
    std::vector<double> ts{1.5, 2.0, 2.5};
    CHECK(kernel_eval(K, ts) == doctest::Approx(2.0 * 1.0 * std::sqrt(1.5)));
    std::vector<double> bad{1.5, 2.5, 2.0};
    CHECK(kernel_eval(K, bad) == 0.0);
    std::vector<double> tie{1.5, 1.5, 2.0};
    CHECK(kernel_eval(K, tie) == 0.0);
    CHECK(KernelFactor::exponential(0.5)(3.0, 1.0) == doctest::Approx(std::exp(1.0)));
    CHECK_THROWS_AS(KernelFactor::power(-1.0), ArgumentError);
    CHECK_THROWS_AS(Kernel::unit(iv, 0), ArgumentError);
    CHECK_FALSE(Kernel(iv, {KernelFactor::tabulated({1.0, 3.0}, {0.0, 1.0})}).verified());
}

TEST_CASE("k = 1 coefficients") {
    Interval iv(0.0, 2.0);
    auto K = Kernel::unit(iv, 1);
    auto s = OrthonormalSystem::legendre(iv);
    auto C = coeff_tensor(K, s, {5}, false);
    CHECK(C.at(std::vector<int>{0}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
    for (int j = 1; j <= 5; ++j) CHECK(std::abs(C.at(std::vector<int>{j})) < 1e-14);
}

TEST_CASE("k = 2 against the independent simplex rule") {
    Interval u(0.0, 1.0);
    auto K = Kernel::unit(u, 2);
    auto s = OrthonormalSystem::legendre(u);
    auto C = coeff_tensor(K, s, {4, 4}, false);
    CHECK(C.at(std::vector<int>{0, 0}) == doctest::Approx(0.5).epsilon(1e-13));
    // j_1 is the first (innermost) argument
    CHECK(C.at(std::vector<int>{1, 0}) == doctest::Approx(-std::sqrt(3.0) / 6.0).epsilon(1e-12));
    CHECK(C.at(std::vector<int>{0, 1}) == doctest::Approx(std::sqrt(3.0) / 6.0).epsilon(1e-12));
    for_each_index(C.box(), [&](const MultiIndex& j) {
        double want = ref::simplex2([&](double t1, double t2) { return ref::legendre(j[0], t1, 0, 1) * ref::legendre(j[1], t2, 0, 1); }, 0.0, 1.0);
        CHECK(std::abs(C.at(j) - want) < 1e-12);
    });
}

TEST_CASE("sqrt factor in closed form") {
    Interval iv(1.0, 3.0);
    Kernel K(iv, {KernelFactor::sqrt_shift()});
    auto C = coeff_tensor(K, OrthonormalSystem::legendre(iv), {1}, false);
    CHECK(C.at(std::vector<int>{0}) == doctest::Approx(4.0 / 3.0).epsilon(1e-11));
    CHECK(std::abs(C.at(std::vector<int>{1}) - std::sqrt(3.0) * 4.0 / 15.0) < 1e-9);
}

TEST_CASE("k = 3 with nontrivial factors") {
    Interval iv(2.0, 3.5);
    Kernel K(iv, {KernelFactor::power(2.0), KernelFactor::exponential(-1.0), KernelFactor::constant(3.0)});
    auto s = OrthonormalSystem::legendre(iv);
    auto C = coeff_tensor(K, s, {2, 1, 2}, false);
    for_each_index(C.box(), [&](const MultiIndex& j) {
        double want = ref::simplex3(
            [&](double a, double b, double c) {
                std::vector<double> ts{a, b, c};
                return kernel_eval(K, ts) * ref::legendre(j[0], a, 2, 3.5) * ref::legendre(j[1], b, 2, 3.5) *
                       ref::legendre(j[2], c, 2, 3.5);
            },
            2.0, 3.5);
        CHECK(std::abs(C.at(j) - want) < 1e-10);
    });
    // single coefficient route agrees with the tensor route
    CHECK(coeff(K, s, {1, 0, 2}, false).value == doctest::Approx(C.at(std::vector<int>{1, 0, 2})).epsilon(1e-12));
}

TEST_CASE("size guard and range") {
    Interval u(0.0, 1.0);
    auto K = Kernel::unit(u, 3);
    auto s = OrthonormalSystem::legendre(u);
    CoeffOptions o;
    o.budget = 1000;
    CHECK_THROWS_AS(coeff_tensor(K, s, {10, 10, 10}, false, o), SizeError);
    CHECK_NOTHROW(coeff_tensor(K, s, {9, 9, 9}, false, o));
    auto rw = OrthonormalSystem::rademacher_walsh(u, 3);
    CHECK_THROWS_AS(coeff_tensor(Kernel::unit(u, 1), rw, {8}, false), RangeError);
    CHECK_THROWS_AS(coeff_tensor(K, s, {1, 1}, false), ArgumentError);
    CHECK_THROWS_AS(coeff_tensor(Kernel::unit(Interval(0, 2), 1), s, {1}, false), ArgumentError);
}

TEST_CASE("storage order and sub boxes") {
    Interval u(0.0, 1.0);
    auto C = coeff_tensor(Kernel::unit(u, 2), OrthonormalSystem::trigonometric(u), {3, 2}, false);
    CHECK(C.size() == 12);
    CHECK(C.flat_index(std::vector<int>{1, 0}) == 1);
    CHECK(C.flat_index(std::vector<int>{0, 1}) == 4);
    CHECK(C.multi_index(7) == MultiIndex{3, 1});
    auto S = C.sub_box({1, 1});
    CHECK(S.at(std::vector<int>{1, 1}) == C.at(std::vector<int>{1, 1}));
    CHECK_THROWS_AS(C.sub_box({4, 1}), RangeError);
    CHECK_THROWS_AS(C.at(std::vector<int>{4, 0}), RangeError);
}

TEST_CASE("swap symmetry") {
    // C_ab + C_ba = (int phi_a)(int phi_b) for the unit kernel
    Interval iv(0.0, 1.0);
    for (auto s : {OrthonormalSystem::trigonometric(iv), OrthonormalSystem::haar(iv), OrthonormalSystem::legendre(iv)}) {
        auto C = coeff_tensor(Kernel::unit(iv, 2), s, {6, 6}, false);
        std::vector<double> I(7);
        for (int j = 0; j < 7; ++j) I[j] = coeff_tensor(Kernel::unit(iv, 1), s, {6}, false).at(std::vector<int>{j});
        for (int a = 0; a < 7; ++a)
            for (int b = 0; b < 7; ++b)
                CHECK(std::abs(C.at(std::vector<int>{a, b}) + C.at(std::vector<int>{b, a}) - I[a] * I[b]) < 1e-12);
    }
}

TEST_CASE("parseval partial sums") {
    Interval iv(0.0, 1.0);
    auto K = Kernel::unit(iv, 2);
    auto s = OrthonormalSystem::legendre(iv);
    auto C = coeff_tensor(K, s, {12, 12}, false);
    double prev = -1.0;
    for (int p = 0; p <= 12; p += 3) {
        auto r = parseval_partial(C.sub_box({p, p}));
        CHECK(r.kernel_norm_sq == doctest::Approx(0.5));
        CHECK(r.residual >= -1e-14);
        CHECK(r.partial_sum > prev);
        prev = r.partial_sum;
    }
    auto r0 = parseval_partial(C.sub_box({0, 0}));
    CHECK(r0.partial_sum == doctest::Approx(0.25));
    auto r1 = parseval_partial(C.sub_box({1, 1}));
    CHECK(r1.partial_sum == doctest::Approx(0.25 + 2.0 / 12.0).epsilon(1e-12));
}

TEST_CASE("analytic norm agrees with quadrature") {
    Interval iv(0.5, 2.0);
    Kernel K(iv, {KernelFactor::sqrt_shift(), KernelFactor::power(1.5), KernelFactor::constant(3.0)});
    double a = kernel_norm_sq(K, WeightFunction::constant(1.0), NormMethod::analytic);
    double q = kernel_norm_sq(K, WeightFunction::constant(1.0), NormMethod::quadrature);
    CHECK(a == doctest::Approx(q).epsilon(1e-10));
    Kernel E(iv, {KernelFactor::exponential(1.0)});
    CHECK_THROWS_AS(kernel_norm_sq(E, WeightFunction::constant(1.0), NormMethod::analytic), ArgumentError);
    CHECK(kernel_norm_sq(E) == doctest::Approx((std::exp(3.0) - 1.0) / 2.0).epsilon(1e-10));
    Kernel W(Interval(0.0, 1.0), {KernelFactor::constant(1.0), KernelFactor::constant(1.0)});
    // int_{t1<t2} t1 t2 = 1/8
    CHECK(kernel_norm_sq(W, WeightFunction::identity()) == doctest::Approx(0.125).epsilon(1e-12));
}

TEST_CASE("weighted coefficients") {
    auto s = OrthonormalSystem::bessel_weighted(1.0, 0, 8);
    auto K = Kernel::unit(Interval(0.0, 1.0), 2);
    auto C = coeff_tensor(K, s, {5, 5}, true);
    for_each_index(C.box(), [&](const MultiIndex& j) {
        double want = ref::simplex2([&](double a, double b) { return a * b * s(j[0], a) * s(j[1], b); }, 0.0, 1.0, 60);
        CHECK(std::abs(C.at(j) - want) < 1e-11);
    });
    auto r = parseval_partial(C);
    CHECK(r.kernel_norm_sq == doctest::Approx(0.125));
    CHECK(r.residual > 0.0);
    // unit-weight system: weighted and plain coincide
    auto leg = OrthonormalSystem::legendre(Interval(0.0, 1.0));
    auto A = coeff_tensor(K, leg, {3, 3}, true), B = coeff_tensor(K, leg, {3, 3}, false);
    for (std::size_t i = 0; i < A.size(); ++i) CHECK(A[i] == doctest::Approx(B[i]).epsilon(1e-14));
}

TEST_CASE("serial and parallel tensors are identical") {
    omp_set_num_threads(4);
    Interval iv(0.0, 1.0);
    Kernel K(iv, {KernelFactor::exponential(0.3), KernelFactor::sqrt_shift(), KernelFactor::constant(1.0)});
    auto s = OrthonormalSystem::trigonometric(iv);
    CoeffOptions ser, par;
    ser.exec = Execution::serial;
    par.exec = Execution::parallel;
    auto A = coeff_tensor(K, s, {5, 4, 3}, false, ser);
    auto B = coeff_tensor(K, s, {5, 4, 3}, false, par);
    REQUIRE(A.size() == B.size());
    for (std::size_t i = 0; i < A.size(); ++i) CHECK(A[i] == B[i]);
}

}
