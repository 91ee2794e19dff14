#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "gmfs/coeff.hpp"
#include "gmfs/error.hpp"
#include "gmfs/expansions.hpp"
#include "support.hpp"

using namespace gmfs;

TEST_SUITE("expansions") {

TEST_CASE("zeta on the time component") {
    Interval iv(1.0, 3.0);
    auto s = OrthonormalSystem::legendre(iv);
    auto w = sample_wiener(make_partition(iv, 128), 1, 3);
    CHECK(zeta_from_path(w, s, 0, 0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-13));
    double end = 0.0;
    for (double d : w.increments[1]) end += d;
    CHECK(zeta_from_path(w, s, 0, 1) == doctest::Approx(end / std::sqrt(2.0)).epsilon(1e-13));
}

TEST_CASE("zeta is standard normal and uncorrelated") {
    Interval iv(0.0, 1.0);
    auto s = OrthonormalSystem::trigonometric(iv);
    auto P = make_partition(iv, 256);
    BasisGrid grid(s, P, 4);
    std::vector<double> z1, z2, z1b;
    for (std::uint64_t seed = 0; seed < 3000; ++seed) {
        auto v = wiener_variables(sample_wiener(P, 2, seed), grid, {1, 2}, 4);
        z1.push_back(v(0, 1));
        z2.push_back(v(0, 2));
        z1b.push_back(v(1, 1));
        CHECK(v(0, 3) == zeta_from_path(sample_wiener(P, 2, seed), s, 3, 1));
    }
    CHECK(std::abs(ref::z_mean(z1)) < 4.0);
    CHECK(std::abs(ref::variance(z1) - 1.0) < 4.0 * ref::variance_se(z1));
    CHECK(std::abs(ref::correlation(z1, z2)) < 4.0 / std::sqrt(3000.0));
    CHECK(std::abs(ref::correlation(z1, z1b)) < 4.0 / std::sqrt(3000.0));
}

TEST_CASE("pi with a single jump") {
    auto pi = std::make_shared<ExponentialIntensity>(1.5);
    Interval iv(0.0, 1.0);
    PoissonRealization r{iv, 1, 0, pi, {{}, {{0.3, 2.0}}}};
    auto s = OrthonormalSystem::legendre(iv);
    MarkFactor y{1.0, 1.0};
    CHECK(pi_from_realization(r, s, 1, y, 1, PoissonMode::raw) == doctest::Approx(2.0 * s(1, 0.3)));
    CHECK(pi_from_realization(r, s, 1, y, 1) == doctest::Approx(2.0 * s(1, 0.3)).epsilon(1e-12));
    CHECK(pi_from_realization(r, s, 0, y, 1) == doctest::Approx(2.0 - 1.5));
    CHECK(pi_from_realization(r, s, 0, y, 0) == doctest::Approx(1.5));
    auto ints = basis_integrals(s, 3);
    CHECK(ints[0] == doctest::Approx(1.0));
    CHECK(std::abs(ints[2]) < 1e-14);
}

TEST_CASE("pi moments") {
    auto pi = std::make_shared<ExponentialIntensity>(3.0);
    Interval iv(0.0, 1.0);
    auto s = OrthonormalSystem::legendre(iv);
    auto ints = basis_integrals(s, 3);
    std::vector<double> p0, p2;
    for (std::uint64_t seed = 0; seed < 4000; ++seed) {
        auto v = poisson_variables(sample_poisson(iv, 1, pi, seed), s, {1}, {{1.0, 1.0}}, 3, ints);
        p0.push_back(v(0, 0));
        p2.push_back(v(0, 2));
    }
    // variance int phi^2 * int y^2 dPi = 2 Lambda
    CHECK(std::abs(ref::z_mean(p0)) < 4.0);
    CHECK(std::abs(ref::variance(p0) - 6.0) < 4.0 * ref::variance_se(p0));
    CHECK(std::abs(ref::variance(p2) - 6.0) < 4.0 * ref::variance_se(p2));
    CHECK(std::abs(ref::correlation(p0, p2)) < 4.0 / std::sqrt(4000.0));
}

TEST_CASE("xi with unit density is zeta") {
    Interval iv(0.0, 1.0);
    auto s = OrthonormalSystem::legendre(iv);
    auto P = make_partition(iv, 64);
    BasisGrid grid(s, P, 5);
    auto m = sample_gaussian_martingale(P, 2, WeightFunction::constant(1.0), 12);
    auto a = martingale_variables(m, s, grid, {1, 2}, 5);
    auto b = wiener_variables(sample_wiener(P, 2, 12), grid, {1, 2}, 5);
    CHECK(a.table == b.table);
    REQUIRE(a.pair_weight);
    CHECK(*a.pair_weight == 1.0);
    CHECK(xi_from_path(m, s, 2, 1) == a(0, 2));
}

TEST_CASE("xi under a linear density with the weighted Bessel basis") {
    const double T = 1.0;
    auto s = OrthonormalSystem::bessel_weighted(T, 0, 4);
    auto P = make_partition(Interval(0.0, T), 1024);
    auto rho = WeightFunction::identity();
    auto var = martingale_cell_variances(P, rho);
    BasisGrid grid(s, P, 3);
    std::vector<double> x0, x1;
    for (std::uint64_t seed = 0; seed < 3000; ++seed) {
        auto v = martingale_variables(sample_gaussian_martingale(P, 1, rho, var, seed), s, grid, {1}, 3);
        x0.push_back(v(0, 0));
        x1.push_back(v(0, 1));
    }
    CHECK(std::abs(ref::variance(x0) - 1.0) < 4.0 * ref::variance_se(x0));
    CHECK(std::abs(ref::variance(x1) - 1.0) < 4.0 * ref::variance_se(x1));
    CHECK(std::abs(ref::correlation(x0, x1)) < 4.0 / std::sqrt(3000.0));
    CHECK(martingale_pair_weight(rho, s.weight()) == 1.0);
    CHECK(martingale_pair_weight(WeightFunction::constant(2.0), WeightFunction::constant(1.0)) == 2.0);
    CHECK_FALSE(martingale_pair_weight(rho, WeightFunction::constant(1.0)).has_value());
}

TEST_CASE("k = 1 expansion is the endpoint") {
    Interval iv(0.0, 2.0);
    auto s = OrthonormalSystem::legendre(iv);
    auto P = make_partition(iv, 128);
    BasisGrid grid(s, P, 6);
    auto w = sample_wiener(P, 1, 4);
    auto C = coeff_tensor(Kernel::unit(iv, 1), s, {5}, false);
    auto v = wiener_variables(w, grid, {1}, 6);
    double end = 0.0;
    for (double d : w.increments[1]) end += d;
    CHECK(expand(C, v, {1}, Correction::explicit_formulas()).value == doctest::Approx(end).epsilon(1e-12));
}

TEST_CASE("p = 0 gives the Ito square identity") {
    Interval iv(0.0, 1.5);
    auto s = OrthonormalSystem::legendre(iv);
    auto P = make_partition(iv, 64);
    BasisGrid grid(s, P, 1);
    auto w = sample_wiener(P, 2, 4);
    auto C = coeff_tensor(Kernel::unit(iv, 2), s, {0, 0}, false);
    double e1 = 0.0, e2 = 0.0;
    for (int l = 0; l < 64; ++l) {
        e1 += w.increments[1][l];
        e2 += w.increments[2][l];
    }
    auto same = wiener_variables(w, grid, {1, 1}, 1);
    CHECK(expand(C, same, {1, 1}, Correction::explicit_formulas()).value == doctest::Approx(0.5 * (e1 * e1 - 1.5)).epsilon(1e-12));
    CHECK(expand(C, same, {1, 1}, Correction::pairing()).value == doctest::Approx(0.5 * (e1 * e1 - 1.5)).epsilon(1e-12));
    auto diff = wiener_variables(w, grid, {1, 2}, 1);
    CHECK(expand(C, diff, {1, 2}, Correction::explicit_formulas()).value == doctest::Approx(0.5 * e1 * e2).epsilon(1e-12));
}

TEST_CASE("distinct components need no correction") {
    Interval iv(0.0, 1.0);
    auto s = OrthonormalSystem::trigonometric(iv);
    auto P = make_partition(iv, 64);
    BasisGrid grid(s, P, 5);
    auto v = wiener_variables(sample_wiener(P, 3, 1), grid, {1, 2, 3}, 5);
    auto C = coeff_tensor(Kernel::unit(iv, 3), s, {4, 4, 4}, false);
    double plain = contract_product(C, v);
    CHECK(expand(C, v, {1, 2, 3}, Correction::explicit_formulas()).value == doctest::Approx(plain).epsilon(1e-13));
    CHECK(expand(C, v, {1, 2, 3}, Correction::pairing()).value == doctest::Approx(plain).epsilon(1e-13));
}

TEST_CASE("pairing form equals the explicit formulas") {
    Interval iv(0.0, 1.0);
    auto s = OrthonormalSystem::legendre(iv);
    std::mt19937_64 eng(5);
    std::normal_distribution<double> nd;
    const std::vector<IndexCombo> combos{{1}, {1, 1}, {0, 1}, {1, 1, 1}, {1, 2, 1}, {2, 0, 2}, {1, 1, 1, 1}, {1, 2, 1, 2},
                                         {2, 1, 1, 2}, {1, 1, 0, 1}, {3, 1, 2, 3}, {1, 1, 2, 2}};
    for (const auto& combo : combos) {
        const int k = static_cast<int>(combo.size());
        Kernel K(iv, std::vector<KernelFactor>(k, KernelFactor::exponential(0.7)));
        auto C = coeff_tensor(K, s, std::vector<int>(k, 3), false);
        BasisVariables v;
        v.combo = combo;
        v.table.assign(k, std::vector<double>(4));
        for (int g = 0; g < k; ++g)
            for (int j = 0; j < 4; ++j) v.table[g][j] = combo[g] == 0 ? 0.3 * j : nd(eng);
        for (double w : {1.0, 0.4}) {
            CAPTURE(k);
            CHECK(expand_pairing(C, v, combo, w) == doctest::Approx(expand_explicit(C, v, combo, w)).epsilon(1e-12));
        }
    }
}

TEST_CASE("prelimit correction agrees with the discrete oracle") {
    // sum_{l1 != l2 ...} of the projected kernel over distinct cells is the
    // expansion with the coincident tuples removed
    Interval iv(0.0, 1.0);
    auto s = OrthonormalSystem::legendre(iv);
    auto P = make_partition(iv, 32);
    BasisGrid grid(s, P, 4);
    auto w = sample_wiener(P, 1, 6);
    auto C = coeff_tensor(Kernel::unit(iv, 2), s, {3, 3}, false);
    auto inc = slot_increments(w, {1, 1}, 32);
    auto v = wiener_variables(w, grid, {1, 1}, 4);
    PrelimitContext ctx{&inc, &grid};
    double got = expand(C, v, {1, 1}, Correction::prelimit(32), &ctx).value;
    double want = contract_product(C, v) - prelimit_correction(C, inc, grid);
    CHECK(got == doctest::Approx(want).epsilon(1e-13));
    CHECK_THROWS_AS(expand(C, v, {1, 1}, Correction::prelimit(32)), ArgumentError);
}

TEST_CASE("error cases") {
    Interval iv(0.0, 1.0);
    auto s = OrthonormalSystem::legendre(iv);
    auto P = make_partition(iv, 64);
    BasisGrid grid(s, P, 3);
    auto m = sample_gaussian_martingale(P, 1, WeightFunction::identity(), 1);
    auto v = martingale_variables(m, s, grid, {1, 1}, 3);
    CHECK_FALSE(v.pair_weight.has_value());
    auto C = coeff_tensor(Kernel::unit(iv, 2), s, {2, 2}, false);
    CHECK_THROWS_AS(expand(C, v, {1, 1}, Correction::explicit_formulas()), ArgumentError);
    auto w = wiener_variables(sample_wiener(P, 1, 1), grid, {1, 1}, 3);
    CHECK_THROWS_AS(expand(coeff_tensor(Kernel::unit(iv, 2), s, {3, 3}, false), w, {1, 1}, Correction::pairing()),
                    ArgumentError);
    CHECK_THROWS_AS(expand(C, w, {1}, Correction::pairing()), ArgumentError);
}

TEST_CASE("weighted expansion checks the density ratio") {
    const double T = 1.0;
    auto s = OrthonormalSystem::bessel_weighted(T, 0, 4);
    auto P = make_partition(Interval(0.0, T), 256);
    BasisGrid grid(s, P, 3);
    auto C = coeff_tensor(Kernel::unit(Interval(0.0, T), 1), s, {2}, true);
    auto m = sample_gaussian_martingale(P, 1, WeightFunction::constant(1.0), 2);
    auto v = martingale_variables(m, s, grid, {1}, 3);
    WeightCheck strict;
    strict.bound = 100.0;
    CHECK_THROWS_AS(expand_weighted(C, v, {1}, Correction::explicit_formulas(), nullptr, strict), ArgumentError);
    auto ok = martingale_variables(sample_gaussian_martingale(P, 1, WeightFunction::identity(), 2), s, grid, {1}, 3);
    CHECK_NOTHROW(expand_weighted(C, ok, {1}, Correction::explicit_formulas(), nullptr, strict));
}

}
