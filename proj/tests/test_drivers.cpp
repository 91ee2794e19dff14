#include <doctest.h>

#include <cmath>
#include <memory>
#include <vector>

#include "gmfs/drivers.hpp"
#include "gmfs/error.hpp"
#include "gmfs/io.hpp"
#include "support.hpp"

using namespace gmfs;

TEST_SUITE("drivers") {

TEST_CASE("partitions") {
    auto P = make_partition(Interval(1.0, 3.0), 4);
    CHECK(P.size() == 4);
    CHECK(P.node(0) == 1.0);
    CHECK(P.node(4) == 3.0);
    CHECK(P.step(2) == doctest::Approx(0.5));
    CHECK(P.max_step() == doctest::Approx(0.5));
    auto Q = P.coarsened(2);
    CHECK(Q.size() == 2);
    CHECK(Q.node(1) == P.node(2));
    CHECK_THROWS_AS(P.coarsened(3), ArgumentError);
    CHECK_THROWS_AS(make_partition(Interval(0.0, 1.0), 0), ArgumentError);
    CHECK_THROWS_AS(Partition(Interval(0.0, 1.0), {0.0, 0.6, 0.5, 1.0}), ArgumentError);
    CHECK_THROWS_AS(Partition(Interval(0.0, 1.0), {0.0, 0.5}), ArgumentError);
}

TEST_CASE("wiener paths") {
    auto P = make_partition(Interval(0.0, 2.0), 64);
    auto a = sample_wiener(P, 3, 99), b = sample_wiener(P, 3, 99), c = sample_wiener(P, 3, 100);
    CHECK(a.increments == b.increments);
    CHECK(a.increments[1] != c.increments[1]);
    for (int l = 0; l < 64; ++l) CHECK(a.increments[0][l] == P.step(l));
    // components are independent substreams: m does not change earlier ones
    auto d = sample_wiener(P, 1, 99);
    CHECK(d.increments[1] == a.increments[1]);
    auto co = coarsened(a, 4);
    CHECK(co.partition.size() == 16);
    CHECK(co.increments[2][3] == doctest::Approx(a.increments[2][12] + a.increments[2][13] + a.increments[2][14] + a.increments[2][15]));
}

TEST_CASE("wiener increments have the right law") {
    auto P = make_partition(Interval(0.0, 1.0), 16);
    std::vector<double> end1, end2, cell;
    for (std::uint64_t s = 0; s < 4000; ++s) {
        auto w = sample_wiener(P, 2, s);
        double e1 = 0.0, e2 = 0.0;
        for (int l = 0; l < 16; ++l) {
            e1 += w.increments[1][l];
            e2 += w.increments[2][l];
        }
        end1.push_back(e1);
        end2.push_back(e2);
        cell.push_back(w.increments[1][5]);
    }
    CHECK(std::abs(ref::z_mean(end1)) < 4.0);
    CHECK(std::abs(ref::variance(end1) - 1.0) < 4.0 * ref::variance_se(end1));
    CHECK(std::abs(ref::variance(cell) - 1.0 / 16) < 4.0 * ref::variance_se(cell));
    CHECK(std::abs(ref::correlation(end1, end2)) < 4.0 / std::sqrt(4000.0));
}

TEST_CASE("exponential intensity") {
    ExponentialIntensity pi(5.0);
    CHECK(pi.total_mass() == 5.0);
    CHECK(pi.integral({2.0, 1.0}) == doctest::Approx(10.0));
    CHECK(pi.abs_moment({1.0, 1.0}, 2.0) == doctest::Approx(10.0));
    CHECK(pi.abs_moment({-2.0, 0.5}, 3.0) == doctest::Approx(5.0 * 8.0 * std::tgamma(2.5)));
    CHECK_NOTHROW(check_mark_moments(pi, {1.0, 1.0}, 8));
    CHECK_THROWS_AS(ExponentialIntensity(0.0), ArgumentError);
}

TEST_CASE("poisson realizations") {
    auto pi = std::make_shared<ExponentialIntensity>(5.0);
    Interval u(0.0, 1.0);
    double total = 0.0;
    const int reps = 2000;
    for (int s = 0; s < reps; ++s) {
        auto r = sample_poisson(u, 2, pi, s);
        CHECK(r.jumps[0].empty());
        total += static_cast<double>(r.jumps[1].size());
        for (std::size_t q = 1; q < r.jumps[1].size(); ++q) CHECK(r.jumps[1][q - 1].time <= r.jumps[1][q].time);
    }
    CHECK(total / reps > 4.8);
    CHECK(total / reps < 5.2);
    auto a = sample_poisson(u, 2, pi, 7), b = sample_poisson(u, 2, pi, 7);
    REQUIRE(a.jumps[2].size() == b.jumps[2].size());
    for (std::size_t q = 0; q < a.jumps[2].size(); ++q) CHECK(a.jumps[2][q].mark == b.jumps[2][q].mark);
    PoissonOptions tight;
    tight.jump_budget = 10.0;
    CHECK_THROWS_AS(sample_poisson(Interval(0.0, 3.0), 1, pi, 1, tight), SizeError);
}

TEST_CASE("compensated integrals") {
    auto pi = std::make_shared<ExponentialIntensity>(1.0);
    PoissonRealization r{Interval(0.0, 5.0), 1, 0, pi, {{}, {{0.5, 2.0}, {1.5, 0.1}, {4.0, 3.0}}}};
    auto one = [](double) { return 1.0; };
    // 3 jumps minus 5 * Pi(Y)
    CHECK(compensated_integral(r, 1, one, {1.0, 0.0}) == doctest::Approx(-2.0));
    CHECK(compensated_integral(r, 1, one, {1.0, 1.0}) == doctest::Approx(5.1 - 5.0));
    CHECK(compensated_integral(r, 0, one, {1.0, 0.0}) == doctest::Approx(5.0));
    auto lin = [](double s) { return s; };
    CHECK(compensated_integral(r, 1, lin, {1.0, 0.0}) == doctest::Approx(6.0 - 12.5));
}

TEST_CASE("compensated integral is centred with the isometry variance") {
    auto pi = std::make_shared<ExponentialIntensity>(4.0);
    Interval u(0.0, 1.0);
    auto h = [](double s) { return std::cos(3.0 * s); };
    MarkFactor phi{1.0, 1.0};
    std::vector<double> v;
    for (int s = 0; s < 4000; ++s) v.push_back(compensated_integral(sample_poisson(u, 1, pi, s), 1, h, phi));
    // int h^2 ds * int y^2 dPi
    double var = (0.5 + std::sin(6.0) / 12.0) * 8.0;
    CHECK(std::abs(ref::z_mean(v)) < 4.0);
    CHECK(std::abs(ref::variance(v) - var) < 4.0 * ref::variance_se(v));
}

TEST_CASE("gaussian martingales") {
    auto P = make_partition(Interval(0.0, 1.0), 32);
    auto w = sample_wiener(P, 2, 5);
    auto m = sample_gaussian_martingale(P, 2, WeightFunction::constant(1.0), 5);
    CHECK(m.increments == w.increments);
    auto var = martingale_cell_variances(P, WeightFunction::identity());
    double sum = 0.0;
    for (int l = 0; l < 32; ++l) {
        CHECK(var[l] == doctest::Approx(0.5 * (P.node(l + 1) * P.node(l + 1) - P.node(l) * P.node(l))));
        sum += var[l];
    }
    CHECK(sum == doctest::Approx(0.5));
    auto neg = WeightFunction::custom([](double x) { return x - 0.5; }, "shift");
    CHECK_THROWS_AS(martingale_cell_variances(P, neg), ArgumentError);
    auto from = martingale_from_wiener(w, WeightFunction::constant(4.0));
    CHECK(from.increments[1][3] == doctest::Approx(2.0 * w.increments[1][3]));
    CHECK(coarsened(m, 8).partition.size() == 4);
}

TEST_CASE("martingale endpoint variance") {
    auto P = make_partition(Interval(0.0, 1.0), 8);
    auto rho = WeightFunction::identity();
    auto var = martingale_cell_variances(P, rho);
    std::vector<double> end;
    for (std::uint64_t s = 0; s < 4000; ++s) {
        auto m = sample_gaussian_martingale(P, 1, rho, var, s);
        double e = 0.0;
        for (double d : m.increments[1]) e += d;
        end.push_back(e);
    }
    CHECK(std::abs(ref::variance(end) - 0.5) < 4.0 * ref::variance_se(end));
}

TEST_CASE("realization json round trip") {
    auto P = make_partition(Interval(0.0, 1.0), 8);
    auto w = sample_wiener(P, 2, 3);
    auto back = std::get<WienerPath>(realization_from_json(realization_to_json(w)));
    CHECK(back.increments == w.increments);
    CHECK(back.seed == 3);
    auto pi = std::make_shared<ExponentialIntensity>(3.0);
    auto r = sample_poisson(Interval(0.0, 1.0), 1, pi, 11);
    auto rb = std::get<PoissonRealization>(realization_from_json(realization_to_json(r)));
    REQUIRE(rb.jumps[1].size() == r.jumps[1].size());
    for (std::size_t q = 0; q < r.jumps[1].size(); ++q) {
        CHECK(rb.jumps[1][q].time == r.jumps[1][q].time);
        CHECK(rb.jumps[1][q].mark == r.jumps[1][q].mark);
    }
    CHECK(rb.measure->total_mass() == 3.0);
    auto m = sample_gaussian_martingale(P, 1, WeightFunction::identity(), 4);
    auto mb = std::get<GaussianMartingalePath>(realization_from_json(realization_to_json(m)));
    CHECK(mb.increments == m.increments);
}

}
