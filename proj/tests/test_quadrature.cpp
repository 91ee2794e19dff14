#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "gmfs/error.hpp"
#include "gmfs/quadrature.hpp"
#include "support.hpp"

using namespace gmfs;

TEST_SUITE("quadrature") {

TEST_CASE("rule matches the independent nodes") {
    for (int n : {2, 7, 20, 32}) {
        const auto& r = GaussLegendreRule::get(n);
        auto want = ref::gauss(n);
        std::vector<std::pair<double, double>> got, exp;
        for (int i = 0; i < n; ++i) {
            got.emplace_back(r.nodes()[i], r.weights()[i]);
            exp.emplace_back(want.x[i], want.w[i]);
        }
        std::sort(got.begin(), got.end());
        std::sort(exp.begin(), exp.end());
        for (int i = 0; i < n; ++i) {
            CHECK(std::abs(got[i].first - exp[i].first) < 1e-14);
            CHECK(std::abs(got[i].second - exp[i].second) < 1e-13);
        }
    }
}

TEST_CASE("polynomial exactness") {
    const auto& r = GaussLegendreRule::get(8);
    for (int d = 0; d < 16; ++d) {
        double s = 0.0;
        for (int i = 0; i < r.size(); ++i) s += r.weights()[i] * std::pow(r.nodes()[i], d);
        double want = (d % 2 == 0) ? 2.0 / (d + 1) : 0.0;
        CHECK(std::abs(s - want) < 1e-14);
    }
}

TEST_CASE("cumulative matrix integrates polynomials") {
    const auto& r = GaussLegendreRule::get(10);
    for (int i = 0; i < r.size(); ++i) {
        double xi = r.nodes()[i], s = 0.0;
        for (int m = 0; m < r.size(); ++m) s += r.cumulative(i, m) * std::pow(r.nodes()[m], 3);
        CHECK(std::abs(s - (std::pow(xi, 4) - 1.0) / 4.0) < 1e-14);
    }
}

TEST_CASE("panel mesh cumulative") {
    PanelMesh mesh({0.0, 0.5, 1.5, 2.0}, 6);
    std::vector<double> vals(mesh.node_count()), cum(mesh.node_count());
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = mesh.nodes()[i] * mesh.nodes()[i];
    CHECK(mesh.integrate(vals) == doctest::Approx(8.0 / 3.0).epsilon(1e-14));
    mesh.cumulative(vals, cum);
    for (std::size_t i = 0; i < vals.size(); ++i) CHECK(std::abs(cum[i] - std::pow(mesh.nodes()[i], 3) / 3.0) < 1e-14);
    CHECK(mesh.refined().panel_count() == 6);
}

TEST_CASE("adaptive integrals") {
    CHECK(integrate([](double x) { return std::exp(x); }, 0.0, 1.0).value == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
    CHECK(integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0).value == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
    std::vector<double> bp{0.3};
    auto step = [](double x) { return x < 0.3 ? 1.0 : -2.0; };
    CHECK(integrate(step, 0.0, 1.0, bp).value == doctest::Approx(0.3 - 1.4).epsilon(1e-14));
}

TEST_CASE("non-convergence raises") {
    QuadratureSpec spec;
    spec.max_depth = 2;
    spec.nodes_per_panel = 4;
    auto nasty = [](double x) { return std::sin(1.0 / (x + 1e-4)); };
    CHECK_THROWS_AS(integrate(nasty, 0.0, 1.0, {}, spec), QuadratureError);
}

TEST_CASE("initial edges merge breakpoints") {
    Interval iv(0.0, 1.0);
    std::vector<double> bp{0.25, 0.25 + 1e-17, 1.5, -1.0, 0.6};
    auto e = initial_edges(iv, 2, bp);
    CHECK(e.front() == 0.0);
    CHECK(e.back() == 1.0);
    CHECK(e.size() == 5);
}

}
