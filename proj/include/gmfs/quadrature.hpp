#pragma once

#include <functional>
#include <span>
#include <vector>

#include "gmfs/interval.hpp"

namespace gmfs {

/// Gauss-Legendre rule on [-1, 1] together with the spectral cumulative
/// integration matrix on the same nodes:
///   cumulative(i, m) = integral from -1 to x_i of the m-th Lagrange
///   polynomial, so sum_m cumulative(i, m) f(x_m) = int_{-1}^{x_i} f
/// exactly for polynomials f of degree < n.
class GaussLegendreRule {
public:
    explicit GaussLegendreRule(int n);

    int size() const noexcept { return static_cast<int>(nodes_.size()); }
    std::span<const double> nodes() const noexcept { return nodes_; }
    std::span<const double> weights() const noexcept { return weights_; }
    double cumulative(int i, int m) const noexcept {
        return cumulative_[static_cast<std::size_t>(i * size() + m)];
    }

    /// Shared, lazily built rule for a given size. Thread-safe.
    static const GaussLegendreRule& get(int n);

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
    std::vector<double> cumulative_;
};

/// Numerical quadrature controls.
struct QuadratureSpec {
    int nodes_per_panel = 32;
    int initial_panels = 4;
    double rel_tol = 1e-10;
    double abs_tol = 1e-14;
    int max_depth = 12;
};

/// Composite panel mesh: sorted panel edges, with the mapped Gauss nodes
/// and weights of every panel laid out contiguously.
class PanelMesh {
public:
    PanelMesh(std::vector<double> edges, int nodes_per_panel);

    int panel_count() const noexcept { return static_cast<int>(edges_.size()) - 1; }
    int nodes_per_panel() const noexcept { return npp_; }
    std::size_t node_count() const noexcept { return nodes_.size(); }
    std::span<const double> edges() const noexcept { return edges_; }
    std::span<const double> nodes() const noexcept { return nodes_; }
    std::span<const double> weights() const noexcept { return weights_; }
    double panel_width(int p) const noexcept { return edges_[p + 1] - edges_[p]; }

    /// Every panel bisected.
    PanelMesh refined() const;

    /// values: integrand at nodes(); returns int over the mesh.
    double integrate(std::span<const double> values) const;

    /// values: integrand at nodes(); out: running integral from the left
    /// edge up to each node.
    void cumulative(std::span<const double> values, std::span<double> out) const;

private:
    std::vector<double> edges_;
    int npp_;
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/// Initial edges for [iv.t, iv.T]: uniform panels merged with breakpoints
/// (points outside the interval are dropped, near-duplicates merged).
std::vector<double> initial_edges(const Interval& iv, int panels, std::span<const double> breakpoints);

/// Adaptive refinement of a set of edges against a family of integrands:
/// a panel is bisected until, for every function, the one-panel rule and
/// the two-half-panel rule agree within tolerance. Throws QuadratureError
/// if max_depth is exhausted.
std::vector<double> adapt_edges(std::vector<double> edges,
                                const std::vector<std::function<double(double)>>& fns,
                                const QuadratureSpec& spec);

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int panels = 0;
};

/// Adaptive composite Gauss-Legendre integral of f over [a, b], with panel
/// edges forced at the given breakpoints.
QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> breakpoints = {},
                           const QuadratureSpec& spec = {});

}  // namespace gmfs
