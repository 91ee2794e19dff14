#include "gmfs/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "gmfs/error.hpp"

namespace gmfs {

namespace {

// P_0..P_{count-1} at x.
void legendre_values(double x, int count, std::vector<double>& out) {
    out.assign(static_cast<std::size_t>(count), 0.0);
    if (count == 0) return;
    out[0] = 1.0;
    if (count == 1) return;
    out[1] = x;
    for (int q = 1; q + 1 < count; ++q) {
        out[q + 1] = ((2.0 * q + 1.0) * x * out[q] - q * out[q - 1]) / (q + 1.0);
    }
}

}  // namespace

GaussLegendreRule::GaussLegendreRule(int n) {
    if (n < 1) throw ArgumentError("Gauss-Legendre rule needs at least one node");
    nodes_.resize(static_cast<std::size_t>(n));
    weights_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0;
            double p1 = x;
            for (int q = 1; q < n; ++q) {
                const double p2 = ((2.0 * q + 1.0) * x * p1 - q * p0) / (q + 1.0);
                p0 = p1;
                p1 = p2;
            }
            const double pn = (n == 1) ? x : p1;
            const double pnm1 = (n == 1) ? 1.0 : p0;
            dp = n * (x * pn - pnm1) / (x * x - 1.0);
            const double dx = pn / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        // Recompute derivative at the converged node.
        double p0 = 1.0;
        double p1 = x;
        for (int q = 1; q < n; ++q) {
            const double p2 = ((2.0 * q + 1.0) * x * p1 - q * p0) / (q + 1.0);
            p0 = p1;
            p1 = p2;
        }
        dp = (n == 1) ? 1.0 : n * (x * p1 - p0) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes_[static_cast<std::size_t>(i)] = -x;
        nodes_[static_cast<std::size_t>(n - 1 - i)] = x;
        weights_[static_cast<std::size_t>(i)] = w;
        weights_[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    if (n % 2 == 1) nodes_[static_cast<std::size_t>(n / 2)] = 0.0;

    // cumulative(i, m) = w_m [ (x_i + 1)/2 + sum_{q>=1} P_q(x_m) (P_{q+1}(x_i) - P_{q-1}(x_i)) / 2 ]
    cumulative_.assign(static_cast<std::size_t>(n * n), 0.0);
    std::vector<std::vector<double>> p(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) legendre_values(nodes_[i], n + 1, p[i]);
    for (int i = 0; i < n; ++i) {
        for (int m = 0; m < n; ++m) {
            double s = 0.5 * (nodes_[i] + 1.0);
            for (int q = 1; q < n; ++q) {
                s += 0.5 * p[m][q] * (p[i][q + 1] - p[i][q - 1]);
            }
            cumulative_[static_cast<std::size_t>(i * n + m)] = weights_[m] * s;
        }
    }
}

const GaussLegendreRule& GaussLegendreRule::get(int n) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<GaussLegendreRule>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_unique<GaussLegendreRule>(n);
    return *slot;
}

PanelMesh::PanelMesh(std::vector<double> edges, int nodes_per_panel)
    : edges_(std::move(edges)), npp_(nodes_per_panel) {
    if (edges_.size() < 2) throw ArgumentError("panel mesh needs at least one panel");
    const auto& rule = GaussLegendreRule::get(npp_);
    nodes_.reserve(static_cast<std::size_t>(panel_count() * npp_));
    weights_.reserve(nodes_.capacity());
    for (int p = 0; p < panel_count(); ++p) {
        const double half = 0.5 * panel_width(p);
        const double mid = 0.5 * (edges_[p] + edges_[p + 1]);
        for (int m = 0; m < npp_; ++m) {
            nodes_.push_back(mid + half * rule.nodes()[m]);
            weights_.push_back(half * rule.weights()[m]);
        }
    }
}

PanelMesh PanelMesh::refined() const {
    std::vector<double> e;
    e.reserve(2 * edges_.size());
    for (int p = 0; p < panel_count(); ++p) {
        e.push_back(edges_[p]);
        e.push_back(0.5 * (edges_[p] + edges_[p + 1]));
    }
    e.push_back(edges_.back());
    return PanelMesh(std::move(e), npp_);
}

double PanelMesh::integrate(std::span<const double> values) const {
    double s = 0.0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) s += weights_[i] * values[i];
    return s;
}

void PanelMesh::cumulative(std::span<const double> values, std::span<double> out) const {
    const auto& rule = GaussLegendreRule::get(npp_);
    double base = 0.0;
    for (int p = 0; p < panel_count(); ++p) {
        const double half = 0.5 * panel_width(p);
        const std::size_t off = static_cast<std::size_t>(p * npp_);
        double total = 0.0;
        for (int i = 0; i < npp_; ++i) {
            double s = 0.0;
            for (int m = 0; m < npp_; ++m) s += rule.cumulative(i, m) * values[off + m];
            out[off + i] = base + half * s;
            total += rule.weights()[i] * values[off + i];
        }
        base += half * total;
    }
}

std::vector<double> initial_edges(const Interval& iv, int panels, std::span<const double> breakpoints) {
    panels = std::max(panels, 1);
    std::vector<double> e;
    e.reserve(static_cast<std::size_t>(panels) + 1 + breakpoints.size());
    for (int i = 0; i <= panels; ++i) {
        e.push_back(i == panels ? iv.T : iv.t + iv.length() * i / panels);
    }
    for (double b : breakpoints) {
        if (b > iv.t && b < iv.T) e.push_back(b);
    }
    std::sort(e.begin(), e.end());
    const double eps = 1e-13 * iv.length();
    std::vector<double> out;
    out.reserve(e.size());
    for (double x : e) {
        if (out.empty() || x - out.back() > eps) {
            out.push_back(x);
        } else if (x == iv.T) {
            out.back() = iv.T;
        }
    }
    if (out.size() < 2) out = {iv.t, iv.T};
    return out;
}

namespace {

double panel_rule(const std::function<double(double)>& f, double a, double b, const GaussLegendreRule& rule) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double s = 0.0;
    for (int m = 0; m < rule.size(); ++m) s += rule.weights()[m] * f(mid + half * rule.nodes()[m]);
    return half * s;
}

struct PanelTask {
    double a;
    double b;
    int depth;
};

}  // namespace

std::vector<double> adapt_edges(std::vector<double> edges,
                                const std::vector<std::function<double(double)>>& fns,
                                const QuadratureSpec& spec) {
    const auto& rule = GaussLegendreRule::get(spec.nodes_per_panel);
    // Per-function tolerance from a coarse estimate of int |f|.
    std::vector<double> tol(fns.size());
    for (std::size_t k = 0; k < fns.size(); ++k) {
        auto absf = [&](double x) { return std::abs(fns[k](x)); };
        double scale = 0.0;
        for (std::size_t p = 0; p + 1 < edges.size(); ++p) scale += panel_rule(absf, edges[p], edges[p + 1], rule);
        tol[k] = std::max(spec.abs_tol, spec.rel_tol * scale);
    }

    std::vector<double> out{edges.front()};
    double worst = 0.0;
    for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
        std::vector<PanelTask> stack{{edges[p], edges[p + 1], 0}};
        std::vector<double> accepted;
        while (!stack.empty()) {
            // Depth-first, left panel processed first so edges come out sorted.
            PanelTask task = stack.back();
            stack.pop_back();
            const double mid = 0.5 * (task.a + task.b);
            bool ok = true;
            for (std::size_t k = 0; k < fns.size() && ok; ++k) {
                const double whole = panel_rule(fns[k], task.a, task.b, rule);
                const double halves = panel_rule(fns[k], task.a, mid, rule) + panel_rule(fns[k], mid, task.b, rule);
                const double diff = std::abs(whole - halves);
                if (!std::isfinite(whole) || !std::isfinite(halves)) {
                    throw QuadratureError("non-finite integrand value", 0.0, INFINITY);
                }
                if (diff > tol[k]) {
                    ok = false;
                    worst = std::max(worst, diff);
                }
            }
            if (ok) {
                out.push_back(task.b);
            } else if (task.depth >= spec.max_depth) {
                throw QuadratureError("adaptive quadrature did not converge within maximum depth", 0.0, worst);
            } else {
                stack.push_back({mid, task.b, task.depth + 1});
                stack.push_back({task.a, mid, task.depth + 1});
            }
        }
    }
    return out;
}

QuadratureResult integrate(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> breakpoints, const QuadratureSpec& spec) {
    if (!(a < b)) {
        if (a == b) return {};
        throw ArgumentError("integration bounds must satisfy a <= b");
    }
    const Interval iv(a, b);
    auto edges = initial_edges(iv, spec.initial_panels, breakpoints);
    try {
        edges = adapt_edges(std::move(edges), {f}, spec);
    } catch (const QuadratureError& e) {
        const PanelMesh coarse(initial_edges(iv, spec.initial_panels, breakpoints), spec.nodes_per_panel);
        std::vector<double> v(coarse.node_count());
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(coarse.nodes()[i]);
        throw QuadratureError(e.what(), coarse.integrate(v), e.error_estimate());
    }
    const PanelMesh mesh(edges, spec.nodes_per_panel);
    std::vector<double> v(mesh.node_count());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(mesh.nodes()[i]);
    const double value = mesh.integrate(v);

    // Error estimate: difference against the once-bisected mesh.
    const PanelMesh fine = mesh.refined();
    std::vector<double> vf(fine.node_count());
    for (std::size_t i = 0; i < vf.size(); ++i) vf[i] = f(fine.nodes()[i]);
    const double finer = fine.integrate(vf);
    return {finer, std::abs(finer - value), fine.panel_count()};
}

}  // namespace gmfs
