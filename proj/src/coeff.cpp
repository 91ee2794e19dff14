#include "gmfs/coeff.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "gmfs/error.hpp"

namespace gmfs {

CoeffTensor::CoeffTensor(Kernel kernel, OrthonormalSystem system, bool weighted, std::vector<int> box,
                         std::vector<double> values, CoeffQuadratureInfo quad)
    : kernel_(std::move(kernel)),
      system_(std::move(system)),
      weighted_(weighted),
      box_(std::move(box)),
      values_(std::move(values)),
      quad_(quad) {
    if (static_cast<int>(box_.size()) != kernel_.multiplicity()) {
        throw ArgumentError("coefficient box rank differs from kernel multiplicity");
    }
    std::size_t n = 1;
    strides_.resize(box_.size());
    for (std::size_t l = 0; l < box_.size(); ++l) {
        if (box_[l] < 0) throw ArgumentError("truncation orders must be nonnegative");
        strides_[l] = n;
        n *= static_cast<std::size_t>(box_[l] + 1);
    }
    if (values_.size() != n) throw ArgumentError("coefficient value count differs from box size");
    for (double v : values_) {
        if (!std::isfinite(v)) throw ArgumentError("coefficient tensor holds a non-finite value");
    }
}

std::size_t CoeffTensor::flat_index(std::span<const int> idx) const {
    if (idx.size() != box_.size()) throw ArgumentError("multi-index length differs from multiplicity");
    std::size_t f = 0;
    for (std::size_t l = 0; l < idx.size(); ++l) {
        if (idx[l] < 0 || idx[l] > box_[l]) throw RangeError("multi-index outside truncation box");
        f += strides_[l] * static_cast<std::size_t>(idx[l]);
    }
    return f;
}

MultiIndex CoeffTensor::multi_index(std::size_t flat) const {
    MultiIndex idx(box_.size());
    for (std::size_t l = 0; l < box_.size(); ++l) {
        idx[l] = static_cast<int>(flat % static_cast<std::size_t>(box_[l] + 1));
        flat /= static_cast<std::size_t>(box_[l] + 1);
    }
    return idx;
}

CoeffTensor CoeffTensor::sub_box(const std::vector<int>& box) const {
    if (box.size() != box_.size()) throw ArgumentError("sub_box rank mismatch");
    for (std::size_t l = 0; l < box.size(); ++l) {
        if (box[l] < 0 || box[l] > box_[l]) throw RangeError("sub_box exceeds stored box");
    }
    std::vector<double> v;
    for_each_index(box, [&](const MultiIndex& idx) { v.push_back(at(idx)); });
    return CoeffTensor(kernel_, system_, weighted_, box, std::move(v), quad_);
}

double CoeffTensor::sparsity(double threshold) const {
    const auto zeros = std::count_if(values_.begin(), values_.end(), [&](double v) { return std::abs(v) <= threshold; });
    return static_cast<double>(zeros) / static_cast<double>(values_.size());
}

namespace {

/// Level l integrand for index j, evaluated at all mesh nodes.
using LevelFill = std::function<void(int level, int j, std::span<const double> nodes, std::span<double> out)>;

struct NestedProblem {
    std::vector<std::vector<int>> indices;  // per level
    LevelFill fill;
    /// Scalar form of the same integrand, used for mesh adaptation.
    std::function<double(int level, int j, double x)> point;
};

std::size_t level_count(const NestedProblem& p, std::size_t l) { return p.indices[l].size(); }

// Nested simplex integral on a fixed mesh. Output in storage order, level 0 fastest.
std::vector<double> nested_on_mesh(const NestedProblem& prob, const PanelMesh& mesh, Execution exec) {
    const std::size_t k = prob.indices.size();
    const std::size_t n = mesh.node_count();
    const bool par = exec == Execution::parallel;

    std::vector<std::vector<double>> g(k);
    for (std::size_t l = 0; l < k; ++l) {
        const std::size_t c = level_count(prob, l);
        g[l].assign(c * n, 0.0);
        const long cl = static_cast<long>(c);
#pragma omp parallel for schedule(static) if (par)
        for (long a = 0; a < cl; ++a) {
            prob.fill(static_cast<int>(l), prob.indices[l][static_cast<std::size_t>(a)], mesh.nodes(),
                      std::span<double>(g[l].data() + static_cast<std::size_t>(a) * n, n));
        }
    }

    const auto w = mesh.weights();
    if (k == 1) {
        const std::size_t c = level_count(prob, 0);
        std::vector<double> out(c);
        for (std::size_t a = 0; a < c; ++a) out[a] = mesh.integrate(std::span<const double>(g[0].data() + a * n, n));
        return out;
    }

    // Running integrals F over the first levels.
    std::size_t prev = level_count(prob, 0);
    std::vector<double> F(prev * n);
    {
        const long cp = static_cast<long>(prev);
#pragma omp parallel for schedule(static) if (par)
        for (long a = 0; a < cp; ++a) {
            const std::size_t ua = static_cast<std::size_t>(a);
            mesh.cumulative(std::span<const double>(g[0].data() + ua * n, n), std::span<double>(F.data() + ua * n, n));
        }
    }
    for (std::size_t l = 1; l + 1 < k; ++l) {
        const std::size_t c = level_count(prob, l);
        std::vector<double> next(prev * c * n);
        const long total = static_cast<long>(prev * c);
#pragma omp parallel for schedule(static) if (par)
        for (long f = 0; f < total; ++f) {
            const std::size_t uf = static_cast<std::size_t>(f);
            const std::size_t a = uf % prev;
            const std::size_t b = uf / prev;
            std::vector<double> prod(n);
            for (std::size_t i = 0; i < n; ++i) prod[i] = g[l][b * n + i] * F[a * n + i];
            mesh.cumulative(prod, std::span<double>(next.data() + uf * n, n));
        }
        F = std::move(next);
        prev *= c;
    }
    const std::size_t c = level_count(prob, k - 1);
    std::vector<double> out(prev * c);
    const long total = static_cast<long>(prev * c);
#pragma omp parallel for schedule(static) if (par)
    for (long f = 0; f < total; ++f) {
        const std::size_t uf = static_cast<std::size_t>(f);
        const std::size_t a = uf % prev;
        const std::size_t b = uf / prev;
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += w[i] * g[k - 1][b * n + i] * F[a * n + i];
        out[uf] = s;
    }
    return out;
}

struct NestedResult {
    std::vector<double> values;
    CoeffQuadratureInfo info;
};

NestedResult solve_nested(const NestedProblem& prob, const Interval& iv, std::vector<double> breakpoints,
                          const QuadratureSpec& quad, Execution exec) {
    int pmax = 0;
    for (const auto& ix : prob.indices) {
        for (int j : ix) pmax = std::max(pmax, j);
    }
    const int panels = std::max(quad.initial_panels, (pmax + 8) / 8);
    auto edges = initial_edges(iv, panels, breakpoints);

    std::vector<std::function<double(double)>> fns;
    for (std::size_t l = 0; l < prob.indices.size(); ++l) {
        for (int j : prob.indices[l]) {
            fns.push_back([&prob, l, j](double x) { return prob.point(static_cast<int>(l), j, x); });
        }
    }
    edges = adapt_edges(std::move(edges), fns, quad);

    PanelMesh mesh(std::move(edges), quad.nodes_per_panel);
    std::vector<double> coarse = nested_on_mesh(prob, mesh, exec);
    for (int depth = 0;; ++depth) {
        PanelMesh fine = mesh.refined();
        std::vector<double> finer = nested_on_mesh(prob, fine, exec);
        double est = 0.0;
        double scale = 0.0;
        for (std::size_t i = 0; i < finer.size(); ++i) {
            est = std::max(est, std::abs(finer[i] - coarse[i]));
            scale = std::max(scale, std::abs(finer[i]));
        }
        const double tol = std::max(quad.abs_tol, quad.rel_tol * scale);
        if (est <= tol) {
            return {std::move(finer), {quad.nodes_per_panel, fine.panel_count(), est}};
        }
        if (depth + 1 >= quad.max_depth) {
            const double partial = finer.empty() ? 0.0 : finer.front();
            throw QuadratureError("nested simplex quadrature did not converge", partial, est);
        }
        mesh = std::move(fine);
        coarse = std::move(finer);
    }
}

void check_compatible(const Kernel& kernel, const OrthonormalSystem& system) {
    if (!(kernel.interval() == system.interval())) {
        throw ArgumentError("kernel and orthonormal system must share the same interval");
    }
}

NestedProblem basis_problem(const Kernel& kernel, const OrthonormalSystem& system, bool weighted,
                            std::vector<std::vector<int>> indices) {
    NestedProblem prob;
    prob.indices = std::move(indices);
    const WeightFunction r = weighted ? system.weight() : WeightFunction::constant(1.0);
    prob.point = [kernel, system, r](int l, int j, double x) { return kernel.factor(l, x) * system(j, x) * r(x); };
    prob.fill = [kernel, system, r](int l, int j, std::span<const double> nodes, std::span<double> out) {
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const double x = nodes[i];
            out[i] = kernel.factor(l, x) * system(j, x) * r(x);
        }
    };
    return prob;
}

std::vector<double> mesh_breakpoints(const Kernel& kernel, const OrthonormalSystem& system, long count) {
    auto b = system.breakpoints_upto(count);
    auto kb = kernel.breakpoints();
    b.insert(b.end(), kb.begin(), kb.end());
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return b;
}

}  // namespace

CoeffValue coeff(const Kernel& kernel, const OrthonormalSystem& system, const MultiIndex& idx, bool weighted,
                 const QuadratureSpec& quad) {
    check_compatible(kernel, system);
    if (static_cast<int>(idx.size()) != kernel.multiplicity()) {
        throw ArgumentError("multi-index length differs from kernel multiplicity");
    }
    std::vector<std::vector<int>> indices;
    std::vector<double> bps = kernel.breakpoints();
    for (int j : idx) {
        if (j < 0) throw RangeError("basis index must be nonnegative");
        indices.push_back({j});
        auto b = system.breakpoints(j);
        bps.insert(bps.end(), b.begin(), b.end());
    }
    std::sort(bps.begin(), bps.end());
    bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
    const auto prob = basis_problem(kernel, system, weighted, std::move(indices));
    auto res = solve_nested(prob, kernel.interval(), std::move(bps), quad, Execution::serial);
    return {res.values.front(), res.info.error_estimate};
}

CoeffTensor coeff_tensor(const Kernel& kernel, const OrthonormalSystem& system, const std::vector<int>& box,
                         bool weighted, const CoeffOptions& options) {
    check_compatible(kernel, system);
    if (static_cast<int>(box.size()) != kernel.multiplicity()) {
        throw ArgumentError("box rank differs from kernel multiplicity");
    }
    double entries = 1.0;
    int pmax = 0;
    for (int p : box) {
        if (p < 0) throw ArgumentError("truncation orders must be nonnegative");
        entries *= p + 1.0;
        pmax = std::max(pmax, p);
    }
    if (entries > static_cast<double>(options.budget)) {
        throw SizeError("coefficient box of " + std::to_string(static_cast<long long>(entries)) +
                        " entries exceeds budget of " + std::to_string(options.budget));
    }
    const long cap = system.capacity();
    if (cap >= 0 && pmax >= cap) throw RangeError(system.name() + ": truncation order beyond enumerable range");

    std::vector<std::vector<int>> indices(box.size());
    for (std::size_t l = 0; l < box.size(); ++l) {
        indices[l].resize(static_cast<std::size_t>(box[l] + 1));
        std::iota(indices[l].begin(), indices[l].end(), 0);
    }
    const auto prob = basis_problem(kernel, system, weighted, std::move(indices));
    auto res = solve_nested(prob, kernel.interval(), mesh_breakpoints(kernel, system, pmax + 1), options.quad,
                            options.exec);
    return CoeffTensor(kernel, system, weighted, box, std::move(res.values), res.info);
}

std::optional<double> kernel_norm_sq_analytic(const Kernel& kernel, const WeightFunction& weight) {
    // psi_l^2 r = c_l (s - t)^{b_l}  =>  ||K||^2 = prod c_l L^{sum b + k} / prod_m (sum_{l<=m} b_l + m)
    const Interval& iv = kernel.interval();
    double wc = 1.0;
    double wb = 0.0;
    switch (weight.kind()) {
        case WeightFunction::Kind::constant: wc = weight.constant_value(); break;
        case WeightFunction::Kind::identity:
            if (iv.t != 0.0) return std::nullopt;
            wb = 1.0;
            break;
        default: return std::nullopt;
    }
    double coef = 1.0;
    double cum = 0.0;
    double denom = 1.0;
    const int k = kernel.multiplicity();
    for (int l = 0; l < k; ++l) {
        const auto& f = kernel.factors()[static_cast<std::size_t>(l)];
        double b = 0.0;
        switch (f.kind()) {
            case KernelFactor::Kind::constant: coef *= f.param() * f.param(); break;
            case KernelFactor::Kind::power: b = 2.0 * f.param(); break;
            case KernelFactor::Kind::sqrt_shift: b = 1.0; break;
            default: return std::nullopt;
        }
        b += wb;
        coef *= wc;
        cum += b + 1.0;
        denom *= cum;
    }
    return coef * std::pow(iv.length(), cum) / denom;
}

double kernel_norm_sq(const Kernel& kernel, const WeightFunction& weight, NormMethod method,
                      const QuadratureSpec& quad) {
    if (method != NormMethod::quadrature) {
        if (auto a = kernel_norm_sq_analytic(kernel, weight)) return *a;
        if (method == NormMethod::analytic) throw ArgumentError("kernel norm has no closed form for these factors");
    }
    NestedProblem prob;
    prob.indices.assign(static_cast<std::size_t>(kernel.multiplicity()), std::vector<int>{0});
    prob.point = [kernel, weight](int l, int, double x) {
        const double f = kernel.factor(l, x);
        return f * f * weight(x);
    };
    prob.fill = [kernel, weight](int l, int, std::span<const double> nodes, std::span<double> out) {
        for (std::size_t i = 0; i < nodes.size(); ++i) {
            const double f = kernel.factor(l, nodes[i]);
            out[i] = f * f * weight(nodes[i]);
        }
    };
    return solve_nested(prob, kernel.interval(), kernel.breakpoints(), quad, Execution::serial).values.front();
}

ParsevalReport parseval_partial(const CoeffTensor& tensor) {
    ParsevalReport r;
    double s = 0.0;
    double comp = 0.0;
    for (double c : tensor.values()) {
        // Neumaier summation.
        const double term = c * c;
        const double t = s + term;
        comp += (std::abs(s) >= std::abs(term)) ? (s - t) + term : (term - t) + s;
        s = t;
    }
    r.partial_sum = s + comp;
    const WeightFunction w = tensor.weighted() ? tensor.system().weight() : WeightFunction::constant(1.0);
    if (auto a = kernel_norm_sq_analytic(tensor.kernel(), w)) {
        r.kernel_norm_sq = *a;
        r.norm_method = NormMethod::analytic;
    } else {
        r.kernel_norm_sq = kernel_norm_sq(tensor.kernel(), w, NormMethod::quadrature);
        r.norm_method = NormMethod::quadrature;
    }
    r.residual = r.kernel_norm_sq - r.partial_sum;
    return r;
}

}  // namespace gmfs
