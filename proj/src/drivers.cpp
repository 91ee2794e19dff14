#include "gmfs/drivers.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "gmfs/error.hpp"

namespace gmfs {

Partition::Partition(Interval iv, std::vector<double> nodes) : iv_(iv), nodes_(std::move(nodes)) {
    if (nodes_.size() < 2) throw ArgumentError("partition needs at least one cell");
    if (nodes_.front() != iv_.t || nodes_.back() != iv_.T)
        throw ArgumentError("partition must start at t and end at T");
    for (std::size_t l = 0; l + 1 < nodes_.size(); ++l) {
        double h = nodes_[l + 1] - nodes_[l];
        if (!(h > 0.0)) throw ArgumentError("partition nodes must be strictly increasing");
        max_step_ = std::max(max_step_, h);
    }
}

Partition Partition::coarsened(int factor) const {
    if (factor < 1 || size() % factor != 0)
        throw ArgumentError("coarsening factor must divide the cell count");
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(size() / factor + 1));
    for (int l = 0; l <= size(); l += factor) out.push_back(node(l));
    return Partition(iv_, std::move(out));
}

Partition make_partition(Interval iv, int N, PartitionScheme scheme) {
    if (N < 1) throw ArgumentError("partition size N must be >= 1");
    (void)scheme;
    std::vector<double> nodes(static_cast<std::size_t>(N) + 1);
    double L = iv.length();
    for (int l = 0; l <= N; ++l) nodes[static_cast<std::size_t>(l)] = iv.t + L * l / N;
    nodes.back() = iv.T;
    return Partition(iv, std::move(nodes));
}

namespace {

std::vector<double> time_increments(const Partition& p) {
    std::vector<double> d(static_cast<std::size_t>(p.size()));
    for (int l = 0; l < p.size(); ++l) d[static_cast<std::size_t>(l)] = p.step(l);
    return d;
}

std::vector<double> gaussian_increments(std::span<const double> variances, std::uint64_t seed, int component) {
    Engine eng = make_engine(seed, static_cast<std::uint64_t>(component));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> d(variances.size());
    for (std::size_t l = 0; l < d.size(); ++l) d[l] = normal(eng) * std::sqrt(variances[l]);
    return d;
}

template <typename Path>
Path coarsen_path(const Path& path, int factor) {
    Path out = path;
    out.partition = path.partition.coarsened(factor);
    const auto n = static_cast<std::size_t>(out.partition.size());
    for (auto& inc : out.increments) {
        std::vector<double> c(n, 0.0);
        for (std::size_t l = 0; l < n; ++l)
            for (int f = 0; f < factor; ++f) c[l] += inc[l * static_cast<std::size_t>(factor) + f];
        inc = std::move(c);
    }
    out.increments[0] = time_increments(out.partition);
    return out;
}

}  // namespace

WienerPath coarsened(const WienerPath& path, int factor) { return coarsen_path(path, factor); }

GaussianMartingalePath coarsened(const GaussianMartingalePath& path, int factor) {
    return coarsen_path(path, factor);
}

WienerPath sample_wiener(const Partition& partition, int m, std::uint64_t seed) {
    if (m < 1) throw ArgumentError("Wiener dimension m must be >= 1");
    WienerPath path{partition, m, seed, {}};
    auto steps = time_increments(partition);
    path.increments.reserve(static_cast<std::size_t>(m) + 1);
    path.increments.push_back(steps);
    for (int i = 1; i <= m; ++i) path.increments.push_back(gaussian_increments(steps, seed, i));
    return path;
}

double MarkFactor::operator()(double y) const {
    if (exponent == 0.0) return coef;
    if (exponent == 1.0) return coef * y;
    return coef * std::pow(y, exponent);
}

ExponentialIntensity::ExponentialIntensity(double lambda) : lambda_(lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) throw ArgumentError("intensity total mass must be finite and > 0");
}

double ExponentialIntensity::sample_mark(Engine& engine) const {
    std::exponential_distribution<double> expo(1.0);
    return expo(engine);
}

double ExponentialIntensity::abs_moment(const MarkFactor& phi, double s) const {
    if (phi.coef == 0.0) return 0.0;
    double g = phi.exponent * s + 1.0;
    if (!(g > 0.0)) {
        std::ostringstream os;
        os << "moment of order " << s << " of y^" << phi.exponent << " is infinite under Exp(1)";
        throw ArgumentError(os.str());
    }
    return lambda_ * std::pow(std::abs(phi.coef), s) * std::tgamma(g);
}

double ExponentialIntensity::integral(const MarkFactor& phi) const {
    abs_moment(phi, 1.0);
    return lambda_ * phi.coef * std::tgamma(phi.exponent + 1.0);
}

std::string ExponentialIntensity::describe() const {
    std::ostringstream os;
    os.precision(17);
    os << lambda_ << "*Exp(1)";
    return os.str();
}

void check_mark_moments(const IntensityMeasure& measure, const MarkFactor& phi, int max_order) {
    for (int s = 1; s <= max_order; ++s) {
        double v = measure.abs_moment(phi, s);
        if (!std::isfinite(v)) throw ArgumentError("mark factor moment of order " + std::to_string(s) + " is not finite");
    }
}

PoissonRealization sample_poisson(Interval iv, int m, std::shared_ptr<const IntensityMeasure> measure,
                                  std::uint64_t seed, const PoissonOptions& options) {
    if (m < 1) throw ArgumentError("Poisson component count m must be >= 1");
    if (!measure) throw ArgumentError("intensity measure required");
    double mean = measure->total_mass() * iv.length();
    if (mean > options.jump_budget) {
        std::ostringstream os;
        os << "expected jump count " << mean << " exceeds budget " << options.jump_budget;
        throw SizeError(os.str());
    }
    PoissonRealization r{iv, m, seed, measure, {}};
    r.jumps.resize(static_cast<std::size_t>(m) + 1);
    for (int i = 1; i <= m; ++i) {
        Engine eng = make_engine(seed, static_cast<std::uint64_t>(i));
        std::poisson_distribution<long> count(mean);
        long n = count(eng);
        std::uniform_real_distribution<double> unif(iv.t, iv.T);
        auto& js = r.jumps[static_cast<std::size_t>(i)];
        js.resize(static_cast<std::size_t>(n));
        for (auto& j : js) j.time = unif(eng);
        for (auto& j : js) j.mark = measure->sample_mark(eng);
        // marks are i.i.d. and independent of times, so sorting by time keeps the law
        std::sort(js.begin(), js.end(), [](const Jump& a, const Jump& b) { return a.time < b.time; });
    }
    return r;
}

double compensated_integral(const PoissonRealization& real, int i, const std::function<double(double)>& h,
                            const MarkFactor& phi, std::span<const double> breakpoints, const QuadratureSpec& quad) {
    if (i < 0 || i > real.m) throw ArgumentError("component index out of range");
    double mass = real.measure->integral(phi);
    double hint = integrate(h, real.interval.t, real.interval.T, breakpoints, quad).value;
    if (i == 0) return hint * mass;
    double s = 0.0;
    for (const Jump& j : real.component(i)) s += h(j.time) * phi(j.mark);
    return s - hint * mass;
}

std::vector<double> martingale_cell_variances(const Partition& partition, const WeightFunction& rho,
                                              const QuadratureSpec& quad) {
    std::vector<double> v(static_cast<std::size_t>(partition.size()));
    if (rho.is_constant()) {
        double c = rho.constant_value();
        if (c < 0.0) throw ArgumentError("variance density must be nonnegative");
        for (int l = 0; l < partition.size(); ++l) v[static_cast<std::size_t>(l)] = c * partition.step(l);
        return v;
    }
    const auto& gl = GaussLegendreRule::get(8);
    for (int l = 0; l < partition.size(); ++l) {
        double a = partition.node(l), b = partition.node(l + 1);
        for (double x : gl.nodes()) {
            double y = rho(0.5 * (a + b) + 0.5 * (b - a) * x);
            if (y < 0.0 || !std::isfinite(y)) throw ArgumentError("variance density negative or non-finite on the interval");
        }
        if (rho(a) < 0.0 || rho(b) < 0.0) throw ArgumentError("variance density negative on the interval");
        QuadratureSpec q = quad;
        q.initial_panels = 1;
        q.rel_tol = std::min(q.rel_tol, 1e-12);
        v[static_cast<std::size_t>(l)] = integrate([&rho](double x) { return rho(x); }, a, b, {}, q).value;
    }
    return v;
}

GaussianMartingalePath sample_gaussian_martingale(const Partition& partition, int m, const WeightFunction& rho,
                                                  std::span<const double> cell_variances, std::uint64_t seed) {
    if (m < 1) throw ArgumentError("martingale dimension m must be >= 1");
    if (cell_variances.size() != static_cast<std::size_t>(partition.size()))
        throw ArgumentError("cell variance count does not match partition");
    GaussianMartingalePath path{partition, m, seed, rho, {}};
    path.increments.reserve(static_cast<std::size_t>(m) + 1);
    path.increments.push_back(time_increments(partition));
    for (int i = 1; i <= m; ++i) path.increments.push_back(gaussian_increments(cell_variances, seed, i));
    return path;
}

GaussianMartingalePath sample_gaussian_martingale(const Partition& partition, int m, const WeightFunction& rho,
                                                  std::uint64_t seed, const QuadratureSpec& quad) {
    auto v = martingale_cell_variances(partition, rho, quad);
    return sample_gaussian_martingale(partition, m, rho, v, seed);
}

GaussianMartingalePath martingale_from_wiener(const WienerPath& path, const WeightFunction& rho) {
    GaussianMartingalePath out{path.partition, path.m, path.seed, rho, {}};
    const Partition& p = path.partition;
    std::vector<double> scale(static_cast<std::size_t>(p.size()));
    for (int l = 0; l < p.size(); ++l) {
        double r = rho(p.node(l));
        if (r < 0.0) throw ArgumentError("variance density must be nonnegative");
        scale[static_cast<std::size_t>(l)] = std::sqrt(r);
    }
    out.increments.push_back(path.increments.at(0));
    for (int i = 1; i <= path.m; ++i) {
        const auto& dw = path.increments[static_cast<std::size_t>(i)];
        std::vector<double> d(dw.size());
        for (std::size_t l = 0; l < d.size(); ++l) d[l] = scale[l] * dw[l];
        out.increments.push_back(std::move(d));
    }
    return out;
}

}  // namespace gmfs
