#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "gmfs/basis.hpp"
#include "gmfs/interval.hpp"
#include "gmfs/quadrature.hpp"
#include "gmfs/rng.hpp"

namespace gmfs {

/// t = tau_0 < ... < tau_N = T.
class Partition {
public:
    Partition(Interval iv, std::vector<double> nodes);

    const Interval& interval() const noexcept { return iv_; }
    int size() const noexcept { return static_cast<int>(nodes_.size()) - 1; }
    std::span<const double> nodes() const noexcept { return nodes_; }
    double node(int l) const noexcept { return nodes_[static_cast<std::size_t>(l)]; }
    double step(int l) const noexcept { return nodes_[static_cast<std::size_t>(l) + 1] - nodes_[static_cast<std::size_t>(l)]; }
    double max_step() const noexcept { return max_step_; }
    /// Every `factor` consecutive cells merged. size() must be divisible.
    Partition coarsened(int factor) const;

private:
    Interval iv_;
    std::vector<double> nodes_;
    double max_step_ = 0.0;
};

enum class PartitionScheme { uniform };

Partition make_partition(Interval iv, int N, PartitionScheme scheme = PartitionScheme::uniform);

/// Increments of an m-dimensional Wiener process on a partition. Component
/// 0 is deterministic time: its increments are the cell widths.
struct WienerPath {
    Partition partition;
    int m = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<double>> increments;  // [component 0..m][cell]

    std::span<const double> component(int i) const { return increments.at(static_cast<std::size_t>(i)); }
};

/// Reproducible in (partition, m, seed); component i draws from its own
/// substream derive_seed(seed, i).
WienerPath sample_wiener(const Partition& partition, int m, std::uint64_t seed);

/// Same path on the partition with every `factor` cells merged.
WienerPath coarsened(const WienerPath& path, int factor);

/// Mark factor phi(y) = coef * y^exponent on the mark space.
struct MarkFactor {
    double coef = 1.0;
    double exponent = 0.0;

    double operator()(double y) const;
    bool operator==(const MarkFactor&) const = default;
};

/// Finite intensity measure Pi on a one-dimensional mark space.
class IntensityMeasure {
public:
    virtual ~IntensityMeasure() = default;

    virtual int dimension() const noexcept { return 1; }
    /// Lambda = Pi(Y).
    virtual double total_mass() const noexcept = 0;
    /// y ~ Pi / Lambda.
    virtual double sample_mark(Engine& engine) const = 0;
    /// int |phi|^s dPi; throws ArgumentError if infinite.
    virtual double abs_moment(const MarkFactor& phi, double s) const = 0;
    /// int phi dPi; throws ArgumentError if not integrable.
    virtual double integral(const MarkFactor& phi) const = 0;
    virtual std::string describe() const = 0;
};

/// Pi = Lambda * Exp(1) on (0, inf). Moments of y^a are Lambda * Gamma(a s + 1).
class ExponentialIntensity final : public IntensityMeasure {
public:
    explicit ExponentialIntensity(double lambda);

    double total_mass() const noexcept override { return lambda_; }
    double sample_mark(Engine& engine) const override;
    double abs_moment(const MarkFactor& phi, double s) const override;
    double integral(const MarkFactor& phi) const override;
    std::string describe() const override;

private:
    double lambda_;
};

/// Moment condition: int |phi|^s dPi < inf for s = 1..max_order.
void check_mark_moments(const IntensityMeasure& measure, const MarkFactor& phi, int max_order);

struct Jump {
    double time = 0.0;
    double mark = 0.0;
};

/// Independent marked Poisson random measures nu^(1..m) on [t, T] x Y.
/// jumps[0] is empty (component 0 is the deterministic Pi(dy) dt).
struct PoissonRealization {
    Interval interval;
    int m = 0;
    std::uint64_t seed = 0;
    std::shared_ptr<const IntensityMeasure> measure;
    std::vector<std::vector<Jump>> jumps;  // [component 0..m], sorted by time

    std::span<const Jump> component(int i) const { return jumps.at(static_cast<std::size_t>(i)); }
};

struct PoissonOptions {
    /// Upper bound on the expected jump count Lambda (T - t) per component.
    double jump_budget = 1e6;
};

PoissonRealization sample_poisson(Interval iv, int m, std::shared_ptr<const IntensityMeasure> measure,
                                  std::uint64_t seed, const PoissonOptions& options = {});

/// int_t^T int_Y h(s) phi(y) nu~^(i)(ds, dy): exact jump sum minus
/// int h ds * int phi dPi (time integral by quadrature, split at the given
/// breakpoints). Component 0 gives the deterministic compensator alone.
double compensated_integral(const PoissonRealization& real, int i, const std::function<double(double)>& h,
                            const MarkFactor& phi, std::span<const double> breakpoints = {},
                            const QuadratureSpec& quad = {});

/// Increments of independent Gaussian martingales with variance density
/// rho: Delta M_l ~ N(0, int_{tau_l}^{tau_{l+1}} rho). Component 0 is time.
struct GaussianMartingalePath {
    Partition partition;
    int m = 0;
    std::uint64_t seed = 0;
    WeightFunction rho;
    std::vector<std::vector<double>> increments;

    std::span<const double> component(int i) const { return increments.at(static_cast<std::size_t>(i)); }
};

/// int rho over each cell. Constant rho gives c * dtau exactly. Throws
/// ArgumentError if rho is negative at any quadrature node.
std::vector<double> martingale_cell_variances(const Partition& partition, const WeightFunction& rho,
                                              const QuadratureSpec& quad = {});

/// Exact cell variances; rho = 1 reproduces sample_wiener bit for bit
/// under the same seed.
GaussianMartingalePath sample_gaussian_martingale(const Partition& partition, int m, const WeightFunction& rho,
                                                  std::uint64_t seed, const QuadratureSpec& quad = {});

/// Same, with variances precomputed by martingale_cell_variances (reused
/// across Monte Carlo trials).
GaussianMartingalePath sample_gaussian_martingale(const Partition& partition, int m, const WeightFunction& rho,
                                                  std::span<const double> cell_variances, std::uint64_t seed);

/// M_s = int sqrt(rho) dw built on an existing Wiener path by left-point
/// sums: Delta M_l = sqrt(rho(tau_l)) Delta w_l. Used when two expansions
/// have to share one realization.
GaussianMartingalePath martingale_from_wiener(const WienerPath& path, const WeightFunction& rho);

GaussianMartingalePath coarsened(const GaussianMartingalePath& path, int factor);

}  // namespace gmfs
