#pragma once

#include <span>
#include <string>
#include <vector>

#include "gmfs/interval.hpp"

namespace gmfs {

/// One continuous factor psi_l of the simplex kernel, drawn from a fixed
/// whitelist so that configs stay portable and norms can be analysed.
/// All shapes are expressed in the shifted variable u = s - t.
class KernelFactor {
public:
    enum class Kind { constant, power, sqrt_shift, exponential, tabulated };

    static KernelFactor constant(double c);
    /// (s - t)^a, a >= 0.
    static KernelFactor power(double a);
    /// sqrt(s - t).
    static KernelFactor sqrt_shift();
    /// exp(c (s - t)).
    static KernelFactor exponential(double c);
    /// Piecewise-linear interpolation of (xs, ys) in absolute time. Not
    /// analysable; flagged as unverified.
    static KernelFactor tabulated(std::vector<double> xs, std::vector<double> ys);

    double operator()(double s, double t0) const;

    Kind kind() const noexcept { return kind_; }
    double param() const noexcept { return param_; }
    const std::vector<double>& xs() const noexcept { return xs_; }
    const std::vector<double>& ys() const noexcept { return ys_; }
    bool verified() const noexcept { return kind_ != Kind::tabulated; }
    std::string name() const;
    bool operator==(const KernelFactor&) const = default;

private:
    Kind kind_ = Kind::constant;
    double param_ = 1.0;
    std::vector<double> xs_;
    std::vector<double> ys_;
};

/// K(t_1..t_k) = prod psi_l(t_l) on t_1 < ... < t_k, zero elsewhere.
class Kernel {
public:
    Kernel(Interval iv, std::vector<KernelFactor> factors);

    /// k copies of psi = 1.
    static Kernel unit(Interval iv, int k);

    int multiplicity() const noexcept { return static_cast<int>(factors_.size()); }
    const Interval& interval() const noexcept { return iv_; }
    const std::vector<KernelFactor>& factors() const noexcept { return factors_; }
    /// psi_l(s), l is 0-based.
    double factor(int l, double s) const { return factors_[static_cast<std::size_t>(l)](s, iv_.t); }
    /// Kink locations of tabulated factors inside the interval.
    std::vector<double> breakpoints() const;
    bool verified() const noexcept;
    bool operator==(const Kernel&) const = default;

private:
    Interval iv_;
    std::vector<KernelFactor> factors_;
};

/// Kernel value; ties t_l = t_{l+1} give 0.
double kernel_eval(const Kernel& kernel, std::span<const double> ts);

}  // namespace gmfs
