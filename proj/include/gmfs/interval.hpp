#pragma once

#include <functional>
#include <memory>
#include <string>

namespace gmfs {

/// Closed time interval [t, T] with t < T, both finite.
struct Interval {
    double t = 0.0;
    double T = 1.0;

    Interval() = default;
    Interval(double start, double end);

    double length() const noexcept { return T - t; }
    bool contains(double x) const noexcept { return x >= t && x <= T; }
    bool operator==(const Interval&) const = default;
};

/// Nonnegative continuous weight r(x) (also used for martingale variance
/// densities rho). Constant and identity weights are tagged so that exact
/// shortcuts (c * dt, closed-form norms) and weight comparisons are possible.
class WeightFunction {
public:
    enum class Kind { constant, identity, custom };

    static WeightFunction constant(double c);
    /// r(x) = x.
    static WeightFunction identity();
    static WeightFunction custom(std::function<double(double)> f, std::string name);

    /// Unit weight.
    WeightFunction() = default;

    double operator()(double x) const;

    Kind kind() const noexcept { return kind_; }
    bool is_constant() const noexcept { return kind_ == Kind::constant; }
    bool is_unit() const noexcept { return kind_ == Kind::constant && value_ == 1.0; }
    double constant_value() const noexcept { return value_; }
    const std::string& name() const noexcept { return name_; }

    /// True when both describe the same function by construction. Custom
    /// weights compare equal only to themselves (same shared callable).
    bool same_as(const WeightFunction& other) const noexcept;

private:
    Kind kind_ = Kind::constant;
    double value_ = 1.0;
    std::shared_ptr<const std::function<double(double)>> fn_;
    std::string name_ = "const";
};

}  // namespace gmfs
