#include "gmfs/kernel.hpp"

#include <algorithm>
#include <cmath>

#include "gmfs/error.hpp"

namespace gmfs {

KernelFactor KernelFactor::constant(double c) {
    if (!std::isfinite(c)) throw ArgumentError("constant kernel factor must be finite");
    KernelFactor f;
    f.kind_ = Kind::constant;
    f.param_ = c;
    return f;
}

KernelFactor KernelFactor::power(double a) {
    if (!std::isfinite(a) || a < 0.0) throw ArgumentError("power kernel factor needs a finite exponent >= 0");
    KernelFactor f;
    f.kind_ = Kind::power;
    f.param_ = a;
    return f;
}

KernelFactor KernelFactor::sqrt_shift() {
    KernelFactor f;
    f.kind_ = Kind::sqrt_shift;
    f.param_ = 0.5;
    return f;
}

KernelFactor KernelFactor::exponential(double c) {
    if (!std::isfinite(c)) throw ArgumentError("exponential kernel factor rate must be finite");
    KernelFactor f;
    f.kind_ = Kind::exponential;
    f.param_ = c;
    return f;
}

KernelFactor KernelFactor::tabulated(std::vector<double> xs, std::vector<double> ys) {
    if (xs.size() < 2 || xs.size() != ys.size()) throw ArgumentError("tabulated factor needs >= 2 matching nodes");
    if (!std::is_sorted(xs.begin(), xs.end()) || std::adjacent_find(xs.begin(), xs.end()) != xs.end()) {
        throw ArgumentError("tabulated factor nodes must be strictly increasing");
    }
    for (double y : ys) {
        if (!std::isfinite(y)) throw ArgumentError("tabulated factor values must be finite");
    }
    KernelFactor f;
    f.kind_ = Kind::tabulated;
    f.param_ = 0.0;
    f.xs_ = std::move(xs);
    f.ys_ = std::move(ys);
    return f;
}

double KernelFactor::operator()(double s, double t0) const {
    const double u = std::max(0.0, s - t0);
    switch (kind_) {
        case Kind::constant: return param_;
        case Kind::power: return param_ == 0.0 ? 1.0 : std::pow(u, param_);
        case Kind::sqrt_shift: return std::sqrt(u);
        case Kind::exponential: return std::exp(param_ * u);
        case Kind::tabulated: {
            if (s <= xs_.front()) return ys_.front();
            if (s >= xs_.back()) return ys_.back();
            const auto it = std::upper_bound(xs_.begin(), xs_.end(), s);
            const std::size_t i = static_cast<std::size_t>(it - xs_.begin());
            const double w = (s - xs_[i - 1]) / (xs_[i] - xs_[i - 1]);
            return (1.0 - w) * ys_[i - 1] + w * ys_[i];
        }
    }
    return 0.0;
}

std::string KernelFactor::name() const {
    switch (kind_) {
        case Kind::constant: return "const";
        case Kind::power: return "pow";
        case Kind::sqrt_shift: return "sqrt_shift";
        case Kind::exponential: return "exp";
        case Kind::tabulated: return "tabulated";
    }
    return "unknown";
}

Kernel::Kernel(Interval iv, std::vector<KernelFactor> factors) : iv_(iv), factors_(std::move(factors)) {
    if (factors_.empty()) throw ArgumentError("kernel multiplicity must be >= 1");
}

Kernel Kernel::unit(Interval iv, int k) {
    if (k < 1) throw ArgumentError("kernel multiplicity must be >= 1");
    return Kernel(iv, std::vector<KernelFactor>(static_cast<std::size_t>(k), KernelFactor::constant(1.0)));
}

std::vector<double> Kernel::breakpoints() const {
    std::vector<double> out;
    for (const auto& f : factors_) {
        for (double x : f.xs()) {
            if (x > iv_.t && x < iv_.T) out.push_back(x);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool Kernel::verified() const noexcept {
    return std::all_of(factors_.begin(), factors_.end(), [](const KernelFactor& f) { return f.verified(); });
}

double kernel_eval(const Kernel& kernel, std::span<const double> ts) {
    if (static_cast<int>(ts.size()) != kernel.multiplicity()) {
        throw ArgumentError("kernel_eval: argument count differs from multiplicity");
    }
    for (std::size_t l = 0; l + 1 < ts.size(); ++l) {
        if (!(ts[l] < ts[l + 1])) return 0.0;
    }
    double v = 1.0;
    for (std::size_t l = 0; l < ts.size(); ++l) v *= kernel.factor(static_cast<int>(l), ts[l]);
    return v;
}

}  // namespace gmfs
