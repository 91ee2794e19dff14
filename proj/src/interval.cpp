#include "gmfs/interval.hpp"

#include <cmath>

#include "gmfs/error.hpp"

namespace gmfs {

Interval::Interval(double start, double end) : t(start), T(end) {
    if (!std::isfinite(start) || !std::isfinite(end) || !(start < end)) {
        throw ArgumentError("interval requires finite t < T");
    }
}

WeightFunction WeightFunction::constant(double c) {
    if (!std::isfinite(c) || c < 0.0) {
        throw ArgumentError("constant weight must be finite and nonnegative");
    }
    WeightFunction w;
    w.kind_ = Kind::constant;
    w.value_ = c;
    w.name_ = "const";
    return w;
}

WeightFunction WeightFunction::identity() {
    WeightFunction w;
    w.kind_ = Kind::identity;
    w.value_ = 0.0;
    w.name_ = "identity";
    return w;
}

WeightFunction WeightFunction::custom(std::function<double(double)> f, std::string name) {
    if (!f) {
        throw ArgumentError("custom weight requires a callable");
    }
    WeightFunction w;
    w.kind_ = Kind::custom;
    w.value_ = 0.0;
    w.fn_ = std::make_shared<const std::function<double(double)>>(std::move(f));
    w.name_ = std::move(name);
    return w;
}

double WeightFunction::operator()(double x) const {
    switch (kind_) {
        case Kind::constant: return value_;
        case Kind::identity: return x;
        case Kind::custom: return (*fn_)(x);
    }
    return 0.0;
}

bool WeightFunction::same_as(const WeightFunction& other) const noexcept {
    if (kind_ != other.kind_) return false;
    switch (kind_) {
        case Kind::constant: return value_ == other.value_;
        case Kind::identity: return true;
        case Kind::custom: return fn_ == other.fn_;
    }
    return false;
}

}  // namespace gmfs
