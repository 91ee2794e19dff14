#include "gmfs/basis.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>

#include "gmfs/error.hpp"

namespace gmfs {

namespace {

double legendre_p(long j, double y) {
    if (j == 0) return 1.0;
    double p0 = 1.0;
    double p1 = y;
    for (long q = 1; q < j; ++q) {
        const double p2 = ((2.0 * q + 1.0) * y * p1 - q * p0) / (q + 1.0);
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

// Dyadic cell c with t + L c / 2^level <= x < t + L (c + 1) / 2^level,
// using the same expression as the reported breakpoints.
long dyadic_cell(const Interval& iv, double x, int level) {
    const double cells = std::ldexp(1.0, level);
    const double L = iv.length();
    long c = static_cast<long>(std::floor((x - iv.t) / L * cells));
    const long max_c = static_cast<long>(cells);
    c = std::clamp(c, 0L, max_c);
    while (c > 0 && x < iv.t + L * (static_cast<double>(c) / cells)) --c;
    while (c < max_c && x >= iv.t + L * (static_cast<double>(c + 1) / cells)) ++c;
    return c;
}

int haar_level(long j) { return static_cast<int>(std::bit_width(static_cast<unsigned long>(j))) - 1; }

}  // namespace

OrthonormalSystem OrthonormalSystem::legendre(Interval iv) { return {Kind::legendre, iv}; }

OrthonormalSystem OrthonormalSystem::trigonometric(Interval iv) { return {Kind::trigonometric, iv}; }

OrthonormalSystem OrthonormalSystem::haar(Interval iv) { return {Kind::haar, iv}; }

OrthonormalSystem OrthonormalSystem::rademacher_walsh(Interval iv, int max_bits) {
    if (max_bits < 1 || max_bits > 30) throw ArgumentError("Rademacher-Walsh max_bits must be in [1, 30]");
    OrthonormalSystem s(Kind::rademacher_walsh, iv);
    s.max_bits_ = max_bits;
    return s;
}

OrthonormalSystem OrthonormalSystem::bessel_weighted(double T, int order, int count) {
    OrthonormalSystem s(Kind::bessel_weighted, Interval(0.0, T));
    s.order_ = order;
    s.weight_ = WeightFunction::identity();
    s.roots_ = std::make_shared<const BesselRootTable>(bessel_roots(order, count));
    for (double mu : s.roots_->roots) s.norms_.push_back(std::numbers::sqrt2 / (T * bessel_j(order + 1, mu)));
    return s;
}

OrthonormalSystem OrthonormalSystem::bessel_unit(Interval iv, int order, int count) {
    OrthonormalSystem s(Kind::bessel_unit, iv);
    s.order_ = order;
    s.roots_ = std::make_shared<const BesselRootTable>(bessel_roots(order, count));
    for (double mu : s.roots_->roots) {
        s.norms_.push_back(std::numbers::sqrt2 / (iv.length() * bessel_j(order + 1, mu)));
    }
    return s;
}

long OrthonormalSystem::capacity() const noexcept {
    switch (kind_) {
        case Kind::rademacher_walsh: return 1L << max_bits_;
        case Kind::bessel_weighted:
        case Kind::bessel_unit: return static_cast<long>(roots_->roots.size());
        default: return -1;
    }
}

std::string OrthonormalSystem::name() const {
    switch (kind_) {
        case Kind::legendre: return "legendre";
        case Kind::trigonometric: return "trigonometric";
        case Kind::haar: return "haar";
        case Kind::rademacher_walsh: return "rademacher_walsh";
        case Kind::bessel_weighted: return "bessel" + std::to_string(order_);
        case Kind::bessel_unit: return "bessel_unit" + std::to_string(order_);
    }
    return "unknown";
}

void OrthonormalSystem::check_index(long j) const {
    if (j < 0) throw RangeError("basis index must be nonnegative");
    const long cap = capacity();
    if (cap >= 0 && j >= cap) {
        throw RangeError(name() + ": index " + std::to_string(j) + " beyond enumerable range " + std::to_string(cap));
    }
    if (kind_ == Kind::haar && j >= (1L << 30)) throw RangeError("haar: index beyond supported range");
}

double OrthonormalSystem::operator()(long j, double x) const {
    check_index(j);
    const double L = iv_.length();
    switch (kind_) {
        case Kind::legendre: {
            const double y = (x - 0.5 * (iv_.T + iv_.t)) * 2.0 / L;
            return std::sqrt((2.0 * j + 1.0) / L) * legendre_p(j, y);
        }
        case Kind::trigonometric: {
            if (j == 0) return 1.0 / std::sqrt(L);
            const long r = (j + 1) / 2;
            const double arg = 2.0 * std::numbers::pi * r * (x - iv_.t) / L;
            const double c = std::numbers::sqrt2 / std::sqrt(L);
            return (j % 2 == 1) ? c * std::sin(arg) : c * std::cos(arg);
        }
        case Kind::haar: {
            if (j == 0) return 1.0 / std::sqrt(L);
            const int n = haar_level(j);
            const long k = j - (1L << n) + 1;
            const long cell = dyadic_cell(iv_, x, n + 1);
            if (cell / 2 != k - 1) return 0.0;
            const double amp = std::pow(2.0, 0.5 * n) / std::sqrt(L);
            return (cell % 2 == 0) ? amp : -amp;
        }
        case Kind::rademacher_walsh: {
            if (j == 0) return 1.0 / std::sqrt(L);
            const int top = static_cast<int>(std::bit_width(static_cast<unsigned long>(j)));  // largest m
            const long cell = dyadic_cell(iv_, x, top);
            int parity = 0;
            for (int b = 0; b < top; ++b) {
                if ((j >> b) & 1L) {
                    const int m = b + 1;
                    parity ^= static_cast<int>((cell >> (top - m)) & 1L);
                }
            }
            return (parity ? -1.0 : 1.0) / std::sqrt(L);
        }
        case Kind::bessel_weighted: {
            const double mu = roots_->roots[static_cast<std::size_t>(j)];
            return norms_[static_cast<std::size_t>(j)] * bessel_j(order_, mu * x / iv_.T);
        }
        case Kind::bessel_unit: {
            const double u = std::max(0.0, x - iv_.t);
            const double mu = roots_->roots[static_cast<std::size_t>(j)];
            return std::sqrt(u) * norms_[static_cast<std::size_t>(j)] * bessel_j(order_, mu * u / L);
        }
    }
    return 0.0;
}

std::vector<double> OrthonormalSystem::breakpoints(long j) const {
    check_index(j);
    std::vector<double> out;
    if (j == 0) return out;
    const double L = iv_.length();
    if (kind_ == Kind::haar) {
        const int n = haar_level(j);
        const long k = j - (1L << n) + 1;
        const double cells = std::ldexp(1.0, n + 1);
        for (long c : {2 * (k - 1), 2 * (k - 1) + 1, 2 * k}) {
            const double b = iv_.t + L * (static_cast<double>(c) / cells);
            if (b > iv_.t && b < iv_.T) out.push_back(b);
        }
    } else if (kind_ == Kind::rademacher_walsh) {
        const int top = static_cast<int>(std::bit_width(static_cast<unsigned long>(j)));
        const double cells = std::ldexp(1.0, top);
        for (long c = 1; c < (1L << top); ++c) out.push_back(iv_.t + L * (static_cast<double>(c) / cells));
    }
    return out;
}

std::vector<double> OrthonormalSystem::breakpoints_upto(long count) const {
    std::vector<double> out;
    if (!piecewise_constant() || count <= 1) return out;
    if (kind_ == Kind::haar) {
        for (long j = 1; j < count; ++j) {
            auto b = breakpoints(j);
            out.insert(out.end(), b.begin(), b.end());
        }
    } else {
        // RW breakpoints nest: the member with the highest top bit covers all.
        long top_member = 1;
        for (long j = 1; j < count; ++j) {
            if (std::bit_width(static_cast<unsigned long>(j)) > std::bit_width(static_cast<unsigned long>(top_member))) {
                top_member = j;
            }
        }
        out = breakpoints(top_member);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

double eval_basis(const OrthonormalSystem& system, long j, double x) { return system(j, x); }

Matrix gram_matrix(const OrthonormalSystem& system, int count, const QuadratureSpec& quad) {
    if (count < 1) throw ArgumentError("gram_matrix requires count >= 1");
    Matrix g(count, count);
    const auto& iv = system.interval();
    const auto& w = system.weight();
    for (int i = 0; i < count; ++i) {
        for (int j = i; j < count; ++j) {
            auto bps = system.breakpoints(i);
            auto bj = system.breakpoints(j);
            bps.insert(bps.end(), bj.begin(), bj.end());
            std::sort(bps.begin(), bps.end());
            const auto r = integrate([&](double x) { return system(i, x) * system(j, x) * w(x); }, iv.t, iv.T, bps, quad);
            g(i, j) = r.value;
            g(j, i) = r.value;
        }
    }
    return g;
}

double identity_deviation(const Matrix& gram) {
    double dev = 0.0;
    for (int i = 0; i < gram.rows; ++i) {
        for (int j = 0; j < gram.cols; ++j) dev = std::max(dev, std::abs(gram(i, j) - (i == j ? 1.0 : 0.0)));
    }
    return dev;
}

double gram_tolerance(const OrthonormalSystem& system) {
    switch (system.kind()) {
        case OrthonormalSystem::Kind::legendre:
        case OrthonormalSystem::Kind::trigonometric: return 1e-12;
        case OrthonormalSystem::Kind::haar:
        case OrthonormalSystem::Kind::rademacher_walsh: return 1e-14;
        default: return 1e-8;
    }
}

namespace {

bool parse_order(const std::string& s, std::size_t prefix, int& order) {
    if (s.size() == prefix) {
        order = 0;
        return true;
    }
    const std::string tail = s.substr(prefix);
    if (tail.empty() || tail.find_first_not_of("0123456789") != std::string::npos || tail.size() > 3) return false;
    order = std::stoi(tail);
    return true;
}

}  // namespace

OrthonormalSystem make_system(const std::string& name, Interval iv, int count_hint) {
    const int count = std::max(count_hint, 1);
    if (name == "legendre") return OrthonormalSystem::legendre(iv);
    if (name == "trigonometric" || name == "trig") return OrthonormalSystem::trigonometric(iv);
    if (name == "haar") return OrthonormalSystem::haar(iv);
    if (name == "rademacher_walsh" || name == "walsh" || name == "rw") return OrthonormalSystem::rademacher_walsh(iv);
    int order = 0;
    if (name.rfind("bessel_unit", 0) == 0 && parse_order(name, 11, order)) {
        return OrthonormalSystem::bessel_unit(iv, order, count);
    }
    if (name.rfind("bessel", 0) == 0 && parse_order(name, 6, order)) {
        if (iv.t != 0.0) throw ArgumentError("weighted Bessel system requires the interval to start at 0");
        return OrthonormalSystem::bessel_weighted(iv.T, order, count);
    }
    throw ArgumentError("unknown orthonormal system '" + name + "'");
}

}  // namespace gmfs
