#include "gmfs/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gmfs/error.hpp"

namespace gmfs {

namespace {

constexpr double kSeriesLimit = 4.0;

double series_j(int n, double x) {
    const double half = 0.5 * x;
    const double q = -half * half;
    // (x/2)^n / n! built incrementally to avoid overflow of either factor.
    double term = 1.0;
    for (int k = 1; k <= n; ++k) term *= half / k;
    double sum = term;
    for (int m = 1; m < 200; ++m) {
        term *= q / (static_cast<double>(m) * (m + n));
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
}

double miller_j(int n, double x) {
    const double big = std::max<double>(n, x);
    int start = 2 * ((static_cast<int>(big + 20.0 + 3.0 * std::sqrt(big)) + 1) / 2);
    if (start < n + 2) start = 2 * ((n + 3) / 2);
    double next = 0.0;   // J_{k+1}
    double cur = 1e-300; // J_k
    double norm = 0.0;
    double wanted = 0.0;
    for (int k = start; k > 0; --k) {
        const double prev = 2.0 * k / x * cur - next;  // J_{k-1}
        next = cur;
        cur = prev;
        if (k - 1 == n) wanted = cur;
        if ((k - 1) % 2 == 0 && k - 1 > 0) norm += 2.0 * cur;
        if (std::abs(cur) > 1e250) {
            cur *= 1e-250;
            next *= 1e-250;
            norm *= 1e-250;
            wanted *= 1e-250;
        }
    }
    norm += cur;  // J_0 term
    if (n == 0) wanted = cur;
    return wanted / norm;
}

}  // namespace

double bessel_j(int n, double x) {
    if (n < 0) throw ArgumentError("Bessel order must be nonnegative");
    if (x < 0.0) {
        // J_n(-x) = (-1)^n J_n(x)
        const double v = bessel_j(n, -x);
        return (n % 2 == 0) ? v : -v;
    }
    if (x == 0.0) return n == 0 ? 1.0 : 0.0;
    if (x < kSeriesLimit) return series_j(n, x);
    return miller_j(n, x);
}

namespace {

double bisect_root(int n, double lo, double hi) {
    double flo = bessel_j(n, lo);
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double fm = bessel_j(n, mid);
        if (fm == 0.0) return mid;
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
        if (hi - lo <= 1e-14 * std::max(1.0, lo)) break;
    }
    return 0.5 * (lo + hi);
}

double mcmahon(int n, int s) {
    const double mu = 4.0 * n * n;
    const double beta = (s + 0.5 * n - 0.25) * std::numbers::pi;
    const double b8 = 8.0 * beta;
    return beta - (mu - 1.0) / b8 - 4.0 * (mu - 1.0) * (7.0 * mu - 31.0) / (3.0 * b8 * b8 * b8);
}

}  // namespace

BesselRootTable bessel_roots(int n, int count) {
    if (n < 0) throw ArgumentError("Bessel order must be nonnegative");
    if (count < 1) throw ArgumentError("root count must be positive");
    BesselRootTable table{n, {}};
    table.roots.reserve(static_cast<std::size_t>(count));
    double previous = 0.0;
    for (int s = 1; s <= count; ++s) {
        const double guess = mcmahon(n, s);
        double lo = guess - 0.5;
        double hi = guess + 0.5;
        bool bracketed = lo > previous && (bessel_j(n, lo) < 0.0) != (bessel_j(n, hi) < 0.0);
        if (bracketed) {
            // The window must hold exactly the s-th zero: reject if a second sign change hides in it.
            const double r = bisect_root(n, lo, hi);
            if (bessel_j(n, 0.5 * (lo + r)) * bessel_j(n, lo) < 0.0 ||
                bessel_j(n, 0.5 * (r + hi)) * bessel_j(n, hi) < 0.0) {
                bracketed = false;
            }
        }
        if (!bracketed) {
            // Scan forward from the previous zero (or from the origin).
            const double step = 0.05;
            lo = previous + 1e-6;
            double flo = bessel_j(n, lo);
            bool found = false;
            for (double x = lo + step; x < previous + std::numbers::pi + n + 10.0; x += step) {
                const double fx = bessel_j(n, x);
                if ((fx < 0.0) != (flo < 0.0)) {
                    hi = x;
                    found = true;
                    break;
                }
                lo = x;
                flo = fx;
            }
            if (!found) throw InternalError("failed to bracket a Bessel zero");
        }
        const double root = bisect_root(n, lo, hi);
        if (!(root > previous)) throw InternalError("Bessel zeros not increasing");
        table.roots.push_back(root);
        previous = root;
    }
    return table;
}

}  // namespace gmfs
