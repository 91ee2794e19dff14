// Test-side references, written independently of the library: plain
// Gauss-Legendre from std::legendre, the Legendre basis from std::legendre,
// Bessel zeros by scanning std::cyl_bessel_j, and small statistics helpers.
#pragma once

#include <cmath>
#include <numbers>
#include <numeric>
#include <vector>

namespace ref {

struct Rule {
    std::vector<double> x, w;
};

inline Rule gauss(int n) {
    Rule r;
    for (int i = 0; i < n; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p = std::legendre(n, z), q = std::legendre(n - 1, z);
            dp = n * (z * p - q) / (z * z - 1.0);
            double dz = p / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        double p = std::legendre(n, z), q = std::legendre(n - 1, z);
        dp = n * (z * p - q) / (z * z - 1.0);
        r.x.push_back(z);
        r.w.push_back(2.0 / ((1.0 - z * z) * dp * dp));
    }
    return r;
}

inline double legendre(int j, double x, double t, double T) {
    return std::sqrt((2.0 * j + 1.0) / (T - t)) * std::legendre(static_cast<unsigned>(j), (2.0 * x - t - T) / (T - t));
}

/// int_a^b f by composite Gauss rule with `panels` equal panels.
template <typename F>
double integrate(F&& f, double a, double b, int panels = 64, int n = 20) {
    static const Rule g = gauss(20);
    (void)n;
    double h = (b - a) / panels, s = 0.0;
    for (int p = 0; p < panels; ++p) {
        double c = a + (p + 0.5) * h;
        for (std::size_t q = 0; q < g.x.size(); ++q) s += 0.5 * h * g.w[q] * f(c + 0.5 * h * g.x[q]);
    }
    return s;
}

/// int over t < t1 < t2 < T of f(t1, t2), mapped to the unit square.
template <typename F>
double simplex2(F&& f, double t, double T, int n = 40) {
    const Rule g = gauss(n);
    const double L = T - t;
    double s = 0.0;
    for (std::size_t a = 0; a < g.x.size(); ++a) {
        double v = 0.5 * (g.x[a] + 1.0);
        for (std::size_t b = 0; b < g.x.size(); ++b) {
            double u = 0.5 * (g.x[b] + 1.0);
            s += 0.25 * g.w[a] * g.w[b] * f(t + L * v * u, t + L * v) * L * L * v;
        }
    }
    return s;
}

/// int over t < t1 < t2 < t3 < T, nested unit-cube map.
template <typename F>
double simplex3(F&& f, double t, double T, int n = 24) {
    const Rule g = gauss(n);
    const double L = T - t;
    double s = 0.0;
    for (std::size_t a = 0; a < g.x.size(); ++a) {
        double w3 = 0.5 * (g.x[a] + 1.0);
        for (std::size_t b = 0; b < g.x.size(); ++b) {
            double w2 = 0.5 * (g.x[b] + 1.0);
            for (std::size_t c = 0; c < g.x.size(); ++c) {
                double w1 = 0.5 * (g.x[c] + 1.0);
                double t3 = L * w3, t2 = t3 * w2, t1 = t2 * w1;
                s += 0.125 * g.w[a] * g.w[b] * g.w[c] * f(t + t1, t + t2, t + t3) * L * L * L * w3 * w3 * w2;
            }
        }
    }
    return s;
}

inline std::vector<double> bessel_zeros(int n, int count) {
    std::vector<double> out;
    double x = 0.5, fx = std::cyl_bessel_j(n, x);
    while (static_cast<int>(out.size()) < count) {
        double y = x + 0.02, fy = std::cyl_bessel_j(n, y);
        if (fx * fy < 0.0) {
            double a = x, b = y, fa = fx;
            for (int it = 0; it < 200; ++it) {
                double c = 0.5 * (a + b);
                if (c == a || c == b) break;
                double fc = std::cyl_bessel_j(n, c);
                if ((fc < 0.0) == (fa < 0.0)) {
                    a = c;
                    fa = fc;
                } else {
                    b = c;
                }
            }
            out.push_back(0.5 * (a + b));
        }
        x = y;
        fx = fy;
    }
    return out;
}

inline double mean(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

inline double variance(const std::vector<double>& v) {
    double m = mean(v), s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

/// Standard error of the sample variance (from the fourth central moment).
inline double variance_se(const std::vector<double>& v) {
    double m = mean(v), s4 = 0.0;
    for (double x : v) s4 += std::pow(x - m, 4);
    double n = static_cast<double>(v.size());
    double var = variance(v);
    return std::sqrt((s4 / n - var * var) / n);
}

inline double covariance(const std::vector<double>& a, const std::vector<double>& b) {
    double ma = mean(a), mb = mean(b), s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - ma) * (b[i] - mb);
    return s / static_cast<double>(a.size() - 1);
}

inline double correlation(const std::vector<double>& a, const std::vector<double>& b) {
    return covariance(a, b) / std::sqrt(variance(a) * variance(b));
}

/// |mean| in units of its standard error.
inline double z_mean(const std::vector<double>& v, double expected = 0.0) {
    return (mean(v) - expected) / std::sqrt(variance(v) / static_cast<double>(v.size()));
}

}  // namespace ref
