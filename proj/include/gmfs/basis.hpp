#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "gmfs/bessel.hpp"
#include "gmfs/interval.hpp"
#include "gmfs/quadrature.hpp"

namespace gmfs {

/// Complete orthonormal function system on an interval.
///
/// Linear indexing of the double-indexed systems:
///  - Haar: j = 0 is the constant; j >= 1 maps to (n, k) with
///    n = floor(log2 j), k = j - 2^n + 1.
///  - Rademacher-Walsh: j = 0 is the constant; for j >= 1 the set bits of j
///    select {m_1 < ... < m_k} (bit b <-> m = b + 1).
///
/// Bessel systems carry a precomputed, immutable root table; index j must
/// stay below its size.
class OrthonormalSystem {
public:
    enum class Kind { legendre, trigonometric, haar, rademacher_walsh, bessel_weighted, bessel_unit };

    static OrthonormalSystem legendre(Interval iv);
    static OrthonormalSystem trigonometric(Interval iv);
    static OrthonormalSystem haar(Interval iv);
    static OrthonormalSystem rademacher_walsh(Interval iv, int max_bits = 10);
    /// Psi_j(x) = sqrt(2) / (T J_{n+1}(mu_j)) J_n(mu_j x / T) on [0, T],
    /// orthonormal with weight x.
    static OrthonormalSystem bessel_weighted(double T, int order, int count = 64);
    /// phi_j(x) = sqrt(2 (x - t)) / ((T - t) J_{n+1}(mu_j)) J_n(mu_j (x - t) / (T - t)),
    /// orthonormal with unit weight on [t, T].
    static OrthonormalSystem bessel_unit(Interval iv, int order, int count = 64);

    Kind kind() const noexcept { return kind_; }
    const Interval& interval() const noexcept { return iv_; }
    const WeightFunction& weight() const noexcept { return weight_; }
    bool weighted() const noexcept { return !weight_.is_unit(); }
    int bessel_order() const noexcept { return order_; }
    int max_bits() const noexcept { return max_bits_; }
    /// Largest usable index + 1, or -1 if unbounded.
    long capacity() const noexcept;
    std::string name() const;

    /// phi_j(x). Right-continuous at jumps. Throws RangeError if j is not
    /// enumerable.
    double operator()(long j, double x) const;

    /// Points in (t, T) where member j may jump (empty for smooth members).
    std::vector<double> breakpoints(long j) const;
    /// Union of breakpoints of members 0..count-1, sorted and deduplicated.
    std::vector<double> breakpoints_upto(long count) const;
    /// True when members are not smooth inside the interval up to their
    /// breakpoints (Haar / RW) -> integrals of products are exact per panel.
    bool piecewise_constant() const noexcept {
        return kind_ == Kind::haar || kind_ == Kind::rademacher_walsh;
    }

    const BesselRootTable* roots() const noexcept { return roots_.get(); }

private:
    OrthonormalSystem(Kind kind, Interval iv) : kind_(kind), iv_(iv) {}

    void check_index(long j) const;

    Kind kind_;
    Interval iv_;
    WeightFunction weight_ = WeightFunction::constant(1.0);
    int order_ = 0;
    int max_bits_ = 0;
    std::shared_ptr<const BesselRootTable> roots_;
    std::vector<double> norms_;  // sqrt(2) / (L J_{n+1}(mu_j)) for Bessel kinds
};

/// phi_j(x) for a system (free-function form).
double eval_basis(const OrthonormalSystem& system, long j, double x);

/// Dense row-major square matrix.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), data(static_cast<std::size_t>(r) * c, 0.0) {}
    double& operator()(int i, int j) { return data[static_cast<std::size_t>(i) * cols + j]; }
    double operator()(int i, int j) const { return data[static_cast<std::size_t>(i) * cols + j]; }
};

/// G(i, j) = int phi_i phi_j r dx over the system interval, panels split at
/// every breakpoint of the participating members.
Matrix gram_matrix(const OrthonormalSystem& system, int count, const QuadratureSpec& quad = {});

/// max |G - I|.
double identity_deviation(const Matrix& gram);

/// Tolerance used to accept a Gram matrix for this system kind.
double gram_tolerance(const OrthonormalSystem& system);

/// Parse a CLI/config system name: legendre, trigonometric (trig), haar,
/// rademacher_walsh (walsh, rw), bessel<N> (weighted), bessel_unit<N>.
OrthonormalSystem make_system(const std::string& name, Interval iv, int count_hint);

}  // namespace gmfs
