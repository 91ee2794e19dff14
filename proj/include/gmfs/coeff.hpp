#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "gmfs/basis.hpp"
#include "gmfs/execution.hpp"
#include "gmfs/kernel.hpp"
#include "gmfs/quadrature.hpp"

namespace gmfs {

/// (j_1, ..., j_k), one basis index per kernel argument.
using MultiIndex = std::vector<int>;

struct CoeffQuadratureInfo {
    int nodes_per_panel = 0;
    int panels = 0;
    double error_estimate = 0.0;
};

/// Dense tensor of Fourier coefficients C_{j_k...j_1} (or the weighted
/// C~) over the box 0 <= j_l <= p_l. Storage is j_1-fastest.
class CoeffTensor {
public:
    CoeffTensor(Kernel kernel, OrthonormalSystem system, bool weighted, std::vector<int> box,
                std::vector<double> values, CoeffQuadratureInfo quad);

    const Kernel& kernel() const noexcept { return kernel_; }
    const OrthonormalSystem& system() const noexcept { return system_; }
    bool weighted() const noexcept { return weighted_; }
    int multiplicity() const noexcept { return static_cast<int>(box_.size()); }
    /// Upper index p_l per dimension (inclusive).
    const std::vector<int>& box() const noexcept { return box_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    const CoeffQuadratureInfo& quadrature() const noexcept { return quad_; }

    std::size_t flat_index(std::span<const int> idx) const;
    /// Inverse of flat_index.
    MultiIndex multi_index(std::size_t flat) const;
    double at(std::span<const int> idx) const { return values_[flat_index(idx)]; }
    double operator[](std::size_t flat) const { return values_[flat]; }

    /// Restriction to a smaller box (coefficients do not depend on the box).
    CoeffTensor sub_box(const std::vector<int>& box) const;

    /// Fraction of entries with |C| <= threshold.
    double sparsity(double threshold = 1e-14) const;

private:
    Kernel kernel_;
    OrthonormalSystem system_;
    bool weighted_;
    std::vector<int> box_;
    std::vector<std::size_t> strides_;
    std::vector<double> values_;
    CoeffQuadratureInfo quad_;
};

struct CoeffOptions {
    QuadratureSpec quad{};
    /// Maximum number of tensor entries.
    std::size_t budget = 10'000'000;
    Execution exec = Execution::parallel;
};

struct CoeffValue {
    double value = 0.0;
    double error_estimate = 0.0;
};

/// Single coefficient by nested iterated quadrature over the simplex
/// (innermost variable first). weighted multiplies every level by the
/// system weight r.
CoeffValue coeff(const Kernel& kernel, const OrthonormalSystem& system, const MultiIndex& idx, bool weighted,
                 const QuadratureSpec& quad = {});

/// Whole box. Inner integrals are cached per (level, index prefix, node),
/// so the cost is O(prod p_l * nodes) rather than O(nodes^k). Throws
/// SizeError before any work if the box exceeds the budget.
CoeffTensor coeff_tensor(const Kernel& kernel, const OrthonormalSystem& system, const std::vector<int>& box,
                         bool weighted, const CoeffOptions& options = {});

enum class NormMethod { automatic, analytic, quadrature };

/// ||K||^2 with optional weight prod r(t_l). Closed form for products of
/// constant / power / sqrt factors (with unit, constant or identity-at-0
/// weights); nested quadrature otherwise.
double kernel_norm_sq(const Kernel& kernel, const WeightFunction& weight = WeightFunction::constant(1.0),
                      NormMethod method = NormMethod::automatic, const QuadratureSpec& quad = {});

std::optional<double> kernel_norm_sq_analytic(const Kernel& kernel, const WeightFunction& weight);

struct ParsevalReport {
    double partial_sum = 0.0;
    double kernel_norm_sq = 0.0;
    /// kernel_norm_sq - partial_sum; equals the mean-square truncation
    /// error for combos of distinct nonzero components.
    double residual = 0.0;
    NormMethod norm_method = NormMethod::analytic;
};

ParsevalReport parseval_partial(const CoeffTensor& tensor);

/// Iterates all multi-indices of a box in storage order (j_1 fastest).
template <typename F>
void for_each_index(const std::vector<int>& box, F&& f) {
    MultiIndex idx(box.size(), 0);
    while (true) {
        f(static_cast<const MultiIndex&>(idx));
        std::size_t l = 0;
        while (l < box.size()) {
            if (++idx[l] <= box[l]) break;
            idx[l] = 0;
            ++l;
        }
        if (l == box.size()) return;
    }
}

}  // namespace gmfs
