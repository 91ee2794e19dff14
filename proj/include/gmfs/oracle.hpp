#pragma once

#include <span>
#include <string>
#include <vector>

#include "gmfs/basis.hpp"
#include "gmfs/coeff.hpp"
#include "gmfs/drivers.hpp"
#include "gmfs/execution.hpp"
#include "gmfs/kernel.hpp"

namespace gmfs {

enum class DriverKind { wiener, poisson, martingale };

std::string to_string(DriverKind kind);

/// (i_1, ..., i_k): driver component per slot, 0 = deterministic time.
using IndexCombo = std::vector<int>;

void check_combo(const IndexCombo& combo, int m);

/// phi_j(tau_l) for j < count and the left nodes l < N of a partition.
class BasisGrid {
public:
    BasisGrid(const OrthonormalSystem& system, const Partition& partition, int count,
              Execution exec = Execution::parallel);

    int count() const noexcept { return count_; }
    const WeightFunction& weight() const noexcept { return weight_; }
    int cells() const noexcept { return cells_; }
    std::span<const double> row(int j) const {
        return {values_.data() + static_cast<std::size_t>(j) * cells_, static_cast<std::size_t>(cells_)};
    }
    double operator()(int j, int l) const noexcept {
        return values_[static_cast<std::size_t>(j) * cells_ + l];
    }

private:
    int count_;
    int cells_;
    WeightFunction weight_;
    std::vector<double> values_;
};

/// Per-slot driver increments on a partition: Delta w, Delta M, or the
/// interval measure nu~([tau_l, tau_{l+1}), phi_g) (jump sum of the slot's
/// mark factor minus dtau * int phi_g dPi).
struct SlotIncrements {
    Partition partition;
    DriverKind kind = DriverKind::wiener;
    IndexCombo combo;
    std::vector<std::vector<double>> delta;  // [slot][cell]

    int multiplicity() const noexcept { return static_cast<int>(combo.size()); }
    int cells() const noexcept { return partition.size(); }
};

/// N must divide the path's cell count (increments are summed).
SlotIncrements slot_increments(const WienerPath& path, const IndexCombo& combo, int N);
SlotIncrements slot_increments(const GaussianMartingalePath& path, const IndexCombo& combo, int N);
/// marks: one factor per slot. Any N >= 1.
SlotIncrements slot_increments(const PoissonRealization& real, const IndexCombo& combo,
                               const std::vector<MarkFactor>& marks, int N);

struct OracleOptions {
    int max_multiplicity = 3;
};

struct OracleResult {
    double value = 0.0;
    int N = 0;
    DriverKind kind = DriverKind::wiener;
    IndexCombo combo;
};

/// sum_{l_k > ... > l_1} prod_g psi_g(tau_{l_g}) dD_g(l_g) by running
/// prefix accumulation, O(k N).
OracleResult iterated_sum(const Kernel& kernel, const SlotIncrements& inc, const OracleOptions& options = {});

/// Same nested sum by plain nested loops, O(N^k). Reference for tests.
double iterated_sum_naive(const Kernel& kernel, const SlotIncrements& inc);

/// Z_g(j) = sum_l phi_j(tau_l) dD_g(l): the discretized basis variable on
/// the slot increments.
double slot_projection(const SlotIncrements& inc, const BasisGrid& grid, int slot, int j);

/// sum over tuples (l_1..l_k) with at least one coincidence of
/// prod_g phi_{j_g}(tau_{l_g}) dD_g(l_g), by inclusion-exclusion. k <= 3.
double prelimit_gk_sum(const SlotIncrements& inc, const BasisGrid& grid, const MultiIndex& idx,
                       const OracleOptions& options = {});

/// sum over the tensor box of C_idx * prelimit_gk_sum(idx), contracted so
/// the cost is O(N prod p) instead of per-index sums.
double prelimit_correction(const CoeffTensor& tensor, const SlotIncrements& inc, const BasisGrid& grid,
                           const OracleOptions& options = {});

}  // namespace gmfs
