#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gmfs/basis.hpp"
#include "gmfs/coeff.hpp"
#include "gmfs/drivers.hpp"
#include "gmfs/oracle.hpp"

namespace gmfs {

/// Basis random variables per (slot g, basis index j): zeta (Wiener), xi
/// (Gaussian martingale) or pi (Poisson, one mark factor per slot).
struct BasisVariables {
    DriverKind kind = DriverKind::wiener;
    IndexCombo combo;
    std::vector<std::vector<double>> table;  // [slot][j]
    /// E[x_j^(i) x_j'^(i)] = pair_weight * delta_jj' for i != 0 (Gaussian
    /// kinds whose variance density matches the basis weight up to a
    /// constant). Empty when no indicator correction applies.
    std::optional<double> pair_weight;
    /// Variance density of the driver and weight of the basis (r).
    WeightFunction rho;
    WeightFunction basis_weight;
    std::string provenance;

    int slots() const noexcept { return static_cast<int>(table.size()); }
    int count(int g) const { return static_cast<int>(table.at(static_cast<std::size_t>(g)).size()); }
    double operator()(int g, int j) const {
        return table[static_cast<std::size_t>(g)][static_cast<std::size_t>(j)];
    }
};

/// sum_l phi_j(tau_l) dw^(i)_l.
double zeta_from_path(const WienerPath& path, const OrthonormalSystem& system, int j, int i);
/// sum_l phi_j(tau_l) dM^(i)_l.
double xi_from_path(const GaussianMartingalePath& path, const OrthonormalSystem& system, int j, int i);

enum class PoissonMode { compensated, raw };

/// int_t^T phi_j ds for j < count.
std::vector<double> basis_integrals(const OrthonormalSystem& system, int count, const QuadratureSpec& quad = {});

/// Exact jump sum of phi_j(s) phi_g(y) minus int phi_j * int phi_g dPi
/// (raw mode: no compensator). i = 0 gives the deterministic double
/// integral. The mark factor must have finite moments through moment_order.
double pi_from_realization(const PoissonRealization& real, const OrthonormalSystem& system, int j,
                           const MarkFactor& mark, int i, PoissonMode mode = PoissonMode::compensated,
                           int moment_order = 4, const QuadratureSpec& quad = {});

/// Variables for slots 0..k-1 and j < count, from the basis grid on the
/// path's own partition.
BasisVariables wiener_variables(const WienerPath& path, const BasisGrid& grid, const IndexCombo& combo, int count);
BasisVariables martingale_variables(const GaussianMartingalePath& path, const OrthonormalSystem& system,
                                    const BasisGrid& grid, const IndexCombo& combo, int count);
/// integrals: basis_integrals(system, >= count). Moment condition checked
/// through order 2^(k+1).
BasisVariables poisson_variables(const PoissonRealization& real, const OrthonormalSystem& system,
                                 const IndexCombo& combo, const std::vector<MarkFactor>& marks, int count,
                                 std::span<const double> integrals);

/// Pair weight for a martingale with density rho under a basis with weight
/// r: c when rho = c * r, empty otherwise.
std::optional<double> martingale_pair_weight(const WeightFunction& rho, const WeightFunction& basis_weight);

enum class CorrectionKind { explicit_k_le_4, pairing_general, prelimit };

struct Correction {
    CorrectionKind kind = CorrectionKind::explicit_k_le_4;
    int N = 0;  // prelimit partition size

    static Correction explicit_formulas() { return {CorrectionKind::explicit_k_le_4, 0}; }
    static Correction pairing() { return {CorrectionKind::pairing_general, 0}; }
    static Correction prelimit(int N) { return {CorrectionKind::prelimit, N}; }
    std::string name() const;
};

/// Realization access needed by the prelimit correction.
struct PrelimitContext {
    const SlotIncrements* increments = nullptr;
    const BasisGrid* grid = nullptr;
};

struct ExpansionSample {
    double value = 0.0;
    std::vector<int> box;
    IndexCombo combo;
    Correction correction;
};

/// Truncated expansion sum_idx C_idx (prod_g x_g(j_g) - correction).
ExpansionSample expand(const CoeffTensor& tensor, const BasisVariables& vars, const IndexCombo& combo,
                       const Correction& correction, const PrelimitContext* context = nullptr);

struct WeightCheck {
    double bound = 1e8;
    int grid = 4096;
};

/// expand with a weighted tensor C~ and variables over the weighted
/// system, after checking rho / r is bounded on a midpoint grid.
ExpansionSample expand_weighted(const CoeffTensor& tensor, const BasisVariables& vars, const IndexCombo& combo,
                                const Correction& correction, const PrelimitContext* context = nullptr,
                                const WeightCheck& check = {});

/// sum_idx C_idx prod_g x_g(j_g) by successive contraction.
double contract_product(const CoeffTensor& tensor, const BasisVariables& vars);

/// The transformed k = 1..4 cases written out term by term; pair_weight w
/// multiplies each indicator pair.
double expand_explicit(const CoeffTensor& tensor, const BasisVariables& vars, const IndexCombo& combo, double w);

/// Sum over all partial matchings of the slots; each admissible pair
/// (i_a = i_b != 0) contributes -w 1{j_a = j_b}.
double expand_pairing(const CoeffTensor& tensor, const BasisVariables& vars, const IndexCombo& combo, double w);

}  // namespace gmfs
