#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gmfs/basis.hpp"
#include "gmfs/coeff.hpp"
#include "gmfs/drivers.hpp"
#include "gmfs/execution.hpp"
#include "gmfs/expansions.hpp"
#include "gmfs/kernel.hpp"
#include "gmfs/oracle.hpp"

namespace gmfs {

struct DriverConfig {
    DriverKind kind = DriverKind::wiener;
    int m = 1;
    /// Gaussian martingale variance density.
    WeightFunction rho;
    /// Poisson: Pi = lambda * Exp(1); one mark factor per slot (a single
    /// entry is broadcast to all slots).
    double lambda = 5.0;
    std::vector<MarkFactor> marks{MarkFactor{1.0, 1.0}};
    double jump_budget = 1e6;
};

struct ExperimentSpec {
    ExperimentSpec(Kernel k, OrthonormalSystem sys) : kernel(std::move(k)), system(std::move(sys)) {}

    Kernel kernel;
    OrthonormalSystem system;
    /// Use C~ with the system weight (expand_weighted).
    bool weighted = false;
    IndexCombo combo;
    /// Truncation boxes; a box is one p per slot.
    std::vector<std::vector<int>> boxes;
    DriverConfig driver;
    /// Oracle / realization partition size.
    int N = 4096;
    int trials = 1000;
    std::uint64_t seed = 0;
    Correction correction = Correction::explicit_formulas();
    /// Also run every trial on the partition with N/2 cells (same
    /// realization) to estimate the discretization allowance.
    bool richardson = true;
    /// Keep per-trial expansion and oracle values in the report.
    bool keep_samples = false;
    Execution exec = Execution::parallel;
    QuadratureSpec quad{};
};

std::vector<MarkFactor> slot_marks(const DriverConfig& driver, std::size_t slots);

void validate_spec(const ExperimentSpec& spec);

struct BoxReport {
    std::vector<int> box;
    double mean = 0.0;               // expansion sample mean
    double variance = 0.0;           // expansion sample variance
    double mean_half_width = 0.0;    // 99% normal half-width of the mean
    double mse = 0.0;                // E[(oracle - expansion)^2]
    double mse_sigma = 0.0;          // standard error of mse
    double mse_half_width = 0.0;     // 99% half-width of mse
    double max_abs_diff = 0.0;
    double mse_coarse = 0.0;         // same on N/2 (when richardson)
    double max_abs_diff_coarse = 0.0;
    double allowance = 0.0;          // max(0, mse_coarse - mse)
    double partial_sum = 0.0;        // sum C^2 over the box
    double kernel_norm_sq = 0.0;
    double residual = 0.0;           // Parseval residual
    /// residual times the per-slot noise scales; only defined for combos of
    /// distinct nonzero components.
    std::optional<double> predicted_mse;
    std::vector<double> samples;     // keep_samples
};

struct MCReport {
    std::string description;
    int trials = 0;
    int N = 0;
    std::uint64_t seed = 0;
    double oracle_mean = 0.0;
    double oracle_variance = 0.0;
    std::vector<double> oracle_samples;  // keep_samples
    std::vector<BoxReport> boxes;
    double runtime_seconds = 0.0;
};

/// Per trial: realization -> basis variables and oracle on the same
/// realization -> expansion per box. Trials run concurrently with derived
/// seeds; the reduction is in trial order, so the report does not depend
/// on the thread count.
MCReport run_experiment(const ExperimentSpec& spec);

/// Product of per-slot noise scales for the isometry E[J^2] = scale ||K||^2.
std::optional<double> noise_scale(const ExperimentSpec& spec);

struct MomentTest {
    std::string name;
    double statistic = 0.0;
    double expected = 0.0;
    double z = 0.0;
    bool pass = true;
};

struct MomentSuiteReport {
    std::vector<MomentTest> tests;
    int failures = 0;
    /// Family-wise: more than max_failures individual 3-sigma failures.
    int max_failures = 2;
    bool pass() const noexcept { return failures <= max_failures; }
};

/// z-tests on the basis variables of the spec's driver and system for
/// j < count: zero means, unit (or isometry) variances, zero correlations
/// across j and across components. Components 0 are checked for exact
/// determinism. trials >= 1000.
MomentSuiteReport moment_suite(const ExperimentSpec& spec, int count = 8);

void write_report_csv(std::ostream& os, const MCReport& report);
void write_report_json(std::ostream& os, const MCReport& report);
void write_moments_csv(std::ostream& os, const MomentSuiteReport& report);

/// Neumaier-compensated running sum.
class CompensatedSum {
public:
    void add(double x) noexcept;
    double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace gmfs
