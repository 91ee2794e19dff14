#include "gmfs/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <utility>
#include <limits>
#include <locale>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "gmfs/error.hpp"
#include "gmfs/rng.hpp"

namespace gmfs {

namespace {

constexpr std::uint64_t kTrialStream = 0x7472'6961'6cULL;
constexpr double kZ99 = 2.5758293035489004;

[[noreturn]] void rethrow_trial(std::exception_ptr e, int trial) {
    const std::string pre = "trial " + std::to_string(trial) + ": ";
    try {
        std::rethrow_exception(e);
    } catch (const SizeError& x) {
        throw SizeError(pre + x.what());
    } catch (const RangeError& x) {
        throw RangeError(pre + x.what());
    } catch (const ConfigError& x) {
        throw ConfigError(pre + x.what());
    } catch (const ArgumentError& x) {
        throw ArgumentError(pre + x.what());
    } catch (const QuadratureError& x) {
        throw QuadratureError(pre + x.what(), x.partial(), x.error_estimate());
    } catch (const std::exception& x) {
        throw InternalError(pre + x.what());
    }
}

bool distinct_nonzero(const IndexCombo& c) {
    for (std::size_t a = 0; a < c.size(); ++a) {
        if (c[a] == 0) return false;
        for (std::size_t b = a + 1; b < c.size(); ++b)
            if (c[a] == c[b]) return false;
    }
    return true;
}

std::vector<int> max_box(const std::vector<std::vector<int>>& boxes) {
    std::vector<int> out = boxes.front();
    for (const auto& b : boxes)
        for (std::size_t g = 0; g < out.size(); ++g) out[g] = std::max(out[g], b[g]);
    return out;
}

struct Moments {
    double mean = 0.0;
    double variance = 0.0;
};

Moments moments(std::span<const double> x) {
    CompensatedSum s;
    for (double v : x) s.add(v);
    const double n = static_cast<double>(x.size());
    Moments m;
    m.mean = s.value() / n;
    if (x.size() > 1) {
        CompensatedSum q;
        for (double v : x) q.add((v - m.mean) * (v - m.mean));
        m.variance = q.value() / (n - 1.0);
    }
    return m;
}

std::string box_label(const std::vector<int>& box) {
    std::string s;
    for (std::size_t g = 0; g < box.size(); ++g) s += (g ? "x" : "") + std::to_string(box[g]);
    return s;
}

// Shared, read-only state of one experiment.
struct Setup {
    const ExperimentSpec& spec;
    int count = 0;
    Partition fine;
    std::optional<Partition> coarse;
    std::unique_ptr<BasisGrid> grid;
    std::unique_ptr<BasisGrid> coarse_grid;
    std::vector<CoeffTensor> tensors;
    std::vector<MarkFactor> marks;
    std::shared_ptr<const IntensityMeasure> measure;
    std::vector<double> integrals;
    std::vector<double> variances;

    explicit Setup(const ExperimentSpec& s)
        : spec(s), fine(make_partition(s.kernel.interval(), s.N)) {
        auto big = max_box(s.boxes);
        for (int p : big) count = std::max(count, p + 1);
        if (s.richardson && s.N % 2 == 0) coarse = fine.coarsened(2);
        CoeffOptions co;
        co.quad = s.quad;
        co.exec = s.exec;
        CoeffTensor full = coeff_tensor(s.kernel, s.system, big, s.weighted, co);
        for (const auto& b : s.boxes) tensors.push_back(full.sub_box(b));
        const DriverConfig& d = s.driver;
        if (d.kind == DriverKind::poisson) {
            marks = slot_marks(d, s.combo.size());
            measure = std::make_shared<ExponentialIntensity>(d.lambda);
            integrals = basis_integrals(s.system, count, s.quad);
            bool need_grid = s.correction.kind == CorrectionKind::prelimit;
            if (need_grid) {
                grid = std::make_unique<BasisGrid>(s.system, fine, count, s.exec);
                if (coarse) coarse_grid = std::make_unique<BasisGrid>(s.system, *coarse, count, s.exec);
            }
        } else {
            grid = std::make_unique<BasisGrid>(s.system, fine, count, s.exec);
            if (coarse) coarse_grid = std::make_unique<BasisGrid>(s.system, *coarse, count, s.exec);
            if (d.kind == DriverKind::martingale) variances = martingale_cell_variances(fine, d.rho, s.quad);
        }
    }
};

struct TrialValues {
    double oracle = 0.0;
    double oracle_coarse = 0.0;
    std::vector<double> exp;
    std::vector<double> exp_coarse;
};

double evaluate(const Setup& su, const CoeffTensor& tensor, const BasisVariables& vars, const SlotIncrements& inc,
                const BasisGrid* grid) {
    const ExperimentSpec& s = su.spec;
    Correction corr = s.correction;
    PrelimitContext ctx{&inc, grid};
    if (corr.kind == CorrectionKind::prelimit) corr.N = inc.cells();
    if (s.weighted) return expand_weighted(tensor, vars, s.combo, corr, &ctx).value;
    return expand(tensor, vars, s.combo, corr, &ctx).value;
}

void run_trial(const Setup& su, int trial, TrialValues& out) {
    const ExperimentSpec& s = su.spec;
    const std::uint64_t seed = derive_seed(s.seed, kTrialStream, static_cast<std::uint64_t>(trial));
    const std::size_t nb = su.tensors.size();
    out.exp.assign(nb, 0.0);
    out.exp_coarse.assign(nb, 0.0);
    const int count = su.count;
    auto both = [&](const BasisVariables& v, const SlotIncrements& inc, const BasisGrid* g, double& oracle,
                    std::vector<double>& exp) {
        oracle = iterated_sum(s.kernel, inc).value;
        for (std::size_t b = 0; b < nb; ++b) exp[b] = evaluate(su, su.tensors[b], v, inc, g);
    };
    switch (s.driver.kind) {
        case DriverKind::wiener: {
            WienerPath path = sample_wiener(su.fine, s.driver.m, seed);
            auto vars = wiener_variables(path, *su.grid, s.combo, count);
            auto inc = slot_increments(path, s.combo, s.N);
            both(vars, inc, su.grid.get(), out.oracle, out.exp);
            if (su.coarse) {
                WienerPath cp = coarsened(path, 2);
                auto cv = wiener_variables(cp, *su.coarse_grid, s.combo, count);
                auto ci = slot_increments(cp, s.combo, cp.partition.size());
                both(cv, ci, su.coarse_grid.get(), out.oracle_coarse, out.exp_coarse);
            }
            break;
        }
        case DriverKind::martingale: {
            auto path = sample_gaussian_martingale(su.fine, s.driver.m, s.driver.rho, su.variances, seed);
            auto vars = martingale_variables(path, s.system, *su.grid, s.combo, count);
            auto inc = slot_increments(path, s.combo, s.N);
            both(vars, inc, su.grid.get(), out.oracle, out.exp);
            if (su.coarse) {
                auto cp = coarsened(path, 2);
                auto cv = martingale_variables(cp, s.system, *su.coarse_grid, s.combo, count);
                auto ci = slot_increments(cp, s.combo, cp.partition.size());
                both(cv, ci, su.coarse_grid.get(), out.oracle_coarse, out.exp_coarse);
            }
            break;
        }
        case DriverKind::poisson: {
            PoissonOptions po;
            po.jump_budget = s.driver.jump_budget;
            auto real = sample_poisson(s.kernel.interval(), s.driver.m, su.measure, seed, po);
            auto vars = poisson_variables(real, s.system, s.combo, su.marks, count, su.integrals);
            auto inc = slot_increments(real, s.combo, su.marks, s.N);
            both(vars, inc, su.grid.get(), out.oracle, out.exp);
            if (su.coarse) {
                auto ci = slot_increments(real, s.combo, su.marks, su.coarse->size());
                both(vars, ci, su.coarse_grid.get(), out.oracle_coarse, out.exp_coarse);
            }
            break;
        }
    }
}

}  // namespace

void CompensatedSum::add(double x) noexcept {
    const double t = sum_ + x;
    comp_ += (std::abs(sum_) >= std::abs(x)) ? (sum_ - t) + x : (x - t) + sum_;
    sum_ = t;
}

std::vector<MarkFactor> slot_marks(const DriverConfig& driver, std::size_t slots) {
    if (driver.marks.empty()) throw ArgumentError("Poisson driver needs at least one mark factor");
    if (driver.marks.size() == 1) return std::vector<MarkFactor>(slots, driver.marks.front());
    if (driver.marks.size() != slots) throw ArgumentError("mark factor count must be 1 or the combo length");
    return driver.marks;
}

void validate_spec(const ExperimentSpec& spec) {
    if (spec.trials < 1) throw ArgumentError("trials must be >= 1");
    if (spec.N < 1) throw ArgumentError("N must be >= 1");
    if (spec.boxes.empty()) throw ArgumentError("at least one truncation box required");
    if (spec.driver.m < 1) throw ArgumentError("driver dimension m must be >= 1");
    check_combo(spec.combo, spec.driver.m);
    const std::size_t k = spec.combo.size();
    if (static_cast<std::size_t>(spec.kernel.multiplicity()) != k)
        throw ArgumentError("kernel multiplicity does not match combo length");
    if (!(spec.kernel.interval() == spec.system.interval()))
        throw ArgumentError("kernel and system intervals differ");
    for (const auto& b : spec.boxes) {
        if (b.size() != k) throw ArgumentError("box dimension does not match combo length");
        for (int p : b)
            if (p < 0) throw ArgumentError("box entries must be >= 0");
    }
    if (spec.driver.kind == DriverKind::poisson) slot_marks(spec.driver, k);
}

std::optional<double> noise_scale(const ExperimentSpec& spec) {
    if (!distinct_nonzero(spec.combo)) return std::nullopt;
    const WeightFunction& r = spec.weighted ? spec.system.weight() : WeightFunction::constant(1.0);
    const std::size_t k = spec.combo.size();
    switch (spec.driver.kind) {
        case DriverKind::wiener: {
            // rho = 1 against r
            auto w = martingale_pair_weight(WeightFunction::constant(1.0), r);
            if (!w || spec.system.weighted() != spec.weighted) return std::nullopt;
            return std::pow(*w, static_cast<double>(k));
        }
        case DriverKind::martingale: {
            if (!spec.weighted && spec.system.weighted()) return std::nullopt;
            auto w = martingale_pair_weight(spec.driver.rho, r);
            if (!w) return std::nullopt;
            return std::pow(*w, static_cast<double>(k));
        }
        case DriverKind::poisson: {
            if (spec.system.weighted()) return std::nullopt;
            ExponentialIntensity pi(spec.driver.lambda);
            double s = 1.0;
            for (const auto& m : slot_marks(spec.driver, k)) s *= pi.abs_moment(m, 2.0);
            return s;
        }
    }
    return std::nullopt;
}

MCReport run_experiment(const ExperimentSpec& spec) {
    validate_spec(spec);
    const auto start = std::chrono::steady_clock::now();
    Setup su(spec);
    const int n = spec.trials;
    const std::size_t nb = su.tensors.size();
    std::vector<double> oracle(static_cast<std::size_t>(n)), oracle_c(static_cast<std::size_t>(n));
    std::vector<double> exp(nb * n), exp_c(nb * n);
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
    const bool par = spec.exec == Execution::parallel;
#pragma omp parallel for schedule(dynamic, 16) if (par)
    for (int t = 0; t < n; ++t) {
        try {
            TrialValues v;
            run_trial(su, t, v);
            oracle[static_cast<std::size_t>(t)] = v.oracle;
            oracle_c[static_cast<std::size_t>(t)] = v.oracle_coarse;
            for (std::size_t b = 0; b < nb; ++b) {
                exp[b * n + t] = v.exp[b];
                exp_c[b * n + t] = v.exp_coarse[b];
            }
        } catch (...) {
            errors[static_cast<std::size_t>(t)] = std::current_exception();
        }
    }
    for (int t = 0; t < n; ++t)
        if (errors[static_cast<std::size_t>(t)]) rethrow_trial(errors[static_cast<std::size_t>(t)], t);

    MCReport rep;
    std::ostringstream desc;
    desc << to_string(spec.driver.kind) << " k=" << spec.combo.size() << " combo=";
    for (std::size_t g = 0; g < spec.combo.size(); ++g) desc << (g ? "," : "") << spec.combo[g];
    desc << " system=" << spec.system.name() << (spec.weighted ? " weighted" : "") << " correction="
         << spec.correction.name();
    rep.description = desc.str();
    rep.trials = n;
    rep.N = spec.N;
    rep.seed = spec.seed;
    auto om = moments(oracle);
    rep.oracle_mean = om.mean;
    rep.oracle_variance = om.variance;
    if (spec.keep_samples) rep.oracle_samples = oracle;
    const auto scale = noise_scale(spec);
    const double sn = std::sqrt(static_cast<double>(n));
    for (std::size_t b = 0; b < nb; ++b) {
        BoxReport br;
        br.box = spec.boxes[b];
        std::span<const double> e(exp.data() + b * n, static_cast<std::size_t>(n));
        std::span<const double> ec(exp_c.data() + b * n, static_cast<std::size_t>(n));
        auto em = moments(e);
        br.mean = em.mean;
        br.variance = em.variance;
        br.mean_half_width = kZ99 * std::sqrt(em.variance) / sn;
        std::vector<double> d2(static_cast<std::size_t>(n)), d2c(static_cast<std::size_t>(n));
        for (int t = 0; t < n; ++t) {
            const auto T = static_cast<std::size_t>(t);
            double d = oracle[T] - e[T];
            d2[T] = d * d;
            br.max_abs_diff = std::max(br.max_abs_diff, std::abs(d));
            double dc = oracle_c[T] - ec[T];
            d2c[T] = dc * dc;
            br.max_abs_diff_coarse = std::max(br.max_abs_diff_coarse, std::abs(dc));
        }
        auto dm = moments(d2);
        br.mse = dm.mean;
        br.mse_sigma = std::sqrt(dm.variance) / sn;
        br.mse_half_width = kZ99 * br.mse_sigma;
        if (su.coarse) {
            br.mse_coarse = moments(d2c).mean;
            br.allowance = std::max(0.0, br.mse_coarse - br.mse);
        } else {
            br.max_abs_diff_coarse = 0.0;
        }
        auto pr = parseval_partial(su.tensors[b]);
        br.partial_sum = pr.partial_sum;
        br.kernel_norm_sq = pr.kernel_norm_sq;
        br.residual = pr.residual;
        if (scale) br.predicted_mse = *scale * pr.residual;
        if (spec.keep_samples) br.samples.assign(e.begin(), e.end());
        rep.boxes.push_back(std::move(br));
    }
    rep.runtime_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

MomentSuiteReport moment_suite(const ExperimentSpec& spec, int count) {
    validate_spec(spec);
    if (spec.trials < 1000) throw ArgumentError("moment suite needs at least 1000 trials");
    if (count < 1) throw ArgumentError("moment suite count must be >= 1");
    ExperimentSpec s = spec;
    s.boxes = {std::vector<int>(spec.combo.size(), count - 1)};
    s.richardson = false;
    const Partition fine = make_partition(s.kernel.interval(), s.N);
    const DriverConfig& d = s.driver;
    const std::size_t k = s.combo.size();
    std::unique_ptr<BasisGrid> grid;
    std::vector<double> variances, integrals;
    std::vector<MarkFactor> marks;
    std::shared_ptr<const IntensityMeasure> measure;
    if (d.kind == DriverKind::poisson) {
        marks = slot_marks(d, k);
        measure = std::make_shared<ExponentialIntensity>(d.lambda);
        integrals = basis_integrals(s.system, count, s.quad);
    } else {
        grid = std::make_unique<BasisGrid>(s.system, fine, count, s.exec);
        if (d.kind == DriverKind::martingale) variances = martingale_cell_variances(fine, d.rho, s.quad);
    }
    const int n = s.trials;
    // table[t][g * count + j]
    std::vector<double> table(static_cast<std::size_t>(n) * k * count);
    BasisVariables proto;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n));
    const bool par = s.exec == Execution::parallel;
#pragma omp parallel for schedule(dynamic, 16) if (par)
    for (int t = 0; t < n; ++t) {
        try {
            const std::uint64_t seed = derive_seed(s.seed, kTrialStream, static_cast<std::uint64_t>(t));
            BasisVariables v;
            if (d.kind == DriverKind::wiener) {
                v = wiener_variables(sample_wiener(fine, d.m, seed), *grid, s.combo, count);
            } else if (d.kind == DriverKind::martingale) {
                auto p = sample_gaussian_martingale(fine, d.m, d.rho, variances, seed);
                v = martingale_variables(p, s.system, *grid, s.combo, count);
            } else {
                PoissonOptions po;
                po.jump_budget = d.jump_budget;
                auto real = sample_poisson(s.kernel.interval(), d.m, measure, seed, po);
                v = poisson_variables(real, s.system, s.combo, marks, count, integrals);
            }
            for (std::size_t g = 0; g < k; ++g)
                for (int j = 0; j < count; ++j)
                    table[(static_cast<std::size_t>(t) * k + g) * count + j] = v(static_cast<int>(g), j);
            if (t == 0) proto = v;
        } catch (...) {
            errors[static_cast<std::size_t>(t)] = std::current_exception();
        }
    }
    for (int t = 0; t < n; ++t)
        if (errors[static_cast<std::size_t>(t)]) rethrow_trial(errors[static_cast<std::size_t>(t)], t);

    auto column = [&](std::size_t g, int j) {
        std::vector<double> c(static_cast<std::size_t>(n));
        for (int t = 0; t < n; ++t) c[static_cast<std::size_t>(t)] = table[(static_cast<std::size_t>(t) * k + g) * count + j];
        return c;
    };
    const double sn = std::sqrt(static_cast<double>(n));
    MomentSuiteReport rep;
    auto add = [&](std::string name, double stat, double expected, double z) {
        MomentTest mt{std::move(name), stat, expected, z, std::abs(z) < 3.0};
        if (!mt.pass) ++rep.failures;
        rep.tests.push_back(std::move(mt));
    };
    // Expected variance per slot; empty if not asserted.
    auto slot_variance = [&](std::size_t g) -> std::optional<double> {
        if (d.kind == DriverKind::poisson) {
            if (s.system.weighted()) return std::nullopt;
            return measure->abs_moment(marks[g], 2.0);
        }
        return proto.pair_weight;
    };
    // one representative slot per distinct nonzero component (and mark)
    std::vector<std::size_t> reps;
    for (std::size_t g = 0; g < k; ++g) {
        bool seen = false;
        for (std::size_t h : reps)
            if (s.combo[h] == s.combo[g] && (d.kind != DriverKind::poisson || marks[h] == marks[g])) seen = true;
        if (!seen) reps.push_back(g);
    }
    std::vector<std::vector<double>> std_cols;
    for (std::size_t g : reps) {
        const int i = s.combo[g];
        const std::string tag = "slot" + std::to_string(g + 1) + ":i=" + std::to_string(i);
        for (int j = 0; j < count; ++j) {
            auto c = column(g, j);
            if (i == 0) {
                auto [lo, hi] = std::minmax_element(c.begin(), c.end());
                add(tag + " j=" + std::to_string(j) + " deterministic", *hi - *lo, 0.0, *hi == *lo ? 0.0 : 1e9);
                continue;
            }
            auto m = moments(c);
            add(tag + " j=" + std::to_string(j) + " mean", m.mean, 0.0, m.mean / (std::sqrt(m.variance) / sn));
            if (auto ev = slot_variance(g)) {
                CompensatedSum q4;
                for (double x : c) q4.add(std::pow(x - m.mean, 4));
                double m4 = q4.value() / n;
                double se = std::sqrt(std::max(m4 - m.variance * m.variance, 1e-300) / n);
                add(tag + " j=" + std::to_string(j) + " variance", m.variance, *ev, (m.variance - *ev) / se);
            }
        }
    }
    // z from the spread of the centred products: the variables are
    // uncorrelated but need not be independent (shared Poisson jumps)
    auto corr = [&](const std::vector<double>& a, const std::vector<double>& b) {
        auto ma = moments(a), mb = moments(b);
        std::vector<double> p(static_cast<std::size_t>(n));
        for (int t = 0; t < n; ++t) {
            const auto T = static_cast<std::size_t>(t);
            p[T] = (a[T] - ma.mean) * (b[T] - mb.mean);
        }
        auto mp = moments(p);
        const double r = mp.mean * n / (n - 1) / std::sqrt(ma.variance * mb.variance);
        const double z = mp.mean / (std::sqrt(std::max(mp.variance, 1e-300)) / sn);
        return std::pair{r, z};
    };
    for (std::size_t g : reps) {
        if (s.combo[g] == 0 || !slot_variance(g)) continue;
        const std::string tag = "slot" + std::to_string(g + 1) + ":i=" + std::to_string(s.combo[g]);
        for (int a = 0; a < count; ++a)
            for (int b = a + 1; b < count; ++b) {
                auto [r, z] = corr(column(g, a), column(g, b));
                add(tag + " corr j=" + std::to_string(a) + "," + std::to_string(b), r, 0.0, z);
            }
    }
    for (std::size_t x = 0; x < reps.size(); ++x)
        for (std::size_t y = x + 1; y < reps.size(); ++y) {
            std::size_t g = reps[x], h = reps[y];
            if (s.combo[g] == 0 || s.combo[h] == 0 || s.combo[g] == s.combo[h]) continue;
            for (int j = 0; j < count; ++j) {
                auto [r, z] = corr(column(g, j), column(h, j));
                add("corr i=" + std::to_string(s.combo[g]) + ",i=" + std::to_string(s.combo[h]) + " j=" + std::to_string(j),
                    r, 0.0, z);
            }
        }
    return rep;
}

namespace {

void prep(std::ostream& os) {
    os.imbue(std::locale::classic());
    os.precision(17);
}

}  // namespace

void write_report_csv(std::ostream& os, const MCReport& r) {
    prep(os);
    os << "box,trials,N,mean,variance,mean_hw99,mse,mse_sigma,mse_hw99,max_abs_diff,mse_coarse,allowance,"
          "partial_sum,kernel_norm_sq,residual,predicted_mse\n";
    for (const auto& b : r.boxes) {
        os << box_label(b.box) << ',' << r.trials << ',' << r.N << ',' << b.mean << ',' << b.variance << ','
           << b.mean_half_width << ',' << b.mse << ',' << b.mse_sigma << ',' << b.mse_half_width << ','
           << b.max_abs_diff << ',' << b.mse_coarse << ',' << b.allowance << ',' << b.partial_sum << ','
           << b.kernel_norm_sq << ',' << b.residual << ',';
        if (b.predicted_mse) os << *b.predicted_mse;
        os << '\n';
    }
}

void write_report_json(std::ostream& os, const MCReport& r) {
    nlohmann::json j;
    j["description"] = r.description;
    j["trials"] = r.trials;
    j["N"] = r.N;
    j["seed"] = r.seed;
    j["oracle_mean"] = r.oracle_mean;
    j["oracle_variance"] = r.oracle_variance;
    j["runtime_seconds"] = r.runtime_seconds;
    nlohmann::json boxes = nlohmann::json::array();
    for (const auto& b : r.boxes) {
        nlohmann::json e;
        e["box"] = b.box;
        e["mean"] = b.mean;
        e["variance"] = b.variance;
        e["mean_hw99"] = b.mean_half_width;
        e["mse"] = b.mse;
        e["mse_sigma"] = b.mse_sigma;
        e["mse_hw99"] = b.mse_half_width;
        e["max_abs_diff"] = b.max_abs_diff;
        e["mse_coarse"] = b.mse_coarse;
        e["allowance"] = b.allowance;
        e["partial_sum"] = b.partial_sum;
        e["kernel_norm_sq"] = b.kernel_norm_sq;
        e["residual"] = b.residual;
        e["predicted_mse"] = b.predicted_mse ? nlohmann::json(*b.predicted_mse) : nlohmann::json(nullptr);
        boxes.push_back(std::move(e));
    }
    j["boxes"] = std::move(boxes);
    os << j.dump(2) << '\n';
}

void write_moments_csv(std::ostream& os, const MomentSuiteReport& r) {
    prep(os);
    os << "test,statistic,expected,z,pass\n";
    for (const auto& t : r.tests)
        os << t.name << ',' << t.statistic << ',' << t.expected << ',' << t.z << ',' << (t.pass ? "yes" : "no") << '\n';
}

}  // namespace gmfs
