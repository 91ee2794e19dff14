#include "gmfs/expansions.hpp"

#include <cmath>
#include <sstream>

#include "gmfs/error.hpp"

namespace gmfs {

namespace {

double left_point_sum(const Partition& p, std::span<const double> d, const OrthonormalSystem& system, int j) {
    double s = 0.0;
    for (int l = 0; l < p.size(); ++l) s += system(j, p.node(l)) * d[static_cast<std::size_t>(l)];
    return s;
}

std::vector<double> grid_sums(const BasisGrid& grid, std::span<const double> d, int count) {
    if (count > grid.count()) throw ArgumentError("basis grid smaller than requested variable count");
    if (static_cast<int>(d.size()) != grid.cells()) throw ArgumentError("basis grid and path use different partitions");
    std::vector<double> out(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) {
        auto phi = grid.row(j);
        double s = 0.0;
        for (std::size_t l = 0; l < d.size(); ++l) s += phi[l] * d[l];
        out[static_cast<std::size_t>(j)] = s;
    }
    return out;
}

bool has_coincident_pair(const IndexCombo& combo) {
    for (std::size_t a = 0; a < combo.size(); ++a)
        for (std::size_t b = a + 1; b < combo.size(); ++b)
            if (combo[a] == combo[b] && combo[a] != 0) return true;
    return false;
}

bool ind(const IndexCombo& c, const MultiIndex& j, int a, int b) {
    auto A = static_cast<std::size_t>(a), B = static_cast<std::size_t>(b);
    return c[A] == c[B] && c[A] != 0 && j[A] == j[B];
}

}  // namespace

double zeta_from_path(const WienerPath& path, const OrthonormalSystem& system, int j, int i) {
    if (i < 0 || i > path.m) throw ArgumentError("component index out of range");
    return left_point_sum(path.partition, path.component(i), system, j);
}

double xi_from_path(const GaussianMartingalePath& path, const OrthonormalSystem& system, int j, int i) {
    if (i < 0 || i > path.m) throw ArgumentError("component index out of range");
    return left_point_sum(path.partition, path.component(i), system, j);
}

std::vector<double> basis_integrals(const OrthonormalSystem& system, int count, const QuadratureSpec& quad) {
    std::vector<double> out(static_cast<std::size_t>(count));
    const auto& iv = system.interval();
    for (int j = 0; j < count; ++j) {
        auto bp = system.breakpoints(j);
        out[static_cast<std::size_t>(j)] =
            integrate([&](double x) { return system(j, x); }, iv.t, iv.T, bp, quad).value;
    }
    return out;
}

double pi_from_realization(const PoissonRealization& real, const OrthonormalSystem& system, int j,
                           const MarkFactor& mark, int i, PoissonMode mode, int moment_order,
                           const QuadratureSpec& quad) {
    if (i < 0 || i > real.m) throw ArgumentError("component index out of range");
    check_mark_moments(*real.measure, mark, moment_order);
    double jumps = 0.0;
    if (i != 0)
        for (const Jump& jp : real.component(i)) jumps += system(j, jp.time) * mark(jp.mark);
    if (mode == PoissonMode::raw && i != 0) return jumps;
    const auto& iv = system.interval();
    double phi_int = integrate([&](double x) { return system(j, x); }, iv.t, iv.T, system.breakpoints(j), quad).value;
    double comp = phi_int * real.measure->integral(mark);
    return i == 0 ? comp : jumps - comp;
}

BasisVariables wiener_variables(const WienerPath& path, const BasisGrid& grid, const IndexCombo& combo, int count) {
    check_combo(combo, path.m);
    BasisVariables v;
    v.kind = DriverKind::wiener;
    v.combo = combo;
    v.basis_weight = grid.weight();
    v.pair_weight = martingale_pair_weight(v.rho, v.basis_weight);
    std::vector<std::vector<double>> per_component(static_cast<std::size_t>(path.m) + 1);
    for (int i : combo) {
        auto& t = per_component[static_cast<std::size_t>(i)];
        if (t.empty()) t = grid_sums(grid, path.component(i), count);
        v.table.push_back(t);
    }
    v.provenance = "wiener seed=" + std::to_string(path.seed);
    return v;
}

std::optional<double> martingale_pair_weight(const WeightFunction& rho, const WeightFunction& basis_weight) {
    if (rho.is_constant() && basis_weight.is_constant() && basis_weight.constant_value() != 0.0)
        return rho.constant_value() / basis_weight.constant_value();
    if (rho.same_as(basis_weight)) return 1.0;
    return std::nullopt;
}

BasisVariables martingale_variables(const GaussianMartingalePath& path, const OrthonormalSystem& system,
                                    const BasisGrid& grid, const IndexCombo& combo, int count) {
    check_combo(combo, path.m);
    BasisVariables v;
    v.kind = DriverKind::martingale;
    v.combo = combo;
    v.rho = path.rho;
    v.basis_weight = system.weight();
    v.pair_weight = martingale_pair_weight(path.rho, system.weight());
    std::vector<std::vector<double>> per_component(static_cast<std::size_t>(path.m) + 1);
    for (int i : combo) {
        auto& t = per_component[static_cast<std::size_t>(i)];
        if (t.empty()) t = grid_sums(grid, path.component(i), count);
        v.table.push_back(t);
    }
    v.provenance = "martingale seed=" + std::to_string(path.seed) + " rho=" + path.rho.name();
    return v;
}

BasisVariables poisson_variables(const PoissonRealization& real, const OrthonormalSystem& system,
                                 const IndexCombo& combo, const std::vector<MarkFactor>& marks, int count,
                                 std::span<const double> integrals) {
    check_combo(combo, real.m);
    if (marks.size() != combo.size()) throw ArgumentError("one mark factor per slot required");
    if (static_cast<int>(integrals.size()) < count) throw ArgumentError("basis integrals shorter than count");
    const int k = static_cast<int>(combo.size());
    const int order = 1 << (k + 1);
    BasisVariables v;
    v.kind = DriverKind::poisson;
    v.combo = combo;
    for (int g = 0; g < k; ++g) {
        const MarkFactor& mk = marks[static_cast<std::size_t>(g)];
        check_mark_moments(*real.measure, mk, order);
        double mass = real.measure->integral(mk);
        int i = combo[static_cast<std::size_t>(g)];
        std::vector<double> row(static_cast<std::size_t>(count));
        for (int j = 0; j < count; ++j) row[static_cast<std::size_t>(j)] = integrals[static_cast<std::size_t>(j)] * mass;
        if (i != 0) {
            for (auto& x : row) x = -x;
            for (const Jump& jp : real.component(i)) {
                double y = mk(jp.mark);
                for (int j = 0; j < count; ++j) row[static_cast<std::size_t>(j)] += system(j, jp.time) * y;
            }
        }
        v.table.push_back(std::move(row));
    }
    v.provenance = "poisson seed=" + std::to_string(real.seed) + " Pi=" + real.measure->describe();
    return v;
}

std::string Correction::name() const {
    switch (kind) {
        case CorrectionKind::explicit_k_le_4: return "explicit";
        case CorrectionKind::pairing_general: return "pairing";
        case CorrectionKind::prelimit: return "prelimit(" + std::to_string(N) + ")";
    }
    return "?";
}

namespace {

void check_vars(const CoeffTensor& tensor, const BasisVariables& vars, const IndexCombo& combo) {
    const int k = tensor.multiplicity();
    if (static_cast<int>(combo.size()) != k) throw ArgumentError("combo length does not match tensor multiplicity");
    if (vars.combo != combo) throw ArgumentError("basis variables were built for a different combo");
    if (vars.slots() != k) throw ArgumentError("basis variable slot count does not match tensor");
    for (int g = 0; g < k; ++g)
        if (vars.count(g) < tensor.box()[static_cast<std::size_t>(g)] + 1)
            throw ArgumentError("basis variable table does not cover the truncation box");
}

}  // namespace

double contract_product(const CoeffTensor& tensor, const BasisVariables& vars) {
    const auto& box = tensor.box();
    const int k = tensor.multiplicity();
    std::vector<double> cur(tensor.values().begin(), tensor.values().end());
    for (int g = 0; g < k; ++g) {
        const int n = box[static_cast<std::size_t>(g)] + 1;
        std::vector<double> next(cur.size() / static_cast<std::size_t>(n), 0.0);
        for (std::size_t r = 0; r < next.size(); ++r) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += cur[r * static_cast<std::size_t>(n) + j] * vars(g, j);
            next[r] = s;
        }
        cur.swap(next);
    }
    return cur[0];
}

double expand_explicit(const CoeffTensor& tensor, const BasisVariables& z, const IndexCombo& c, double w) {
    const int k = tensor.multiplicity();
    if (k < 1 || k > 4) throw ArgumentError("explicit formulas cover multiplicity 1..4 only");
    double total = 0.0;
    std::size_t flat = 0;
    for_each_index(tensor.box(), [&](const MultiIndex& j) {
        const double C = tensor[flat++];
        double term = 0.0;
        if (k == 1) {
            term = z(0, j[0]);
        } else if (k == 2) {
            term = z(0, j[0]) * z(1, j[1]) - w * ind(c, j, 0, 1);
        } else if (k == 3) {
            term = z(0, j[0]) * z(1, j[1]) * z(2, j[2])
                 - w * ind(c, j, 0, 1) * z(2, j[2])
                 - w * ind(c, j, 1, 2) * z(0, j[0])
                 - w * ind(c, j, 0, 2) * z(1, j[1]);
        } else {
            const double z1 = z(0, j[0]), z2 = z(1, j[1]), z3 = z(2, j[2]), z4 = z(3, j[3]);
            term = z1 * z2 * z3 * z4
                 - w * ind(c, j, 0, 1) * z3 * z4
                 - w * ind(c, j, 0, 2) * z2 * z4
                 - w * ind(c, j, 0, 3) * z2 * z3
                 - w * ind(c, j, 1, 2) * z1 * z4
                 - w * ind(c, j, 1, 3) * z1 * z3
                 - w * ind(c, j, 2, 3) * z1 * z2
                 + w * w * ind(c, j, 0, 1) * ind(c, j, 2, 3)
                 + w * w * ind(c, j, 0, 2) * ind(c, j, 1, 3)
                 + w * w * ind(c, j, 0, 3) * ind(c, j, 1, 2);
        }
        total += C * term;
    });
    return total;
}

namespace {

struct Matching {
    std::vector<std::pair<int, int>> pairs;
    std::vector<int> singles;
};

// All partial matchings of slots {0..k-1} using only admissible pairs.
void matchings(const IndexCombo& c, std::vector<int> rest, Matching cur, std::vector<Matching>& out) {
    if (rest.empty()) {
        out.push_back(std::move(cur));
        return;
    }
    int a = rest.front();
    std::vector<int> tail(rest.begin() + 1, rest.end());
    Matching single = cur;
    single.singles.push_back(a);
    matchings(c, tail, single, out);
    for (std::size_t q = 0; q < tail.size(); ++q) {
        int b = tail[q];
        if (c[static_cast<std::size_t>(a)] != c[static_cast<std::size_t>(b)] || c[static_cast<std::size_t>(a)] == 0) continue;
        Matching paired = cur;
        paired.pairs.emplace_back(a, b);
        std::vector<int> left = tail;
        left.erase(left.begin() + static_cast<std::ptrdiff_t>(q));
        matchings(c, left, paired, out);
    }
}

}  // namespace

double expand_pairing(const CoeffTensor& tensor, const BasisVariables& z, const IndexCombo& c, double w) {
    const int k = tensor.multiplicity();
    std::vector<int> slots(static_cast<std::size_t>(k));
    for (int g = 0; g < k; ++g) slots[static_cast<std::size_t>(g)] = g;
    std::vector<Matching> ms;
    matchings(c, slots, {}, ms);
    double total = 0.0;
    std::size_t flat = 0;
    for_each_index(tensor.box(), [&](const MultiIndex& j) {
        const double C = tensor[flat++];
        double term = 0.0;
        for (const Matching& m : ms) {
            double prod = 1.0;
            for (auto [a, b] : m.pairs) {
                if (j[static_cast<std::size_t>(a)] != j[static_cast<std::size_t>(b)]) {
                    prod = 0.0;
                    break;
                }
                prod *= -w;
            }
            if (prod == 0.0) continue;
            for (int g : m.singles) prod *= z(g, j[static_cast<std::size_t>(g)]);
            term += prod;
        }
        total += C * term;
    });
    return total;
}

ExpansionSample expand(const CoeffTensor& tensor, const BasisVariables& vars, const IndexCombo& combo,
                       const Correction& correction, const PrelimitContext* context) {
    check_vars(tensor, vars, combo);
    ExpansionSample out{0.0, tensor.box(), combo, correction};
    switch (correction.kind) {
        case CorrectionKind::explicit_k_le_4:
        case CorrectionKind::pairing_general: {
            double w = 0.0;
            if (has_coincident_pair(combo)) {
                if (!vars.pair_weight) {
                    throw ArgumentError("indicator corrections do not apply to " + to_string(vars.kind) +
                                        " variables with coincident components; use prelimit");
                }
                w = *vars.pair_weight;
            }
            if (correction.kind == CorrectionKind::explicit_k_le_4) {
                if (tensor.multiplicity() > 4) throw ArgumentError("explicit formulas cover multiplicity <= 4; use pairing");
                out.value = expand_explicit(tensor, vars, combo, w);
            } else {
                out.value = expand_pairing(tensor, vars, combo, w);
            }
            break;
        }
        case CorrectionKind::prelimit: {
            if (!context || !context->increments || !context->grid)
                throw ArgumentError("prelimit correction needs the underlying realization");
            const SlotIncrements& inc = *context->increments;
            if (inc.combo != combo) throw ArgumentError("prelimit increments were built for a different combo");
            if (correction.N != 0 && inc.cells() != correction.N)
                throw ArgumentError("prelimit increments do not match the requested N");
            out.value = contract_product(tensor, vars) - prelimit_correction(tensor, inc, *context->grid);
            break;
        }
    }
    if (!std::isfinite(out.value)) throw InternalError("non-finite expansion value");
    return out;
}

ExpansionSample expand_weighted(const CoeffTensor& tensor, const BasisVariables& vars, const IndexCombo& combo,
                                const Correction& correction, const PrelimitContext* context,
                                const WeightCheck& check) {
    const OrthonormalSystem& sys = tensor.system();
    const WeightFunction& r = sys.weight();
    const auto& iv = sys.interval();
    double sup = 0.0;
    for (int q = 0; q < check.grid; ++q) {
        double x = iv.t + (q + 0.5) * iv.length() / check.grid;
        double num = vars.rho(x), den = r(x);
        if (num == 0.0) continue;
        if (!(den > 0.0)) throw ArgumentError("rho / r unbounded: weight vanishes where rho does not");
        sup = std::max(sup, num / den);
    }
    if (!(sup <= check.bound)) {
        std::ostringstream os;
        os << "rho / r reaches " << sup << " > bound " << check.bound;
        throw ArgumentError(os.str());
    }
    return expand(tensor, vars, combo, correction, context);
}

}  // namespace gmfs
