#include "gmfs/oracle.hpp"

#include <algorithm>
#include <sstream>

#include "gmfs/error.hpp"

namespace gmfs {

std::string to_string(DriverKind kind) {
    switch (kind) {
        case DriverKind::wiener: return "wiener";
        case DriverKind::poisson: return "poisson";
        case DriverKind::martingale: return "martingale";
    }
    return "?";
}

void check_combo(const IndexCombo& combo, int m) {
    if (combo.empty()) throw ArgumentError("index combo must be nonempty");
    for (int i : combo)
        if (i < 0 || i > m) {
            std::ostringstream os;
            os << "combo component " << i << " outside 0.." << m;
            throw ArgumentError(os.str());
        }
}

BasisGrid::BasisGrid(const OrthonormalSystem& system, const Partition& partition, int count, Execution exec)
    : count_(count), cells_(partition.size()), weight_(system.weight()) {
    if (count < 1) throw ArgumentError("basis grid needs count >= 1");
    if (system.capacity() >= 0 && count > system.capacity()) throw RangeError("basis grid count exceeds system capacity");
    values_.resize(static_cast<std::size_t>(count_) * cells_);
    const bool par = exec == Execution::parallel;
#pragma omp parallel for schedule(static) if (par)
    for (int j = 0; j < count_; ++j)
        for (int l = 0; l < cells_; ++l)
            values_[static_cast<std::size_t>(j) * cells_ + l] = system(j, partition.node(l));
}

namespace {

std::vector<double> coarsen(std::span<const double> fine, int factor) {
    std::vector<double> out(fine.size() / static_cast<std::size_t>(factor), 0.0);
    for (std::size_t c = 0; c < out.size(); ++c) {
        double s = 0.0;
        for (int f = 0; f < factor; ++f) s += fine[c * static_cast<std::size_t>(factor) + f];
        out[c] = s;
    }
    return out;
}

template <typename Path>
SlotIncrements from_gaussian(const Path& path, DriverKind kind, const IndexCombo& combo, int N) {
    check_combo(combo, path.m);
    int fine = path.partition.size();
    if (N < 1 || fine % N != 0) throw ArgumentError("oracle N must divide the realization's cell count");
    int factor = fine / N;
    SlotIncrements inc{path.partition.coarsened(factor), kind, combo, {}};
    for (int i : combo) {
        if (i == 0) {
            std::vector<double> d(static_cast<std::size_t>(N));
            for (int l = 0; l < N; ++l) d[static_cast<std::size_t>(l)] = inc.partition.step(l);
            inc.delta.push_back(std::move(d));
        } else if (factor == 1) {
            inc.delta.emplace_back(path.component(i).begin(), path.component(i).end());
        } else {
            inc.delta.push_back(coarsen(path.component(i), factor));
        }
    }
    return inc;
}

}  // namespace

SlotIncrements slot_increments(const WienerPath& path, const IndexCombo& combo, int N) {
    return from_gaussian(path, DriverKind::wiener, combo, N);
}

SlotIncrements slot_increments(const GaussianMartingalePath& path, const IndexCombo& combo, int N) {
    return from_gaussian(path, DriverKind::martingale, combo, N);
}

SlotIncrements slot_increments(const PoissonRealization& real, const IndexCombo& combo,
                               const std::vector<MarkFactor>& marks, int N) {
    check_combo(combo, real.m);
    if (marks.size() != combo.size()) throw ArgumentError("one mark factor per slot required");
    SlotIncrements inc{make_partition(real.interval, N), DriverKind::poisson, combo, {}};
    const double t = real.interval.t, L = real.interval.length();
    for (std::size_t g = 0; g < combo.size(); ++g) {
        double mass = real.measure->integral(marks[g]);
        std::vector<double> d(static_cast<std::size_t>(N));
        for (int l = 0; l < N; ++l) d[static_cast<std::size_t>(l)] = inc.partition.step(l) * mass;
        if (combo[g] != 0) {
            for (auto& v : d) v = -v;
            for (const Jump& j : real.component(combo[g])) {
                int l = static_cast<int>((j.time - t) / L * N);
                l = std::clamp(l, 0, N - 1);
                // guard against rounding at cell edges
                while (l > 0 && j.time < inc.partition.node(l)) --l;
                while (l + 1 < N && j.time >= inc.partition.node(l + 1)) ++l;
                d[static_cast<std::size_t>(l)] += marks[g](j.mark);
            }
        }
        inc.delta.push_back(std::move(d));
    }
    return inc;
}

OracleResult iterated_sum(const Kernel& kernel, const SlotIncrements& inc, const OracleOptions& options) {
    const int k = inc.multiplicity();
    if (kernel.multiplicity() != k) throw ArgumentError("kernel multiplicity does not match combo length");
    if (k > options.max_multiplicity) {
        std::ostringstream os;
        os << "oracle nested sum of multiplicity " << k << " exceeds guard " << options.max_multiplicity;
        throw SizeError(os.str());
    }
    if (!(kernel.interval() == inc.partition.interval())) throw ArgumentError("kernel and realization intervals differ");
    const int N = inc.cells();
    // prefix[l] = sum over l_1 < ... < l_g < l of the slot-1..g product
    std::vector<double> prefix(static_cast<std::size_t>(N), 1.0);
    double total = 0.0;
    for (int g = 0; g < k; ++g) {
        double run = 0.0;
        std::vector<double> next(static_cast<std::size_t>(N));
        const auto& d = inc.delta[static_cast<std::size_t>(g)];
        for (int l = 0; l < N; ++l) {
            next[static_cast<std::size_t>(l)] = run;
            run += kernel.factor(g, inc.partition.node(l)) * d[static_cast<std::size_t>(l)] *
                   prefix[static_cast<std::size_t>(l)];
        }
        total = run;
        prefix.swap(next);
    }
    return OracleResult{total, N, inc.kind, inc.combo};
}

double iterated_sum_naive(const Kernel& kernel, const SlotIncrements& inc) {
    const int k = inc.multiplicity();
    const int N = inc.cells();
    if (kernel.multiplicity() != k) throw ArgumentError("kernel multiplicity does not match combo length");
    std::vector<int> l(static_cast<std::size_t>(k));
    double total = 0.0;
    // depth-first over strictly increasing tuples
    auto rec = [&](auto&& self, int g, int from, double prod) -> void {
        if (g == k) {
            total += prod;
            return;
        }
        for (int x = from; x < N; ++x) {
            double f = kernel.factor(g, inc.partition.node(x)) * inc.delta[static_cast<std::size_t>(g)][static_cast<std::size_t>(x)];
            self(self, g + 1, x + 1, prod * f);
        }
    };
    rec(rec, 0, 0, 1.0);
    return total;
}

double slot_projection(const SlotIncrements& inc, const BasisGrid& grid, int slot, int j) {
    const auto& d = inc.delta.at(static_cast<std::size_t>(slot));
    auto phi = grid.row(j);
    double s = 0.0;
    for (std::size_t l = 0; l < d.size(); ++l) s += phi[l] * d[l];
    return s;
}

namespace {

void check_prelimit(const SlotIncrements& inc, const BasisGrid& grid, const OracleOptions& options) {
    if (inc.multiplicity() > std::min(3, options.max_multiplicity))
        throw SizeError("prelimit diagonal sums are limited to multiplicity 3");
    if (grid.cells() != inc.cells()) throw ArgumentError("basis grid and increments use different partitions");
}

double pair_sum(const SlotIncrements& inc, const BasisGrid& grid, int a, int ja, int b, int jb) {
    const auto& da = inc.delta[static_cast<std::size_t>(a)];
    const auto& db = inc.delta[static_cast<std::size_t>(b)];
    double s = 0.0;
    for (int l = 0; l < inc.cells(); ++l)
        s += grid(ja, l) * grid(jb, l) * da[static_cast<std::size_t>(l)] * db[static_cast<std::size_t>(l)];
    return s;
}

}  // namespace

double prelimit_gk_sum(const SlotIncrements& inc, const BasisGrid& grid, const MultiIndex& idx,
                       const OracleOptions& options) {
    check_prelimit(inc, grid, options);
    const int k = inc.multiplicity();
    if (static_cast<int>(idx.size()) != k) throw ArgumentError("multi-index length does not match combo");
    if (k == 1) return 0.0;
    if (k == 2) return pair_sum(inc, grid, 0, idx[0], 1, idx[1]);
    // k = 3: |A12 u A13 u A23| = sum |A_ab| - 2 |A123|
    double z1 = slot_projection(inc, grid, 0, idx[0]);
    double z2 = slot_projection(inc, grid, 1, idx[1]);
    double z3 = slot_projection(inc, grid, 2, idx[2]);
    double triple = 0.0;
    for (int l = 0; l < inc.cells(); ++l) {
        auto L = static_cast<std::size_t>(l);
        triple += grid(idx[0], l) * grid(idx[1], l) * grid(idx[2], l) * inc.delta[0][L] * inc.delta[1][L] *
                  inc.delta[2][L];
    }
    return pair_sum(inc, grid, 0, idx[0], 1, idx[1]) * z3 + pair_sum(inc, grid, 0, idx[0], 2, idx[2]) * z2 +
           pair_sum(inc, grid, 1, idx[1], 2, idx[2]) * z1 - 2.0 * triple;
}

double prelimit_correction(const CoeffTensor& tensor, const SlotIncrements& inc, const BasisGrid& grid,
                           const OracleOptions& options) {
    check_prelimit(inc, grid, options);
    const int k = inc.multiplicity();
    if (tensor.multiplicity() != k) throw ArgumentError("tensor multiplicity does not match combo");
    const auto& box = tensor.box();
    for (int p : box)
        if (p + 1 > grid.count()) throw ArgumentError("basis grid smaller than tensor box");
    if (k == 1) return 0.0;
    const int N = inc.cells();
    const int n1 = box[0] + 1, n2 = box[1] + 1;
    if (k == 2) {
        // sum_l dD1 dD2 sum_{j1} phi_j1 sum_{j2} C(j1, j2) phi_j2
        double total = 0.0;
        for (int l = 0; l < N; ++l) {
            auto L = static_cast<std::size_t>(l);
            double w = inc.delta[0][L] * inc.delta[1][L];
            if (w == 0.0) continue;
            double s = 0.0;
            for (int j2 = 0; j2 < n2; ++j2) {
                double inner = 0.0;
                for (int j1 = 0; j1 < n1; ++j1) inner += tensor[static_cast<std::size_t>(j1 + n1 * j2)] * grid(j1, l);
                s += inner * grid(j2, l);
            }
            total += w * s;
        }
        return total;
    }
    const int n3 = box[2] + 1;
    auto C = [&](int a, int b, int c) { return tensor[static_cast<std::size_t>(a + n1 * (b + n2 * c))]; };
    std::vector<std::vector<double>> z(3);
    for (int g = 0; g < 3; ++g) {
        int n = box[static_cast<std::size_t>(g)] + 1;
        for (int j = 0; j < n; ++j) z[static_cast<std::size_t>(g)].push_back(slot_projection(inc, grid, g, j));
    }
    auto pairs = [&](int a, int b) {
        int na = box[static_cast<std::size_t>(a)] + 1, nb = box[static_cast<std::size_t>(b)] + 1;
        std::vector<double> P(static_cast<std::size_t>(na) * nb);
        for (int ja = 0; ja < na; ++ja)
            for (int jb = 0; jb < nb; ++jb) P[static_cast<std::size_t>(ja + na * jb)] = pair_sum(inc, grid, a, ja, b, jb);
        return P;
    };
    auto P12 = pairs(0, 1), P13 = pairs(0, 2), P23 = pairs(1, 2);
    double total = 0.0;
    for (int c = 0; c < n3; ++c)
        for (int b = 0; b < n2; ++b)
            for (int a = 0; a < n1; ++a) {
                double v = P12[static_cast<std::size_t>(a + n1 * b)] * z[2][static_cast<std::size_t>(c)] +
                           P13[static_cast<std::size_t>(a + n1 * c)] * z[1][static_cast<std::size_t>(b)] +
                           P23[static_cast<std::size_t>(b + n2 * c)] * z[0][static_cast<std::size_t>(a)];
                total += C(a, b, c) * v;
            }
    for (int l = 0; l < N; ++l) {
        auto L = static_cast<std::size_t>(l);
        double w = inc.delta[0][L] * inc.delta[1][L] * inc.delta[2][L];
        if (w == 0.0) continue;
        double s = 0.0;
        for (int c = 0; c < n3; ++c)
            for (int b = 0; b < n2; ++b)
                for (int a = 0; a < n1; ++a) s += C(a, b, c) * grid(a, l) * grid(b, l) * grid(c, l);
        total -= 2.0 * w * s;
    }
    return total;
}

}  // namespace gmfs
