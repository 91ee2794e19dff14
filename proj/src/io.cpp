#include "gmfs/io.hpp"

#include <istream>
#include <locale>
#include <ostream>
#include <sstream>

#include "gmfs/error.hpp"

namespace gmfs {

void require_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& context) {
    if (!j.is_object()) throw ConfigError(context + ": expected an object");
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) throw ConfigError(context + ": unknown key '" + key + "'");
    }
}

namespace {

template <typename T>
T get(const Json& j, const char* key, const std::string& context) {
    if (!j.contains(key)) throw ConfigError(context + ": missing key '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(context + ": bad value for '" + key + "': " + e.what());
    }
}

Json interval_json(const Interval& iv) { return Json::array({iv.t, iv.T}); }

Interval interval_from(const Json& j, const std::string& context) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigError(context + ": interval must be [t, T]");
    try {
        return Interval(j[0].get<double>(), j[1].get<double>());
    } catch (const ArgumentError& e) {
        throw ConfigError(context + ": " + e.what());
    }
}

}  // namespace

Json factor_to_json(const KernelFactor& f) {
    switch (f.kind()) {
        case KernelFactor::Kind::constant: return {{"name", "const"}, {"c", f.param()}};
        case KernelFactor::Kind::power: return {{"name", "pow"}, {"a", f.param()}};
        case KernelFactor::Kind::sqrt_shift: return {{"name", "sqrt_shift"}};
        case KernelFactor::Kind::exponential: return {{"name", "exp"}, {"c", f.param()}};
        case KernelFactor::Kind::tabulated: return {{"name", "tabulated"}, {"xs", f.xs()}, {"ys", f.ys()}};
    }
    return {};
}

KernelFactor factor_from_json(const Json& j, bool allow_tabulated) {
    const std::string ctx = "kernel factor";
    if (!j.is_object()) throw ConfigError(ctx + ": expected an object");
    auto name = get<std::string>(j, "name", ctx);
    try {
        if (name == "const") {
            require_keys(j, {"name", "c"}, ctx + " const");
            return KernelFactor::constant(j.contains("c") ? get<double>(j, "c", ctx) : 1.0);
        }
        if (name == "pow") {
            require_keys(j, {"name", "a"}, ctx + " pow");
            return KernelFactor::power(get<double>(j, "a", ctx));
        }
        if (name == "sqrt_shift") {
            require_keys(j, {"name"}, ctx + " sqrt_shift");
            return KernelFactor::sqrt_shift();
        }
        if (name == "exp") {
            require_keys(j, {"name", "c"}, ctx + " exp");
            return KernelFactor::exponential(get<double>(j, "c", ctx));
        }
        if (name == "tabulated" && allow_tabulated) {
            require_keys(j, {"name", "xs", "ys"}, ctx + " tabulated");
            return KernelFactor::tabulated(get<std::vector<double>>(j, "xs", ctx), get<std::vector<double>>(j, "ys", ctx));
        }
    } catch (const ArgumentError& e) {
        throw ConfigError(ctx + " " + name + ": " + e.what());
    }
    throw ConfigError(ctx + ": unknown factor '" + name + "' (allowed: const, pow, sqrt_shift, exp)");
}

Json kernel_to_json(const Kernel& k) {
    Json fs = Json::array();
    for (const auto& f : k.factors()) fs.push_back(factor_to_json(f));
    return {{"interval", interval_json(k.interval())}, {"factors", fs}};
}

Kernel kernel_from_json(const Json& j, bool allow_tabulated) {
    require_keys(j, {"interval", "factors"}, "kernel");
    if (!j.contains("interval")) throw ConfigError("kernel: missing key 'interval'");
    Interval iv = interval_from(j["interval"], "kernel");
    if (!j.contains("factors") || !j["factors"].is_array() || j["factors"].empty())
        throw ConfigError("kernel: 'factors' must be a nonempty array");
    std::vector<KernelFactor> fs;
    for (const auto& f : j["factors"]) fs.push_back(factor_from_json(f, allow_tabulated));
    return Kernel(iv, std::move(fs));
}

Json weight_to_json(const WeightFunction& w) {
    switch (w.kind()) {
        case WeightFunction::Kind::constant: return {{"kind", "constant"}, {"value", w.constant_value()}};
        case WeightFunction::Kind::identity: return {{"kind", "identity"}};
        case WeightFunction::Kind::custom: break;
    }
    throw ArgumentError("custom weight '" + w.name() + "' cannot be serialised");
}

WeightFunction weight_from_json(const Json& j) {
    const std::string ctx = "weight";
    if (j.is_number()) return WeightFunction::constant(j.get<double>());
    if (j.is_string()) {
        auto s = j.get<std::string>();
        if (s == "identity") return WeightFunction::identity();
        throw ConfigError(ctx + ": unknown weight '" + s + "'");
    }
    require_keys(j, {"kind", "value"}, ctx);
    auto kind = get<std::string>(j, "kind", ctx);
    if (kind == "constant") return WeightFunction::constant(get<double>(j, "value", ctx));
    if (kind == "identity") return WeightFunction::identity();
    throw ConfigError(ctx + ": unknown kind '" + kind + "'");
}

void write_tensor_csv(std::ostream& os, const CoeffTensor& tensor) {
    std::ostringstream buf;
    buf.imbue(std::locale::classic());
    buf.precision(17);
    const int k = tensor.multiplicity();
    for (int l = 1; l <= k; ++l) buf << "j_" << l << ',';
    buf << "value\n";
    std::size_t flat = 0;
    for_each_index(tensor.box(), [&](const MultiIndex& idx) {
        for (int j : idx) buf << j << ',';
        buf << tensor[flat++] << '\n';
    });
    os << buf.str();
}

TensorTable read_tensor_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw ConfigError("tensor csv: empty input");
    int k = 0;
    {
        std::stringstream ss(line);
        std::string col;
        std::vector<std::string> cols;
        while (std::getline(ss, col, ',')) cols.push_back(col);
        if (cols.size() < 2 || cols.back() != "value") throw ConfigError("tensor csv: header must end in 'value'");
        k = static_cast<int>(cols.size()) - 1;
        for (int l = 0; l < k; ++l)
            if (cols[static_cast<std::size_t>(l)] != "j_" + std::to_string(l + 1))
                throw ConfigError("tensor csv: bad header column '" + cols[static_cast<std::size_t>(l)] + "'");
    }
    std::vector<std::vector<int>> rows;
    TensorTable t;
    t.box.assign(static_cast<std::size_t>(k), 0);
    int lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ss(line);
        ss.imbue(std::locale::classic());
        std::vector<int> idx(static_cast<std::size_t>(k));
        char comma = 0;
        for (int l = 0; l < k; ++l) {
            if (!(ss >> idx[static_cast<std::size_t>(l)] >> comma) || comma != ',' || idx[static_cast<std::size_t>(l)] < 0)
                throw ConfigError("tensor csv: malformed index on line " + std::to_string(lineno));
            t.box[static_cast<std::size_t>(l)] = std::max(t.box[static_cast<std::size_t>(l)], idx[static_cast<std::size_t>(l)]);
        }
        double v = 0.0;
        if (!(ss >> v)) throw ConfigError("tensor csv: malformed value on line " + std::to_string(lineno));
        rows.push_back(std::move(idx));
        t.values.push_back(v);
    }
    std::size_t expect = 1;
    for (int p : t.box) expect *= static_cast<std::size_t>(p + 1);
    if (rows.size() != expect) throw ConfigError("tensor csv: entry count does not fill the box");
    std::size_t r = 0;
    bool ordered = true;
    for_each_index(t.box, [&](const MultiIndex& idx) {
        if (rows[r++] != idx) ordered = false;
    });
    if (!ordered) throw ConfigError("tensor csv: rows are not in storage order");
    return t;
}

Json tensor_to_json(const CoeffTensor& tensor) {
    const auto& q = tensor.quadrature();
    return {{"format", "gmfs-coeff-tensor"},
            {"version", 1},
            {"kernel", kernel_to_json(tensor.kernel())},
            {"system", {{"name", tensor.system().name()}, {"interval", interval_json(tensor.system().interval())}}},
            {"weighted", tensor.weighted()},
            {"box", tensor.box()},
            {"quadrature",
             {{"nodes_per_panel", q.nodes_per_panel}, {"panels", q.panels}, {"error_estimate", q.error_estimate}}},
            {"values", std::vector<double>(tensor.values().begin(), tensor.values().end())}};
}

CoeffTensor tensor_from_json(const Json& j) {
    const std::string ctx = "tensor json";
    require_keys(j, {"format", "version", "kernel", "system", "weighted", "box", "quadrature", "values"}, ctx);
    if (get<std::string>(j, "format", ctx) != "gmfs-coeff-tensor") throw ConfigError(ctx + ": unknown format");
    Kernel kernel = kernel_from_json(j.at("kernel"));
    const Json& sj = j.at("system");
    require_keys(sj, {"name", "interval"}, ctx + " system");
    auto box = get<std::vector<int>>(j, "box", ctx);
    int hint = 1;
    for (int p : box) hint = std::max(hint, p + 1);
    OrthonormalSystem sys = [&] {
        try {
            return make_system(get<std::string>(sj, "name", ctx), interval_from(sj.at("interval"), ctx), hint);
        } catch (const ArgumentError& e) {
            throw ConfigError(ctx + ": " + e.what());
        }
    }();
    const Json& qj = j.at("quadrature");
    require_keys(qj, {"nodes_per_panel", "panels", "error_estimate"}, ctx + " quadrature");
    CoeffQuadratureInfo q{get<int>(qj, "nodes_per_panel", ctx), get<int>(qj, "panels", ctx),
                          get<double>(qj, "error_estimate", ctx)};
    try {
        return CoeffTensor(kernel, sys, get<bool>(j, "weighted", ctx), box, get<std::vector<double>>(j, "values", ctx), q);
    } catch (const ArgumentError& e) {
        throw ConfigError(ctx + ": " + e.what());
    }
}

namespace {

Json gaussian_json(const char* kind, const Partition& p, int m, std::uint64_t seed,
                   const std::vector<std::vector<double>>& inc) {
    return {{"kind", kind},
            {"interval", interval_json(p.interval())},
            {"nodes", std::vector<double>(p.nodes().begin(), p.nodes().end())},
            {"m", m},
            {"seed", seed},
            {"increments", inc}};
}

}  // namespace

Json realization_to_json(const WienerPath& path) {
    return gaussian_json("wiener", path.partition, path.m, path.seed, path.increments);
}

Json realization_to_json(const GaussianMartingalePath& path) {
    Json j = gaussian_json("martingale", path.partition, path.m, path.seed, path.increments);
    j["rho"] = weight_to_json(path.rho);
    return j;
}

Json realization_to_json(const PoissonRealization& real) {
    auto* expo = dynamic_cast<const ExponentialIntensity*>(real.measure.get());
    if (!expo) throw ArgumentError("only exponential intensity measures can be serialised");
    Json times = Json::array(), marks = Json::array();
    for (const auto& comp : real.jumps) {
        std::vector<double> ts, ys;
        for (const Jump& jp : comp) {
            ts.push_back(jp.time);
            ys.push_back(jp.mark);
        }
        times.push_back(ts);
        marks.push_back(ys);
    }
    return {{"kind", "poisson"},
            {"interval", interval_json(real.interval)},
            {"m", real.m},
            {"seed", real.seed},
            {"measure", {{"kind", "exponential"}, {"lambda", expo->total_mass()}}},
            {"times", times},
            {"marks", marks}};
}

Realization realization_from_json(const Json& j) {
    const std::string ctx = "realization";
    if (!j.is_object()) throw ConfigError(ctx + ": expected an object");
    auto kind = get<std::string>(j, "kind", ctx);
    Interval iv = interval_from(j.at("interval"), ctx);
    int m = get<int>(j, "m", ctx);
    auto seed = get<std::uint64_t>(j, "seed", ctx);
    if (kind == "wiener" || kind == "martingale") {
        if (kind == "wiener")
            require_keys(j, {"kind", "interval", "nodes", "m", "seed", "increments"}, ctx);
        else
            require_keys(j, {"kind", "interval", "nodes", "m", "seed", "increments", "rho"}, ctx);
        Partition p = [&] {
            try {
                return Partition(iv, get<std::vector<double>>(j, "nodes", ctx));
            } catch (const ArgumentError& e) {
                throw ConfigError(ctx + ": " + e.what());
            }
        }();
        auto inc = get<std::vector<std::vector<double>>>(j, "increments", ctx);
        if (static_cast<int>(inc.size()) != m + 1) throw ConfigError(ctx + ": need m + 1 increment rows");
        for (const auto& row : inc)
            if (static_cast<int>(row.size()) != p.size()) throw ConfigError(ctx + ": increment row length mismatch");
        if (kind == "wiener") return WienerPath{p, m, seed, inc};
        return GaussianMartingalePath{p, m, seed, weight_from_json(j.at("rho")), inc};
    }
    if (kind == "poisson") {
        require_keys(j, {"kind", "interval", "m", "seed", "measure", "times", "marks"}, ctx);
        const Json& mj = j.at("measure");
        require_keys(mj, {"kind", "lambda"}, ctx + " measure");
        if (get<std::string>(mj, "kind", ctx) != "exponential") throw ConfigError(ctx + ": unknown measure kind");
        auto measure = std::make_shared<ExponentialIntensity>(get<double>(mj, "lambda", ctx));
        auto times = get<std::vector<std::vector<double>>>(j, "times", ctx);
        auto marks = get<std::vector<std::vector<double>>>(j, "marks", ctx);
        if (static_cast<int>(times.size()) != m + 1 || marks.size() != times.size())
            throw ConfigError(ctx + ": need m + 1 jump lists");
        PoissonRealization r{iv, m, seed, measure, {}};
        for (std::size_t i = 0; i < times.size(); ++i) {
            if (times[i].size() != marks[i].size()) throw ConfigError(ctx + ": times/marks length mismatch");
            std::vector<Jump> js;
            for (std::size_t q = 0; q < times[i].size(); ++q) {
                if (!iv.contains(times[i][q]) || (q > 0 && times[i][q] < times[i][q - 1]))
                    throw ConfigError(ctx + ": jump times must be sorted and inside the interval");
                js.push_back({times[i][q], marks[i][q]});
            }
            r.jumps.push_back(std::move(js));
        }
        return r;
    }
    throw ConfigError(ctx + ": unknown kind '" + kind + "'");
}

}  // namespace gmfs
