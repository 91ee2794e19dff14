#include "gmfs/config.hpp"

#include <fstream>
#include <sstream>

#include "gmfs/error.hpp"

namespace gmfs {

Json parse_config_text(const std::string& text, const std::string& source) {
    try {
        Json j = Json::parse(text);
        if (!j.is_object()) throw ConfigError(source + ": top level must be an object");
        return j;
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(source + ": " + e.what());
    }
}

Json load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path);
}

namespace {

template <typename T>
T field(const Json& j, const char* key, const std::string& ctx) {
    if (!j.contains(key)) throw ConfigError(ctx + ": missing required key '" + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
        throw ConfigError(ctx + ": '" + key + "' has the wrong type");
    }
}

template <typename T>
T field_or(const Json& j, const char* key, T dflt, const std::string& ctx) {
    return j.contains(key) ? field<T>(j, key, ctx) : dflt;
}

std::uint64_t seed_of(const Json& j, const std::string& ctx) {
    if (!j.contains("seed")) throw ConfigError(ctx + ": missing required key 'seed' (no implicit seeding)");
    if (!j["seed"].is_number_unsigned())
        throw ConfigError(ctx + ": 'seed' must be a nonnegative integer");
    return j["seed"].get<std::uint64_t>();
}

OutputPaths output_of(const Json& j, const std::string& ctx) {
    OutputPaths o;
    if (!j.contains("output")) return o;
    require_keys(j["output"], {"csv", "json"}, ctx + ".output");
    o.csv = field_or<std::string>(j["output"], "csv", "", ctx + ".output");
    o.json = field_or<std::string>(j["output"], "json", "", ctx + ".output");
    return o;
}

Kernel kernel_of(const Json& j, const std::string& ctx) {
    if (!j.contains("kernel")) throw ConfigError(ctx + ": missing required key 'kernel'");
    return kernel_from_json(j["kernel"], false);
}

OrthonormalSystem system_of(const Json& j, const Interval& iv, int hint, const std::string& ctx) {
    auto name = field<std::string>(j, "system", ctx);
    try {
        return make_system(name, iv, hint);
    } catch (const Error& e) {
        throw ConfigError(ctx + ".system: " + e.what());
    }
}

int box_hint(const std::vector<std::vector<int>>& boxes) {
    int h = 1;
    for (const auto& b : boxes)
        for (int p : b) h = std::max(h, p + 1);
    return h;
}

}  // namespace

QuadratureSpec quadrature_from_json(const Json& j) {
    const std::string ctx = "quadrature";
    require_keys(j, {"nodes_per_panel", "initial_panels", "rel_tol", "abs_tol", "max_depth"}, ctx);
    QuadratureSpec q;
    q.nodes_per_panel = field_or(j, "nodes_per_panel", q.nodes_per_panel, ctx);
    q.initial_panels = field_or(j, "initial_panels", q.initial_panels, ctx);
    q.rel_tol = field_or(j, "rel_tol", q.rel_tol, ctx);
    q.abs_tol = field_or(j, "abs_tol", q.abs_tol, ctx);
    q.max_depth = field_or(j, "max_depth", q.max_depth, ctx);
    if (q.nodes_per_panel < 2 || q.initial_panels < 1 || !(q.rel_tol > 0) || !(q.abs_tol >= 0) || q.max_depth < 0)
        throw ConfigError(ctx + ": values out of range");
    return q;
}

CoeffsConfig coeffs_config(const Json& doc) {
    const std::string ctx = "coeffs config";
    require_keys(doc, {"seed", "kernel", "system", "box", "weighted", "quadrature", "budget", "output"}, ctx);
    Kernel kernel = kernel_of(doc, ctx);
    auto box = field<std::vector<int>>(doc, "box", ctx);
    if (static_cast<int>(box.size()) != kernel.multiplicity())
        throw ConfigError(ctx + ": 'box' needs one entry per kernel factor");
    for (int p : box)
        if (p < 0) throw ConfigError(ctx + ": 'box' entries must be >= 0");
    OrthonormalSystem sys = system_of(doc, kernel.interval(), box_hint({box}), ctx);
    CoeffsConfig c{kernel, sys, box, field_or(doc, "weighted", false, ctx), {}, output_of(doc, ctx)};
    if (doc.contains("quadrature")) c.options.quad = quadrature_from_json(doc["quadrature"]);
    c.options.budget = field_or<std::size_t>(doc, "budget", c.options.budget, ctx);
    return c;
}

ConvergeConfig converge_config(const Json& doc) {
    const std::string ctx = "converge config";
    require_keys(doc, {"seed", "kernel", "system", "weighted", "combo", "boxes", "driver", "N", "trials", "correction",
                       "richardson", "quadrature", "moments", "output"},
                 ctx);
    const std::uint64_t seed = seed_of(doc, ctx);
    Kernel kernel = kernel_of(doc, ctx);
    auto boxes = field<std::vector<std::vector<int>>>(doc, "boxes", ctx);
    OrthonormalSystem sys = system_of(doc, kernel.interval(), box_hint(boxes), ctx);
    ConvergeConfig c{ExperimentSpec(kernel, sys), field_or(doc, "moments", 0, ctx), output_of(doc, ctx)};
    ExperimentSpec& s = c.spec;
    s.seed = seed;
    s.boxes = std::move(boxes);
    s.combo = field<std::vector<int>>(doc, "combo", ctx);
    s.weighted = field_or(doc, "weighted", false, ctx);
    s.N = field_or(doc, "N", s.N, ctx);
    s.trials = field_or(doc, "trials", s.trials, ctx);
    s.richardson = field_or(doc, "richardson", s.richardson, ctx);
    if (doc.contains("quadrature")) s.quad = quadrature_from_json(doc["quadrature"]);
    if (doc.contains("driver")) {
        const Json& d = doc["driver"];
        const std::string dc = ctx + ".driver";
        require_keys(d, {"kind", "m", "rho", "lambda", "marks", "jump_budget"}, dc);
        auto kind = field<std::string>(d, "kind", dc);
        if (kind == "wiener") s.driver.kind = DriverKind::wiener;
        else if (kind == "poisson") s.driver.kind = DriverKind::poisson;
        else if (kind == "martingale") s.driver.kind = DriverKind::martingale;
        else throw ConfigError(dc + ": unknown kind '" + kind + "' (wiener | poisson | martingale)");
        s.driver.m = field_or(d, "m", s.driver.m, dc);
        if (d.contains("rho")) s.driver.rho = weight_from_json(d["rho"]);
        s.driver.lambda = field_or(d, "lambda", s.driver.lambda, dc);
        s.driver.jump_budget = field_or(d, "jump_budget", s.driver.jump_budget, dc);
        if (d.contains("marks")) {
            if (!d["marks"].is_array() || d["marks"].empty()) throw ConfigError(dc + ": 'marks' must be a nonempty array");
            s.driver.marks.clear();
            for (const auto& m : d["marks"]) {
                require_keys(m, {"coef", "exponent"}, dc + ".marks");
                s.driver.marks.push_back({field_or(m, "coef", 1.0, dc), field_or(m, "exponent", 1.0, dc)});
            }
        }
    }
    if (doc.contains("correction")) {
        auto name = field<std::string>(doc, "correction", ctx);
        if (name == "explicit") s.correction = Correction::explicit_formulas();
        else if (name == "pairing") s.correction = Correction::pairing();
        else if (name == "prelimit") s.correction = Correction::prelimit(0);
        else throw ConfigError(ctx + ": unknown correction '" + name + "' (explicit | pairing | prelimit)");
    }
    try {
        validate_spec(s);
    } catch (const ArgumentError& e) {
        throw ConfigError(ctx + ": " + e.what());
    }
    if (c.moments < 0) throw ConfigError(ctx + ": 'moments' must be >= 0");
    return c;
}

ValidationOptions validation_config(const Json& doc) {
    const std::string ctx = "validate config";
    require_keys(doc, {"seed", "profile", "criteria"}, ctx);
    ValidationOptions o;
    o.seed = seed_of(doc, ctx);
    if (doc.contains("profile")) {
        try {
            o.profile = parse_profile(field<std::string>(doc, "profile", ctx));
        } catch (const ArgumentError& e) {
            throw ConfigError(ctx + ": " + e.what());
        }
    }
    o.only = field_or<std::vector<int>>(doc, "criteria", {}, ctx);
    for (int c : o.only)
        if (c < 1 || c > 10) throw ConfigError(ctx + ": criteria are numbered 1..10");
    return o;
}

}  // namespace gmfs
