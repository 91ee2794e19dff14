// gmfs: coefficients, Monte Carlo convergence tables and validation suites.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "gmfs/basis.hpp"
#include "gmfs/config.hpp"
#include "gmfs/error.hpp"
#include "gmfs/harness.hpp"
#include "gmfs/io.hpp"
#include "gmfs/validation.hpp"

namespace fs = std::filesystem;
using namespace gmfs;

namespace {

enum Exit { ok = 0, failed = 1, usage = 2, resource = 3 };

// Write through a temporary sibling so an interrupted run never leaves a
// partial file behind.
void write_atomic(const std::string& path, const std::string& content) {
    fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw ConfigError("cannot write '" + tmp.string() + "'");
        out << content;
        if (!out) throw ConfigError("write failed for '" + tmp.string() + "'");
    }
    fs::rename(tmp, target);
}

int cmd_basis(const std::string& name, const std::vector<double>& interval, int count, const std::string& out) {
    Interval iv(interval.at(0), interval.at(1));
    OrthonormalSystem sys = make_system(name, iv, count);
    Matrix g = gram_matrix(sys, count);
    double dev = identity_deviation(g);
    double tol = gram_tolerance(sys);
    std::ostringstream csv;
    csv.imbue(std::locale::classic());
    csv.precision(17);
    for (int i = 0; i < g.rows; ++i) {
        for (int j = 0; j < g.cols; ++j) csv << (j ? "," : "") << g(i, j);
        csv << '\n';
    }
    if (!out.empty()) write_atomic(out, csv.str());
    std::printf("system %s on [%g, %g], count %d: max |G - I| = %.3e (tolerance %.0e)\n", sys.name().c_str(), iv.t,
                iv.T, count, dev, tol);
    return dev < tol ? ok : failed;
}

int cmd_coeffs(const std::string& config_path) {
    CoeffsConfig c = coeffs_config(load_config_file(config_path));
    CoeffTensor t = coeff_tensor(c.kernel, c.system, c.box, c.weighted, c.options);
    std::ostringstream csv;
    write_tensor_csv(csv, t);
    std::string json = tensor_to_json(t).dump(2) + "\n";
    if (c.output.csv.empty() && c.output.json.empty()) {
        std::cout << csv.str();
    } else {
        if (!c.output.csv.empty()) write_atomic(c.output.csv, csv.str());
        if (!c.output.json.empty()) write_atomic(c.output.json, json);
    }
    auto pr = parseval_partial(t);
    std::fprintf(stderr, "%zu coefficients, quadrature error estimate %.3e, Parseval residual %.6e\n", t.size(),
                 t.quadrature().error_estimate, pr.residual);
    return ok;
}

int cmd_converge(const std::string& config_path) {
    ConvergeConfig c = converge_config(load_config_file(config_path));
    MCReport r = run_experiment(c.spec);
    std::ostringstream csv;
    write_report_csv(csv, r);
    if (c.output.csv.empty()) std::cout << csv.str();
    else write_atomic(c.output.csv, csv.str());
    if (!c.output.json.empty()) {
        std::ostringstream js;
        write_report_json(js, r);
        write_atomic(c.output.json, js.str());
    }
    int code = ok;
    if (c.moments > 0) {
        MomentSuiteReport ms = moment_suite(c.spec, c.moments);
        std::ostringstream mcsv;
        write_moments_csv(mcsv, ms);
        std::cout << mcsv.str();
        std::fprintf(stderr, "moment suite: %d of %zu tests beyond 3 sigma (%s)\n", ms.failures, ms.tests.size(),
                     ms.pass() ? "pass" : "FAIL");
        if (!ms.pass()) code = failed;
    }
    std::fprintf(stderr, "%s: %d trials in %.2f s\n", r.description.c_str(), r.trials, r.runtime_seconds);
    return code;
}

int cmd_validate(const std::string& profile, const std::string& config_path, const std::vector<int>& criteria) {
    ValidationOptions o;
    if (!config_path.empty()) o = validation_config(load_config_file(config_path));
    if (!profile.empty()) o.profile = parse_profile(profile);
    if (!criteria.empty()) o.only = criteria;
    int failures = 0;
    run_validation(o, [&](const CriterionResult& r) {
        std::printf("%s\n", format_result(r).c_str());
        std::fflush(stdout);
        if (!r.pass) ++failures;
    });
    std::printf("%s profile: %d criteria failed\n", to_string(o.profile).c_str(), failures);
    return failures ? failed : ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Generalized multiple Fourier series for iterated stochastic integrals"};
    app.require_subcommand(1);

    auto* basis = app.add_subcommand("basis", "Gram matrix check of an orthonormal system");
    std::string system_name;
    std::vector<double> interval{0.0, 1.0};
    int count = 8;
    std::string basis_out;
    basis->add_option("--system", system_name, "legendre | trigonometric | haar | rademacher_walsh | besselN | bessel_unitN")
        ->required();
    basis->add_option("--interval", interval, "t T")->expected(2);
    basis->add_option("--count", count, "number of basis functions")->check(CLI::PositiveNumber);
    basis->add_option("--out", basis_out, "Gram matrix CSV");

    auto* coeffs = app.add_subcommand("coeffs", "Coefficient tensor from a config file");
    std::string coeffs_cfg;
    coeffs->add_option("config", coeffs_cfg, "JSON config")->required();

    auto* converge = app.add_subcommand("converge", "Monte Carlo convergence table from a config file");
    std::string conv_cfg;
    converge->add_option("config", conv_cfg, "JSON config")->required();

    auto* validate = app.add_subcommand("validate", "Run the acceptance suites");
    std::string profile, val_cfg;
    std::vector<int> criteria;
    validate->add_option("--profile", profile, "quick | full")->check(CLI::IsMember({"quick", "full"}));
    validate->add_option("--config", val_cfg, "JSON config (seed, profile, criteria)");
    validate->add_option("--criteria", criteria, "subset of criteria 1..10")->delimiter(',');

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return usage;
    }

    try {
        if (*basis) return cmd_basis(system_name, interval, count, basis_out);
        if (*coeffs) return cmd_coeffs(coeffs_cfg);
        if (*converge) return cmd_converge(conv_cfg);
        if (*validate) return cmd_validate(profile, val_cfg, criteria);
    } catch (const SizeError& e) {
        std::fprintf(stderr, "size error: %s\n", e.what());
        return resource;
    } catch (const ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return usage;
    } catch (const ArgumentError& e) {
        std::fprintf(stderr, "argument error: %s\n", e.what());
        return usage;
    } catch (const RangeError& e) {
        std::fprintf(stderr, "range error: %s\n", e.what());
        return usage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return failed;
    }
    return usage;
}
