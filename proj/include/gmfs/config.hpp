#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gmfs/coeff.hpp"
#include "gmfs/harness.hpp"
#include "gmfs/io.hpp"
#include "gmfs/validation.hpp"

namespace gmfs {

/// Config documents are JSON objects; every reader rejects unknown keys
/// and reports the offending path in a ConfigError.
Json parse_config_text(const std::string& text, const std::string& source);
Json load_config_file(const std::string& path);

struct OutputPaths {
    std::string csv;
    std::string json;
};

struct CoeffsConfig {
    Kernel kernel;
    OrthonormalSystem system;
    std::vector<int> box;
    bool weighted = false;
    CoeffOptions options;
    OutputPaths output;
};

/// Keys: seed (optional), kernel, system, box, weighted, quadrature,
/// budget, output.
CoeffsConfig coeffs_config(const Json& doc);

struct ConvergeConfig {
    ExperimentSpec spec;
    /// moment suite with this many basis indices (0 = skip).
    int moments = 0;
    OutputPaths output;
};

/// Keys: seed (required), kernel, system, weighted, combo, boxes, driver,
/// N, trials, correction, richardson, quadrature, moments, output.
ConvergeConfig converge_config(const Json& doc);

/// Keys: seed (required), profile, criteria.
ValidationOptions validation_config(const Json& doc);

QuadratureSpec quadrature_from_json(const Json& j);

}  // namespace gmfs
