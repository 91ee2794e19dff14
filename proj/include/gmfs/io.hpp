#pragma once

#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "gmfs/coeff.hpp"
#include "gmfs/drivers.hpp"
#include "gmfs/kernel.hpp"

namespace gmfs {

using Json = nlohmann::json;

/// {"name": "const", "c": 1} | {"name": "pow", "a": 0.5} | {"name": "sqrt_shift"}
/// | {"name": "exp", "c": -1} | {"name": "tabulated", "xs": [...], "ys": [...]}.
/// Unknown names or keys -> ConfigError.
Json factor_to_json(const KernelFactor& f);
KernelFactor factor_from_json(const Json& j, bool allow_tabulated = true);

Json kernel_to_json(const Kernel& k);
Kernel kernel_from_json(const Json& j, bool allow_tabulated = true);

/// {"kind": "constant", "value": c} | {"kind": "identity"}. Custom weights
/// cannot be serialised (ArgumentError).
Json weight_to_json(const WeightFunction& w);
WeightFunction weight_from_json(const Json& j);

/// Header j_1,...,j_k,value; one row per entry in storage order (j_1
/// fastest); 17 significant digits, '.' decimal.
void write_tensor_csv(std::ostream& os, const CoeffTensor& tensor);

struct TensorTable {
    std::vector<int> box;
    std::vector<double> values;
};

/// Throws ConfigError on malformed input.
TensorTable read_tensor_csv(std::istream& is);

/// Envelope with kernel, system, weighted flag, box, quadrature metadata
/// and the values.
Json tensor_to_json(const CoeffTensor& tensor);
CoeffTensor tensor_from_json(const Json& j);

using Realization = std::variant<WienerPath, GaussianMartingalePath, PoissonRealization>;

Json realization_to_json(const WienerPath& path);
Json realization_to_json(const GaussianMartingalePath& path);
Json realization_to_json(const PoissonRealization& real);
Realization realization_from_json(const Json& j);

/// Reject keys outside `allowed` (ConfigError naming the key and context).
void require_keys(const Json& j, std::initializer_list<const char*> allowed, const std::string& context);

}  // namespace gmfs
