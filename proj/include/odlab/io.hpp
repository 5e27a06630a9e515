#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "odlab/brackets.hpp"
#include "odlab/diffop.hpp"
#include "odlab/graded_poly.hpp"
#include "odlab/operad.hpp"

namespace odlab {

inline constexpr const char* kSchemaTag = "odlab/1";

struct ConfigError : Error {
    using Error::Error;
};

// parse errors carry "path:line:col"
nlohmann::json load_json_file(const std::string& path);
nlohmann::json parse_json_text(const std::string& text, const std::string& origin = "<string>");

// structural checks mirroring schema/odlab-config.schema.json; empty when valid
std::vector<std::string> validate_config(const nlohmann::json& j);

// Operator files:
//   {"degree":0, "terms":[{"coeff":"1/2", "mult":"x", "partials":["x","y"]}]}   Σ c·L_mult∘∂…
//   {"degree":0, "action":{"x^2":"2*x", "x*y":"y"}}                             table on basis monomials
LinearOperator operator_from_json(const nlohmann::json& j, const AlgebraContext& ctx);

struct RunConfig {
    std::optional<AlgebraContext> algebra;
    std::optional<nlohmann::json> op;
    std::optional<nlohmann::json> operad;
    std::optional<nlohmann::json> bracket;
    int max_order = 3;
    int arity = 3;
};

// throws ConfigError listing every violation
RunConfig parse_run_config(const nlohmann::json& j);

// stable, compact rendering used for every emitted document
std::string dump(const nlohmann::json& j);

} // namespace odlab
