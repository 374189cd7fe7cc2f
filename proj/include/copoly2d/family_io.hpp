#pragma once

#include <json.hpp>
#include <string>

#include "copoly2d/weights.hpp"

namespace copoly2d {

/// Family definition document:
///   {"name", "phi": [[p, p], [p, p]], "psi1", "psi2",
///    "log_grad_x": {"num", "den"}, "log_grad_y": {"num", "den"},
///    "domain": {"type", "params": ["p/q", ...]},
///    "moments": {"max_degree": d, "entries": [[i, j, "p/q"], ...]}}   (optional)
/// Polynomials are strings in the Poly::parse format.
///
/// Exports the moment table up to moment_degree when the family has an exact oracle.
nlohmann::json family_to_json(const WeightFamily& f, int moment_degree = 24);

/// Parses and validates; every failure surfaces as LoadError.
WeightFamily family_from_json(const nlohmann::json& doc);

WeightFamily load_family_file(const std::string& path);

}  // namespace copoly2d
