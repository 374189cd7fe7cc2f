#pragma once

#include <cstdint>
#include <json.hpp>
#include <string>
#include <vector>

#include "copoly2d/characterize.hpp"

namespace copoly2d {

/// Settings of one verification run as echoed into the report.
struct RunConfig {
  std::string family_ref = "product_hermite";  // built-in name or family file path
  std::vector<std::string> params;             // rational strings, built-ins only
  int nmax = 4;
  int mmax = 2;
  std::string mode = "auto";  // exact | numeric | auto
  std::string resolved_mode;  // exact | numeric after resolving auto
  int quad_order = 20;
  std::uint64_t seed = 0;
  std::vector<std::string> properties = {"a", "b", "c", "d", "e", "aux"};
  std::string output;  // empty means stdout
  std::string format = "text";
};

nlohmann::json report_to_json(const PropertyReport& r);

/// {"assumed_boundary_condition", "config", "family", "reports"}; keys sorted,
/// rationals as strings.
nlohmann::json run_to_json(const WeightFamily& f, const RunConfig& cfg, const std::vector<PropertyReport>& reports);

std::string run_to_text(const WeightFamily& f, const RunConfig& cfg, const std::vector<PropertyReport>& reports);

bool all_pass(const std::vector<PropertyReport>& reports);

}  // namespace copoly2d
