#include "copoly2d/report.hpp"

#include <iomanip>
#include <sstream>

namespace copoly2d {

using nlohmann::json;

json report_to_json(const PropertyReport& r) {
  return {{"family", r.family},
          {"m", r.m},
          {"mode", r.mode},
          {"n", r.n},
          {"notes", r.notes},
          {"property", std::string(property_name(r.property))},
          {"residual", r.residual},
          {"status", std::string(status_name(r.status))},
          {"tolerance", r.tolerance}};
}

namespace {

json family_summary(const WeightFamily& f) {
  json params = json::array();
  for (const auto& p : f.domain.params) params.push_back(to_string(p));
  json phi = json::array();
  for (int r = 0; r < 2; ++r) phi.push_back({f.phi(r, 0).to_string(), f.phi(r, 1).to_string()});
  return {{"domain", std::string(domain_name(f.domain.type))},
          {"name", f.name},
          {"params", params},
          {"phi", phi},
          {"psi1", f.psi1.to_string()},
          {"psi2", f.psi2.to_string()}};
}

}  // namespace

json run_to_json(const WeightFamily& f, const RunConfig& cfg, const std::vector<PropertyReport>& reports) {
  json cfg_json = {{"family_ref", cfg.family_ref},
                   {"format", cfg.format},
                   {"mmax", cfg.mmax},
                   {"mode", cfg.mode},
                   {"nmax", cfg.nmax},
                   {"params", cfg.params},
                   {"properties", cfg.properties},
                   {"quad_order", cfg.quad_order},
                   {"resolved_mode", cfg.resolved_mode},
                   {"seed", cfg.seed}};
  json rs = json::array();
  for (const auto& r : reports) rs.push_back(report_to_json(r));
  return {{"assumed_boundary_condition", f.boundary_assumed},
          {"config", cfg_json},
          {"family", family_summary(f)},
          {"reports", rs}};
}

std::string run_to_text(const WeightFamily& f, const RunConfig& cfg, const std::vector<PropertyReport>& reports) {
  std::ostringstream out;
  out << "family " << f.name;
  if (!f.domain.params.empty()) {
    out << "(";
    for (size_t i = 0; i < f.domain.params.size(); ++i) out << (i ? "," : "") << to_string(f.domain.params[i]);
    out << ")";
  }
  out << " on " << domain_name(f.domain.type) << "\n";
  out << "  Phi = [[" << f.phi(0, 0).to_string() << ", " << f.phi(0, 1).to_string() << "], ["
      << f.phi(1, 0).to_string() << ", " << f.phi(1, 1).to_string() << "]]\n";
  out << "  psi = (" << f.psi1.to_string() << ", " << f.psi2.to_string() << ")\n";
  out << "  nmax " << cfg.nmax << ", mmax " << cfg.mmax << ", mode " << cfg.resolved_mode << ", quad order "
      << cfg.quad_order << ", seed " << cfg.seed << "\n";
  if (f.boundary_assumed) out << "  boundary terms of rho Phi are assumed to vanish\n";
  int pass = 0;
  for (const auto& r : reports) {
    pass += r.status == Status::kPass;
    out << std::left << std::setw(5) << status_name(r.status) << " " << std::setw(15) << property_name(r.property)
        << " n=" << r.n << " m=" << r.m << " " << r.mode;
    if (r.mode == "numeric" || r.residual != 0.0) {
      out << " residual=" << std::setprecision(3) << r.residual << " tol=" << r.tolerance;
    }
    if (!r.notes.empty()) out << "  " << r.notes;
    out << "\n";
  }
  out << pass << "/" << reports.size() << " checks passed\n";
  return out.str();
}

bool all_pass(const std::vector<PropertyReport>& reports) {
  for (const auto& r : reports)
    if (r.status == Status::kFail) return false;
  return true;
}

}  // namespace copoly2d
