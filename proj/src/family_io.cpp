#include "copoly2d/family_io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <memory>

#include "copoly2d/errors.hpp"

namespace copoly2d {

using nlohmann::json;

namespace {

json ratfn_to_json(const RatFn& r) { return {{"num", r.num().to_string()}, {"den", r.den().to_string()}}; }

RatFn ratfn_from_json(const json& j) {
  return RatFn(Poly::parse(j.at("num").get<std::string>()), Poly::parse(j.at("den").get<std::string>()));
}

Poly poly_field(const json& doc, const char* key) { return Poly::parse(doc.at(key).get<std::string>()); }

}  // namespace

json family_to_json(const WeightFamily& f, int moment_degree) {
  json doc;
  doc["name"] = f.name;
  json phi = json::array();
  for (int r = 0; r < 2; ++r) {
    phi.push_back({f.phi(r, 0).to_string(), f.phi(r, 1).to_string()});
  }
  doc["phi"] = phi;
  doc["psi1"] = f.psi1.to_string();
  doc["psi2"] = f.psi2.to_string();
  doc["log_grad_x"] = ratfn_to_json(f.log_grad_x);
  doc["log_grad_y"] = ratfn_to_json(f.log_grad_y);
  json params = json::array();
  for (const auto& p : f.domain.params) params.push_back(p.get_str());
  doc["domain"] = {{"type", std::string(domain_name(f.domain.type))}, {"params", params}};
  if (f.moment_fn) {
    const int d = f.moment_max_degree < 0 ? moment_degree : std::min(moment_degree, f.moment_max_degree);
    json entries = json::array();
    for (int t = 0; t <= d; ++t)
      for (int j = 0; j <= t; ++j) entries.push_back({t - j, j, f.moment_fn(t - j, j).get_str()});
    doc["moments"] = {{"max_degree", d}, {"entries", entries}};
  }
  return doc;
}

WeightFamily family_from_json(const json& doc) {
  WeightFamily f;
  try {
    f.name = doc.at("name").get<std::string>();
    const json& phi = doc.at("phi");
    if (!phi.is_array() || phi.size() != 2 || phi[0].size() != 2 || phi[1].size() != 2) {
      throw LoadError("phi must be a 2x2 array of polynomial strings");
    }
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) f.phi(r, c) = Poly::parse(phi[r][c].get<std::string>());
    f.psi1 = poly_field(doc, "psi1");
    f.psi2 = poly_field(doc, "psi2");
    f.log_grad_x = ratfn_from_json(doc.at("log_grad_x"));
    f.log_grad_y = ratfn_from_json(doc.at("log_grad_y"));
    const json& dom = doc.at("domain");
    f.domain.type = parse_domain(dom.at("type").get<std::string>());
    if (dom.contains("params")) {
      for (const auto& p : dom.at("params")) {
        f.domain.params.push_back(p.is_string() ? parse_rational(p.get<std::string>())
                                                : parse_rational(p.dump()));
      }
    }
    if (doc.contains("moments")) {
      const json& mom = doc.at("moments");
      const int d = mom.at("max_degree").get<int>();
      auto table = std::make_shared<std::map<std::pair<int, int>, Rational>>();
      for (const auto& e : mom.at("entries")) {
        if (!e.is_array() || e.size() != 3) throw LoadError("moment entries must be [i, j, \"p/q\"]");
        const int i = e[0].get<int>(), j = e[1].get<int>();
        if (i < 0 || j < 0 || i + j > d) throw LoadError("moment entry outside the stated degree");
        (*table)[{i, j}] = parse_rational(e[2].is_string() ? e[2].get<std::string>() : e[2].dump());
      }
      for (int t = 0; t <= d; ++t)
        for (int j = 0; j <= t; ++j) {
          if (!table->count({t - j, j})) {
            throw LoadError("moment table missing entry (" + std::to_string(t - j) + ", " + std::to_string(j) + ")");
          }
        }
      f.moment_max_degree = d;
      f.moment_fn = [table](int i, int j) -> Rational { return table->at({i, j}); };
    }
  } catch (const LoadError&) {
    throw;
  } catch (const std::exception& e) {
    throw LoadError(std::string("malformed family document: ") + e.what());
  }
  // A failing Pearson equation is left to check_a; only structural
  // invariants are enforced here.
  validate_family(f);
  return f;
}

WeightFamily load_family_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open family file '" + path + "'");
  json doc;
  try {
    in >> doc;
  } catch (const std::exception& e) {
    throw LoadError("family file '" + path + "' is not valid JSON: " + e.what());
  }
  return family_from_json(doc);
}

}  // namespace copoly2d
