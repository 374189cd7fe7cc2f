// copoly2d: verify the classical characterizations on a bivariate weight.
#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <thread>

#include "copoly2d/errors.hpp"
#include "copoly2d/family_io.hpp"
#include "copoly2d/report.hpp"
#include "copoly2d/weights.hpp"

namespace fs = std::filesystem;
using namespace copoly2d;

namespace {

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto b = item.find_first_not_of(" \t");
    auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

// Writes to a sibling temp file and renames, so readers never see a partial report.
void write_atomic(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + tmp.string() + " for writing");
    out << text;
    if (!out) throw Error("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

int thread_count() {
  int n = static_cast<int>(std::thread::hardware_concurrency());
  if (n <= 0) n = 1;
  if (const char* env = std::getenv("COPOLY2D_THREADS")) {
    try {
      int cap = std::stoi(env);
      if (cap >= 1) n = std::min(n, cap);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring COPOLY2D_THREADS=" << env << "\n";
    }
  }
  return n;
}

bool looks_like_path(const std::string& ref) {
  return ref.find('/') != std::string::npos || ref.find('\\') != std::string::npos ||
         (ref.size() > 5 && ref.substr(ref.size() - 5) == ".json");
}

WeightFamily resolve_family(const RunConfig& cfg) {
  if (looks_like_path(cfg.family_ref)) {
    if (!cfg.params.empty()) throw InvalidParameter("--params applies to built-in families only");
    return load_family_file(cfg.family_ref);
  }
  std::vector<Rational> params;
  for (const auto& p : cfg.params) params.push_back(parse_rational(p));
  return builtin(cfg.family_ref, params);
}

void validate_config(const RunConfig& cfg) {
  if (cfg.nmax < 1) throw InvalidParameter("--nmax must be at least 1");
  if (cfg.mmax < 0) throw InvalidParameter("--mmax must be non-negative");
  if (cfg.quad_order < cfg.nmax + cfg.mmax + 2)
    throw InvalidParameter("--quad-order must be at least nmax+mmax+2 = " + std::to_string(cfg.nmax + cfg.mmax + 2));
  static const std::set<std::string> known = {"a", "b", "c", "d", "e", "aux"};
  for (const auto& p : cfg.properties)
    if (!known.count(p)) throw InvalidParameter("unknown property '" + p + "'");
}

int run_verify(RunConfig cfg) {
  validate_config(cfg);
  WeightFamily f = resolve_family(cfg);

  VerifyOptions opt;
  opt.nmax = cfg.nmax;
  opt.mmax = cfg.mmax;
  opt.quad_order = cfg.quad_order;
  opt.seed = cfg.seed;
  opt.threads = thread_count();
  if (cfg.mode == "exact") {
    if (!f.has_exact_moments(2 * (cfg.nmax + cfg.mmax) + 4))
      throw OracleUnavailable("family '" + f.name + "' has no exact moment oracle; use --mode numeric");
    opt.mode = Mode::kExact;
  } else if (cfg.mode == "numeric") {
    opt.mode = Mode::kNumeric;
  } else {
    opt.mode = f.has_exact_moments(2 * (cfg.nmax + cfg.mmax) + 4) ? Mode::kExact : Mode::kNumeric;
  }
  cfg.resolved_mode = std::string(mode_name(opt.mode));

  std::set<std::string> sel(cfg.properties.begin(), cfg.properties.end());
  opt.run_a = sel.count("a");
  opt.run_b = sel.count("b");
  opt.run_c = sel.count("c");
  opt.run_d = sel.count("d");
  opt.run_e = sel.count("e");
  opt.run_aux = sel.count("aux");

  auto reports = verify_all(f, opt);
  std::string text = cfg.format == "json" ? run_to_json(f, cfg, reports).dump(2) + "\n" : run_to_text(f, cfg, reports);
  write_atomic(cfg.output, text);
  return all_pass(reports) ? 0 : 1;
}

int run_list(const std::string& format) {
  const auto& cat = builtin_catalog();
  if (format == "json") {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& info : cat) {
      auto doc = family_to_json(builtin(info.name, info.default_params));
      out.push_back({{"description", info.description}, {"signature", info.signature}, {"skeleton", doc}});
    }
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  for (const auto& info : cat) {
    std::string defaults;
    for (size_t i = 0; i < info.default_params.size(); ++i)
      defaults += (i ? "," : "") + to_string(info.default_params[i]);
    std::cout << info.signature << "\n    " << info.description;
    if (!defaults.empty()) std::cout << "\n    defaults: " << defaults;
    std::cout << "\n";
  }
  return 0;
}

int run_export(const std::string& name, const std::vector<std::string>& params, int moment_degree,
               const std::string& output) {
  std::vector<Rational> ps;
  for (const auto& p : params) ps.push_back(parse_rational(p));
  WeightFamily f = builtin(name, ps);
  write_atomic(output, family_to_json(f, moment_degree).dump(2) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verify the characterizations of classical bivariate orthogonal polynomials"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string params_csv;
  std::string props_csv = "a,b,c,d,e,aux";
  auto* verify = app.add_subcommand("verify", "run the verification grid on one family");
  verify->add_option("--family", cfg.family_ref, "built-in name or family JSON file")->required();
  verify->add_option("--params", params_csv, "comma-separated rational parameters of a built-in");
  verify->add_option("--nmax", cfg.nmax, "largest degree n")->capture_default_str();
  verify->add_option("--mmax", cfg.mmax, "largest derivative order m")->capture_default_str();
  verify->add_option("--mode", cfg.mode, "exact, numeric or auto")
      ->check(CLI::IsMember({"exact", "numeric", "auto"}))
      ->capture_default_str();
  verify->add_option("--quad-order", cfg.quad_order, "Gauss points per direction")->capture_default_str();
  verify->add_option("--seed", cfg.seed, "seed for the randomized identities")->capture_default_str();
  verify->add_option("--properties", props_csv, "subset of a,b,c,d,e,aux")->capture_default_str();
  verify->add_option("--output", cfg.output, "report path (default stdout)");
  verify->add_option("--format", cfg.format, "json or text")
      ->check(CLI::IsMember({"json", "text"}))
      ->capture_default_str();

  std::string list_format = "text";
  auto* list = app.add_subcommand("list", "list the built-in families");
  list->add_option("--format", list_format, "json or text")->check(CLI::IsMember({"json", "text"}));

  std::string export_name, export_params, export_output;
  int export_degree = 24;
  auto* exp = app.add_subcommand("export", "write a built-in family as a family JSON file");
  exp->add_option("--family", export_name, "built-in name")->required();
  exp->add_option("--params", export_params, "comma-separated rational parameters");
  exp->add_option("--moment-degree", export_degree, "moment table degree")->capture_default_str();
  exp->add_option("--output", export_output, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    if (*verify) {
      cfg.params = split_csv(params_csv);
      cfg.properties = split_csv(props_csv);
      return run_verify(cfg);
    }
    if (*list) return run_list(list_format);
    if (*exp) return run_export(export_name, split_csv(export_params), export_degree, export_output);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
