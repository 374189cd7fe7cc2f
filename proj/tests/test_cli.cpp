#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "copoly2d/family_io.hpp"
#include "copoly2d/report.hpp"
#include "copoly2d/weights.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace copoly2d;

namespace {

struct Run {
  int code;
  std::string out;
};

Run run_cli(const std::string& args) {
  std::string cmd = std::string(COPOLY2D_CLI) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::string out;
  std::array<char, 4096> buf;
  size_t got;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), got);
  int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

fs::path scratch_dir() {
  fs::path d = fs::temp_directory_path() / ("copoly2d_cli_" + std::to_string(::getpid()));
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, HermiteVerifyPassesAndIsDeterministic) {
  auto a = run_cli("verify --family product_hermite --nmax 4 --mmax 2 --seed 0 --format json");
  auto b = run_cli("verify --family product_hermite --nmax 4 --mmax 2 --seed 0 --format json");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  auto doc = json::parse(a.out);
  EXPECT_TRUE(doc["assumed_boundary_condition"].get<bool>());
  EXPECT_EQ(doc["family"]["name"], "product_hermite");
  EXPECT_EQ(doc["config"]["resolved_mode"], "exact");
  ASSERT_FALSE(doc["reports"].empty());
  for (const auto& r : doc["reports"]) EXPECT_EQ(r["status"], "pass") << r.dump();
}

TEST(Cli, JsonMatchesLibraryVerifyAll) {
  auto run = run_cli("verify --family product_laguerre --params 1,2 --nmax 2 --mmax 1 --format json");
  auto doc = json::parse(run.out);
  VerifyOptions opt;
  opt.nmax = 2;
  opt.mmax = 1;
  auto reports = verify_all(builtin("product_laguerre", {Rational(1), Rational(2)}), opt);
  ASSERT_EQ(doc["reports"].size(), reports.size());
  for (size_t i = 0; i < reports.size(); ++i) {
    EXPECT_EQ(doc["reports"][i]["property"], std::string(property_name(reports[i].property)));
    EXPECT_EQ(doc["reports"][i]["status"], std::string(status_name(reports[i].status)));
  }
  EXPECT_EQ(run.code, all_pass(reports) ? 0 : 1);
}

TEST(Cli, JsonKeysSorted) {
  auto run = run_cli("verify --family product_hermite --nmax 1 --mmax 0 --format json");
  auto doc = json::parse(run.out);
  std::vector<std::string> keys;
  for (auto it = doc.begin(); it != doc.end(); ++it) keys.push_back(it.key());
  EXPECT_EQ(keys, (std::vector<std::string>{"assumed_boundary_condition", "config", "family", "reports"}));
}

TEST(Cli, FailingCheckExitsOne) {
  // (c) has no constant Lambda at m = 2 on the square
  auto run = run_cli("verify --family product_jacobi --nmax 1 --mmax 2 --properties c");
  EXPECT_EQ(run.code, 1);
  EXPECT_NE(run.out.find("fail"), std::string::npos);
}

TEST(Cli, NumericModeLabelsReports) {
  auto run = run_cli("verify --family product_jacobi --params 1/2,1/2,1/2,1/2 --mode numeric --nmax 2 --mmax 1 "
                     "--properties b --format json");
  EXPECT_EQ(run.code, 0);
  auto doc = json::parse(run.out);
  ASSERT_FALSE(doc["reports"].empty());
  for (const auto& r : doc["reports"]) {
    EXPECT_EQ(r["mode"], "numeric");
    EXPECT_GT(r["tolerance"].get<double>(), 0.0);
  }
}

TEST(Cli, ConfigErrorsExitTwo) {
  EXPECT_EQ(run_cli("verify --family no_such_family").code, 2);
  EXPECT_EQ(run_cli("verify --family product_hermite --nmax 0").code, 2);
  EXPECT_EQ(run_cli("verify --family product_hermite --mmax -1").code, 2);
  EXPECT_EQ(run_cli("verify --family product_hermite --nmax 4 --mmax 2 --quad-order 7").code, 2);
  EXPECT_EQ(run_cli("verify --family product_hermite --properties a,z").code, 2);
  EXPECT_EQ(run_cli("verify --family product_laguerre --params -2,0").code, 2);
  EXPECT_EQ(run_cli("verify --family product_hermite --mode fast").code, 2);
  EXPECT_EQ(run_cli("verify").code, 2);
  EXPECT_EQ(run_cli("--help").code, 0);
}

TEST(Cli, AsymmetricPhiFileRejected) {
  auto doc = family_to_json(builtin("product_hermite"), 4);
  doc["phi"] = json::array({json::array({"1", "x"}), json::array({"0", "1"})});
  auto path = scratch_dir() / "bad_phi.json";
  std::ofstream(path) << doc.dump();
  EXPECT_EQ(run_cli("verify --family " + path.string()).code, 2);
}

TEST(Cli, ListShowsFiveFamilies) {
  auto run = run_cli("list");
  EXPECT_EQ(run.code, 0);
  for (const char* name : {"product_hermite", "product_laguerre(a,b)", "hermite_laguerre(a)",
                           "product_jacobi(a,b,c,d)", "triangle(a,b,c)"})
    EXPECT_NE(run.out.find(name), std::string::npos) << name;
  EXPECT_NE(run.out.find("simplex"), std::string::npos);
}

TEST(Cli, ListJsonSkeletonsLoad) {
  auto run = run_cli("list --format json");
  auto doc = json::parse(run.out);
  ASSERT_EQ(doc.size(), 5u);
  for (const auto& entry : doc) {
    WeightFamily f = family_from_json(entry["skeleton"]);
    EXPECT_TRUE(check_pearson(f)) << f.name;
  }
}

TEST(Cli, ExportRoundTripVerifiesIdentically) {
  auto dir = scratch_dir();
  for (const auto& info : builtin_catalog()) {
    auto path = dir / (info.name + ".json");
    ASSERT_EQ(run_cli("export --family " + info.name + " --output " + path.string()).code, 0);
    auto direct = run_cli("verify --family " + info.name + " --nmax 2 --mmax 1 --format json");
    auto loaded = run_cli("verify --family " + path.string() + " --nmax 2 --mmax 1 --format json");
    EXPECT_EQ(direct.code, loaded.code) << info.name;
    auto a = json::parse(direct.out)["reports"];
    auto b = json::parse(loaded.out)["reports"];
    EXPECT_EQ(a, b) << info.name;
  }
}

TEST(Cli, OutputFileWrittenWithoutTempLeftover) {
  auto dir = scratch_dir();
  auto path = dir / "report.json";
  auto run = run_cli("verify --family product_hermite --nmax 1 --mmax 0 --format json --output " + path.string());
  EXPECT_EQ(run.code, 0);
  EXPECT_TRUE(run.out.empty());
  EXPECT_NO_THROW(json::parse(slurp(path)));
  EXPECT_FALSE(fs::exists(dir / "report.json.tmp"));
}

TEST(Cli, ThreadCapDoesNotChangeOutput) {
  const std::string cmd = "verify --family triangle --nmax 2 --mmax 1 --format json";
  auto base = run_cli(cmd);
  setenv("COPOLY2D_THREADS", "1", 1);
  auto single = run_cli(cmd);
  unsetenv("COPOLY2D_THREADS");
  EXPECT_EQ(base.out, single.out);
}
