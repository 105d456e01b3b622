#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "error.hpp"
#include "output.hpp"
#include "runner.hpp"

using namespace degwave;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("degwave_runner_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) out.push_back(l);
  return out;
}

ErrorCode code_of(const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::invalid_argument;
}

const char* kConserve =
    "experiment = conserve\n"
    "coeff.kind = power_law\n"
    "coeff.K = 0.5   # weak\n"
    "coeff.h = 0.5\n"
    "coeff.c = 0.1\n"
    "mesh.n = 60\n"
    "time.T = 1\n"
    "time.dt = 0.0078125\n";

}  // namespace

TEST(Config, ParsesValuesAndComments) {
  const auto cfg = Config::parse("# header\nexperiment = hum\n\ncoeff.K = 0.5 # trailing\n"
                                 "sweep.K_grid = 0.5, 1.0,1.5\n");
  EXPECT_EQ(cfg.get_string("experiment"), "hum");
  EXPECT_DOUBLE_EQ(cfg.get_double("coeff.K"), 0.5);
  EXPECT_DOUBLE_EQ(cfg.get_double("coeff.h", 2.0), 2.0);
  const std::vector<double> grid = {0.5, 1.0, 1.5};
  EXPECT_EQ(cfg.get_list("sweep.K_grid", {}), grid);
  EXPECT_EQ(cfg.get_count("mesh.n", 200), 200u);
  EXPECT_EQ(cfg.get_seed("data.seed", 1), 1u);
}

TEST(Config, RejectsMalformedInput) {
  EXPECT_EQ(code_of([] { Config::parse("bogus.key = 1\n"); }), ErrorCode::config_error);
  EXPECT_EQ(code_of([] { Config::parse("coeff.K = 1\ncoeff.K = 2\n"); }), ErrorCode::config_error);
  EXPECT_EQ(code_of([] { Config::parse("coeff.K =\n"); }), ErrorCode::config_error);
  EXPECT_EQ(code_of([] { Config::parse("coeff.K 1\n"); }), ErrorCode::config_error);
  EXPECT_EQ(code_of([] { Config::parse("coeff.K = abc\n").get_double("coeff.K"); }),
            ErrorCode::config_error);
  EXPECT_EQ(code_of([] { Config::parse("mesh.n = -3\n").get_count("mesh.n"); }),
            ErrorCode::config_error);
  EXPECT_EQ(code_of([] { Config::load("/nonexistent/x.cfg"); }), ErrorCode::config_error);
}

TEST(Config, ErrorsNameTheOriginAndLine) {
  try {
    Config::parse("experiment = hum\nnot.a.key = 1\n", "exp.cfg");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("exp.cfg:2"), std::string::npos) << e.what();
  }
}

TEST(Config, MissingHorizonIsAConfigError) {
  auto cfg = Config::parse(
      "experiment = conserve\ncoeff.kind = power_law\ncoeff.K = 0.5\nmesh.n = 20\n");
  try {
    run_experiment(cfg, scratch("missing"), {});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::config_error);
    EXPECT_NE(std::string(e.what()).find("time.T"), std::string::npos);
  }
}

TEST(Config, UnknownExperimentAndProfile) {
  auto bad_exp = Config::parse("experiment = nope\n");
  EXPECT_EQ(code_of([&] { run_experiment(bad_exp, scratch("nope"), {}); }),
            ErrorCode::config_error);
  auto bad_kind = Config::parse("coeff.kind = spline\n");
  EXPECT_EQ(code_of([&] { profile_from_config(bad_kind); }), ErrorCode::config_error);
  auto neg = Config::parse("coeff.kind = power_law\ncoeff.K = -1\n");
  EXPECT_EQ(code_of([&] { profile_from_config(neg); }), ErrorCode::config_error);
}

TEST(Output, SeventeenDigits) {
  EXPECT_EQ(format_real(0.1), "0.10000000000000001");
  EXPECT_EQ(format_real(2.0), "2");
}

TEST(Runner, ConserveWritesCsvAndSvg) {
  const auto dir = scratch("conserve");
  std::vector<std::string> messages;
  const auto outcome = run_experiment(Config::parse(kConserve), dir,
                                      [&](const std::string& m) { messages.push_back(m); });
  EXPECT_TRUE(outcome.gate_passed);
  ASSERT_FALSE(outcome.gate_lines.empty());
  EXPECT_EQ(outcome.gate_lines.front().rfind("PASS", 0), 0u);

  const auto csv = lines(slurp(dir / "energy.csv"));
  ASSERT_EQ(csv.size(), 1u + 129u);
  EXPECT_NE(csv[0].find("E"), std::string::npos);
  EXPECT_NE(csv[0].find(","), std::string::npos);
  const auto svg = slurp(dir / "energy.svg");
  EXPECT_NE(svg.find("width=\"800\""), std::string::npos);
  EXPECT_NE(svg.find("height=\"500\""), std::string::npos);
}

TEST(Runner, OutputIsDeterministic) {
  const auto a = scratch("det_a"), b = scratch("det_b");
  const std::string text =
      "experiment = observe\ncoeff.kind = power_law\ncoeff.K = 0.5\nmesh.n = 40\nmesh.p = 1.5\n"
      "time.T = 8\ndata.kind = random\ndata.seed = 3\ndata.ensemble = 4\n";
  run_experiment(Config::parse(text), a, {});
  run_experiment(Config::parse(text), b, {});
  const auto ca = slurp(a / "observability.csv");
  EXPECT_FALSE(ca.empty());
  EXPECT_EQ(ca, slurp(b / "observability.csv"));
  EXPECT_EQ(lines(ca).size(), 5u);
}

TEST(Runner, HumControlHasOneRowPerTimeStep) {
  const auto dir = scratch("hum");
  const std::string text =
      "experiment = hum\ncoeff.kind = power_law\ncoeff.K = 0.5\nmesh.n = 60\nmesh.p = 1\n"
      "time.T = 8\ntime.dt = 0.0078125\nhum.tol = 1e-8\nhum.max_iter = 200\n";
  const auto outcome = run_experiment(Config::parse(text), dir, {});
  EXPECT_TRUE(outcome.gate_passed);
  EXPECT_EQ(lines(slurp(dir / "control.csv")).size(), 1u + 1025u);
  EXPECT_TRUE(fs::exists(dir / "hum_report.csv"));
  EXPECT_TRUE(fs::exists(dir / "control.svg"));
}

TEST(Runner, HumIterationCapFailsTheGate) {
  const std::string text =
      "experiment = hum\ncoeff.kind = power_law\ncoeff.K = 0.5\nmesh.n = 40\nmesh.p = 1\n"
      "time.T = 8\ntime.dt = 0.015625\nhum.tol = 1e-12\nhum.max_iter = 2\n";
  const auto outcome = run_experiment(Config::parse(text), scratch("hum_cap"), {});
  EXPECT_FALSE(outcome.gate_passed);
}

TEST(Runner, TabulatedProfileResolvesRelativeToConfig) {
  const auto dir = scratch("table");
  fs::create_directories(dir);
  {
    std::ofstream table(dir / "profile.csv");
    table << "x,a,b,aprime\n";
    for (int i = 1; i <= 64; ++i) {
      const double x = i / 64.0;
      table << x << "," << x << ",0,1\n";
    }
  }
  {
    std::ofstream cfg(dir / "t.cfg");
    cfg << "coeff.kind = tabulated\ncoeff.table_path = profile.csv\n";
  }
  const auto profile = profile_from_config(Config::load(dir / "t.cfg"));
  EXPECT_NEAR(profile.a(0.5), 0.5, 1e-15);
}

TEST(Runner, ConstantsTable) {
  const auto table = constants_table(
      Config::parse("coeff.kind = power_law\ncoeff.K = 0.5\ncoeff.h = 0.5\ncoeff.c = 0.1\n"
                    "time.T = 8\n"));
  EXPECT_NE(table.find("WD"), std::string::npos);
  EXPECT_NE(table.find("6.153846"), std::string::npos);
  EXPECT_NE(table.find("T0"), std::string::npos);
  const auto super = constants_table(Config::parse("coeff.kind = power_law\ncoeff.K = 2.5\n"));
  EXPECT_NE(super.find("inf"), std::string::npos);
}
