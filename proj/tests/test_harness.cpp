#include "swapdrift/errors.hpp"
#include "swapdrift/harness.hpp"

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

using namespace swapdrift;
using namespace swapdrift::harness;
using nlohmann::json;

namespace {

json base_config() {
  return json{{"scenario", "t"},
              {"initial_bloch", {0.0, 0.0, 1.0}},
              {"drift_kind", "diffusive"},
              {"delta", 0.05},
              {"pairs", 2000},
              {"seed", 5}};
}

std::string config_error(const json& doc) {
  try {
    parse_experiment_config(doc);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

std::filesystem::path temp_file(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / name;
  std::ofstream(path) << text;
  return path;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(SWAPDRIFT_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST(Config, ParsesDefaults) {
  const auto cfg = parse_experiment_config(base_config());
  EXPECT_EQ(cfg.separations, (std::vector<int>{1, 2, 3}));
  EXPECT_EQ(cfg.pairs, (std::vector<std::int64_t>{2000, 2000, 2000}));
  EXPECT_EQ(cfg.drift.kind, DriftKind::diffusive);
  EXPECT_FALSE(cfg.decoherence.has_value());
  EXPECT_DOUBLE_EQ(cfg.alpha_tol, kDefaultAlphaTol);
}

TEST(Config, ErrorsNameTheField) {
  auto doc = base_config();
  doc.erase("seed");
  EXPECT_NE(config_error(doc).find("'seed'"), std::string::npos);

  doc = base_config();
  doc["delat"] = 0.1;
  EXPECT_NE(config_error(doc).find("'delat'"), std::string::npos);

  doc = base_config();
  doc["initial_bloch"] = {1.0, 1.0, 0.0};
  EXPECT_NE(config_error(doc).find("'initial_bloch'"), std::string::npos);

  doc = base_config();
  doc["pairs"] = {10, 20};
  EXPECT_NE(config_error(doc).find("'pairs'"), std::string::npos);

  doc = base_config();
  doc["delta"] = 0.5;
  EXPECT_NE(config_error(doc).find("delta"), std::string::npos);

  doc = base_config();
  doc["epsilon"] = -1.0;
  EXPECT_NE(config_error(doc).find("'epsilon'"), std::string::npos);

  doc = base_config();
  doc["separations"] = {1, 1};
  EXPECT_NE(config_error(doc).find("'separations'"), std::string::npos);
}

TEST(Config, MatrixStateAndDecoherence) {
  auto doc = base_config();
  doc.erase("initial_bloch");
  doc["initial_matrix"] = {{"re", {{0.75, 0.0}, {0.0, 0.25}}}, {"im", {{0.0, 0.0}, {0.0, 0.0}}}};
  doc["epsilon"] = 0.01;
  const auto cfg = parse_experiment_config(doc);
  ASSERT_TRUE(cfg.decoherence.has_value());
  EXPECT_EQ(cfg.decoherence->dimension, 2);
  EXPECT_DOUBLE_EQ(purity(cfg.initial_state()), 0.625);
  // The canonical form parses back to itself.
  EXPECT_EQ(parse_experiment_config(cfg.to_json()).to_json(), cfg.to_json());
}

TEST(Config, SyntaxErrorReportsPosition) {
  const auto path = temp_file("swapdrift_bad_syntax.json", "{\n  \"seed\": 1,\n  \"pairs\": ,\n}\n");
  try {
    load_experiment_config(path.string());
    FAIL() << "expected ConfigError";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find(":3:"), std::string::npos) << e.what();
  }
}

TEST(Simulate, StationaryScenario) {
  auto doc = base_config();
  doc["delta"] = 0.0;
  const auto report = run_simulate(parse_experiment_config(doc));
  ASSERT_TRUE(report.verdict.has_value());
  EXPECT_EQ(report.verdict->classification, DriftClass::stationary);
  EXPECT_EQ(report.estimates[0].v_hat, 1.0);
}

TEST(Simulate, StationaryMixedCalibration) {
  // Mixed stationary state at N = 10^3: stationary verdict in at least half the seeds.
  auto doc = base_config();
  doc["delta"] = 0.0;
  doc["initial_bloch"] = {0.0, 0.0, 0.6};
  doc["pairs"] = 1000;
  int stationary = 0;
  for (int seed = 0; seed < 100; ++seed) {
    doc["seed"] = seed;
    const auto report = run_simulate(parse_experiment_config(doc));
    if (report.verdict->classification == DriftClass::stationary) ++stationary;
  }
  RecordProperty("stationary_rate", stationary);
  EXPECT_GE(stationary, 50);
}

TEST(Simulate, ThreadCountDoesNotChangeOutput) {
  const auto cfg = parse_experiment_config(base_config());
  const auto one = simulate_csv(cfg, run_simulate(cfg, 1));
  const auto four = simulate_csv(cfg, run_simulate(cfg, 4));
  EXPECT_EQ(one, four);
  EXPECT_NE(one.find("separation,N,n_plus,n_minus,V_hat,delta_V\n"), std::string::npos);
  EXPECT_EQ(one.find('\r'), std::string::npos);
  EXPECT_EQ(one.rfind("# swapdrift simulate\n# config = {", 0), 0u);
}

TEST(Simulate, DecoherenceCorrectedEstimates) {
  auto doc = base_config();
  doc["delta"] = 0.0;
  doc["epsilon"] = 0.2;
  doc["pairs"] = 100000;
  const auto report = run_simulate(parse_experiment_config(doc));
  for (const auto& e : report.estimates) {
    EXPECT_LE(std::abs(e.v_hat - 1.0), 3.0 * e.delta_v + 1e-12) << e.separation;
  }
}

TEST(NMinSweep, ShapeAndOrder) {
  NMinSweepSpec spec;
  spec.purities = {0.8, 0.9, 1.0};
  spec.points = 20;
  const auto rows = run_nmin_sweep(spec);
  ASSERT_EQ(rows.size(), 2u * 2u * 3u * 20u);
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto& a = rows[i - 1];
    const auto& b = rows[i];
    if (a.kind == b.kind && a.variant == b.variant && a.P1 == b.P1) {
      EXPECT_LT(a.drift_constant, b.drift_constant);
      EXPECT_GT(a.n_min, b.n_min);
    }
  }
  const auto csv = nmin_csv(spec, rows);
  EXPECT_NE(csv.find("kind,variant,P1,drift_constant,N_min\n"), std::string::npos);
  spec.constant_min = 0.0;
  EXPECT_THROW(run_nmin_sweep(spec), InvalidInput);
}

TEST(NMinSweep, SystematicBelowDiffusive) {
  NMinSweepSpec spec;
  spec.purities = {1.0};
  spec.constant_min = 0.01;
  spec.constant_max = 0.01;
  spec.points = 1;
  spec.variants = {NMinVariant::printed};
  const auto rows = run_nmin_sweep(spec);
  ASSERT_EQ(rows.size(), 2u);
  EXPECT_EQ(rows[0].kind, SweepKind::diffusive);
  EXPECT_NEAR(rows[0].n_min, 580.531830500123, 1e-9);
  EXPECT_LT(rows[1].n_min, rows[0].n_min);
}

TEST(KSweep, MinimaAndRange) {
  KSweepSpec spec;
  const auto result = run_k_sweep(spec);
  ASSERT_EQ(result.minima.size(), 3u);
  EXPECT_FALSE(result.minima[0].interior);
  EXPECT_EQ(result.minima[0].k, 200);
  EXPECT_EQ(result.minima[1].k, 20);
  EXPECT_EQ(result.minima[2].k, 11);
  EXPECT_TRUE(result.minima[2].interior);
  spec.k_max = 2001;
  EXPECT_THROW(run_k_sweep(spec), InvalidInput);
  spec.k_max = 200;
  spec.k_min = 1;
  EXPECT_THROW(run_k_sweep(spec), InvalidInput);
}

TEST(Validate, AllChecksPass) {
  const auto results = run_validate();
  for (const auto& r : results) EXPECT_TRUE(r.passed) << r.name << ": " << r.detail;
  const auto report = validation_report(results);
  EXPECT_NE(report.find("status=pass\n"), std::string::npos);
}

TEST(Validate, SignErrorInD1IsCaught) {
  ValidationHooks hooks;
  hooks.drift_constant_d1 = [](const Vec3& axis, double delta, const DensityMatrix& rho) {
    return -drift_constant_d1(axis, delta, rho);
  };
  const auto results = run_validate(2024, hooks);
  bool named = false;
  for (const auto& r : results) {
    if (r.name == "d1-vs-simulation") {
      named = true;
      EXPECT_FALSE(r.passed);
    }
  }
  EXPECT_TRUE(named);
  EXPECT_NE(validation_report(results).find("check=d1-vs-simulation status=fail"), std::string::npos);
}

TEST(Validate, BrokenHomFormulaIsCaught) {
  ValidationHooks hooks;
  hooks.coincidence_direct = [](const PhotonModeState& a, const PhotonModeState& b) {
    return 0.5 * (1.0 - 2.0 * modal_overlap(a, b));
  };
  for (const auto& r : run_validate(2024, hooks)) {
    if (r.name == "hom-direct-vs-bruteforce") {
      EXPECT_FALSE(r.passed);
    }
  }
}

TEST(Hom, RowsAgree) {
  const auto rows = run_hom(50, 4, 9);
  ASSERT_EQ(rows.size(), 50u);
  for (const auto& r : rows) {
    EXPECT_NEAR(r.p_cc_direct, r.p_cc_bruteforce, 1e-12);
    EXPECT_NEAR(2 * r.p_cc_direct + r.overlap, 1.0, 1e-12);
  }
  EXPECT_THROW(run_hom(5, 7, 1), InvalidInput);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli("validate"), 0);
  EXPECT_EQ(run_cli("nmin-sweep --points 4"), 0);
  EXPECT_EQ(run_cli("k-sweep --k-max 5000"), 2);
  EXPECT_EQ(run_cli("simulate --config /nonexistent.json"), 2);
  const auto bad = temp_file("swapdrift_bad_key.json", R"({"initial_bloch":[0,0,1],"pairs":10,"seed":1,"x":1})");
  EXPECT_EQ(run_cli("simulate --config " + bad.string()), 2);
  EXPECT_EQ(run_cli("no-such-command"), 2);
}
