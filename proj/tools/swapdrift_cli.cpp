// swapdrift: command-line front end for the drift simulations, sweeps and checks.

#include "swapdrift/errors.hpp"
#include "swapdrift/harness.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <fstream>
#include <iostream>

namespace {

using namespace swapdrift;
using namespace swapdrift::harness;

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitBadConfig = 2;

std::vector<NMinVariant> parse_variants(const std::string& text) {
  if (text == "both") return {NMinVariant::printed, NMinVariant::rederived};
  return {parse_nmin_variant(text)};
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidInput(fmt::format("cannot open output file '{}'", path));
  out << text;
  if (!out) throw InvalidInput(fmt::format("failed writing '{}'", path));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Swap-measurement drift detection toolkit"};
  app.require_subcommand(1);

  std::string out_path;
  std::string format = "csv";
  std::string variant = "printed";
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--out", out_path, "Output file (default: stdout)");
    sub->add_option("--format", format, "Output format")->check(CLI::IsMember({"csv"}));
  };

  // simulate
  auto* sim = app.add_subcommand("simulate", "Simulate a drifting source and classify its drift");
  std::string config_path;
  std::optional<std::uint64_t> seed_override;
  int threads = 1;
  sim->add_option("--config", config_path, "Scenario JSON file")->required();
  sim->add_option("--seed", seed_override, "Override the config seed");
  sim->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1, 256));
  add_common(sim);

  // nmin-sweep
  auto* nmin = app.add_subcommand("nmin-sweep", "Minimum sample counts versus drift constant");
  NMinSweepSpec nspec;
  nspec.purities = {0.8, 0.9, 1.0};
  std::string kind = "both";
  nmin->add_option("--purities", nspec.purities, "Initial purities P1")->delimiter(',');
  nmin->add_option("--min", nspec.constant_min, "Smallest drift constant");
  nmin->add_option("--max", nspec.constant_max, "Largest drift constant");
  nmin->add_option("--points", nspec.points, "Grid points");
  nmin->add_flag("--log", nspec.log_spacing, "Logarithmic grid");
  nmin->add_option("--kind", kind, "diffusive|systematic|both")
      ->check(CLI::IsMember({"diffusive", "systematic", "both"}));
  nmin->add_option("--variant", variant, "printed|rederived|both")
      ->check(CLI::IsMember({"printed", "rederived", "both"}));
  add_common(nmin);

  // k-sweep
  auto* ks = app.add_subcommand("k-sweep", "Minimum sample count versus separation under decoherence");
  KSweepSpec kspec;
  bool no_decohere_one = false;
  ks->add_option("--P1", kspec.P1, "Initial purity");
  ks->add_option("--D2", kspec.D2, "Diffusion constant");
  ks->add_option("--dimension", kspec.dimension, "Hilbert-space dimension D");
  ks->add_option("--epsilons", kspec.epsilons, "Decoherence parameters")->delimiter(',');
  ks->add_option("--k-min", kspec.k_min, "Smallest separation");
  ks->add_option("--k-max", kspec.k_max, "Largest separation");
  ks->add_flag("--no-decohere-distance-one", no_decohere_one,
               "Treat the distance-1 pair as measured without storage");
  ks->add_option("--variant", variant, "printed|rederived|both")
      ->check(CLI::IsMember({"printed", "rederived", "both"}));
  add_common(ks);

  // hom
  auto* hom = app.add_subcommand("hom", "Beamsplitter coincidence probabilities for random photon pairs");
  int hom_pairs = 50;
  int max_modes = 4;
  std::uint64_t hom_seed = 1;
  hom->add_option("--pairs", hom_pairs, "Number of photon pairs");
  hom->add_option("--max-modes", max_modes, "Largest internal mode count");
  hom->add_option("--seed", hom_seed, "Seed");
  add_common(hom);

  // validate
  auto* val = app.add_subcommand("validate", "Run every oracle check");
  std::uint64_t val_seed = 2024;
  val->add_option("--seed", val_seed, "Seed for randomized checks");
  val->add_option("--out", out_path, "Report file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadConfig;
  }

  try {
    if (*sim) {
      ExperimentConfig cfg = load_experiment_config(config_path);
      if (seed_override) cfg.seed = *seed_override;
      if (out_path.empty()) out_path = cfg.output;
      const SimulationReport report = run_simulate(cfg, threads);
      for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
      emit(out_path, simulate_csv(cfg, report));
    } else if (*nmin) {
      nspec.variants = parse_variants(variant);
      if (kind == "diffusive") nspec.kinds = {SweepKind::diffusive};
      if (kind == "systematic") nspec.kinds = {SweepKind::systematic};
      emit(out_path, nmin_csv(nspec, run_nmin_sweep(nspec)));
    } else if (*ks) {
      kspec.variants = parse_variants(variant);
      kspec.decohere_distance_one = !no_decohere_one;
      emit(out_path, k_sweep_csv(kspec, run_k_sweep(kspec)));
    } else if (*hom) {
      emit(out_path, hom_csv(run_hom(hom_pairs, max_modes, hom_seed), max_modes, hom_seed));
    } else if (*val) {
      const auto results = run_validate(val_seed);
      emit(out_path, validation_report(results));
      for (const auto& r : results) {
        if (!r.passed) return kExitCheckFailed;
      }
    }
  } catch (const InvalidInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  return kExitOk;
}
