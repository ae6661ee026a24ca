#pragma once

#include "swapdrift/drift.hpp"
#include "swapdrift/errors.hpp"
#include "swapdrift/estimation.hpp"
#include "swapdrift/hom.hpp"
#include "swapdrift/measurement.hpp"

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace swapdrift::harness {

/// Configuration problem; the message names the offending field.
class ConfigError : public InvalidInput {
 public:
  using InvalidInput::InvalidInput;
};

// ---------------------------------------------------------------------------
// simulate

struct ExperimentConfig {
  std::string scenario = "unnamed";
  /// Exactly one of initial_bloch / initial_matrix is set after parsing.
  std::optional<Vec3> initial_bloch;
  std::optional<ComplexMatrix> initial_matrix;
  DriftProcess drift;
  /// Depolarization of the stored copy; absent means none.
  std::optional<DecoherenceChannel> decoherence;
  std::vector<int> separations{1, 2, 3};
  /// Pairs measured at each separation (same length as separations).
  std::vector<std::int64_t> pairs;
  std::uint64_t seed = 0;
  double alpha_tol = kDefaultAlphaTol;
  std::string output;

  DensityMatrix initial_state() const;
  /// Canonical JSON form, echoed into output headers.
  nlohmann::json to_json() const;
};

/// Parses and validates a scenario document. Throws ConfigError.
ExperimentConfig parse_experiment_config(const nlohmann::json& doc);
/// Reads a JSON file; syntax errors report line and column.
ExperimentConfig load_experiment_config(const std::string& path);

struct SimulationReport {
  std::vector<OutcomeTally> tallies;
  std::vector<OverlapEstimate> estimates;
  std::optional<PurityAndDiffusion> diffusive_fit;
  std::optional<PurityAndDrift> systematic_fit;
  std::optional<DriftVerdict> verdict;
  std::vector<std::string> warnings;
};

/// Measures every configured separation on its own chain keyed by
/// (seed, Stream::separation, k). `threads` only changes scheduling.
SimulationReport run_simulate(const ExperimentConfig& config, int threads = 1);

/// CSV with header `separation,N,n_plus,n_minus,V_hat,delta_V`, preceded by the
/// config as '#' comments and followed by '#' result lines.
std::string simulate_csv(const ExperimentConfig& config, const SimulationReport& report);

// ---------------------------------------------------------------------------
// sweeps

enum class SweepKind { diffusive, systematic };

struct NMinSweepSpec {
  std::vector<double> purities{1.0};
  double constant_min = 0.005;
  double constant_max = 0.1;
  int points = 20;
  bool log_spacing = false;
  std::vector<SweepKind> kinds{SweepKind::diffusive, SweepKind::systematic};
  std::vector<NMinVariant> variants{NMinVariant::printed, NMinVariant::rederived};
};

struct NMinRow {
  SweepKind kind = SweepKind::diffusive;
  NMinVariant variant = NMinVariant::printed;
  double P1 = 1.0;
  double drift_constant = 0.0;
  double n_min = 0.0;
};

/// Rows sorted by (kind, variant, P1, drift_constant).
std::vector<NMinRow> run_nmin_sweep(const NMinSweepSpec& spec);
std::string nmin_csv(const NMinSweepSpec& spec, const std::vector<NMinRow>& rows);

struct KSweepSpec {
  double P1 = 1.0;
  double D2 = 0.01;
  int dimension = 2;
  std::vector<double> epsilons{0.0, 0.05, 0.1};
  int k_min = 2;
  int k_max = 200;
  std::vector<NMinVariant> variants{NMinVariant::printed};
  bool decohere_distance_one = true;
};

struct KRow {
  double epsilon = 0.0;
  int k = 2;
  double n_min = 0.0;
  NMinVariant variant = NMinVariant::printed;
};

struct CurveMinimum {
  double epsilon = 0.0;
  NMinVariant variant = NMinVariant::printed;
  int k = 2;
  double n_min = 0.0;
  /// True when the minimum is strictly inside (k_min, k_max).
  bool interior = false;
};

struct KSweepResult {
  std::vector<KRow> rows;  ///< sorted by (variant, epsilon, k)
  std::vector<CurveMinimum> minima;
};

/// Throws InvalidInput when the k range leaves [2, 2000] or a point has
/// outcome frequencies outside [0, 1].
KSweepResult run_k_sweep(const KSweepSpec& spec);
std::string k_sweep_csv(const KSweepSpec& spec, const KSweepResult& result);

// ---------------------------------------------------------------------------
// validate

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Implementations under test; tests substitute deliberately broken ones.
struct ValidationHooks {
  std::function<double(const Vec3&, double, const DensityMatrix&)> drift_constant_d1 =
      swapdrift::drift_constant_d1;
  std::function<double(double, double, const DensityMatrix&)> drift_constant_d2 =
      swapdrift::drift_constant_d2;
  std::function<double(const PhotonModeState&, const PhotonModeState&)> coincidence_direct =
      swapdrift::coincidence_probability_direct;
};

/// Runs every oracle pair.
std::vector<CheckResult> run_validate(std::uint64_t seed = 2024, const ValidationHooks& hooks = {});
/// One `check=<name> status=pass|fail detail="..."` line per check plus a summary line.
std::string validation_report(const std::vector<CheckResult>& results);

// ---------------------------------------------------------------------------
// hom

struct HomRow {
  int pair = 0;
  int modes = 1;
  double overlap = 0.0;
  double p_cc_direct = 0.0;
  double p_cc_bruteforce = 0.0;
};

/// Random mode-matrix pairs (mixed states of random rank) for M in [1, max_modes].
std::vector<HomRow> run_hom(int pairs, int max_modes, std::uint64_t seed);
std::string hom_csv(const std::vector<HomRow>& rows, int max_modes, std::uint64_t seed);

/// Random density matrix of the given dimension drawn from the substream
/// (seed, Stream::state_sample, index): a Ginibre matrix G of random rank,
/// rho = G G^dagger / Tr(G G^dagger).
DensityMatrix random_density(int dim, std::uint64_t seed, std::uint64_t index);

}  // namespace swapdrift::harness
