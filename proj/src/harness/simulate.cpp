#include "swapdrift/harness.hpp"

#include "swapdrift/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

namespace swapdrift::harness {
namespace {

const OverlapEstimate* find_separation(const std::vector<OverlapEstimate>& est, int k) {
  for (const auto& e : est) {
    if (e.separation == k) return &e;
  }
  return nullptr;
}

// Runs job(i) for i in [0, count) on up to `threads` workers. Results are
// written by index, so the schedule never shows in the output.
template <typename Job>
void parallel_for(std::size_t count, int threads, Job&& job) {
  const auto workers = static_cast<std::size_t>(std::clamp(threads, 1, 256));
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

SimulationReport run_simulate(const ExperimentConfig& config, int threads) {
  if (config.pairs.size() != config.separations.size()) {
    throw ConfigError("config field 'pairs': expected one entry per separation");
  }
  const DensityMatrix rho0 = config.initial_state();
  config.drift.validate();

  SimulationReport report;
  report.warnings = config.drift.warnings();
  const std::size_t count = config.separations.size();
  report.tallies.resize(count);
  parallel_for(count, threads, [&](std::size_t i) {
    const int k = config.separations[i];
    const std::uint64_t chain_seed =
        Rng::derive(config.seed, Stream::separation, static_cast<std::uint64_t>(k));
    report.tallies[i] =
        measure_source_pairs(rho0, config.drift, k, config.pairs[i], config.decoherence, chain_seed);
  });

  for (const auto& tally : report.tallies) {
    OverlapEstimate est = estimate_overlap(tally);
    if (config.decoherence) {
      const InferredOverlap inferred = infer_overlap(est.v_hat, tally.separation, *config.decoherence);
      est.v_hat = inferred.overlap;
      est.delta_v *= inferred.error_amplification;
    }
    report.estimates.push_back(est);
  }

  const auto* v1 = find_separation(report.estimates, 1);
  const auto* v2 = find_separation(report.estimates, 2);
  const auto* v3 = find_separation(report.estimates, 3);
  if (v1 && v2) {
    report.diffusive_fit = recover_p1_d2(*v1, *v2);
    report.systematic_fit = recover_p1_d1(*v1, *v2);
  }
  if (v1 && v2 && v3) report.verdict = classify_drift(*v1, *v2, *v3, config.alpha_tol);
  return report;
}

std::string simulate_csv(const ExperimentConfig& config, const SimulationReport& report) {
  std::string out;
  out += "# swapdrift simulate\n";
  out += fmt::format("# config = {}\n", config.to_json().dump());
  for (const auto& w : report.warnings) out += fmt::format("# warning: {}\n", w);
  if (config.decoherence) out += "# V_hat and delta_V are decoherence-corrected overlaps\n";
  out += "separation,N,n_plus,n_minus,V_hat,delta_V\n";
  for (std::size_t i = 0; i < report.tallies.size(); ++i) {
    const auto& t = report.tallies[i];
    const auto& e = report.estimates[i];
    out += fmt::format("{},{},{},{},{},{}\n", t.separation, t.total(), t.n_plus, t.n_minus, e.v_hat,
                       e.delta_v);
  }
  if (report.diffusive_fit) {
    const auto& f = *report.diffusive_fit;
    out += fmt::format("# diffusive_fit P1={} +- {} D2={} +- {}\n", f.P1.value, f.P1.error,
                       f.D2.value, f.D2.error);
  }
  if (report.systematic_fit) {
    const auto& f = *report.systematic_fit;
    out += fmt::format("# systematic_fit P1={} +- {} D1={} +- {}\n", f.P1.value, f.P1.error,
                       f.D1.value, f.D1.error);
  }
  if (report.verdict) {
    const auto& v = *report.verdict;
    out += fmt::format("# drift_1_2={} drift_1_3={}\n", v.detected_1_2, v.detected_1_3);
    if (v.alpha_hat) {
      out += fmt::format("# alpha={} +- {}\n", v.alpha_hat->value, v.alpha_hat->error);
    } else {
      out += "# alpha=undefined\n";
    }
    out += fmt::format("# verdict={}\n", to_string(v.classification));
  }
  return out;
}

}  // namespace swapdrift::harness
