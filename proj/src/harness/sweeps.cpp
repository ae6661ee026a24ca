#include "swapdrift/harness.hpp"

#include "swapdrift/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace swapdrift::harness {
namespace {

std::string_view to_string(SweepKind kind) {
  return kind == SweepKind::diffusive ? "diffusive" : "systematic";
}

std::vector<double> constant_grid(const NMinSweepSpec& spec) {
  if (!(spec.constant_min > 0.0) || !(spec.constant_max >= spec.constant_min) ||
      !std::isfinite(spec.constant_max)) {
    throw InvalidInput(fmt::format("nmin sweep: need 0 < constant_min <= constant_max, got [{}, {}]",
                                   spec.constant_min, spec.constant_max));
  }
  if (spec.points < 1 || (spec.points == 1 && spec.constant_min != spec.constant_max)) {
    throw InvalidInput(fmt::format("nmin sweep: invalid point count {}", spec.points));
  }
  std::vector<double> grid;
  for (int i = 0; i < spec.points; ++i) {
    const double t = spec.points == 1 ? 0.0 : static_cast<double>(i) / (spec.points - 1);
    if (spec.log_spacing) {
      grid.push_back(spec.constant_min * std::pow(spec.constant_max / spec.constant_min, t));
    } else {
      grid.push_back(spec.constant_min + t * (spec.constant_max - spec.constant_min));
    }
  }
  grid.back() = spec.constant_max;
  return grid;
}

std::string header_line(std::string_view name, const nlohmann::json& params) {
  return fmt::format("# swapdrift {}\n# config = {}\n", name, params.dump());
}

}  // namespace

std::vector<NMinRow> run_nmin_sweep(const NMinSweepSpec& spec) {
  const auto grid = constant_grid(spec);
  if (spec.purities.empty() || spec.kinds.empty() || spec.variants.empty()) {
    throw InvalidInput("nmin sweep: purities, kinds and variants must be non-empty");
  }
  std::vector<NMinRow> rows;
  for (auto kind : spec.kinds) {
    for (auto variant : spec.variants) {
      for (double p1 : spec.purities) {
        for (double c : grid) {
          const SampleBudget b = kind == SweepKind::diffusive ? n_min_diffusive(p1, c, variant)
                                                              : n_min_systematic(p1, c, variant);
          rows.push_back({kind, variant, p1, c, b.n_min});
        }
      }
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const NMinRow& a, const NMinRow& b) {
    if (a.kind != b.kind) return a.kind < b.kind;
    if (a.variant != b.variant) return a.variant < b.variant;
    if (a.P1 != b.P1) return a.P1 < b.P1;
    return a.drift_constant < b.drift_constant;
  });
  return rows;
}

std::string nmin_csv(const NMinSweepSpec& spec, const std::vector<NMinRow>& rows) {
  nlohmann::json params;
  params["purities"] = spec.purities;
  params["constant_min"] = spec.constant_min;
  params["constant_max"] = spec.constant_max;
  params["points"] = spec.points;
  params["log_spacing"] = spec.log_spacing;
  std::string out = header_line("nmin-sweep", params);
  out += "kind,variant,P1,drift_constant,N_min\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{}\n", to_string(r.kind), to_string(r.variant), r.P1,
                       r.drift_constant, r.n_min);
  }
  return out;
}

KSweepResult run_k_sweep(const KSweepSpec& spec) {
  if (spec.k_min < 2 || spec.k_max > 2000 || spec.k_min > spec.k_max) {
    throw InvalidInput(fmt::format("k sweep: range [{}, {}] must lie within [2, 2000]", spec.k_min,
                                   spec.k_max));
  }
  if (spec.epsilons.empty() || spec.variants.empty()) {
    throw InvalidInput("k sweep: epsilons and variants must be non-empty");
  }
  std::vector<double> epsilons = spec.epsilons;
  std::sort(epsilons.begin(), epsilons.end());
  std::vector<NMinVariant> variants = spec.variants;
  std::sort(variants.begin(), variants.end());
  variants.erase(std::unique(variants.begin(), variants.end()), variants.end());

  KSweepResult result;
  for (auto variant : variants) {
    for (double eps : epsilons) {
      DecoherenceChannel ch{eps, spec.dimension};
      CurveMinimum best{eps, variant, spec.k_min, std::numeric_limits<double>::infinity(), false};
      for (int k = spec.k_min; k <= spec.k_max; ++k) {
        const double n =
            n_min_at_distance_k(spec.P1, spec.D2, k, ch, variant, spec.decohere_distance_one).n_min;
        result.rows.push_back({eps, k, n, variant});
        if (n < best.n_min) {
          best.k = k;
          best.n_min = n;
        }
      }
      best.interior = best.k > spec.k_min && best.k < spec.k_max;
      result.minima.push_back(best);
    }
  }
  return result;
}

std::string k_sweep_csv(const KSweepSpec& spec, const KSweepResult& result) {
  nlohmann::json params;
  params["P1"] = spec.P1;
  params["D2"] = spec.D2;
  params["dimension"] = spec.dimension;
  params["epsilons"] = spec.epsilons;
  params["k_min"] = spec.k_min;
  params["k_max"] = spec.k_max;
  params["decohere_distance_one"] = spec.decohere_distance_one;
  std::string out = header_line("k-sweep", params);
  out += "epsilon,k,N_min,variant\n";
  for (const auto& r : result.rows) {
    out += fmt::format("{},{},{},{}\n", r.epsilon, r.k, r.n_min, to_string(r.variant));
  }
  for (const auto& m : result.minima) {
    out += fmt::format("# minimum epsilon={} variant={} k={} N_min={} interior={}\n", m.epsilon,
                       to_string(m.variant), m.k, m.n_min, m.interior);
  }
  return out;
}

DensityMatrix random_density(int dim, std::uint64_t seed, std::uint64_t index) {
  if (dim < 1) throw InvalidInput(fmt::format("random_density: dimension must be >= 1, got {}", dim));
  Rng rng(seed, Stream::state_sample, index);
  const int rank = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(dim));
  ComplexMatrix g(dim, rank);
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < rank; ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      g(i, j) = Complex(re, im);
    }
  }
  ComplexMatrix rho = g * g.adjoint();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  rho /= rho.trace().real();
  return DensityMatrix(rho);
}

std::vector<HomRow> run_hom(int pairs, int max_modes, std::uint64_t seed) {
  if (pairs < 1) throw InvalidInput("hom: pairs must be >= 1");
  if (max_modes < 1 || max_modes > kMaxBruteforceModes) {
    throw InvalidInput(
        fmt::format("hom: max_modes must lie in [1, {}], got {}", kMaxBruteforceModes, max_modes));
  }
  std::vector<HomRow> rows;
  for (int i = 0; i < pairs; ++i) {
    const int m = 1 + i % max_modes;
    const auto idx = static_cast<std::uint64_t>(i);
    const PhotonModeState a(random_density(m, seed, 2 * idx));
    const PhotonModeState b(random_density(m, seed, 2 * idx + 1));
    rows.push_back({i, m, modal_overlap(a, b), coincidence_probability_direct(a, b),
                    coincidence_probability_bruteforce(a, b)});
  }
  return rows;
}

std::string hom_csv(const std::vector<HomRow>& rows, int max_modes, std::uint64_t seed) {
  nlohmann::json params;
  params["pairs"] = rows.size();
  params["max_modes"] = max_modes;
  params["seed"] = seed;
  std::string out = header_line("hom", params);
  out += "pair,modes,overlap,P_cc_direct,P_cc_bruteforce\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{},{}\n", r.pair, r.modes, r.overlap, r.p_cc_direct,
                       r.p_cc_bruteforce);
  }
  return out;
}

}  // namespace swapdrift::harness
