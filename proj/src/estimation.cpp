#include "swapdrift/estimation.hpp"

#include "swapdrift/errors.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>

namespace swapdrift {
namespace {

void require_separation(const OverlapEstimate& v, int k, const char* what) {
  if (v.separation != k) {
    throw InvalidInput(fmt::format("{}: expected an estimate at separation {}, got {}", what, k,
                                   v.separation));
  }
}

// sqrt((1 + v)(1 - v)) for an overlap whose outcome frequencies (1 +- v)/2 must be
// probabilities.
double radical(double v, const char* what) {
  if (!std::isfinite(v) || v < -1.0 || v > 1.0) {
    throw InvalidInput(fmt::format("{}: implied outcome frequencies ({}, {}) leave [0, 1]", what,
                                   0.5 * (1.0 + v), 0.5 * (1.0 - v)));
  }
  return std::sqrt((1.0 + v) * (1.0 - v));
}

void require_purity(double P1, const char* what) {
  if (!(P1 > 0.0 && P1 <= 1.0)) throw InvalidInput(fmt::format("{}: P1 must lie in (0, 1]", what));
}

double apply_variant(double printed, NMinVariant variant) {
  return variant == NMinVariant::rederived ? 4.0 * printed : printed;
}

}  // namespace

std::string_view to_string(DriftClass c) {
  switch (c) {
    case DriftClass::stationary:
      return "stationary";
    case DriftClass::diffusive:
      return "diffusive";
    case DriftClass::systematic:
      return "systematic";
    case DriftClass::mixed:
      return "mixed";
    case DriftClass::inconclusive:
      return "inconclusive";
  }
  return "inconclusive";
}

std::string_view to_string(NMinVariant v) {
  return v == NMinVariant::printed ? "printed" : "rederived";
}

NMinVariant parse_nmin_variant(std::string_view text) {
  if (text == "printed") return NMinVariant::printed;
  if (text == "rederived") return NMinVariant::rederived;
  throw InvalidInput(fmt::format("unknown N_min variant '{}'", text));
}

OverlapEstimate estimate_overlap(const OutcomeTally& tally) {
  const std::int64_t n = tally.total();
  if (n <= 0 || tally.n_plus < 0 || tally.n_minus < 0) {
    throw InvalidInput("estimate_overlap: tally must hold at least one outcome");
  }
  const double nn = static_cast<double>(n);
  const double f_plus = static_cast<double>(tally.n_plus) / nn;
  const double f_minus = static_cast<double>(tally.n_minus) / nn;
  OverlapEstimate est;
  est.v_hat = static_cast<double>(tally.n_plus - tally.n_minus) / nn;
  est.delta_v = 2.0 * std::sqrt(f_plus * f_minus / nn);
  est.n = n;
  est.separation = tally.separation;
  return est;
}

PurityAndDiffusion recover_p1_d2(const OverlapEstimate& v1, const OverlapEstimate& v2) {
  require_separation(v1, 1, "recover_p1_d2");
  require_separation(v2, 2, "recover_p1_d2");
  const double s1 = v1.delta_v;
  const double s2 = v2.delta_v;
  PurityAndDiffusion out;
  out.P1 = {2.0 * v1.v_hat - v2.v_hat, std::sqrt(4.0 * s1 * s1 + s2 * s2)};
  out.D2 = {2.0 * (v1.v_hat - v2.v_hat), 2.0 * std::hypot(s1, s2)};
  return out;
}

PurityAndDrift recover_p1_d1(const OverlapEstimate& v1, const OverlapEstimate& v2) {
  require_separation(v1, 1, "recover_p1_d1");
  require_separation(v2, 2, "recover_p1_d1");
  const double s1 = v1.delta_v;
  const double s2 = v2.delta_v;
  PurityAndDrift out;
  const double d1 = 2.0 * (v1.v_hat - v2.v_hat) / 3.0;
  out.D1 = {d1, 2.0 * std::hypot(s1, s2) / 3.0};
  // P1 = (4 V1 - V2) / 3.
  out.P1 = {v1.v_hat + 0.5 * d1, std::sqrt(16.0 * s1 * s1 + s2 * s2) / 3.0};
  return out;
}

std::optional<Estimate> try_alpha_estimate(const OverlapEstimate& v1, const OverlapEstimate& v2,
                                           const OverlapEstimate& v3) {
  require_separation(v1, 1, "alpha_estimate");
  require_separation(v2, 2, "alpha_estimate");
  require_separation(v3, 3, "alpha_estimate");
  const double num = v1.v_hat - v2.v_hat;
  const double den = v2.v_hat - v3.v_hat;
  const double den_err = std::hypot(v2.delta_v, v3.delta_v);
  if (!(std::abs(den) > den_err)) return std::nullopt;
  const double a = num / den;
  const double s1 = v1.delta_v;
  const double s2 = (1.0 + a) * v2.delta_v;
  const double s3 = a * v3.delta_v;
  return Estimate{a, std::sqrt(s1 * s1 + s2 * s2 + s3 * s3) / std::abs(den)};
}

Estimate alpha_estimate(const OverlapEstimate& v1, const OverlapEstimate& v2,
                        const OverlapEstimate& v3) {
  auto a = try_alpha_estimate(v1, v2, v3);
  if (!a) throw UndefinedRatio("alpha_estimate: V2 - V3 is not significant against its error");
  return *a;
}

bool drift_detected(const OverlapEstimate& v1, const OverlapEstimate& vk) {
  return 0.5 * v1.delta_v + 0.5 * vk.delta_v < v1.v_hat - vk.v_hat;
}

SampleBudget n_min_diffusive(double P1, double D2, NMinVariant variant) {
  require_purity(P1, "n_min_diffusive");
  if (!(D2 > 0.0)) throw InvalidInput("n_min_diffusive: D2 must be > 0");
  const double r1 = radical(P1 - D2 / 2.0, "n_min_diffusive");
  const double r2 = radical(P1 - D2, "n_min_diffusive");
  const double root = (r1 + r2) / D2;
  return {apply_variant(root * root, variant), variant};
}

SampleBudget n_min_systematic(double P1, double D1, NMinVariant variant) {
  require_purity(P1, "n_min_systematic");
  if (!(D1 > 0.0)) throw InvalidInput("n_min_systematic: D1 must be > 0");
  const double r1 = radical(P1 - D1 / 2.0, "n_min_systematic");
  const double r2 = radical(P1 - 2.0 * D1, "n_min_systematic");
  const double root = (r1 + r2) / (3.0 * D1);
  return {apply_variant(root * root, variant), variant};
}

SampleBudget n_min_at_distance_k(double P1, double D2, int k, const DecoherenceChannel& ch,
                                 NMinVariant variant, bool decohere_distance_one) {
  require_purity(P1, "n_min_at_distance_k");
  ch.validate();
  if (!(D2 > 0.0)) throw InvalidInput("n_min_at_distance_k: D2 must be > 0");
  if (k < 2) throw InvalidInput(fmt::format("n_min_at_distance_k: k must be >= 2, got {}", k));

  const double dim = static_cast<double>(ch.dimension);
  auto measured = [&](int separation, int stored) {
    const double keep = std::exp(-static_cast<double>(stored) * ch.epsilon);
    return keep * (P1 - static_cast<double>(separation) * D2 / 2.0) + (1.0 - keep) / dim;
  };
  const int stored_one = decohere_distance_one ? 1 : 0;
  const double v1_measured = measured(1, stored_one);
  const double vk_measured = measured(k, k);
  const double amp1 = std::exp(static_cast<double>(stored_one) * ch.epsilon);
  const double ampk = std::exp(static_cast<double>(k) * ch.epsilon);

  const double spread = amp1 * radical(v1_measured, "n_min_at_distance_k") +
                        ampk * radical(vk_measured, "n_min_at_distance_k");
  const double gap = static_cast<double>(k - 1) * D2 / 2.0;
  const double root = spread / (2.0 * gap);
  return {apply_variant(root * root, variant), variant};
}

int optimal_k(double P1, double D2, const DecoherenceChannel& ch, int k_max,
              bool decohere_distance_one) {
  if (k_max < 2) throw InvalidInput(fmt::format("optimal_k: k_max must be >= 2, got {}", k_max));
  int best_k = -1;
  double best = std::numeric_limits<double>::infinity();
  for (int k = 2; k <= k_max; ++k) {
    double n = 0.0;
    try {
      n = n_min_at_distance_k(P1, D2, k, ch, NMinVariant::printed, decohere_distance_one).n_min;
    } catch (const InvalidInput&) {
      continue;
    }
    if (n < best) {
      best = n;
      best_k = k;
    }
  }
  if (best_k < 0) throw InvalidInput("optimal_k: no admissible separation in [2, k_max]");
  return best_k;
}

DriftVerdict classify_drift(const OverlapEstimate& v1, const OverlapEstimate& v2,
                            const OverlapEstimate& v3, double alpha_tol) {
  if (!(alpha_tol > 0.0)) throw InvalidInput("classify_drift: alpha_tol must be > 0");
  require_separation(v1, 1, "classify_drift");
  require_separation(v2, 2, "classify_drift");
  require_separation(v3, 3, "classify_drift");

  DriftVerdict verdict;
  verdict.detected_1_2 = drift_detected(v1, v2);
  verdict.detected_1_3 = drift_detected(v1, v3);
  verdict.alpha_hat = try_alpha_estimate(v1, v2, v3);
  if (!verdict.detected_1_2 && !verdict.detected_1_3) {
    verdict.classification = DriftClass::stationary;
    return verdict;
  }
  verdict.drifting = true;
  if (!verdict.alpha_hat) {
    verdict.classification = DriftClass::inconclusive;
    return verdict;
  }
  const double a = verdict.alpha_hat->value;
  constexpr double kSystematicAlpha = 3.0 / 5.0;
  if (std::abs(a - 1.0) <= alpha_tol) {
    verdict.classification = DriftClass::diffusive;
  } else if (std::abs(a - kSystematicAlpha) <= alpha_tol) {
    verdict.classification = DriftClass::systematic;
  } else if (a > kSystematicAlpha + alpha_tol && a < 1.0 - alpha_tol) {
    verdict.classification = DriftClass::mixed;
  } else {
    verdict.classification = DriftClass::inconclusive;
  }
  return verdict;
}

}  // namespace swapdrift
