#pragma once

#include "swapdrift/measurement.hpp"

#include <cstdint>
#include <optional>
#include <string_view>

namespace swapdrift {

/// Swap-operator estimate at one separation: v_hat = f+ - f-,
/// delta_v = 2 sqrt(f+ f- / N).
struct OverlapEstimate {
  double v_hat = 0.0;
  double delta_v = 0.0;
  std::int64_t n = 0;
  int separation = 1;
};

/// A derived quantity with its first-order propagated one-sigma error.
struct Estimate {
  double value = 0.0;
  double error = 0.0;
};

struct PurityAndDiffusion {
  Estimate P1;
  Estimate D2;
};

struct PurityAndDrift {
  Estimate P1;
  Estimate D1;
};

enum class DriftClass { stationary, diffusive, systematic, mixed, inconclusive };
std::string_view to_string(DriftClass c);

struct DriftVerdict {
  bool drifting = false;
  /// Absent when V2 - V3 is not significant against its propagated error.
  std::optional<Estimate> alpha_hat;
  DriftClass classification = DriftClass::inconclusive;
  // Comparisons behind the verdict.
  bool detected_1_2 = false;
  bool detected_1_3 = false;
};

/// Which minimum-sample formula to evaluate.
///
/// printed: [(1/gap') (sqrt(1 - V1^2) + sqrt(1 - Vk^2))]^2, the condition that
/// V1 and Vk differ by more than half the sum of their error bars.
/// rederived: the condition that the full intervals V +- dV do not touch;
/// exactly four times the printed value.
enum class NMinVariant { printed, rederived };
std::string_view to_string(NMinVariant v);
NMinVariant parse_nmin_variant(std::string_view text);

struct SampleBudget {
  double n_min = 0.0;
  NMinVariant variant = NMinVariant::printed;
};

OverlapEstimate estimate_overlap(const OutcomeTally& tally);

/// Diffusive model V_k = P1 - k D2 / 2: P1 = 2 V1 - V2, D2 = 2 (V1 - V2).
PurityAndDiffusion recover_p1_d2(const OverlapEstimate& v1, const OverlapEstimate& v2);

/// Systematic model V_k = P1 - k^2 D1 / 2: D1 = 2 (V1 - V2) / 3, P1 = V1 + D1 / 2.
PurityAndDrift recover_p1_d1(const OverlapEstimate& v1, const OverlapEstimate& v2);

/// (V1 - V2) / (V2 - V3), or nullopt when |V2 - V3| does not exceed its
/// propagated error (or is exactly zero).
std::optional<Estimate> try_alpha_estimate(const OverlapEstimate& v1, const OverlapEstimate& v2,
                                           const OverlapEstimate& v3);
/// As try_alpha_estimate but throws UndefinedRatio instead of returning nullopt.
Estimate alpha_estimate(const OverlapEstimate& v1, const OverlapEstimate& v2,
                        const OverlapEstimate& v3);

/// dV1/2 + dVk/2 < V1 - Vk.
bool drift_detected(const OverlapEstimate& v1, const OverlapEstimate& vk);

SampleBudget n_min_diffusive(double P1, double D2, NMinVariant variant);
SampleBudget n_min_systematic(double P1, double D1, NMinVariant variant);

/// Diffusive drift measured at separations 1 and k with the stored copy
/// depolarized: measured overlaps follow measured_overlap_decohered, the
/// inferred overlaps carry error bars amplified by e^{k eps}, and the gap is
/// (k - 1) D2 / 2. With decohere_distance_one the distance-1 pair is also
/// stored for one interval.
SampleBudget n_min_at_distance_k(double P1, double D2, int k, const DecoherenceChannel& ch,
                                 NMinVariant variant, bool decohere_distance_one = true);

/// argmin over k in [2, k_max] of n_min_at_distance_k, ties to the smaller k.
/// Separations whose frequencies leave [0, 1] are skipped; throws
/// InvalidInput if none is admissible.
int optimal_k(double P1, double D2, const DecoherenceChannel& ch, int k_max,
              bool decohere_distance_one = true);

inline constexpr double kDefaultAlphaTol = 0.1;

DriftVerdict classify_drift(const OverlapEstimate& v1, const OverlapEstimate& v2,
                            const OverlapEstimate& v3, double alpha_tol = kDefaultAlphaTol);

}  // namespace swapdrift
