#pragma once

#include "swapdrift/linalg.hpp"
#include "swapdrift/rng.hpp"

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace swapdrift {

enum class DriftKind { systematic, diffusive, mixed };

std::string_view to_string(DriftKind kind);
/// Parses "systematic", "diffusive" or "mixed"; throws InvalidInput otherwise.
DriftKind parse_drift_kind(std::string_view text);

/// Markovian qubit drift rho -> U_r rho U_r^dagger with U_r = exp(i delta r.sigma),
/// r = p * systematic_axis + (1 - p) * r_diff, r_diff ~ Normal(0, diffusion_sigma^2 I_3).
///
/// The kind fixes the effective systematic weight: systematic uses p = 1,
/// diffusive uses p = 0, mixed uses mix_weight.
struct DriftProcess {
  DriftKind kind = DriftKind::diffusive;
  double delta = 0.01;
  Vec3 systematic_axis = Vec3::UnitZ();
  double diffusion_sigma = 1.0;
  double mix_weight = 0.0;

  /// Largest accepted delta; the scaling laws are leading order in delta.
  static constexpr double kMaxDelta = 0.3;
  /// Above this delta the closed forms lose accuracy and a warning is issued.
  static constexpr double kWarnDelta = 0.1;

  /// Throws InvalidInput when a parameter is out of range.
  void validate() const;
  /// Non-fatal diagnostics (currently: delta above kWarnDelta).
  std::vector<std::string> warnings() const;
  /// Weight p of the systematic part implied by kind and mix_weight.
  double systematic_weight() const;
};

/// States of N successive copies, states[0] being the first emitted.
struct SourceSequence {
  std::vector<DensityMatrix> states;
  std::uint64_t seed = 0;
};

/// Drift constant D1 (per step^2) and diffusion constant D2 (per step).
struct TheoryConstants {
  double D1 = 0.0;
  double D2 = 0.0;
};

/// One Markov step. Qubit states only.
DensityMatrix step(const DensityMatrix& rho, const DriftProcess& proc, Rng& rng);

/// states[0] = rho0, states[n+1] = step(states[n]) with step n drawing from
/// the substream (seed, Stream::drift_step, n).
SourceSequence generate_sequence(const DensityMatrix& rho0, const DriftProcess& proc,
                                 std::int64_t length, std::uint64_t seed);

/// Streams the same chain as generate_sequence without storing it. The
/// visitor is called as visitor(index, state) for index = 0 .. length-1.
template <typename Visitor>
void walk_sequence(const DensityMatrix& rho0, const DriftProcess& proc, std::int64_t length,
                   std::uint64_t seed, Visitor&& visitor);

/// -delta^2 Tr([a.sigma, rho]^2) for a unit axis a; equals
/// delta^2 ||[a.sigma, rho]||_F^2 and 2 delta^2 |a x b|^2 for Bloch vector b.
double drift_constant_d1(const Vec3& axis, double delta, const DensityMatrix& rho);

/// Gaussian average of -delta^2 Tr([r.sigma, rho]^2) with r ~ Normal(0, sigma^2 I_3):
/// delta^2 sigma^2 sum_i ||[sigma_i, rho]||_F^2 = 4 delta^2 sigma^2 |b|^2.
double drift_constant_d2(double diffusion_sigma, double delta, const DensityMatrix& rho);

/// Leading-order mean of Tr[Delta^2] at separation k:
/// k^2 p^2 D1 + k (1 - p)^2 D2.
double theory_delta_sq(int k, const TheoryConstants& consts, double p);

/// Both closed forms of the ratio
/// (E2 - E1) / (E3 - E2), E_k the mean Tr[Delta^2] at separation k.
struct AlphaTheory {
  /// [-p^2 + (D1/D2)(-3p^2 + 6p - 3)] / [-p^2 + (D1/D2)(-5p^2 + 10p - 5)] as
  /// published; for D2 = 0 the form multiplied through by D2 is used.
  /// In this expression p weights the diffusive part.
  double printed = 0.0;
  /// [3 p^2 D1 + (1-p)^2 D2] / [5 p^2 D1 + (1-p)^2 D2] with p weighting the
  /// systematic part; equals printed evaluated at 1 - p.
  double derived = 0.0;
};
/// A form whose denominator vanishes is NaN; throws UndefinedRatio when both do.
AlphaTheory alpha_theory(double p, double D1, double D2);

// ---------------------------------------------------------------------------

namespace detail {
[[noreturn]] void throw_invalid_length(std::int64_t length);
}  // namespace detail

template <typename Visitor>
void walk_sequence(const DensityMatrix& rho0, const DriftProcess& proc, std::int64_t length,
                   std::uint64_t seed, Visitor&& visitor) {
  if (length < 1) detail::throw_invalid_length(length);
  proc.validate();
  DensityMatrix current = rho0;
  for (std::int64_t n = 0; n < length; ++n) {
    visitor(n, static_cast<const DensityMatrix&>(current));
    if (n + 1 < length) {
      Rng rng(seed, Stream::drift_step, static_cast<std::uint64_t>(n));
      current = step(current, proc, rng);
    }
  }
}

}  // namespace swapdrift
