#include "swapdrift/drift.hpp"

#include "swapdrift/errors.hpp"

#include <fmt/format.h>

#include <cmath>
#include <limits>

namespace swapdrift {
namespace {

constexpr double kAxisNormTol = 1e-9;

void require_qubit(const DensityMatrix& rho, const char* what) {
  if (rho.dim() != 2) {
    throw InvalidInput(fmt::format("{}: qubit state required, got dimension {}", what, rho.dim()));
  }
}

// -Tr(C^2) for C = [A, rho] with A Hermitian; C is anti-Hermitian so this is ||C||_F^2.
double commutator_weight(const ComplexMatrix& a, const ComplexMatrix& rho) {
  const ComplexMatrix c = a * rho - rho * a;
  return -(c * c).trace().real();
}

}  // namespace

namespace detail {
void throw_invalid_length(std::int64_t length) {
  throw InvalidInput(fmt::format("sequence length must be >= 1, got {}", length));
}
}  // namespace detail

std::string_view to_string(DriftKind kind) {
  switch (kind) {
    case DriftKind::systematic:
      return "systematic";
    case DriftKind::diffusive:
      return "diffusive";
    case DriftKind::mixed:
      return "mixed";
  }
  return "unknown";
}

DriftKind parse_drift_kind(std::string_view text) {
  if (text == "systematic") return DriftKind::systematic;
  if (text == "diffusive") return DriftKind::diffusive;
  if (text == "mixed") return DriftKind::mixed;
  throw InvalidInput(fmt::format("unknown drift kind '{}'", text));
}

void DriftProcess::validate() const {
  if (!std::isfinite(delta) || delta < 0.0) {
    throw InvalidInput(fmt::format("delta must be >= 0, got {}", delta));
  }
  if (delta > kMaxDelta) {
    throw InvalidInput(fmt::format("delta {} exceeds the small-angle ceiling {}", delta, kMaxDelta));
  }
  if (!std::isfinite(diffusion_sigma) || diffusion_sigma < 0.0) {
    throw InvalidInput(fmt::format("diffusion_sigma must be >= 0, got {}", diffusion_sigma));
  }
  if (!std::isfinite(mix_weight) || mix_weight < 0.0 || mix_weight > 1.0) {
    throw InvalidInput(fmt::format("mix_weight must lie in [0, 1], got {}", mix_weight));
  }
  if (kind != DriftKind::diffusive &&
      (!systematic_axis.allFinite() || std::abs(systematic_axis.norm() - 1.0) > kAxisNormTol)) {
    throw InvalidInput("systematic_axis must be a unit vector");
  }
}

std::vector<std::string> DriftProcess::warnings() const {
  std::vector<std::string> out;
  if (delta > kWarnDelta) {
    out.push_back(fmt::format(
        "delta = {} is above {}; leading-order scaling laws may be inaccurate", delta, kWarnDelta));
  }
  return out;
}

double DriftProcess::systematic_weight() const {
  switch (kind) {
    case DriftKind::systematic:
      return 1.0;
    case DriftKind::diffusive:
      return 0.0;
    case DriftKind::mixed:
      return mix_weight;
  }
  return 0.0;
}

DensityMatrix step(const DensityMatrix& rho, const DriftProcess& proc, Rng& rng) {
  require_qubit(rho, "step");
  proc.validate();
  const double p = proc.systematic_weight();
  Vec3 r = p * proc.systematic_axis;
  if (proc.kind != DriftKind::systematic) {
    const double x = rng.normal();
    const double y = rng.normal();
    const double z = rng.normal();
    r += (1.0 - p) * proc.diffusion_sigma * Vec3(x, y, z);
  }
  if (proc.delta == 0.0 || r.norm() == 0.0) return rho;
  return evolve(rho, qubit_rotation(r, proc.delta));
}

SourceSequence generate_sequence(const DensityMatrix& rho0, const DriftProcess& proc,
                                 std::int64_t length, std::uint64_t seed) {
  SourceSequence seq;
  seq.seed = seed;
  if (length >= 1) seq.states.reserve(static_cast<std::size_t>(length));
  walk_sequence(rho0, proc, length, seed,
                [&](std::int64_t, const DensityMatrix& s) { seq.states.push_back(s); });
  return seq;
}

double drift_constant_d1(const Vec3& axis, double delta, const DensityMatrix& rho) {
  require_qubit(rho, "drift_constant_d1");
  if (!axis.allFinite() || std::abs(axis.norm() - 1.0) > kAxisNormTol) {
    throw InvalidInput("drift_constant_d1: axis must be a unit vector");
  }
  return delta * delta * commutator_weight(pauli_dot(axis), rho.matrix());
}

double drift_constant_d2(double diffusion_sigma, double delta, const DensityMatrix& rho) {
  require_qubit(rho, "drift_constant_d2");
  if (!(diffusion_sigma >= 0.0)) throw InvalidInput("diffusion_sigma must be >= 0");
  // E[(r.sigma)(x)(r.sigma)] = sigma^2 sum_i sigma_i (x) sigma_i for isotropic r.
  const double sum = commutator_weight(pauli_x(), rho.matrix()) +
                     commutator_weight(pauli_y(), rho.matrix()) +
                     commutator_weight(pauli_z(), rho.matrix());
  return delta * delta * diffusion_sigma * diffusion_sigma * sum;
}

double theory_delta_sq(int k, const TheoryConstants& consts, double p) {
  if (k < 0) throw InvalidInput(fmt::format("separation must be >= 0, got {}", k));
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("mix weight must lie in [0, 1]");
  if (consts.D1 < 0.0 || consts.D2 < 0.0) throw InvalidInput("drift constants must be >= 0");
  const double kk = static_cast<double>(k);
  return kk * kk * p * p * consts.D1 + kk * (1.0 - p) * (1.0 - p) * consts.D2;
}

AlphaTheory alpha_theory(double p, double D1, double D2) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidInput("mix weight must lie in [0, 1]");
  if (D1 < 0.0 || D2 < 0.0) throw InvalidInput("drift constants must be >= 0");
  const double q = 1.0 - p;

  AlphaTheory out;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double derived_den = 5.0 * p * p * D1 + q * q * D2;
  out.derived = derived_den == 0.0 ? nan : (3.0 * p * p * D1 + q * q * D2) / derived_den;

  // Printed form, multiplied through by D2 when D2 = 0.
  const double r1 = D2 > 0.0 ? D1 / D2 : D1;
  const double r2 = D2 > 0.0 ? 1.0 : D2;
  const double num = -p * p * r2 + r1 * (-3.0 * p * p + 6.0 * p - 3.0);
  const double den = -p * p * r2 + r1 * (-5.0 * p * p + 10.0 * p - 5.0);
  out.printed = den == 0.0 ? nan : num / den;

  if (std::isnan(out.printed) && std::isnan(out.derived)) {
    throw UndefinedRatio("alpha_theory: both forms have zero denominator");
  }
  return out;
}

}  // namespace swapdrift
