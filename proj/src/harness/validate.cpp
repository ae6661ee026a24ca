#include "swapdrift/harness.hpp"

#include "swapdrift/errors.hpp"

#include <fmt/format.h>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <numbers>

namespace swapdrift::harness {
namespace {

constexpr Complex kI{0.0, 1.0};

CheckResult check(std::string name, bool passed, std::string detail) {
  return {std::move(name), passed, std::move(detail)};
}

CheckResult swap_identity(std::uint64_t seed) {
  double worst = 0.0;
  int cases = 0;
  for (int d = 2; d <= 4; ++d) {
    const ComplexMatrix v = swap_operator(d);
    for (int i = 0; i < 20; ++i, ++cases) {
      const auto a = random_density(d, seed, static_cast<std::uint64_t>(2 * cases));
      const auto b = random_density(d, seed, static_cast<std::uint64_t>(2 * cases + 1));
      const Complex lhs = (kron(a.matrix(), b.matrix()) * v).trace();
      worst = std::max({worst, std::abs(lhs.real() - overlap(a, b)), std::abs(lhs.imag())});
    }
  }
  return check("swap-identity", worst <= 1e-10,
               fmt::format("{} pairs d=2..4 max_err={:.3g}", cases, worst));
}

CheckResult delta_identity(std::uint64_t seed) {
  double worst = 0.0;
  for (int i = 0; i < 30; ++i) {
    const int d = 2 + i % 3;
    const auto a = random_density(d, seed, static_cast<std::uint64_t>(1000 + 2 * i));
    const auto b = random_density(d, seed, static_cast<std::uint64_t>(1001 + 2 * i));
    const ComplexMatrix delta = a.matrix() - b.matrix();
    const double direct = (delta * delta).trace().real();
    worst = std::max(worst, std::abs(direct - delta_squared_trace(a, b)));
  }
  return check("delta-squared-identity", worst <= 1e-12, fmt::format("max_err={:.3g}", worst));
}

CheckResult rotation_vs_expm(std::uint64_t seed) {
  Rng rng(seed, Stream::replicate, 1);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const Vec3 r(2.0 * rng.normal(), 2.0 * rng.normal(), 2.0 * rng.normal());
    const double delta = 0.3 * rng.uniform();
    const ComplexMatrix gen = kI * delta * pauli_dot(r);
    const ComplexMatrix expected = gen.exp();
    worst = std::max(worst, (qubit_rotation(r, delta).matrix() - expected).cwiseAbs().maxCoeff());
  }
  return check("qubit-rotation-vs-expm", worst <= 1e-12, fmt::format("max_err={:.3g}", worst));
}

CheckResult hom_direct_vs_bruteforce(std::uint64_t seed, const ValidationHooks& hooks) {
  double worst = 0.0;
  for (int i = 0; i < 40; ++i) {
    const int m = 1 + i % 4;
    const PhotonModeState a(random_density(m, seed, static_cast<std::uint64_t>(5000 + 2 * i)));
    const PhotonModeState b(random_density(m, seed, static_cast<std::uint64_t>(5001 + 2 * i)));
    const double direct = hooks.coincidence_direct(a, b);
    const double brute = coincidence_probability_bruteforce(a, b);
    const double identity = 2.0 * direct + modal_overlap(a, b) - 1.0;
    worst = std::max({worst, std::abs(direct - brute), std::abs(identity)});
  }
  return check("hom-direct-vs-bruteforce", worst <= 1e-12,
               fmt::format("40 pairs M<=4 max_err={:.3g}", worst));
}

CheckResult d1_vs_simulation(const ValidationHooks& hooks) {
  DriftProcess proc;
  proc.kind = DriftKind::systematic;
  proc.delta = 0.01;
  proc.systematic_axis = Vec3::UnitZ();
  const auto plus = density_from_bloch(BlochVector(1.0, 0.0, 0.0));
  const auto seq = generate_sequence(plus, proc, 6, 0);
  const double d1 = hooks.drift_constant_d1(proc.systematic_axis, proc.delta, plus);
  double worst = 0.0;
  bool ok = d1 > 0.0;
  for (int k = 1; k <= 5; ++k) {
    const double sim = delta_squared_trace(seq.states[0], seq.states[static_cast<std::size_t>(k)]);
    const double rel = std::abs(sim - k * k * d1) / sim;
    worst = std::max(worst, rel);
    ok = ok && rel <= 0.01;
  }
  return check("d1-vs-simulation", ok, fmt::format("D1={:.6g} max_rel_err={:.3g}", d1, worst));
}

CheckResult d2_vs_monte_carlo(std::uint64_t seed, const ValidationHooks& hooks) {
  DriftProcess proc;
  proc.kind = DriftKind::diffusive;
  proc.delta = 0.01;
  proc.diffusion_sigma = 1.0;
  const auto rho = density_from_bloch(BlochVector(0.3, -0.4, 0.5));
  constexpr int kSamples = 100000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    Rng rng(seed, Stream::replicate, 100000 + static_cast<std::uint64_t>(i));
    const double x = delta_squared_trace(rho, step(rho, proc, rng));
    sum += x;
    sum_sq += x * x;
  }
  const double mean = sum / kSamples;
  const double se = std::sqrt((sum_sq / kSamples - mean * mean) / (kSamples - 1));
  const double d2 = hooks.drift_constant_d2(proc.diffusion_sigma, proc.delta, rho);
  const double z = (mean - d2) / se;
  return check("d2-vs-monte-carlo", std::abs(z) <= 3.0,
               fmt::format("D2={:.6g} mc={:.6g} se={:.3g} z={:.2f}", d2, mean, se, z));
}

CheckResult alpha_forms() {
  double worst = 0.0;
  for (double p : {0.0, 0.1, 0.25, 0.5, 0.75, 0.9}) {
    for (double ratio : {0.1, 0.5, 1.0, 2.0, 10.0}) {
      const double d2 = 0.01;
      const double d1 = ratio * d2;
      worst = std::max(worst,
                       std::abs(alpha_theory(1.0 - p, d1, d2).printed - alpha_theory(p, d1, d2).derived));
    }
  }
  const double diff = alpha_theory(0.0, 0.01, 0.01).derived;
  const double sys = alpha_theory(1.0, 0.01, 0.01).derived;
  const bool ok = worst <= 1e-12 && std::abs(diff - 1.0) <= 1e-12 && std::abs(sys - 0.6) <= 1e-12;
  return check("alpha-printed-vs-derived", ok,
               fmt::format("max_err={:.3g} alpha(p=0)={} alpha(p=1)={}", worst, diff, sys));
}

// Short mixed chains from |+>: with p = 1/2 and sigma = 1/sqrt2, D1 = D2.
CheckResult alpha_vs_simulation(std::uint64_t seed, const ValidationHooks& hooks) {
  DriftProcess proc;
  proc.kind = DriftKind::mixed;
  proc.delta = 0.01;
  proc.mix_weight = 0.5;
  proc.diffusion_sigma = 1.0 / std::numbers::sqrt2;
  const auto plus = density_from_bloch(BlochVector(1.0, 0.0, 0.0));
  const double d1 = hooks.drift_constant_d1(proc.systematic_axis, proc.delta, plus);
  const double d2 = hooks.drift_constant_d2(proc.diffusion_sigma, proc.delta, plus);

  constexpr int kChains = 100000;
  double sa = 0.0, sb = 0.0, saa = 0.0, sbb = 0.0, sab = 0.0;
  for (int c = 0; c < kChains; ++c) {
    const std::uint64_t chain_seed =
        Rng::derive(seed, Stream::replicate, 200000 + static_cast<std::uint64_t>(c));
    double e[4] = {0.0, 0.0, 0.0, 0.0};
    walk_sequence(plus, proc, 4, chain_seed, [&](std::int64_t n, const DensityMatrix& s) {
      e[n] = delta_squared_trace(plus, s);
    });
    const double a = e[2] - e[1];
    const double b = e[3] - e[2];
    sa += a;
    sb += b;
    saa += a * a;
    sbb += b * b;
    sab += a * b;
  }
  const double n = kChains;
  const double ma = sa / n;
  const double mb = sb / n;
  const double va = saa / n - ma * ma;
  const double vb = sbb / n - mb * mb;
  const double cab = sab / n - ma * mb;
  const double alpha = ma / mb;
  const double se = std::sqrt((va - 2.0 * alpha * cab + alpha * alpha * vb) / n) / std::abs(mb);
  double expected = 0.0;
  try {
    expected = alpha_theory(proc.mix_weight, d1, d2).derived;
  } catch (const UndefinedRatio& e) {
    return check("alpha-vs-simulation", false, e.what());
  }
  const double z = (alpha - expected) / se;
  return check("alpha-vs-simulation", std::abs(z) <= 3.0,
               fmt::format("theory={:.6g} mc={:.6g} se={:.3g} z={:.2f}", expected, alpha, se, z));
}

CheckResult decoherence_round_trip(std::uint64_t seed) {
  double worst = 0.0;
  for (int i = 0; i < 30; ++i) {
    const int d = 2 + i % 3;
    const auto a = random_density(d, seed, static_cast<std::uint64_t>(9000 + 2 * i));
    const auto b = random_density(d, seed, static_cast<std::uint64_t>(9001 + 2 * i));
    const DecoherenceChannel ch{0.01 * (i % 7), d};
    const int k = 1 + i % 10;
    const double measured = measured_overlap_decohered(a, b, k, ch);
    const double direct = overlap(decohere(a, k, ch), b);
    const double inferred = infer_overlap(measured, k, ch).overlap;
    worst = std::max({worst, std::abs(inferred - overlap(a, b)), std::abs(direct - measured)});
  }
  return check("decoherence-round-trip", worst <= 1e-12, fmt::format("max_err={:.3g}", worst));
}

CheckResult nmin_variants() {
  double worst = 0.0;
  for (double p1 : {0.8, 0.9, 1.0}) {
    for (double c : {0.005, 0.01, 0.05, 0.1}) {
      const double pd = n_min_diffusive(p1, c, NMinVariant::printed).n_min;
      const double rd = n_min_diffusive(p1, c, NMinVariant::rederived).n_min;
      const double ps = n_min_systematic(p1, c, NMinVariant::printed).n_min;
      const double rs = n_min_systematic(p1, c, NMinVariant::rederived).n_min;
      worst = std::max({worst, std::abs(rd / pd - 4.0), std::abs(rs / ps - 4.0)});
    }
  }
  const double spot = n_min_diffusive(1.0, 0.01, NMinVariant::printed).n_min;
  const bool ok = worst <= 1e-12 && std::abs(spot - 580.531830500123) <= 1e-6;
  return check("nmin-variants", ok, fmt::format("ratio_err={:.3g} N_min(1,0.01)={}", worst, spot));
}

CheckResult sampler_fidelity(std::uint64_t seed) {
  const auto a = density_from_bloch(BlochVector(0.0, 0.0, 1.0));
  const auto b = density_from_bloch(BlochVector(0.6, 0.0, 0.8));
  const double ov = overlap(a, b);
  constexpr int kSamples = 100000;
  Rng rng(seed, Stream::swap_sample, 77);
  std::int64_t sum = 0;
  for (int i = 0; i < kSamples; ++i) sum += static_cast<int>(sample_swap(a, b, rng));
  const double mean = static_cast<double>(sum) / kSamples;
  const double bound = 3.0 * std::sqrt((1.0 - ov * ov) / kSamples);
  return check("sampler-fidelity", std::abs(mean - ov) <= bound,
               fmt::format("overlap={} mean={} bound={:.3g}", ov, mean, bound));
}

}  // namespace

std::vector<CheckResult> run_validate(std::uint64_t seed, const ValidationHooks& hooks) {
  std::vector<CheckResult> results;
  auto guarded = [&](const char* name, auto&& fn) {
    try {
      results.push_back(fn());
    } catch (const std::exception& e) {
      results.push_back(check(name, false, fmt::format("exception: {}", e.what())));
    }
  };
  guarded("swap-identity", [&] { return swap_identity(seed); });
  guarded("delta-squared-identity", [&] { return delta_identity(seed); });
  guarded("qubit-rotation-vs-expm", [&] { return rotation_vs_expm(seed); });
  guarded("hom-direct-vs-bruteforce", [&] { return hom_direct_vs_bruteforce(seed, hooks); });
  guarded("d1-vs-simulation", [&] { return d1_vs_simulation(hooks); });
  guarded("d2-vs-monte-carlo", [&] { return d2_vs_monte_carlo(seed, hooks); });
  guarded("alpha-printed-vs-derived", [&] { return alpha_forms(); });
  guarded("alpha-vs-simulation", [&] { return alpha_vs_simulation(seed, hooks); });
  guarded("decoherence-round-trip", [&] { return decoherence_round_trip(seed); });
  guarded("nmin-variants", [&] { return nmin_variants(); });
  guarded("sampler-fidelity", [&] { return sampler_fidelity(seed); });
  return results;
}

std::string validation_report(const std::vector<CheckResult>& results) {
  std::string out;
  int failed = 0;
  for (const auto& r : results) {
    if (!r.passed) ++failed;
    out += fmt::format("check={} status={} detail=\"{}\"\n", r.name, r.passed ? "pass" : "fail",
                       r.detail);
  }
  out += fmt::format("summary total={} passed={} failed={} status={}\n", results.size(),
                     results.size() - static_cast<std::size_t>(failed), failed,
                     failed == 0 ? "pass" : "fail");
  return out;
}

}  // namespace swapdrift::harness
