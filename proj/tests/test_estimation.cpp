#include "swapdrift/errors.hpp"
#include "swapdrift/estimation.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace swapdrift;

namespace {

OverlapEstimate exact(double v, int k, double dv = 1e-6) { return {v, dv, 1000000, k}; }

OutcomeTally tally(int k, std::int64_t plus, std::int64_t minus) {
  OutcomeTally t;
  t.separation = k;
  t.n_plus = plus;
  t.n_minus = minus;
  return t;
}

OutcomeTally sample_tally(double ov, std::int64_t n, int k, Rng& rng) {
  OutcomeTally t;
  t.separation = k;
  const double p = 0.5 * (1.0 + ov);
  for (std::int64_t i = 0; i < n; ++i) (rng.uniform() < p ? t.n_plus : t.n_minus) += 1;
  return t;
}

}  // namespace

TEST(EstimateOverlap, Examples) {
  const auto all_plus = estimate_overlap(tally(1, 100, 0));
  EXPECT_EQ(all_plus.v_hat, 1.0);
  EXPECT_EQ(all_plus.delta_v, 0.0);
  const auto split = estimate_overlap(tally(2, 75, 25));
  EXPECT_DOUBLE_EQ(split.v_hat, 0.5);
  EXPECT_NEAR(split.delta_v, 0.0866025403784439, 1e-15);
  EXPECT_EQ(split.separation, 2);
  EXPECT_EQ(split.n, 100);
  EXPECT_THROW(estimate_overlap(tally(1, 0, 0)), InvalidInput);
}

TEST(EstimateOverlap, CoverageAcrossSeeds) {
  int covered = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Rng rng(seed, Stream::replicate, 3);
    const auto est = estimate_overlap(sample_tally(0.9, 100000, 1, rng));
    if (std::abs(est.v_hat - 0.9) <= 3.0 * est.delta_v) ++covered;
  }
  EXPECT_GE(covered, 99);
}

TEST(Recover, DiffusiveExact) {
  const auto stationary = recover_p1_d2(exact(0.8, 1), exact(0.8, 2));
  EXPECT_DOUBLE_EQ(stationary.P1.value, 0.8);
  EXPECT_DOUBLE_EQ(stationary.D2.value, 0.0);
  const double p1 = 0.93, d2 = 0.012;
  const auto fit = recover_p1_d2(exact(p1 - d2 / 2, 1), exact(p1 - d2, 2));
  EXPECT_NEAR(fit.P1.value, p1, 1e-15);
  EXPECT_NEAR(fit.D2.value, d2, 1e-15);
  EXPECT_THROW(recover_p1_d2(exact(0.9, 2), exact(0.9, 1)), InvalidInput);
}

TEST(Recover, DiffusiveErrorPropagation) {
  const auto fit = recover_p1_d2(exact(0.9, 1, 0.003), exact(0.85, 2, 0.004));
  EXPECT_NEAR(fit.P1.error, std::sqrt(4 * 9e-6 + 16e-6), 1e-15);
  EXPECT_NEAR(fit.D2.error, 2 * 0.005, 1e-15);
}

TEST(Recover, SystematicExact) {
  const auto stationary = recover_p1_d1(exact(0.7, 1), exact(0.7, 2));
  EXPECT_DOUBLE_EQ(stationary.D1.value, 0.0);
  for (auto [p1, d1] : {std::pair{1.0, 0.01}, std::pair{0.77, 0.003}, std::pair{0.52, 0.04}}) {
    const auto fit = recover_p1_d1(exact(p1 - d1 / 2, 1), exact(p1 - 2 * d1, 2));
    EXPECT_NEAR(fit.P1.value, p1, 1e-14);
    EXPECT_NEAR(fit.D1.value, d1, 1e-14);
  }
}

TEST(Alpha, ExactInputs) {
  const double p1 = 0.95, d = 0.01;
  auto diff = [&](int k) { return exact(p1 - k * d / 2, k); };
  auto sys = [&](int k) { return exact(p1 - k * k * d / 2, k); };
  EXPECT_NEAR(alpha_estimate(diff(1), diff(2), diff(3)).value, 1.0, 1e-10);
  EXPECT_NEAR(alpha_estimate(sys(1), sys(2), sys(3)).value, 0.6, 1e-10);
  // Mixed p = 1/2 with D1 = D2 through theory_delta_sq.
  const TheoryConstants c{d, d};
  auto mixed = [&](int k) { return exact(p1 - theory_delta_sq(k, c, 0.5) / 2, k); };
  EXPECT_NEAR(alpha_estimate(mixed(1), mixed(2), mixed(3)).value, 2.0 / 3.0, 1e-10);
}

TEST(Alpha, UndefinedWhenDenominatorInsignificant) {
  EXPECT_FALSE(try_alpha_estimate(exact(0.9, 1), exact(0.8, 2), exact(0.8, 3)).has_value());
  EXPECT_THROW(alpha_estimate(exact(0.9, 1), exact(0.8, 2), exact(0.8, 3)), UndefinedRatio);
  EXPECT_FALSE(
      try_alpha_estimate(exact(0.9, 1, 0.01), exact(0.8, 2, 0.01), exact(0.79, 3, 0.01)).has_value());
}

TEST(Alpha, ErrorPropagation) {
  const auto a = alpha_estimate(exact(0.99, 1, 1e-3), exact(0.98, 2, 2e-3), exact(0.97, 3, 3e-3));
  // d alpha = sqrt(s1^2 + ((1+a) s2)^2 + (a s3)^2) / |V2 - V3|.
  EXPECT_NEAR(a.value, 1.0, 1e-12);
  EXPECT_NEAR(a.error, std::sqrt(1e-6 + 16e-6 + 9e-6) / 0.01, 1e-9);
}

TEST(DriftDetected, Examples) {
  EXPECT_FALSE(drift_detected(exact(0.9, 1, 0.01), exact(0.9, 2, 0.01)));
  EXPECT_TRUE(drift_detected(exact(0.99, 1, 0.001), exact(0.98, 2, 0.001)));
  EXPECT_FALSE(drift_detected(exact(0.99, 1, 0.02), exact(0.98, 2, 0.001)));
}

TEST(DriftDetected, StationaryFalsePositiveRate) {
  // Mixed stationary state, overlap 0.68 at every separation.
  int positives = 0;
  const int seeds = 200;
  for (int s = 0; s < seeds; ++s) {
    Rng rng(static_cast<std::uint64_t>(s), Stream::replicate, 9);
    const auto v1 = estimate_overlap(sample_tally(0.68, 10000, 1, rng));
    const auto v2 = estimate_overlap(sample_tally(0.68, 10000, 2, rng));
    if (drift_detected(v1, v2)) ++positives;
  }
  RecordProperty("false_positive_rate", std::to_string(positives / double(seeds)));
  EXPECT_LE(positives, 0.4 * seeds);
}

TEST(NMin, DiffusiveFrozenValues) {
  EXPECT_NEAR(n_min_diffusive(1.0, 0.01, NMinVariant::printed).n_min, 580.531830500123, 1e-9);
  EXPECT_NEAR(n_min_diffusive(1.0, 2.0, NMinVariant::printed).n_min, 0.25, 1e-15);
  EXPECT_LT(n_min_diffusive(1.0, 0.02, NMinVariant::printed).n_min,
            n_min_diffusive(1.0, 0.01, NMinVariant::printed).n_min);
  EXPECT_THROW(n_min_diffusive(1.0, 2.5, NMinVariant::printed), InvalidInput);
  EXPECT_THROW(n_min_diffusive(1.0, 0.0, NMinVariant::printed), InvalidInput);
  EXPECT_THROW(n_min_diffusive(1.2, 0.01, NMinVariant::printed), InvalidInput);
}

TEST(NMin, SystematicFrozenValues) {
  EXPECT_NEAR(n_min_systematic(1.0, 0.01, NMinVariant::printed).n_min, 99.24968553347169, 1e-9);
  EXPECT_LT(n_min_systematic(1.0, 0.01, NMinVariant::printed).n_min,
            n_min_diffusive(1.0, 0.01, NMinVariant::printed).n_min);
  double prev = INFINITY;
  for (double d1 = 0.005; d1 <= 0.1; d1 += 0.005) {
    const double n = n_min_systematic(0.9, d1, NMinVariant::printed).n_min;
    EXPECT_LT(n, prev);
    prev = n;
  }
}

TEST(NMin, RederivedIsFourTimesPrinted) {
  for (double p1 : {0.8, 0.9, 1.0}) {
    for (double c : {0.005, 0.02, 0.1}) {
      EXPECT_DOUBLE_EQ(n_min_diffusive(p1, c, NMinVariant::rederived).n_min,
                       4 * n_min_diffusive(p1, c, NMinVariant::printed).n_min);
      EXPECT_DOUBLE_EQ(n_min_systematic(p1, c, NMinVariant::rederived).n_min,
                       4 * n_min_systematic(p1, c, NMinVariant::printed).n_min);
    }
  }
  EXPECT_EQ(parse_nmin_variant("rederived"), NMinVariant::rederived);
  EXPECT_THROW(parse_nmin_variant("both"), InvalidInput);
}

TEST(NMinAtDistance, ReducesToDiffusiveWithoutDecoherence) {
  const DecoherenceChannel none{0.0, 2};
  EXPECT_NEAR(n_min_at_distance_k(1.0, 0.01, 2, none, NMinVariant::printed).n_min,
              n_min_diffusive(1.0, 0.01, NMinVariant::printed).n_min, 1e-9);
  EXPECT_NEAR(n_min_at_distance_k(0.9, 0.02, 2, none, NMinVariant::rederived, false).n_min,
              n_min_diffusive(0.9, 0.02, NMinVariant::rederived).n_min, 1e-9);
  EXPECT_THROW(n_min_at_distance_k(1.0, 0.01, 1, none, NMinVariant::printed), InvalidInput);
}

TEST(NMinAtDistance, CurveShape) {
  // P1 = 1, D = 2, D2 = 0.01.
  const DecoherenceChannel none{0.0, 2};
  double prev = INFINITY;
  for (int k = 2; k <= 200; ++k) {
    const double n = n_min_at_distance_k(1.0, 0.01, k, none, NMinVariant::printed).n_min;
    EXPECT_LT(n, prev);
    prev = n;
  }
  EXPECT_EQ(optimal_k(1.0, 0.01, none, 200), 200);

  struct Expected {
    double eps;
    int k_on, k_off;
    double n_at_k;
  };
  for (const auto& e : {Expected{0.05, 20, 18, 149.6441}, Expected{0.1, 11, 9, 696.8850}}) {
    const DecoherenceChannel ch{e.eps, 2};
    EXPECT_EQ(optimal_k(1.0, 0.01, ch, 200, true), e.k_on);
    EXPECT_EQ(optimal_k(1.0, 0.01, ch, 200, false), e.k_off);
    EXPECT_NEAR(n_min_at_distance_k(1.0, 0.01, e.k_on, ch, NMinVariant::printed).n_min, e.n_at_k, 1e-3);
    // The optimum satisfies k eps <= 1 + eps for this model.
    EXPECT_LE(e.k_on * e.eps, 1.0 + e.eps + 1e-12);
    // Tail growth per unit k approaches e^{2 eps}.
    const double tail = n_min_at_distance_k(1.0, 0.01, 200, ch, NMinVariant::printed).n_min /
                        n_min_at_distance_k(1.0, 0.01, 199, ch, NMinVariant::printed).n_min;
    EXPECT_NEAR(tail / std::exp(2 * e.eps), 1.0, 0.05);
  }
}

TEST(NMinAtDistance, ArgminIgnoresVariant) {
  const DecoherenceChannel ch{0.07, 2};
  int best_printed = 0, best_rederived = 0;
  double lo_p = INFINITY, lo_r = INFINITY;
  for (int k = 2; k <= 300; ++k) {
    const double p = n_min_at_distance_k(0.95, 0.01, k, ch, NMinVariant::printed).n_min;
    const double r = n_min_at_distance_k(0.95, 0.01, k, ch, NMinVariant::rederived).n_min;
    if (p < lo_p) lo_p = p, best_printed = k;
    if (r < lo_r) lo_r = r, best_rederived = k;
  }
  EXPECT_EQ(best_printed, best_rederived);
  EXPECT_EQ(best_printed, optimal_k(0.95, 0.01, ch, 300));
}

TEST(Classify, ExactInputs) {
  const double p1 = 0.98;
  auto at = [&](auto v) {
    return classify_drift(exact(v(1), 1), exact(v(2), 2), exact(v(3), 3));
  };
  EXPECT_EQ(at([&](int k) { return p1 - k * 0.01 / 2; }).classification, DriftClass::diffusive);
  EXPECT_EQ(at([&](int k) { return p1 - k * k * 0.01 / 2; }).classification, DriftClass::systematic);
  const TheoryConstants c{0.01, 0.01};
  // alpha = 0.76 / 0.94 lies between the anchor bands.
  EXPECT_NEAR(alpha_theory(0.3, 0.01, 0.01).derived, 0.76 / 0.94, 1e-15);
  EXPECT_EQ(at([&](int k) { return p1 - theory_delta_sq(k, c, 0.3) / 2; }).classification,
            DriftClass::mixed);
  const auto still = at([&](int) { return p1; });
  EXPECT_EQ(still.classification, DriftClass::stationary);
  EXPECT_FALSE(still.drifting);
  EXPECT_THROW(classify_drift(exact(1, 1), exact(1, 2), exact(1, 3), 0.0), InvalidInput);
}

TEST(Classify, InconclusiveWhenAlphaUndefined) {
  const auto v = classify_drift(exact(0.99, 1, 1e-3), exact(0.95, 2, 1e-3), exact(0.95, 3, 1e-3));
  EXPECT_TRUE(v.drifting);
  EXPECT_FALSE(v.alpha_hat.has_value());
  EXPECT_EQ(v.classification, DriftClass::inconclusive);
}
