#pragma once

#include "swapdrift/drift.hpp"
#include "swapdrift/linalg.hpp"
#include "swapdrift/rng.hpp"

#include <cstdint>
#include <optional>

namespace swapdrift {

/// One eigenvalue of the swap operator.
enum class SwapOutcome : int { plus = 1, minus = -1 };

/// Counts of +1 / -1 swap outcomes at one copy separation.
struct OutcomeTally {
  int separation = 1;
  std::int64_t n_plus = 0;
  std::int64_t n_minus = 0;

  std::int64_t total() const { return n_plus + n_minus; }
  void add(SwapOutcome outcome) { (outcome == SwapOutcome::plus ? n_plus : n_minus) += 1; }
};

/// Depolarization of a stored copy: per production interval the state
/// relaxes towards I/D as rho -> e^{-eps} rho + (1 - e^{-eps}) I/D.
struct DecoherenceChannel {
  double epsilon = 0.0;  ///< copy production time over the decoherence time
  int dimension = 2;

  void validate() const;
};

/// Probability of the +1 outcome, (1 + overlap) / 2. Overlaps outside
/// [-1, 1] by at most 1e-12 are clamped; larger excursions raise InternalError.
double swap_plus_probability(double overlap_value);

/// Samples the swap operator on rho_a (x) rho_b.
SwapOutcome sample_swap(const DensityMatrix& a, const DensityMatrix& b, Rng& rng);

/// e^{-k eps} rho + (1 - e^{-k eps}) I/D.
DensityMatrix decohere(const DensityMatrix& rho, int k, const DecoherenceChannel& ch);

/// e^{-k eps} Tr(rho_n rho_nk) + (1 - e^{-k eps}) / D: the overlap seen when
/// one member of the pair has been stored for k intervals.
double measured_overlap_decohered(const DensityMatrix& rho_n, const DensityMatrix& rho_nk, int k,
                                  const DecoherenceChannel& ch);

struct InferredOverlap {
  double overlap = 0.0;
  /// Factor e^{k eps} by which the measured error bar grows.
  double error_amplification = 1.0;
};

/// Inverts measured_overlap_decohered: e^{k eps} (P_k - (1 - e^{-k eps}) / D).
/// The result is not clipped to [0, 1].
InferredOverlap infer_overlap(double measured, int k, const DecoherenceChannel& ch);

/// Copy indices of pair i at separation k: (i (k+1), i (k+1) + k). Pairs
/// occupy disjoint blocks of the chain, so no two pairs share a drift step.
inline std::int64_t pair_first_index(std::int64_t pair, int k) { return pair * (k + 1); }
/// Sequence length needed for `pairs` pairs at separation k.
inline std::int64_t pairs_sequence_length(std::int64_t pairs, int k) { return pairs * (k + 1); }

/// Measures `pairs` disjoint pairs (n, n + k) of a stored sequence. When a
/// channel is given the earlier copy is decohered by k intervals before the
/// swap is sampled. Pair i samples from the substream (seed, Stream::swap_sample, i).
OutcomeTally measure_sequence_pairs(const SourceSequence& seq, int k, std::int64_t pairs,
                                    const std::optional<DecoherenceChannel>& ch,
                                    std::uint64_t seed);

/// Streaming equivalent of
/// measure_sequence_pairs(generate_sequence(rho0, proc, pairs_sequence_length(pairs, k), seed), ...)
/// that keeps only one block of k + 1 states in memory.
OutcomeTally measure_source_pairs(const DensityMatrix& rho0, const DriftProcess& proc, int k,
                                  std::int64_t pairs, const std::optional<DecoherenceChannel>& ch,
                                  std::uint64_t seed);

/// Visits the (earlier, later) states of each pair that measure_source_pairs
/// would sample, as visitor(pair_index, earlier, later).
template <typename Visitor>
void for_each_source_pair(const DensityMatrix& rho0, const DriftProcess& proc, int k,
                          std::int64_t pairs, std::uint64_t seed, Visitor&& visitor);

// ---------------------------------------------------------------------------

namespace detail {
void check_pair_request(int k, std::int64_t pairs);
}  // namespace detail

template <typename Visitor>
void for_each_source_pair(const DensityMatrix& rho0, const DriftProcess& proc, int k,
                          std::int64_t pairs, std::uint64_t seed, Visitor&& visitor) {
  detail::check_pair_request(k, pairs);
  std::optional<DensityMatrix> earlier;
  walk_sequence(rho0, proc, pairs_sequence_length(pairs, k), seed,
                [&](std::int64_t n, const DensityMatrix& state) {
                  const std::int64_t offset = n % (k + 1);
                  if (offset == 0) {
                    earlier = state;
                  } else if (offset == k) {
                    visitor(n / (k + 1), static_cast<const DensityMatrix&>(*earlier), state);
                  }
                });
}

}  // namespace swapdrift
