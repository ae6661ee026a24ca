#include "swapdrift/measurement.hpp"

#include "swapdrift/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace swapdrift {
namespace {

constexpr double kClampTol = 1e-12;

void require_channel_dim(const DensityMatrix& rho, const DecoherenceChannel& ch) {
  ch.validate();
  if (rho.dim() != ch.dimension) {
    throw InvalidInput(fmt::format("decoherence channel dimension {} does not match state dimension {}",
                                   ch.dimension, rho.dim()));
  }
}

void require_k(int k, int minimum) {
  if (k < minimum) throw InvalidInput(fmt::format("separation must be >= {}, got {}", minimum, k));
}

SwapOutcome sample_pair(const DensityMatrix& earlier, const DensityMatrix& later, int k,
                        const std::optional<DecoherenceChannel>& ch, Rng& rng) {
  if (ch) return sample_swap(decohere(earlier, k, *ch), later, rng);
  return sample_swap(earlier, later, rng);
}

}  // namespace

namespace detail {
void check_pair_request(int k, std::int64_t pairs) {
  require_k(k, 1);
  if (pairs < 1) throw InvalidInput(fmt::format("pairs must be >= 1, got {}", pairs));
}
}  // namespace detail

void DecoherenceChannel::validate() const {
  if (!std::isfinite(epsilon) || epsilon < 0.0) {
    throw InvalidInput(fmt::format("epsilon must be >= 0, got {}", epsilon));
  }
  if (dimension < 2) throw InvalidInput(fmt::format("dimension must be >= 2, got {}", dimension));
}

double swap_plus_probability(double overlap_value) {
  if (!std::isfinite(overlap_value) || overlap_value < -1.0 - kClampTol ||
      overlap_value > 1.0 + kClampTol) {
    throw InternalError(fmt::format("overlap {} outside [-1, 1]", overlap_value));
  }
  return std::clamp(0.5 * (1.0 + overlap_value), 0.0, 1.0);
}

SwapOutcome sample_swap(const DensityMatrix& a, const DensityMatrix& b, Rng& rng) {
  const double p_plus = swap_plus_probability(overlap(a, b));
  return rng.uniform() < p_plus ? SwapOutcome::plus : SwapOutcome::minus;
}

DensityMatrix decohere(const DensityMatrix& rho, int k, const DecoherenceChannel& ch) {
  require_channel_dim(rho, ch);
  require_k(k, 0);
  if (k == 0) return rho;
  const double keep = std::exp(-static_cast<double>(k) * ch.epsilon);
  const int d = rho.dim();
  ComplexMatrix out = keep * rho.matrix() +
                      ((1.0 - keep) / static_cast<double>(d)) * ComplexMatrix::Identity(d, d);
  return DensityMatrix::unchecked(std::move(out));
}

double measured_overlap_decohered(const DensityMatrix& rho_n, const DensityMatrix& rho_nk, int k,
                                  const DecoherenceChannel& ch) {
  require_channel_dim(rho_n, ch);
  require_channel_dim(rho_nk, ch);
  require_k(k, 0);
  const double keep = std::exp(-static_cast<double>(k) * ch.epsilon);
  return keep * overlap(rho_n, rho_nk) + (1.0 - keep) / static_cast<double>(ch.dimension);
}

InferredOverlap infer_overlap(double measured, int k, const DecoherenceChannel& ch) {
  ch.validate();
  require_k(k, 1);
  const double amp = std::exp(static_cast<double>(k) * ch.epsilon);
  const double floor = (1.0 - 1.0 / amp) / static_cast<double>(ch.dimension);
  return {amp * (measured - floor), amp};
}

OutcomeTally measure_sequence_pairs(const SourceSequence& seq, int k, std::int64_t pairs,
                                    const std::optional<DecoherenceChannel>& ch,
                                    std::uint64_t seed) {
  detail::check_pair_request(k, pairs);
  const auto needed = pairs_sequence_length(pairs, k);
  if (static_cast<std::int64_t>(seq.states.size()) < needed) {
    throw InvalidInput(fmt::format("sequence of length {} is too short for {} pairs at separation {} "
                                   "(needs {})",
                                   seq.states.size(), pairs, k, needed));
  }
  OutcomeTally tally;
  tally.separation = k;
  for (std::int64_t i = 0; i < pairs; ++i) {
    const auto n = static_cast<std::size_t>(pair_first_index(i, k));
    Rng rng(seed, Stream::swap_sample, static_cast<std::uint64_t>(i));
    tally.add(sample_pair(seq.states[n], seq.states[n + static_cast<std::size_t>(k)], k, ch, rng));
  }
  return tally;
}

OutcomeTally measure_source_pairs(const DensityMatrix& rho0, const DriftProcess& proc, int k,
                                  std::int64_t pairs, const std::optional<DecoherenceChannel>& ch,
                                  std::uint64_t seed) {
  OutcomeTally tally;
  tally.separation = k;
  for_each_source_pair(rho0, proc, k, pairs, seed,
                       [&](std::int64_t i, const DensityMatrix& earlier, const DensityMatrix& later) {
                         Rng rng(seed, Stream::swap_sample, static_cast<std::uint64_t>(i));
                         tally.add(sample_pair(earlier, later, k, ch, rng));
                       });
  return tally;
}

}  // namespace swapdrift
