#include "swapdrift/hom.hpp"

#include "swapdrift/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

namespace swapdrift {
namespace {

constexpr Complex kI{0.0, 1.0};

void require_same_modes(const PhotonModeState& a, const PhotonModeState& b, const char* what) {
  if (a.modes() != b.modes()) {
    throw InvalidInput(fmt::format("{}: mode count mismatch ({} vs {})", what, a.modes(), b.modes()));
  }
}

// Output modes are numbered x = port * M + mode with port c = 0, d = 1.
OutputMode output_mode(int x, int modes) {
  return {x < modes ? Port::c : Port::d, x % modes};
}

// Index of the unordered pair {x, y}, x <= y, among 2M output modes.
int pair_index(int x, int y, int total) {
  if (x > y) std::swap(x, y);
  // Rows 0..x-1 hold total, total-1, ... entries.
  return x * total - x * (x - 1) / 2 + (y - x);
}

}  // namespace

PhotonModeState::PhotonModeState(ComplexMatrix coeffs) : coeffs_(std::move(coeffs)) {
  // Reuse the density-matrix checks.
  DensityMatrix check(coeffs_);
}

OutputSector TwoPhotonBasisState::sector() const {
  if (first.port != second.port) return OutputSector::coincidence;
  return first.port == Port::c ? OutputSector::both_c : OutputSector::both_d;
}

double TwoPhotonOutput::sector_probability(OutputSector sector) const {
  double total = 0.0;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    if (basis[i].sector() == sector) total += rho(idx, idx).real();
  }
  return total;
}

double TwoPhotonOutput::total_probability() const { return rho.trace().real(); }

TwoPhotonOutput beamsplitter_output(const PhotonModeState& a, const PhotonModeState& b) {
  require_same_modes(a, b, "beamsplitter_output");
  const int m = a.modes();
  const int total = 2 * m;
  const int basis_size = total * (total + 1) / 2;

  TwoPhotonOutput out;
  out.modes = m;
  out.basis.resize(static_cast<std::size_t>(basis_size));
  for (int x = 0; x < total; ++x) {
    for (int y = x; y < total; ++y) {
      out.basis[static_cast<std::size_t>(pair_index(x, y, total))] = {output_mode(x, m),
                                                                       output_mode(y, m)};
    }
  }

  // Creation-operator images: a_k -> sum_x A(x) x with A(c_k) = 1/sqrt2, A(d_k) = i/sqrt2;
  // b_n -> B(c_n) = i/sqrt2, B(d_n) = 1/sqrt2.
  const double h = 1.0 / std::numbers::sqrt2;
  const Complex a_to_c = h;
  const Complex a_to_d = kI * h;
  const Complex b_to_c = kI * h;
  const Complex b_to_d = h;

  // Column (k * M + n) holds the normalized Fock expansion of a_k^dagger b_n^dagger |0>.
  ComplexMatrix psi = ComplexMatrix::Zero(basis_size, m * m);
  for (int k = 0; k < m; ++k) {
    for (int n = 0; n < m; ++n) {
      const std::pair<int, Complex> a_terms[2] = {{k, a_to_c}, {m + k, a_to_d}};
      const std::pair<int, Complex> b_terms[2] = {{n, b_to_c}, {m + n, b_to_d}};
      for (const auto& [x, ax] : a_terms) {
        for (const auto& [y, by] : b_terms) {
          const Complex weight = x == y ? std::numbers::sqrt2 : 1.0;
          psi(pair_index(x, y, total), k * m + n) += weight * ax * by;
        }
      }
    }
  }

  // rho_out = sum p_kl q_nm |psi_kn><psi_lm| = Psi (p (x) q) Psi^dagger.
  out.rho = psi * kron(a.coeffs(), b.coeffs()) * psi.adjoint();
  return out;
}

double modal_overlap(const PhotonModeState& a, const PhotonModeState& b) {
  require_same_modes(a, b, "modal_overlap");
  Complex sum = 0.0;
  for (int k = 0; k < a.modes(); ++k) {
    for (int l = 0; l < a.modes(); ++l) {
      sum += a.coeffs()(k, l) * b.coeffs()(l, k);
    }
  }
  return sum.real();
}

double coincidence_probability_direct(const PhotonModeState& a, const PhotonModeState& b) {
  require_same_modes(a, b, "coincidence_probability_direct");
  const double trace_product = (a.coeffs().trace() * b.coeffs().trace()).real();
  // Clamp rounding residue so the result stays a probability in [0, 1/2].
  return std::clamp(0.5 * trace_product - 0.5 * modal_overlap(a, b), 0.0, 0.5);
}

double coincidence_probability_bruteforce(const PhotonModeState& a, const PhotonModeState& b) {
  require_same_modes(a, b, "coincidence_probability_bruteforce");
  if (a.modes() > kMaxBruteforceModes) {
    throw ResourceLimit(fmt::format("brute-force enumeration limited to {} modes, got {}",
                                    kMaxBruteforceModes, a.modes()));
  }
  return beamsplitter_output(a, b).sector_probability(OutputSector::coincidence);
}

SwapOutcome sample_hom_outcome(const PhotonModeState& a, const PhotonModeState& b, Rng& rng) {
  const double p_cc = std::clamp(coincidence_probability_direct(a, b), 0.0, 1.0);
  return rng.uniform() < 1.0 - p_cc ? SwapOutcome::plus : SwapOutcome::minus;
}

}  // namespace swapdrift
