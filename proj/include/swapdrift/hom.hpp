#pragma once

#include "swapdrift/linalg.hpp"
#include "swapdrift/measurement.hpp"
#include "swapdrift/rng.hpp"

#include <vector>

namespace swapdrift {

/// Single-photon state over M internal modes (polarization, frequency,
/// transverse profile), rho = sum_kl p_kl a_k^dagger |0><0| a_l.
/// Same invariants and tolerances as DensityMatrix.
class PhotonModeState {
 public:
  explicit PhotonModeState(ComplexMatrix coeffs);
  explicit PhotonModeState(const DensityMatrix& rho) : PhotonModeState(rho.matrix()) {}

  int modes() const { return static_cast<int>(coeffs_.rows()); }
  const ComplexMatrix& coeffs() const { return coeffs_; }
  DensityMatrix as_density() const { return DensityMatrix::unchecked(coeffs_); }

 private:
  ComplexMatrix coeffs_;
};

enum class Port { c, d };

/// One output photon: its port and internal mode.
struct OutputMode {
  Port port = Port::c;
  int mode = 0;
};

enum class OutputSector { both_c, both_d, coincidence };

/// Fock state with one photon in each of two output modes, or two photons in
/// the same one (first == second).
struct TwoPhotonBasisState {
  OutputMode first;
  OutputMode second;

  OutputSector sector() const;
};

/// Output of the 50/50 beamsplitter as a density matrix over normalized
/// two-photon Fock states.
struct TwoPhotonOutput {
  int modes = 0;
  std::vector<TwoPhotonBasisState> basis;
  ComplexMatrix rho;

  double sector_probability(OutputSector sector) const;
  double total_probability() const;
};

/// Beamsplitter a_k^dagger -> (c_k^dagger + i d_k^dagger)/sqrt2,
/// b_n^dagger -> (i c_n^dagger + d_n^dagger)/sqrt2 applied to rho_A (x) rho_B,
/// expanded in the two-photon Fock basis with (x^dagger)^2 |0> = sqrt2 |2_x>.
TwoPhotonOutput beamsplitter_output(const PhotonModeState& a, const PhotonModeState& b);

/// sum_kl p_kl q_lk = Tr(rho_A rho_B).
double modal_overlap(const PhotonModeState& a, const PhotonModeState& b);

/// 1/2 sum_k p_kk sum_n q_nn - 1/2 sum_kl p_kl q_lk.
double coincidence_probability_direct(const PhotonModeState& a, const PhotonModeState& b);

/// Largest mode count accepted by the enumeration.
inline constexpr int kMaxBruteforceModes = 6;

/// sum_rs <1_r|_c <1_s|_d rho_out |1_r>_c |1_s>_d from the enumerated output.
/// Throws ResourceLimit above kMaxBruteforceModes.
double coincidence_probability_bruteforce(const PhotonModeState& a, const PhotonModeState& b);

/// HOM read as a swap measurement: a coincidence is the -1 outcome,
/// bunching (both photons in one port) the +1 outcome.
SwapOutcome sample_hom_outcome(const PhotonModeState& a, const PhotonModeState& b, Rng& rng);

}  // namespace swapdrift
