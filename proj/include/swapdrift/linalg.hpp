#pragma once

#include <Eigen/Dense>

#include <complex>

namespace swapdrift {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Vec3 = Eigen::Vector3d;

/// Tolerance for structural invariants (Hermiticity, trace, positivity, unitarity).
inline constexpr double kStructuralTol = 1e-10;
/// Tolerance for algebraic identities between two code paths.
inline constexpr double kIdentityTol = 1e-12;

/// Qubit state parameter: a point in the closed unit ball.
class BlochVector {
 public:
  BlochVector() = default;
  /// Throws InvalidInput if the norm exceeds 1 + 1e-12.
  BlochVector(double x, double y, double z);
  explicit BlochVector(const Vec3& v);

  double x() const { return v_.x(); }
  double y() const { return v_.y(); }
  double z() const { return v_.z(); }
  double norm() const { return v_.norm(); }
  const Vec3& vec() const { return v_; }

 private:
  Vec3 v_ = Vec3::Zero();
};

/// d x d Hermitian, unit-trace, positive semidefinite matrix.
///
/// The public constructor rejects matrices that fail any invariant at
/// kStructuralTol; nothing is projected back onto the state space.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix entries);

  static DensityMatrix maximally_mixed(int dim);
  /// |psi><psi| for a normalized vector.
  static DensityMatrix pure(const ComplexVector& psi);
  /// Wraps entries produced by an invariant-preserving map without
  /// re-running the eigenvalue check. Callers own the guarantee.
  static DensityMatrix unchecked(ComplexMatrix entries);

  int dim() const { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }

  /// Bloch vector (Tr(rho sigma_x), Tr(rho sigma_y), Tr(rho sigma_z)); qubits only.
  Vec3 bloch() const;

 private:
  struct NoCheck {};
  DensityMatrix(ComplexMatrix entries, NoCheck) : m_(std::move(entries)) {}
  ComplexMatrix m_;
};

/// d x d unitary within kStructuralTol.
class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(ComplexMatrix entries);
  static UnitaryMatrix identity(int dim);
  static UnitaryMatrix unchecked(ComplexMatrix entries);

  int dim() const { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }

 private:
  struct NoCheck {};
  UnitaryMatrix(ComplexMatrix entries, NoCheck) : m_(std::move(entries)) {}
  ComplexMatrix m_;
};

// Pauli matrices and r.sigma.
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
ComplexMatrix pauli_dot(const Vec3& r);

/// Kronecker product a (x) b, with a's index as the more significant one.
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// (I + v.sigma) / 2.
DensityMatrix density_from_bloch(const BlochVector& v);

/// Tr(rho^2).
double purity(const DensityMatrix& rho);

/// Tr(rho_a rho_b). Throws InvalidInput on dimension mismatch.
double overlap(const DensityMatrix& a, const DensityMatrix& b);

/// Permutation operator on C^d (x) C^d: V |i>|j> = |j>|i>, basis index i*d + j.
ComplexMatrix swap_operator(int d);

/// Tr[(rho_a - rho_b)^2], evaluated as P_a + P_b - 2 Tr(rho_a rho_b).
double delta_squared_trace(const DensityMatrix& a, const DensityMatrix& b);

/// exp(i delta r.sigma) = cos(delta |r|) I + i sin(delta |r|) (r/|r|).sigma.
/// The axis need not be unit length; a zero axis is rejected.
UnitaryMatrix qubit_rotation(const Vec3& axis, double delta);

/// U rho U^dagger.
DensityMatrix evolve(const DensityMatrix& rho, const UnitaryMatrix& u);

}  // namespace swapdrift
