#include "swapdrift/linalg.hpp"

#include "swapdrift/errors.hpp"

#include <fmt/format.h>

#include <cmath>

namespace swapdrift {
namespace {

constexpr Complex kI{0.0, 1.0};

void require_same_dim(int a, int b, const char* what) {
  if (a != b) {
    throw InvalidInput(fmt::format("{}: dimension mismatch ({} vs {})", what, a, b));
  }
}

void check_density(const ComplexMatrix& m) {
  if (m.rows() == 0 || m.rows() != m.cols()) {
    throw InvalidInput("density matrix must be square and non-empty");
  }
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kStructuralTol) {
    throw InvalidInput(fmt::format("density matrix not Hermitian (deviation {:.3e})", herm));
  }
  const Complex tr = m.trace();
  if (std::abs(tr - Complex{1.0, 0.0}) > kStructuralTol) {
    throw InvalidInput(fmt::format("density matrix trace {} != 1", tr.real()));
  }
  // Eigenvalues of the Hermitian part; the anti-Hermitian residue is below tolerance.
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  const double smallest = solver.eigenvalues().minCoeff();
  if (smallest < -kStructuralTol) {
    throw InvalidInput(fmt::format("density matrix not positive semidefinite (eigenvalue {:.3e})",
                                   smallest));
  }
}

}  // namespace

BlochVector::BlochVector(double x, double y, double z) : BlochVector(Vec3(x, y, z)) {}

BlochVector::BlochVector(const Vec3& v) : v_(v) {
  if (!v.allFinite() || v.norm() > 1.0 + 1e-12) {
    throw InvalidInput(fmt::format("Bloch vector norm {} exceeds 1", v.norm()));
  }
}

DensityMatrix::DensityMatrix(ComplexMatrix entries) : m_(std::move(entries)) { check_density(m_); }

DensityMatrix DensityMatrix::maximally_mixed(int dim) {
  if (dim < 1) throw InvalidInput("dimension must be positive");
  return DensityMatrix(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim), NoCheck{});
}

DensityMatrix DensityMatrix::pure(const ComplexVector& psi) {
  if (psi.size() == 0 || std::abs(psi.squaredNorm() - 1.0) > kStructuralTol) {
    throw InvalidInput("pure state vector must be normalized");
  }
  return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix DensityMatrix::unchecked(ComplexMatrix entries) {
  return DensityMatrix(std::move(entries), NoCheck{});
}

Vec3 DensityMatrix::bloch() const {
  if (dim() != 2) throw InvalidInput("Bloch vector is defined for qubits only");
  // rho_10 = (bx + i by) / 2.
  return Vec3(2.0 * m_(1, 0).real(), 2.0 * m_(1, 0).imag(), (m_(0, 0) - m_(1, 1)).real());
}

UnitaryMatrix::UnitaryMatrix(ComplexMatrix entries) : m_(std::move(entries)) {
  if (m_.rows() == 0 || m_.rows() != m_.cols()) {
    throw InvalidInput("unitary must be square and non-empty");
  }
  const ComplexMatrix residual =
      m_ * m_.adjoint() - ComplexMatrix::Identity(m_.rows(), m_.cols());
  const double dev = residual.cwiseAbs().maxCoeff();
  if (dev > kStructuralTol) {
    throw InvalidInput(fmt::format("matrix is not unitary (deviation {:.3e})", dev));
  }
}

UnitaryMatrix UnitaryMatrix::identity(int dim) {
  if (dim < 1) throw InvalidInput("dimension must be positive");
  return UnitaryMatrix(ComplexMatrix::Identity(dim, dim), NoCheck{});
}

UnitaryMatrix UnitaryMatrix::unchecked(ComplexMatrix entries) {
  return UnitaryMatrix(std::move(entries), NoCheck{});
}

ComplexMatrix pauli_x() {
  ComplexMatrix s(2, 2);
  s << 0.0, 1.0, 1.0, 0.0;
  return s;
}

ComplexMatrix pauli_y() {
  ComplexMatrix s(2, 2);
  s << 0.0, -kI, kI, 0.0;
  return s;
}

ComplexMatrix pauli_z() {
  ComplexMatrix s(2, 2);
  s << 1.0, 0.0, 0.0, -1.0;
  return s;
}

ComplexMatrix pauli_dot(const Vec3& r) {
  ComplexMatrix s(2, 2);
  s << r.z(), Complex(r.x(), -r.y()), Complex(r.x(), r.y()), -r.z();
  return s;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

DensityMatrix density_from_bloch(const BlochVector& v) {
  ComplexMatrix m = 0.5 * (ComplexMatrix::Identity(2, 2) + pauli_dot(v.vec()));
  return DensityMatrix(std::move(m));
}

double purity(const DensityMatrix& rho) { return rho.matrix().squaredNorm(); }

double overlap(const DensityMatrix& a, const DensityMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "overlap");
  // Tr(AB) = sum_ij A_ij B_ji; for Hermitian B this is sum_ij A_ij conj(B_ij).
  return a.matrix().cwiseProduct(b.matrix().transpose()).sum().real();
}

ComplexMatrix swap_operator(int d) {
  if (d < 2) throw InvalidInput("swap operator needs d >= 2");
  const int n = d * d;
  ComplexMatrix v = ComplexMatrix::Zero(n, n);
  for (int i = 0; i < d; ++i) {
    for (int j = 0; j < d; ++j) {
      v(j * d + i, i * d + j) = 1.0;
    }
  }
  return v;
}

double delta_squared_trace(const DensityMatrix& a, const DensityMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "delta_squared_trace");
  return purity(a) + purity(b) - 2.0 * overlap(a, b);
}

UnitaryMatrix qubit_rotation(const Vec3& axis, double delta) {
  const double len = axis.norm();
  if (!(len > 0.0) || !std::isfinite(len)) {
    throw InvalidInput("rotation axis must be nonzero and finite");
  }
  const double angle = delta * len;
  const Vec3 n = axis / len;
  ComplexMatrix u = std::cos(angle) * ComplexMatrix::Identity(2, 2) +
                    kI * std::sin(angle) * pauli_dot(n);
  return UnitaryMatrix::unchecked(std::move(u));
}

DensityMatrix evolve(const DensityMatrix& rho, const UnitaryMatrix& u) {
  require_same_dim(rho.dim(), u.dim(), "evolve");
  if (rho.dim() == 2) {
    const Eigen::Matrix2cd uu = u.matrix();
    const Eigen::Matrix2cd r = rho.matrix();
    const Eigen::Matrix2cd out = uu * r * uu.adjoint();
    return DensityMatrix::unchecked(out);
  }
  return DensityMatrix::unchecked(u.matrix() * rho.matrix() * u.matrix().adjoint());
}

}  // namespace swapdrift
