#pragma once

// States of two and three qubits.
//
// Qubit ordering follows the Kronecker convention: qubit 0 is the leftmost
// ket label and the most significant bit of the basis index, so |01> is e_1
// and |100> is e_4. Angles are radians.

#include <complex>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "bellconc/rng.hpp"

namespace bellconc {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Vec3 = Eigen::Vector3d;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kPsdTolerance = 1e-10;

class LocalUnitary;

class PureState {
public:
  /// Validates dimension 2^n (n in {2,3}) and unit norm within 1e-12.
  explicit PureState(CVector amplitudes);

  int n_qubits() const noexcept { return n_qubits_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
  const CVector& amplitudes() const noexcept { return amplitudes_; }

private:
  int n_qubits_;
  CVector amplitudes_;
};

class DensityMatrix {
public:
  /// Validates Hermiticity and unit trace within 1e-12 and positivity with
  /// smallest eigenvalue >= -1e-10. Eigenvalues in [-1e-10, 0) are projected
  /// to zero; anything more negative is rejected.
  explicit DensityMatrix(const CMatrix& entries);

  static DensityMatrix from_pure(const PureState& psi);

  int n_qubits() const noexcept { return n_qubits_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(entries_.rows()); }
  const CMatrix& matrix() const noexcept { return entries_; }
  Complex operator()(Eigen::Index row, Eigen::Index col) const { return entries_(row, col); }

private:
  struct Trusted {};
  DensityMatrix(CMatrix entries, int n_qubits, Trusted);
  friend DensityMatrix partial_trace(const DensityMatrix&, std::span<const int>);
  friend DensityMatrix apply_local_unitaries(const DensityMatrix&, std::span<const LocalUnitary>);

  int n_qubits_;
  CMatrix entries_;
};

/// 2x2 unitary acting on one qubit.
class LocalUnitary {
public:
  explicit LocalUnitary(const Eigen::Matrix2cd& u);
  static LocalUnitary identity() { return LocalUnitary(Eigen::Matrix2cd::Identity()); }
  const Eigen::Matrix2cd& matrix() const noexcept { return u_; }

private:
  Eigen::Matrix2cd u_;
};

// --- state families -------------------------------------------------------

/// cos(theta)|0..0> + sin(theta)|1..1>, 0 < theta <= pi/4, n in {2,3}.
PureState gghz(double theta, int n_qubits);

/// v |theta><theta| + (1-v)/2^n I.
DensityMatrix werner_like(double theta, double v, int n_qubits);

/// GHZ-symmetric two-qubit state; |y| <= 1/(2 sqrt 2), |x| <= (1 + 2 sqrt2 y)/4.
DensityMatrix gsms2(double x, double y);

/// GHZ-symmetric three-qubit state; -1/(4 sqrt3) <= y <= sqrt3/4, |x| <= (1 + 4 sqrt3 y)/8.
DensityMatrix gsms3(double x, double y);

/// gamma |Phi+><Phi+| + (1-gamma) |01><01|, 2/3 <= gamma <= 1.
DensityMatrix mems(double gamma);

/// (1/2 + x)|GHZ+><GHZ+| + (1/2 - x)|GHZ-><GHZ-|, |x| <= 1/2.
DensityMatrix phn(double x, int n_qubits);

/// Computational basis state from a bit string such as "010".
PureState basis_state(std::string_view bits);

// --- algebra --------------------------------------------------------------

DensityMatrix apply_local_unitaries(const DensityMatrix& rho, std::span<const LocalUnitary> us);

/// Reduced state on the qubits listed in `keep` (non-empty strict subset).
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);

double purity(const DensityMatrix& rho);
double fidelity_pure(const DensityMatrix& rho, const PureState& psi);

/// Inverse of P = (1 + 7 v^2)/8 for three-qubit Werner-like states.
double visibility_from_purity(double p);

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const CMatrix& hermitian);

// --- sampling -------------------------------------------------------------

/// Haar-distributed element of U(2).
LocalUnitary haar_unitary(Rng& rng);

/// Uniform direction on the unit sphere (normalized standard-normal triple).
Vec3 random_bloch_vector(Rng& rng);

/// Pauli matrices, index 0 is the identity.
const Eigen::Matrix2cd& pauli(int index);

}  // namespace bellconc
