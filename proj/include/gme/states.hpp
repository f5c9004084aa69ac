#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace gme {

using Complex = std::complex<double>;

inline constexpr int kMaxQubits = 8;
inline constexpr double kNormTol = 1e-12;
inline constexpr double kHermitianTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;

/// Normalized n-qubit state vector in the computational basis. Qubit 1 is the
/// most significant bit of the basis index. The first nonzero amplitude is
/// rotated to be real and nonnegative on construction.
class PureState {
 public:
  /// Throws InvalidArgument if the length is not 2^n or the norm is off by
  /// more than 1e-12.
  PureState(int n_qubits, Eigen::VectorXcd amplitudes);

  int n_qubits() const noexcept { return n_qubits_; }
  const Eigen::VectorXcd& amplitudes() const noexcept { return amplitudes_; }
  Complex amplitude(Eigen::Index basis_index) const { return amplitudes_(basis_index); }

 private:
  int n_qubits_;
  Eigen::VectorXcd amplitudes_;
};

/// Hermitian, unit-trace, positive semidefinite 2^n x 2^n matrix.
class DensityMatrix {
 public:
  /// Validates all invariants; throws NotAState naming the worst offending
  /// quantity, or InvalidArgument on a shape mismatch.
  DensityMatrix(int n_qubits, Eigen::MatrixXcd entries);

  int n_qubits() const noexcept { return n_qubits_; }
  Eigen::Index dim() const noexcept { return entries_.rows(); }
  const Eigen::MatrixXcd& matrix() const noexcept { return entries_; }
  Complex operator()(Eigen::Index r, Eigen::Index c) const { return entries_(r, c); }

  double purity() const;

 private:
  int n_qubits_;
  Eigen::MatrixXcd entries_;
};

/// Raises NotAState when `m` violates Hermiticity, trace or PSD tolerances.
void check_density_invariants(const Eigen::MatrixXcd& m);

PureState make_ghz(int n);
/// cos(alpha)|0...0> + sin(alpha)|1...1>, alpha in [0, pi/4].
PureState make_generalized_ghz(int n, double alpha);
PureState make_w3();
PureState make_product_basis_state(int n, unsigned long long basis_index);

DensityMatrix density_from_pure(const PureState& psi);
/// v * rho + (1 - v) * identity / 2^n.
DensityMatrix mix_white_noise(const DensityMatrix& rho, double v);
/// Kronecker product in the given order.
DensityMatrix tensor_product(std::span<const DensityMatrix> parts);
DensityMatrix maximally_mixed(int n);

/// Reduced state on `keep` (0-based qubit labels, any order; the result keeps
/// them in ascending order).
DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep);

}  // namespace gme
