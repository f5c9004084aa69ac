#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gme/states.hpp"

namespace gme {

class DiagonalMetric;

/// Pauli slot values of a multi-index: 0 = identity, 1 = x, 2 = y, 3 = z.
using MultiIndex = std::vector<int>;

/// Number of components 4^n.
std::size_t tensor_size(int n);
/// Base-4 linearization with the first qubit most significant.
std::size_t linear_index(std::span<const int> mu);
MultiIndex multi_index(std::size_t linear, int n);
/// Parses labels such as "xyz0" or "1230" into a multi-index.
MultiIndex parse_multi_index(const std::string& label);

/// Extended correlation tensor T_mu = Tr(rho sigma_mu1 x ... x sigma_mun),
/// stored densely.
class CorrelationTensor {
 public:
  /// Validates T_{0...0} = 1 within 1e-12 and |T_mu| <= 1 + 1e-10.
  CorrelationTensor(int n_qubits, std::vector<double> components);

  int n_qubits() const noexcept { return n_qubits_; }
  std::size_t size() const noexcept { return components_.size(); }
  std::span<const double> components() const noexcept { return components_; }

  double operator[](std::size_t linear) const { return components_[linear]; }
  double at(std::span<const int> mu) const;
  double at(std::initializer_list<int> mu) const;
  double at(const std::string& label) const { return at(parse_multi_index(label)); }

 private:
  friend class TensorWorkspace;
  struct Unchecked {};
  CorrelationTensor(Unchecked, int n_qubits, std::vector<double> components)
      : n_qubits_(n_qubits), components_(std::move(components)) {}

  int n_qubits_;
  std::vector<double> components_;
};

/// One proper rotation per qubit, acting on the Latin slots of a tensor.
class LocalFrame {
 public:
  /// Throws InvalidArgument unless every matrix is orthogonal with det +1
  /// (tolerance 1e-10).
  explicit LocalFrame(std::vector<Eigen::Matrix3d> rotations);
  static LocalFrame identity(int n);

  int n_qubits() const noexcept { return static_cast<int>(rotations_.size()); }
  const Eigen::Matrix3d& rotation(int qubit) const { return rotations_.at(qubit); }
  const std::vector<Eigen::Matrix3d>& rotations() const noexcept { return rotations_; }

  /// Frame equivalent to applying `first`, then `then`.
  static LocalFrame compose(const LocalFrame& then, const LocalFrame& first);

 private:
  std::vector<Eigen::Matrix3d> rotations_;
};

bool is_proper_rotation(const Eigen::Matrix3d& r, double tol = 1e-10);

CorrelationTensor tensor_from_density(const DensityMatrix& rho);
/// rho = 2^-n sum_mu T_mu sigma_mu; throws NotAState if the result is not a
/// density matrix.
DensityMatrix density_from_tensor(const CorrelationTensor& t);

/// sum_mu coeffs[mu] sigma_mu1 x ... x sigma_mun as a 2^n x 2^n matrix.
Eigen::MatrixXcd pauli_operator_sum(int n, std::span<const double> coeffs);

double inner_product_g(const CorrelationTensor& x, const CorrelationTensor& y,
                       const DiagonalMetric& g);
double g_norm_sq(const CorrelationTensor& t, const DiagonalMetric& g);

/// T'_{..a..} = sum_b R_ab T_{..b..} on each Latin slot; identity slots are
/// untouched.
CorrelationTensor rotate_local_frames(const CorrelationTensor& t, const LocalFrame& frame);

/// Mutable scratch tensor for hot loops (optimizer objectives). Rotations are
/// applied in place without revalidating the tensor invariants.
class TensorWorkspace {
 public:
  explicit TensorWorkspace(const CorrelationTensor& base);

  void reset();
  void copy_from(const TensorWorkspace& other);
  void rotate_qubit(int qubit, const Eigen::Matrix3d& r);
  const CorrelationTensor& tensor() const noexcept { return work_; }

 private:
  const CorrelationTensor* base_;
  CorrelationTensor work_;
};

/// In-place Latin-slot rotation of one qubit on a raw component array.
void rotate_qubit_inplace(std::span<double> components, int n, int qubit,
                          const Eigen::Matrix3d& r);

}  // namespace gme
