#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "gme/corrtensor.hpp"
#include "gme/frameopt.hpp"
#include "gme/states.hpp"

namespace gme::testing {

// Ginibre ensemble: A A^dagger / Tr with A of size 2^n x rank.
inline DensityMatrix random_mixed(int n, std::mt19937_64& rng, int rank) {
  std::normal_distribution<double> g;
  const int d = 1 << n;
  Eigen::MatrixXcd a(d, rank);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < rank; ++j) a(i, j) = {g(rng), g(rng)};
  Eigen::MatrixXcd m = a * a.adjoint();
  m /= m.trace().real();
  m = 0.5 * (m + m.adjoint()).eval();
  return DensityMatrix(n, std::move(m));
}

inline PureState random_pure(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd v(1 << n);
  for (auto& x : v) x = {g(rng), g(rng)};
  v.normalize();
  return PureState(n, std::move(v));
}

inline LocalFrame random_frame(int n, std::mt19937_64& rng) {
  std::vector<Eigen::Matrix3d> r;
  for (int q = 0; q < n; ++q) r.push_back(random_rotation(rng));
  return LocalFrame(std::move(r));
}

inline Eigen::Matrix2cd pauli(int k) {
  using C = std::complex<double>;
  Eigen::Matrix2cd m;
  switch (k) {
    case 0: m << 1, 0, 0, 1; break;
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, C(0, -1), C(0, 1), 0; break;
    default: m << 1, 0, 0, -1; break;
  }
  return m;
}

// Explicit Kronecker product sigma_mu1 x ... x sigma_mun, first factor most
// significant.
inline Eigen::MatrixXcd pauli_string(const std::vector<int>& mu) {
  Eigen::MatrixXcd acc = Eigen::MatrixXcd::Identity(1, 1);
  for (int k : mu) {
    const Eigen::Matrix2cd p = pauli(k);
    Eigen::MatrixXcd next(acc.rows() * 2, acc.cols() * 2);
    for (int i = 0; i < acc.rows(); ++i)
      for (int j = 0; j < acc.cols(); ++j) next.block(2 * i, 2 * j, 2, 2) = acc(i, j) * p;
    acc = std::move(next);
  }
  return acc;
}

// Reference tensor by direct traces against explicit Pauli strings.
inline std::vector<double> brute_tensor(const Eigen::MatrixXcd& rho, int n) {
  std::vector<double> out(tensor_size(n));
  for (std::size_t k = 0; k < out.size(); ++k) {
    out[k] = (rho * pauli_string(multi_index(k, n))).trace().real();
  }
  return out;
}

inline double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace gme::testing
