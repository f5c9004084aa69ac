#include "gme/states.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "gme/errors.hpp"

namespace gme {
namespace {

void check_qubit_count(int n, const char* where) {
  if (n < 1 || n > kMaxQubits) {
    std::ostringstream os;
    os << where << ": qubit count " << n << " outside [1, " << kMaxQubits << "]";
    throw InvalidArgument(os.str());
  }
}

Eigen::Index dim_of(int n) { return Eigen::Index{1} << n; }

}  // namespace

PureState::PureState(int n_qubits, Eigen::VectorXcd amplitudes)
    : n_qubits_(n_qubits), amplitudes_(std::move(amplitudes)) {
  check_qubit_count(n_qubits_, "PureState");
  if (amplitudes_.size() != dim_of(n_qubits_)) {
    throw InvalidArgument("PureState: amplitude vector length is not 2^n");
  }
  const double norm_sq = amplitudes_.squaredNorm();
  if (!std::isfinite(norm_sq) || std::abs(norm_sq - 1.0) > kNormTol) {
    std::ostringstream os;
    os.precision(17);
    os << "PureState: squared norm " << norm_sq << " differs from 1";
    throw InvalidArgument(os.str());
  }
  for (Eigen::Index i = 0; i < amplitudes_.size(); ++i) {
    const double mag = std::abs(amplitudes_(i));
    if (mag > 0.0) {
      amplitudes_ *= std::conj(amplitudes_(i)) / mag;
      amplitudes_(i) = Complex(mag, 0.0);
      break;
    }
  }
}

void check_density_invariants(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols()) throw InvalidArgument("density matrix is not square");
  if (!m.allFinite()) throw NotAState("density matrix has non-finite entries");
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  std::ostringstream os;
  os.precision(17);
  if (herm > kHermitianTol) {
    os << "not Hermitian: max |rho - rho^dagger| = " << herm;
    throw NotAState(os.str());
  }
  const Complex tr = m.trace();
  if (std::abs(tr - Complex(1.0, 0.0)) > kTraceTol) {
    os << "trace = " << tr.real() << (tr.imag() < 0 ? "-" : "+") << std::abs(tr.imag())
       << "i, expected 1";
    throw NotAState(os.str());
  }
  const Eigen::MatrixXcd h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < -kPsdTol) {
    os << "not positive semidefinite: minimum eigenvalue = " << min_eig;
    throw NotAState(os.str());
  }
}

DensityMatrix::DensityMatrix(int n_qubits, Eigen::MatrixXcd entries)
    : n_qubits_(n_qubits), entries_(std::move(entries)) {
  check_qubit_count(n_qubits_, "DensityMatrix");
  if (entries_.rows() != dim_of(n_qubits_) || entries_.cols() != dim_of(n_qubits_)) {
    throw InvalidArgument("DensityMatrix: matrix is not 2^n x 2^n");
  }
  check_density_invariants(entries_);
}

double DensityMatrix::purity() const { return (entries_ * entries_).trace().real(); }

PureState make_ghz(int n) {
  if (n < 2) throw InvalidArgument("make_ghz: n must be >= 2");
  return make_generalized_ghz(n, std::numbers::pi / 4.0);
}

PureState make_generalized_ghz(int n, double alpha) {
  if (n < 2) throw InvalidArgument("make_generalized_ghz: n must be >= 2");
  check_qubit_count(n, "make_generalized_ghz");
  if (!(alpha >= 0.0 && alpha <= std::numbers::pi / 4.0)) {
    throw InvalidArgument("make_generalized_ghz: alpha outside [0, pi/4]");
  }
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(dim_of(n));
  if (alpha == std::numbers::pi / 4.0) {
    amps(0) = amps(dim_of(n) - 1) = 1.0 / std::numbers::sqrt2;
  } else {
    amps(0) = std::cos(alpha);
    amps(dim_of(n) - 1) = std::sin(alpha);
  }
  return PureState(n, std::move(amps));
}

PureState make_w3() {
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(8);
  const double a = 1.0 / std::sqrt(3.0);
  amps(1) = amps(2) = amps(4) = a;
  return PureState(3, std::move(amps));
}

PureState make_product_basis_state(int n, unsigned long long basis_index) {
  check_qubit_count(n, "make_product_basis_state");
  if (basis_index >= static_cast<unsigned long long>(dim_of(n))) {
    throw InvalidArgument("make_product_basis_state: index out of range");
  }
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(dim_of(n));
  amps(static_cast<Eigen::Index>(basis_index)) = 1.0;
  return PureState(n, std::move(amps));
}

DensityMatrix density_from_pure(const PureState& psi) {
  const auto& a = psi.amplitudes();
  Eigen::MatrixXcd m = a * a.adjoint();
  // Exact Hermiticity regardless of rounding in the outer product.
  m = 0.5 * (m + m.adjoint()).eval();
  return DensityMatrix(psi.n_qubits(), std::move(m));
}

DensityMatrix mix_white_noise(const DensityMatrix& rho, double v) {
  if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("mix_white_noise: v outside [0, 1]");
  const Eigen::Index d = rho.dim();
  Eigen::MatrixXcd m = v * rho.matrix();
  m.diagonal().array() += (1.0 - v) / static_cast<double>(d);
  return DensityMatrix(rho.n_qubits(), std::move(m));
}

DensityMatrix tensor_product(std::span<const DensityMatrix> parts) {
  if (parts.empty()) throw InvalidArgument("tensor_product: empty list");
  int n = 0;
  for (const auto& p : parts) n += p.n_qubits();
  check_qubit_count(n, "tensor_product");
  Eigen::MatrixXcd acc = parts.front().matrix();
  for (std::size_t k = 1; k < parts.size(); ++k) {
    const Eigen::MatrixXcd& b = parts[k].matrix();
    Eigen::MatrixXcd next(acc.rows() * b.rows(), acc.cols() * b.cols());
    for (Eigen::Index i = 0; i < acc.rows(); ++i) {
      for (Eigen::Index j = 0; j < acc.cols(); ++j) {
        next.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = acc(i, j) * b;
      }
    }
    acc = std::move(next);
  }
  return DensityMatrix(n, std::move(acc));
}

DensityMatrix maximally_mixed(int n) {
  check_qubit_count(n, "maximally_mixed");
  const Eigen::Index d = dim_of(n);
  return DensityMatrix(n, Eigen::MatrixXcd::Identity(d, d) / static_cast<double>(d));
}

DensityMatrix partial_trace(const DensityMatrix& rho, std::span<const int> keep) {
  const int n = rho.n_qubits();
  std::vector<int> kept(keep.begin(), keep.end());
  std::sort(kept.begin(), kept.end());
  if (kept.empty() || std::adjacent_find(kept.begin(), kept.end()) != kept.end() ||
      kept.front() < 0 || kept.back() >= n) {
    throw InvalidArgument("partial_trace: invalid qubit selection");
  }
  std::vector<int> traced;
  for (int q = 0; q < n; ++q) {
    if (!std::binary_search(kept.begin(), kept.end(), q)) traced.push_back(q);
  }
  // Qubit q (0-based, qubit 1 first) sits at bit position n-1-q.
  auto scatter = [n](unsigned long long local, const std::vector<int>& qubits) {
    unsigned long long full = 0;
    const int k = static_cast<int>(qubits.size());
    for (int j = 0; j < k; ++j) {
      if ((local >> (k - 1 - j)) & 1ULL) full |= 1ULL << (n - 1 - qubits[j]);
    }
    return full;
  };
  const int k = static_cast<int>(kept.size());
  const unsigned long long dk = 1ULL << k;
  const unsigned long long dt = 1ULL << traced.size();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dk),
                                                static_cast<Eigen::Index>(dk));
  for (unsigned long long a = 0; a < dk; ++a) {
    const auto fa = scatter(a, kept);
    for (unsigned long long b = 0; b < dk; ++b) {
      const auto fb = scatter(b, kept);
      Complex s{};
      for (unsigned long long t = 0; t < dt; ++t) {
        const auto ft = scatter(t, traced);
        s += rho(static_cast<Eigen::Index>(fa | ft), static_cast<Eigen::Index>(fb | ft));
      }
      out(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) = s;
    }
  }
  return DensityMatrix(k, std::move(out));
}

}  // namespace gme
