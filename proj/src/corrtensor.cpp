#include "gme/corrtensor.hpp"

#include <bit>
#include <cmath>
#include <sstream>

#include "gme/errors.hpp"
#include "gme/metrics.hpp"

namespace gme {
namespace {

constexpr double kImagDiscard = 1e-8;
constexpr double kComponentTol = 1e-10;
constexpr double kIdentityTol = 1e-12;

struct PauliMasks {
  unsigned long long flip = 0;   // x or y: bit flip
  unsigned long long phase = 0;  // y or z: sign (-1)^bit
  int n_y = 0;
};

PauliMasks masks_for(std::size_t linear, int n) {
  PauliMasks m;
  for (int q = n - 1; q >= 0; --q) {
    const int p = static_cast<int>(linear & 3U);
    linear >>= 2;
    const unsigned long long bit = 1ULL << (n - 1 - q);
    if (p == 1 || p == 2) m.flip |= bit;
    if (p == 2 || p == 3) m.phase |= bit;
    if (p == 2) ++m.n_y;
  }
  return m;
}

// (-i)^k
Complex minus_i_pow(int k) {
  switch (k & 3) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, -1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, 1.0};
  }
}

// Entry sigma_mu(row, row ^ flip).
Complex pauli_entry(const PauliMasks& m, unsigned long long row) {
  const Complex base = minus_i_pow(m.n_y);
  return (std::popcount(row & m.phase) & 1) ? -base : base;
}

void check_n(int n, const char* where) {
  if (n < 1 || n > kMaxQubits) {
    std::ostringstream os;
    os << where << ": qubit count " << n << " outside [1, " << kMaxQubits << "]";
    throw InvalidArgument(os.str());
  }
}

}  // namespace

std::size_t tensor_size(int n) {
  check_n(n, "tensor_size");
  return std::size_t{1} << (2 * n);
}

std::size_t linear_index(std::span<const int> mu) {
  std::size_t idx = 0;
  for (int m : mu) {
    if (m < 0 || m > 3) throw InvalidArgument("multi-index slot outside {0,1,2,3}");
    idx = idx * 4 + static_cast<std::size_t>(m);
  }
  return idx;
}

MultiIndex multi_index(std::size_t linear, int n) {
  MultiIndex mu(static_cast<std::size_t>(n));
  for (int q = n - 1; q >= 0; --q) {
    mu[static_cast<std::size_t>(q)] = static_cast<int>(linear & 3U);
    linear >>= 2;
  }
  return mu;
}

MultiIndex parse_multi_index(const std::string& label) {
  MultiIndex mu;
  mu.reserve(label.size());
  for (char ch : label) {
    switch (ch) {
      case '0': case 'i': case 'I': mu.push_back(0); break;
      case '1': case 'x': case 'X': mu.push_back(1); break;
      case '2': case 'y': case 'Y': mu.push_back(2); break;
      case '3': case 'z': case 'Z': mu.push_back(3); break;
      default: throw InvalidArgument("bad multi-index label '" + label + "'");
    }
  }
  return mu;
}

CorrelationTensor::CorrelationTensor(int n_qubits, std::vector<double> components)
    : n_qubits_(n_qubits), components_(std::move(components)) {
  if (components_.size() != tensor_size(n_qubits_)) {
    throw InvalidArgument("CorrelationTensor: component count is not 4^n");
  }
  if (std::abs(components_[0] - 1.0) > kIdentityTol) {
    throw InvalidArgument("CorrelationTensor: T_{0...0} must equal 1");
  }
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (!std::isfinite(components_[i]) || std::abs(components_[i]) > 1.0 + kComponentTol) {
      std::ostringstream os;
      os.precision(17);
      os << "CorrelationTensor: component " << i << " = " << components_[i]
         << " outside [-1, 1]";
      throw InvalidArgument(os.str());
    }
  }
}

double CorrelationTensor::at(std::span<const int> mu) const {
  if (static_cast<int>(mu.size()) != n_qubits_) {
    throw InvalidArgument("CorrelationTensor::at: multi-index length differs from n");
  }
  return components_[linear_index(mu)];
}

double CorrelationTensor::at(std::initializer_list<int> mu) const {
  return at(std::span<const int>(mu.begin(), mu.size()));
}

bool is_proper_rotation(const Eigen::Matrix3d& r, double tol) {
  if (!r.allFinite()) return false;
  const double orth = (r.transpose() * r - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff();
  return orth <= tol && std::abs(r.determinant() - 1.0) <= tol;
}

LocalFrame::LocalFrame(std::vector<Eigen::Matrix3d> rotations)
    : rotations_(std::move(rotations)) {
  for (std::size_t q = 0; q < rotations_.size(); ++q) {
    if (!is_proper_rotation(rotations_[q])) {
      throw InvalidArgument("LocalFrame: matrix for qubit " + std::to_string(q + 1) +
                            " is not a proper rotation");
    }
  }
}

LocalFrame LocalFrame::identity(int n) {
  return LocalFrame(std::vector<Eigen::Matrix3d>(static_cast<std::size_t>(n),
                                                 Eigen::Matrix3d::Identity()));
}

LocalFrame LocalFrame::compose(const LocalFrame& then, const LocalFrame& first) {
  if (then.n_qubits() != first.n_qubits()) {
    throw InvalidArgument("LocalFrame::compose: qubit counts differ");
  }
  std::vector<Eigen::Matrix3d> out;
  out.reserve(first.rotations_.size());
  for (std::size_t q = 0; q < first.rotations_.size(); ++q) {
    out.push_back(then.rotations_[q] * first.rotations_[q]);
  }
  return LocalFrame(std::move(out));
}

CorrelationTensor tensor_from_density(const DensityMatrix& rho) {
  const int n = rho.n_qubits();
  const std::size_t size = tensor_size(n);
  const unsigned long long dim = 1ULL << n;
  const Eigen::MatrixXcd& m = rho.matrix();
  std::vector<double> comps(size);
  for (std::size_t mu = 0; mu < size; ++mu) {
    const PauliMasks pm = masks_for(mu, n);
    Complex tr{};
    // Tr(rho sigma) = sum_c rho(c ^ flip, c) * sigma(c, c ^ flip)
    for (unsigned long long c = 0; c < dim; ++c) {
      tr += m(static_cast<Eigen::Index>(c ^ pm.flip), static_cast<Eigen::Index>(c)) *
            pauli_entry(pm, c);
    }
    if (std::abs(tr.imag()) > kImagDiscard) {
      std::ostringstream os;
      os.precision(17);
      os << "tensor_from_density: trace for component " << mu << " has imaginary part "
         << tr.imag();
      throw NumericInconsistency(os.str());
    }
    comps[mu] = tr.real();
  }
  comps[0] = 1.0;
  return CorrelationTensor(n, std::move(comps));
}

Eigen::MatrixXcd pauli_operator_sum(int n, std::span<const double> coeffs) {
  if (coeffs.size() != tensor_size(n)) {
    throw InvalidArgument("pauli_operator_sum: coefficient count is not 4^n");
  }
  const unsigned long long dim = 1ULL << n;
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim));
  for (std::size_t mu = 0; mu < coeffs.size(); ++mu) {
    const double coeff = coeffs[mu];
    if (coeff == 0.0) continue;
    const PauliMasks pm = masks_for(mu, n);
    for (unsigned long long r = 0; r < dim; ++r) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(r ^ pm.flip)) +=
          coeff * pauli_entry(pm, r);
    }
  }
  return m;
}

DensityMatrix density_from_tensor(const CorrelationTensor& t) {
  const int n = t.n_qubits();
  const double scale = 1.0 / static_cast<double>(1ULL << n);
  std::vector<double> scaled(t.components().begin(), t.components().end());
  for (double& c : scaled) c *= scale;
  return DensityMatrix(n, pauli_operator_sum(n, scaled));
}

double inner_product_g(const CorrelationTensor& x, const CorrelationTensor& y,
                       const DiagonalMetric& g) {
  if (x.n_qubits() != y.n_qubits() || x.n_qubits() != g.n_qubits()) {
    throw InvalidArgument("inner_product_g: qubit counts differ");
  }
  const auto w = g.weights();
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (w[i] != 0.0) s += x[i] * w[i] * y[i];
  }
  return s;
}

double g_norm_sq(const CorrelationTensor& t, const DiagonalMetric& g) {
  return inner_product_g(t, t, g);
}

void rotate_qubit_inplace(std::span<double> c, int n, int qubit, const Eigen::Matrix3d& r) {
  const std::size_t stride = std::size_t{1} << (2 * (n - 1 - qubit));
  const std::size_t outer = std::size_t{1} << (2 * qubit);
  for (std::size_t hi = 0; hi < outer; ++hi) {
    const std::size_t block = hi * 4 * stride;
    for (std::size_t lo = 0; lo < stride; ++lo) {
      const std::size_t base = block + lo;
      const double v1 = c[base + stride];
      const double v2 = c[base + 2 * stride];
      const double v3 = c[base + 3 * stride];
      c[base + stride] = r(0, 0) * v1 + r(0, 1) * v2 + r(0, 2) * v3;
      c[base + 2 * stride] = r(1, 0) * v1 + r(1, 1) * v2 + r(1, 2) * v3;
      c[base + 3 * stride] = r(2, 0) * v1 + r(2, 1) * v2 + r(2, 2) * v3;
    }
  }
}

CorrelationTensor rotate_local_frames(const CorrelationTensor& t, const LocalFrame& frame) {
  if (frame.n_qubits() != t.n_qubits()) {
    throw InvalidArgument("rotate_local_frames: frame has wrong number of rotations");
  }
  std::vector<double> comps(t.components().begin(), t.components().end());
  for (int q = 0; q < t.n_qubits(); ++q) {
    rotate_qubit_inplace(comps, t.n_qubits(), q, frame.rotation(q));
  }
  return CorrelationTensor(t.n_qubits(), std::move(comps));
}

TensorWorkspace::TensorWorkspace(const CorrelationTensor& base)
    : base_(&base),
      work_(CorrelationTensor::Unchecked{}, base.n_qubits(),
            std::vector<double>(base.components().begin(), base.components().end())) {}

void TensorWorkspace::reset() {
  std::copy(base_->components_.begin(), base_->components_.end(), work_.components_.begin());
}

void TensorWorkspace::copy_from(const TensorWorkspace& other) {
  std::copy(other.work_.components_.begin(), other.work_.components_.end(),
            work_.components_.begin());
}

void TensorWorkspace::rotate_qubit(int qubit, const Eigen::Matrix3d& r) {
  rotate_qubit_inplace(work_.components_, work_.n_qubits_, qubit, r);
}

}  // namespace gme
