#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

namespace gme {

/// Nonnegative weight per multi-index; (X, Y)_G = sum_mu X_mu G_mu Y_mu.
class DiagonalMetric {
 public:
  DiagonalMetric(int n_qubits, std::vector<double> weights);

  int n_qubits() const noexcept { return n_qubits_; }
  std::span<const double> weights() const noexcept { return weights_; }
  double weight(std::size_t linear) const { return weights_.at(linear); }
  std::size_t nonzero_count() const;

 private:
  int n_qubits_;
  std::vector<double> weights_;
};

/// Unit weight on every all-Latin index (no identity slot).
DiagonalMetric standard_full_correlation_metric(int n);

/// Three-qubit full-correlation metric with the three components that carry
/// z,z on `pair` (0-based, distinct) and a Latin index on the remaining qubit
/// removed.
DiagonalMetric modified_metric_3q(std::array<int, 2> pair);

/// Unit weight where the n-qubit GHZ tensor is +-1, zero at 0...0.
DiagonalMetric ghz_metric(int n);

/// Unit weight on the support of the cos(a)|0..0> + sin(a)|1..1> tensor,
/// zero at 0...0. Coincides with ghz_metric at alpha = pi/4.
DiagonalMetric generalized_ghz_metric(int n, double alpha);

/// Four-qubit metric on the eight x/y components 1111, 1122, 1221, 2211,
/// 1212, 2121, 2112, 2222.
DiagonalMetric ghz_xy_metric_4q();

/// Named lookup used by the CLI: standard | ghz | ghz-xy | modified (the
/// modified metric takes the pair from `pair`).
DiagonalMetric metric_by_name(const std::string& name, int n, std::array<int, 2> pair = {0, 1});

}  // namespace gme
