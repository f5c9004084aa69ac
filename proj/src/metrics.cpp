#include "gme/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "gme/corrtensor.hpp"
#include "gme/errors.hpp"

namespace gme {
namespace {

// Appearance test of GHZ_alpha tensor components; the values themselves live
// in the state, this only fixes the index pattern.
enum class GhzSlotPattern { kNone, kXY, kZEven, kZOdd };

GhzSlotPattern classify(const MultiIndex& mu) {
  int n_x = 0, n_y = 0, n_z = 0, n_0 = 0;
  for (int m : mu) {
    n_0 += m == 0;
    n_x += m == 1;
    n_y += m == 2;
    n_z += m == 3;
  }
  if (n_0 == 0 && n_z == 0 && n_y % 2 == 0) return GhzSlotPattern::kXY;
  if (n_x == 0 && n_y == 0 && n_z > 0) {
    return n_z % 2 == 0 ? GhzSlotPattern::kZEven : GhzSlotPattern::kZOdd;
  }
  return GhzSlotPattern::kNone;
}

}  // namespace

DiagonalMetric::DiagonalMetric(int n_qubits, std::vector<double> weights)
    : n_qubits_(n_qubits), weights_(std::move(weights)) {
  if (weights_.size() != tensor_size(n_qubits_)) {
    throw InvalidArgument("DiagonalMetric: weight count is not 4^n");
  }
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw InvalidArgument("DiagonalMetric: weights must be finite and nonnegative");
    }
  }
}

std::size_t DiagonalMetric::nonzero_count() const {
  return static_cast<std::size_t>(
      std::count_if(weights_.begin(), weights_.end(), [](double w) { return w != 0.0; }));
}

DiagonalMetric standard_full_correlation_metric(int n) {
  const std::size_t size = tensor_size(n);
  std::vector<double> w(size, 0.0);
  for (std::size_t i = 0; i < size; ++i) {
    const MultiIndex mu = multi_index(i, n);
    if (std::none_of(mu.begin(), mu.end(), [](int m) { return m == 0; })) w[i] = 1.0;
  }
  return DiagonalMetric(n, std::move(w));
}

DiagonalMetric modified_metric_3q(std::array<int, 2> pair) {
  auto [a, b] = pair;
  if (a < 0 || a > 2 || b < 0 || b > 2 || a == b) {
    throw InvalidArgument("modified_metric_3q: pair must name two distinct qubits of three");
  }
  const int rest = 3 - a - b;
  DiagonalMetric base = standard_full_correlation_metric(3);
  std::vector<double> w(base.weights().begin(), base.weights().end());
  for (int l = 1; l <= 3; ++l) {
    std::array<int, 3> mu{};
    mu[static_cast<std::size_t>(a)] = 3;
    mu[static_cast<std::size_t>(b)] = 3;
    mu[static_cast<std::size_t>(rest)] = l;
    w[linear_index(mu)] = 0.0;
  }
  return DiagonalMetric(3, std::move(w));
}

DiagonalMetric ghz_metric(int n) { return generalized_ghz_metric(n, std::numbers::pi / 4.0); }

DiagonalMetric generalized_ghz_metric(int n, double alpha) {
  if (n < 2) throw InvalidArgument("ghz metric needs n >= 2");
  if (!(alpha >= 0.0 && alpha <= std::numbers::pi / 4.0)) {
    throw InvalidArgument("generalized_ghz_metric: alpha outside [0, pi/4]");
  }
  // Support thresholds: sin 2a vanishes only at 0, cos 2a only at pi/4.
  const bool has_xy = std::sin(2.0 * alpha) > 1e-12;
  const bool has_odd_z = std::cos(2.0 * alpha) > 1e-12;
  const std::size_t size = tensor_size(n);
  std::vector<double> w(size, 0.0);
  for (std::size_t i = 1; i < size; ++i) {
    switch (classify(multi_index(i, n))) {
      case GhzSlotPattern::kXY: w[i] = has_xy ? 1.0 : 0.0; break;
      case GhzSlotPattern::kZEven: w[i] = 1.0; break;
      case GhzSlotPattern::kZOdd: w[i] = has_odd_z ? 1.0 : 0.0; break;
      case GhzSlotPattern::kNone: break;
    }
  }
  return DiagonalMetric(n, std::move(w));
}

DiagonalMetric ghz_xy_metric_4q() {
  std::vector<double> w(tensor_size(4), 0.0);
  for (const char* label : {"1111", "1122", "1221", "2211", "1212", "2121", "2112", "2222"}) {
    w[linear_index(parse_multi_index(label))] = 1.0;
  }
  return DiagonalMetric(4, std::move(w));
}

DiagonalMetric metric_by_name(const std::string& name, int n, std::array<int, 2> pair) {
  if (name == "standard") return standard_full_correlation_metric(n);
  if (name == "ghz") return ghz_metric(n);
  if (name == "ghz-xy") {
    if (n != 4) throw InvalidArgument("ghz-xy metric is defined for 4 qubits");
    return ghz_xy_metric_4q();
  }
  if (name == "modified") {
    if (n != 3) throw InvalidArgument("modified metric is defined for 3 qubits");
    return modified_metric_3q(pair);
  }
  throw InvalidArgument("unknown metric '" + name + "'");
}

}  // namespace gme
