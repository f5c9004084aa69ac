#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include <doctest.h>

#include "gme/corrtensor.hpp"
#include "gme/errors.hpp"
#include "gme/metrics.hpp"

using namespace gme;

namespace {

std::set<std::string> support(const DiagonalMetric& g) {
  std::set<std::string> out;
  for (std::size_t k = 0; k < g.weights().size(); ++k) {
    if (g.weight(k) == 0.0) continue;
    std::string s;
    for (int m : multi_index(k, g.n_qubits())) s += "0xyz"[m];
    out.insert(s);
  }
  return out;
}

bool zero_one(const DiagonalMetric& g) {
  for (double w : g.weights())
    if (w != 0.0 && w != 1.0) return false;
  return true;
}

CorrelationTensor pure_tensor(const PureState& psi) { return tensor_from_density(density_from_pure(psi)); }

}  // namespace

TEST_CASE("standard full-correlation metric") {
  const DiagonalMetric g = standard_full_correlation_metric(3);
  CHECK(g.nonzero_count() == 27);
  CHECK(zero_one(g));
  CHECK(g_norm_sq(pure_tensor(make_ghz(3)), g) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(g_norm_sq(pure_tensor(make_product_basis_state(3, 0)), g) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("modified metric drops the z,z components of the chosen pair") {
  const DiagonalMetric g = modified_metric_3q({0, 1});
  CHECK(g.nonzero_count() == 24);
  CHECK(zero_one(g));
  for (const char* s : {"zzx", "zzy", "zzz"}) CHECK(support(g).count(s) == 0);
  CHECK(support(modified_metric_3q({0, 2})).count("zxz") == 0);
  CHECK(support(modified_metric_3q({1, 2})).count("yzz") == 0);
  CHECK(g_norm_sq(pure_tensor(make_ghz(3)), g) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(g_norm_sq(pure_tensor(make_product_basis_state(3, 0)), g) == 0.0);
  CHECK_THROWS_AS(modified_metric_3q({1, 1}), InvalidArgument);
  CHECK_THROWS_AS(modified_metric_3q({0, 3}), InvalidArgument);
}

TEST_CASE("ghz metric is the support of the ghz tensor without 0...0") {
  CHECK(support(ghz_metric(3)) ==
        std::set<std::string>{"xxx", "xyy", "yxy", "yyx", "zz0", "z0z", "0zz"});
  CHECK(support(ghz_metric(2)) == std::set<std::string>{"xx", "yy", "zz"});
  CHECK(ghz_metric(3).weight(0) == 0.0);
  for (int n = 2; n <= 6; ++n) {
    const DiagonalMetric g = ghz_metric(n);
    CHECK(g.nonzero_count() == (std::size_t{1} << n) - 1);
    CHECK(zero_one(g));
    // Matches |T_ghz| computed from the state itself.
    const CorrelationTensor t = pure_tensor(make_ghz(n));
    for (std::size_t k = 1; k < t.size(); ++k) CHECK(g.weight(k) == std::round(std::abs(t[k])));
  }
}

TEST_CASE("generalized ghz metric follows the support of the generalized state") {
  CHECK(support(generalized_ghz_metric(4, std::numbers::pi / 4)) == support(ghz_metric(4)));
  for (double a : {std::numbers::pi / 8, std::numbers::pi / 16, 0.0}) {
    for (int n = 2; n <= 5; ++n) {
      const DiagonalMetric g = generalized_ghz_metric(n, a);
      const CorrelationTensor t = pure_tensor(make_generalized_ghz(n, a));
      for (std::size_t k = 1; k < t.size(); ++k) CHECK(g.weight(k) == (std::abs(t[k]) > 1e-12 ? 1.0 : 0.0));
      CHECK(g.weight(0) == 0.0);
    }
  }
}

TEST_CASE("four-qubit x/y metric") {
  const DiagonalMetric g = ghz_xy_metric_4q();
  CHECK(support(g) == std::set<std::string>{"xxxx", "xxyy", "xyyx", "yyxx", "xyxy", "yxyx", "yxxy", "yyyy"});
  CHECK(g_norm_sq(pure_tensor(make_ghz(4)), g) == doctest::Approx(8.0).epsilon(1e-14));
  CHECK(g_norm_sq(pure_tensor(make_product_basis_state(4, 0)), g) == 0.0);
}

TEST_CASE("metric lookup by name and validation") {
  CHECK(support(metric_by_name("standard", 3)) == support(standard_full_correlation_metric(3)));
  CHECK(support(metric_by_name("ghz", 3)) == support(ghz_metric(3)));
  CHECK(support(metric_by_name("ghz-xy", 4)) == support(ghz_xy_metric_4q()));
  CHECK(support(metric_by_name("modified", 3, {1, 2})) == support(modified_metric_3q({1, 2})));
  CHECK_THROWS_AS(metric_by_name("euclid", 3), InvalidArgument);
  CHECK_THROWS_AS(metric_by_name("ghz-xy", 3), InvalidArgument);
  CHECK_THROWS_AS(DiagonalMetric(1, {0.0, 1.0, -1.0, 0.0}), InvalidArgument);
  CHECK_THROWS_AS(DiagonalMetric(1, {0.0, 1.0}), InvalidArgument);
}
