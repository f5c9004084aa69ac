#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "gme/criteria.hpp"
#include "gme/errors.hpp"
#include "test_support.hpp"

using namespace gme;

namespace {

constexpr double kPi = std::numbers::pi;

CorrelationTensor noisy(const PureState& psi, double v) {
  return tensor_from_density(mix_white_noise(density_from_pure(psi), v));
}

OptimizerConfig default_config() { return OptimizerConfig{}; }

void check_consistent(const CriterionVerdict& v) {
  CHECK(std::isfinite(v.lhs));
  CHECK(std::isfinite(v.rhs));
  CHECK(v.detected == (v.lhs + kStrictnessMargin < v.rhs));
  CHECK_FALSE(v.per_partition.empty());
}

FamilySpec family(Family f, int n, double alpha = kPi / 4) {
  FamilySpec s;
  s.family = f;
  s.n = n;
  s.alpha = alpha;
  return s;
}

}  // namespace

TEST_CASE("criterion names") {
  for (const char* name : {"prop1", "direct21", "prop2", "prop3", "prop3-weak", "ghz-metric", "prop4q",
                           "prop5q", "prop211"}) {
    CHECK(criterion_name(parse_criterion(name)) == name);
  }
  CHECK_THROWS_AS(parse_criterion("prop9"), InvalidArgument);
  CHECK(criterion_supports(Criterion::kProp1, 3));
  CHECK_FALSE(criterion_supports(Criterion::kProp5q, 3));
  CHECK(criterion_supports(Criterion::kGhzMetric, 5));
}

TEST_CASE("prop1 on noisy W states") {
  const OptimizerConfig cfg = default_config();
  const CriterionVerdict hi = prop1_three_qubit(noisy(make_w3(), 0.70), cfg);
  const CriterionVerdict lo = prop1_three_qubit(noisy(make_w3(), 0.60), cfg);
  CHECK(hi.detected);
  CHECK_FALSE(lo.detected);
  check_consistent(hi);
  check_consistent(lo);
  CHECK(hi.per_partition.size() == 3);
  const CriterionVerdict zero = prop1_three_qubit(noisy(make_product_basis_state(3, 0), 1.0), cfg);
  CHECK_FALSE(zero.detected);
  CHECK(zero.lhs >= 1.0 - 1e-9);
  CHECK(zero.rhs == doctest::Approx(1.0));
  CHECK_THROWS_AS(prop1_three_qubit(noisy(make_ghz(4), 1.0), cfg), InvalidArgument);
}

TEST_CASE("direct bound on noisy ghz states") {
  const OptimizerConfig cfg = default_config();
  const CriterionVerdict v6 = direct21_bound(noisy(make_ghz(3), 0.6), cfg);
  CHECK(v6.lhs == doctest::Approx(1.2).epsilon(1e-3));
  CHECK(v6.rhs == doctest::Approx(1.44).epsilon(1e-12));
  CHECK(v6.detected);
  CHECK_FALSE(direct21_bound(noisy(make_ghz(3), 0.45), cfg).detected);

  const double a = kPi / 8;
  const double vc = 1.0 / std::sqrt(1.0 + 3.0 * std::sin(2 * a) * std::sin(2 * a));
  CHECK(direct21_bound(noisy(make_generalized_ghz(3, a), vc + 2e-3), cfg).detected);
  CHECK_FALSE(direct21_bound(noisy(make_generalized_ghz(3, a), vc - 2e-3), cfg).detected);
  CHECK_THROWS_AS(direct21_bound(noisy(make_ghz(2), 1.0), cfg), InvalidArgument);
}

TEST_CASE("modified-metric criteria on ghz") {
  const OptimizerConfig cfg = default_config();
  const CriterionVerdict pure = prop2_modified(noisy(make_ghz(3), 1.0), cfg);
  CHECK(pure.lhs <= 2.0 + 1e-9);
  CHECK(pure.rhs == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(pure.detected);
  const CriterionVerdict v6 = prop2_modified(noisy(make_ghz(3), 0.6), cfg);
  CHECK(v6.lhs <= 1.2 + 1e-9);
  CHECK(v6.rhs == doctest::Approx(1.44).epsilon(1e-3));
  CHECK(v6.detected);
  const CriterionVerdict zero = prop2_modified(noisy(make_product_basis_state(3, 0), 1.0), cfg);
  // The Schmidt frame turns |000> into an aligned product, so the bound is not vacuous.
  CHECK(zero.rhs <= zero.lhs + 1e-9);
  CHECK_FALSE(zero.detected);

  const CriterionVerdict strong = prop3_simple(noisy(make_ghz(3), 1.0), cfg, false);
  const CriterionVerdict weak = prop3_simple(noisy(make_ghz(3), 1.0), cfg, true);
  CHECK(strong.detected);
  CHECK(weak.detected);
  CHECK(strong.lhs == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(prop3_simple(noisy(make_ghz(3), 0.6), cfg, false).detected);
  CHECK_FALSE(prop3_simple(noisy(make_ghz(3), 0.6), cfg, true).detected);
  CHECK_FALSE(prop3_simple(noisy(make_product_basis_state(3, 0), 1.0), cfg, false).detected);
  check_consistent(strong);
  check_consistent(v6);
}

TEST_CASE("ghz metric thresholds") {
  CHECK(ghz_metric_threshold(3, kPi / 4) == doctest::Approx(3.0 / 7.0).epsilon(1e-15));
  CHECK(ghz_metric_threshold(4, kPi / 4) == doctest::Approx(7.0 / 15.0).epsilon(1e-15));
  CHECK(ghz_metric_threshold(3, kPi / 6) == doctest::Approx(5.0 / 7.0).epsilon(1e-14));
  CHECK_THROWS_AS(ghz_metric_threshold(1, 0.3), InvalidArgument);
  CHECK_THROWS_AS(ghz_metric_threshold(3, 1.0), InvalidArgument);

  FamilySpec g3 = family(Family::kGhz, 3);
  g3.visibility = 0.5;
  CHECK(ghz_metric_test(g3).detected);
  FamilySpec g4 = family(Family::kGhz, 4);
  g4.visibility = 0.45;
  CHECK_FALSE(ghz_metric_test(g4).detected);
  FamilySpec ga = family(Family::kGeneralizedGhz, 3, kPi / 8);
  ga.visibility = 0.9;
  CHECK(ghz_metric_test(ga).detected);
  ga.visibility = 0.83;
  CHECK_FALSE(ghz_metric_test(ga).detected);
  check_consistent(ghz_metric_test(ga));
  CHECK(ghz_metric_test(g3).per_partition.size() == 3);
  CHECK_THROWS_AS(ghz_metric_test(family(Family::kW3, 3)), InvalidArgument);
}

TEST_CASE("four-qubit criteria on ghz") {
  const OptimizerConfig cfg = default_config();
  const CriterionVerdict p4 = prop4q_31_check(noisy(make_ghz(4), 1.0), cfg);
  CHECK(p4.per_partition.size() == 4);
  for (const auto& b : p4.per_partition) CHECK(b.lhs == doctest::Approx(4.0).epsilon(1e-6));
  CHECK(p4.rhs == doctest::Approx(8.0));
  CHECK(p4.detected);

  // GHZ3 x |0>: a (3+1) product, so at least one inequality fails.
  const std::vector<DensityMatrix> parts{density_from_pure(make_ghz(3)),
                                         density_from_pure(make_product_basis_state(1, 0))};
  const CorrelationTensor ghz3_zero = tensor_from_density(tensor_product(parts));
  CHECK_FALSE(prop4q_31_check(ghz3_zero, cfg).detected);
  CHECK_FALSE(prop4q_31_check(noisy(make_product_basis_state(4, 0), 1.0), cfg).detected);
  CHECK_THROWS_AS(prop4q_31_check(noisy(make_ghz(4), 0.9), cfg), InvalidArgument);

  const CriterionVerdict p5 = prop5q_genuine_4q(noisy(make_ghz(4), 0.6), cfg);
  CHECK(p5.per_partition.size() == 7);
  CHECK(p5.lhs == doctest::Approx(2.4).epsilon(1e-4));
  CHECK(p5.rhs == doctest::Approx(2.88));
  CHECK(p5.detected);
  CHECK_FALSE(prop5q_genuine_4q(noisy(make_ghz(4), 0.4), cfg).detected);
  CHECK_FALSE(prop5q_genuine_4q(noisy(make_product_basis_state(4, 0), 1.0), cfg).detected);

  const CriterionVerdict p211 = prop211_not3sep_4q(noisy(make_ghz(4), 0.5), cfg);
  CHECK(p211.per_partition.size() == 6);
  CHECK(p211.rhs == doctest::Approx(2.25));
  CHECK(p211.lhs >= 1.5 - 1e-9);
  CHECK(p211.detected);
  CHECK_FALSE(prop211_not3sep_4q(noisy(make_product_basis_state(4, 0), 1.0), cfg).detected);
  const CriterionVerdict mixed = prop211_not3sep_4q(tensor_from_density(maximally_mixed(4)), cfg);
  CHECK(mixed.rhs == 0.0);
  CHECK_FALSE(mixed.detected);
  CHECK_THROWS_AS(prop211_not3sep_4q(noisy(make_ghz(3), 1.0), cfg), InvalidArgument);
}

TEST_CASE("critical visibility scans") {
  const OptimizerConfig cfg = default_config();
  const auto sym = vcrit_scan(family(Family::kGeneralizedGhz, 3), Criterion::kDirect21, 1e-3, cfg);
  REQUIRE(sym.has_value());
  CHECK(std::abs(*sym - 0.5) <= 1e-3);
  CHECK_FALSE(vcrit_scan(family(Family::kGeneralizedGhz, 3, 0.0), Criterion::kDirect21, 1e-3, cfg).has_value());

  const auto ghz = vcrit_scan(family(Family::kGhz, 3), Criterion::kGhzMetric, 1e-6, cfg);
  REQUIRE(ghz.has_value());
  CHECK(std::abs(*ghz - 3.0 / 7.0) <= 1e-6);
  CHECK(*analytic_vcrit(family(Family::kGhz, 3), Criterion::kGhzMetric) == doctest::Approx(3.0 / 7.0));
  CHECK(*analytic_vcrit(family(Family::kGeneralizedGhz, 3, kPi / 8), Criterion::kDirect21) ==
        doctest::Approx(1.0 / std::sqrt(2.5)));
  CHECK_FALSE(analytic_vcrit(family(Family::kW3, 3), Criterion::kProp1).has_value());
  CHECK_THROWS_AS(vcrit_scan(family(Family::kGhz, 3), Criterion::kDirect21, 0.0, cfg), InvalidArgument);
}

TEST_CASE("detection is monotone in the visibility") {
  const OptimizerConfig cfg = default_config();
  struct Case {
    FamilySpec spec;
    Criterion c;
  };
  const Case cases[] = {{family(Family::kGhz, 3), Criterion::kDirect21},
                        {family(Family::kW3, 3), Criterion::kProp1},
                        {family(Family::kGhz, 4), Criterion::kGhzMetric}};
  for (const auto& [spec, c] : cases) {
    bool seen = false;
    for (int k = 0; k <= 20; ++k) {
      FamilySpec s = spec;
      s.visibility = k / 20.0;
      const bool d = evaluate_family(c, s, cfg).detected;
      if (seen) CHECK(d);
      seen = seen || d;
    }
    CHECK(seen);
  }
}

TEST_CASE("the absolute-value bound dominates the direct bound") {
  std::mt19937_64 rng(31);
  const OptimizerConfig cfg = default_config();
  for (int rep = 0; rep < 6; ++rep) {
    const CorrelationTensor t = tensor_from_density(testing::random_mixed(3, rng, 1 + rep % 3));
    CHECK(prop1_three_qubit(t, cfg).lhs >= direct21_bound(t, cfg).lhs - 1e-9);
  }
}

TEST_CASE("family specs") {
  FamilySpec bad = family(Family::kW3, 4);
  CHECK_THROWS_AS(bad.validate(), InvalidArgument);
  FamilySpec vis = family(Family::kGhz, 3);
  vis.visibility = 1.2;
  CHECK_THROWS_AS(family_density(vis), InvalidArgument);
  CHECK(parse_family("generalized-ghz") == Family::kGeneralizedGhz);
  CHECK_THROWS_AS(parse_family("cluster"), InvalidArgument);
}
