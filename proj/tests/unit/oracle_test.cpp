#include <cmath>
#include <numbers>
#include <random>

#include <doctest.h>

#include "gme/metrics.hpp"
#include "gme/oracle.hpp"
#include "test_support.hpp"

using namespace gme;

namespace {

SamplerSettings quick(int samples = 2000) {
  SamplerSettings s;
  s.samples = samples;
  s.refine_steps = 100;
  return s;
}

CorrelationTensor pure_tensor(const PureState& psi) { return tensor_from_density(density_from_pure(psi)); }

}  // namespace

TEST_CASE("sampled products have the requested structure") {
  const Partition singles = Partition::parse("1|2|3");
  const PureState a = sample_pure_product(singles, 7);
  const PureState b = sample_pure_product(singles, 7);
  CHECK((a.amplitudes() - b.amplitudes()).norm() == 0.0);
  CHECK((a.amplitudes() - sample_pure_product(singles, 8).amplitudes()).norm() > 1e-3);

  const DensityMatrix rho = density_from_pure(a);
  const CorrelationTensor t = tensor_from_density(rho);
  for (int i = 1; i <= 3; ++i)
    for (int j = 1; j <= 3; ++j)
      for (int k = 1; k <= 3; ++k) {
        const double prod = t.at({i, 0, 0}) * t.at({0, j, 0}) * t.at({0, 0, k});
        CHECK(std::abs(t.at({i, j, k}) - prod) < 1e-12);
      }

  const DensityMatrix pair_prod = density_from_pure(sample_pure_product(Partition::parse("12|3"), 3));
  const std::vector<int> block{0, 1};
  CHECK(std::abs(partial_trace(pair_prod, block).purity() - 1.0) < 1e-12);
}

TEST_CASE("product overlap examples") {
  const CorrelationTensor zero = pure_tensor(make_product_basis_state(3, 0));
  for (const auto& p : enumerate_k_partitions(3, 2)) {
    CHECK(max_product_overlap(zero, standard_full_correlation_metric(3), ProductSampler{p, quick()}) ==
          doctest::Approx(1.0).epsilon(1e-9));
  }
  const CorrelationTensor ghz = pure_tensor(make_ghz(3));
  CHECK(std::abs(max_product_overlap(ghz, ghz_metric(3), ProductSampler{Partition::parse("1|23"), quick()}) - 3.0) <
        1e-3);
  for (double v : {0.5, 0.8}) {
    const CorrelationTensor t = tensor_from_density(mix_white_noise(density_from_pure(make_ghz(3)), v));
    for (const auto& p : enumerate_k_partitions(3, 2)) {
      CHECK(std::abs(max_product_overlap(t, standard_full_correlation_metric(3), ProductSampler{p, quick()}) -
                     2 * v) < 1e-3);
    }
  }
}

TEST_CASE("biproduct fidelity examples") {
  CHECK(std::abs(max_biprod_fidelity(density_from_pure(make_ghz(3)), quick()) - 0.5) < 1e-3);
  const double a = std::numbers::pi / 6;
  const double c2 = std::cos(a) * std::cos(a);
  CHECK(std::abs(max_biprod_fidelity(density_from_pure(make_generalized_ghz(3, a)), quick()) - c2) < 1e-3);
  CHECK(std::abs(max_biprod_fidelity(density_from_pure(make_product_basis_state(3, 0)), quick()) - 1.0) < 1e-9);
}

TEST_CASE("more samples never lower the estimate") {
  std::mt19937_64 rng(12);
  const CorrelationTensor t = tensor_from_density(testing::random_mixed(3, rng, 2));
  const Partition p = Partition::parse("13|2");
  double prev = -1e9;
  for (int samples : {1, 10, 100, 1000}) {
    const double v = max_product_overlap(t, ghz_metric(3), ProductSampler{p, quick(samples)});
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("overlap with a fully separable product stays below its norm") {
  // All pure 1|2|3 products have unit full-correlation norm, so Cauchy-Schwarz
  // caps the overlap at the norm of the state itself.
  const Partition singles = Partition::parse("1|2|3");
  for (std::uint64_t seed = 100; seed < 105; ++seed) {
    const CorrelationTensor t = pure_tensor(sample_pure_product(singles, seed));
    const DiagonalMetric g = standard_full_correlation_metric(3);
    const double best = max_product_overlap(t, g, ProductSampler{singles, quick(500)});
    CHECK(best <= g_norm_sq(t, g) + 1e-9);
    CHECK(best >= g_norm_sq(t, g) - 1e-6);
  }
}

TEST_CASE("oracle results do not depend on the thread count") {
  std::mt19937_64 rng(13);
  const CorrelationTensor t = tensor_from_density(testing::random_mixed(3, rng, 3));
  SamplerSettings one = quick(300);
  one.threads = 1;
  SamplerSettings three = one;
  three.threads = 3;
  const Partition p = Partition::parse("12|3");
  CHECK(max_product_overlap(t, ghz_metric(3), ProductSampler{p, one}) ==
        max_product_overlap(t, ghz_metric(3), ProductSampler{p, three}));
}

TEST_CASE("schmidt property checks flag a generic frame") {
  std::mt19937_64 rng(14);
  const CorrelationTensor ghz = pure_tensor(make_ghz(3));
  const CorrelationTensor turned = rotate_local_frames(ghz, testing::random_frame(3, rng));
  const SchmidtReport r = verify_schmidt_properties(turned, 1e-6);
  CHECK_FALSE(r.zero_pattern.passed);
  CHECK(r.zero_pattern.worst_violation > 1e-6);
  CHECK_FALSE(r.zero_pattern.worst_index.empty());
}
