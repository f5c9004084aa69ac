#pragma once

#include <cstdint>
#include <string>

#include "gme/corrtensor.hpp"
#include "gme/metrics.hpp"
#include "gme/partitions.hpp"
#include "gme/states.hpp"

namespace gme {

struct SamplerSettings {
  std::uint64_t seed = 42;
  int samples = 100000;
  int refine_steps = 200;
  /// 0 picks the hardware count; results do not depend on it.
  int threads = 0;
};

struct ProductSampler {
  Partition partition;
  SamplerSettings settings;
};

/// Haar-random pure state per block (normalized complex Gaussian vector),
/// assembled in qubit order.
PureState sample_pure_product(const Partition& partition, std::uint64_t seed);

/// Lower bound on max over pure product states psi of the partition of
/// (T_psi, t)_g. Sample i uses seed settings.seed + i; every sample that sets
/// a new running maximum is refined by shrinking random perturbations of its
/// blocks followed by exact block-wise eigenvector updates.
double max_product_overlap(const CorrelationTensor& t, const DiagonalMetric& g,
                           const ProductSampler& sampler);

/// Lower bound on max over all bipartitions and pure biproduct states of
/// Tr(target rho_prod).
double max_biprod_fidelity(const DensityMatrix& target, const SamplerSettings& settings);

struct PropertyCheck {
  bool passed = true;
  double worst_violation = 0.0;
  std::string worst_index;  // e.g. "211"
};

struct SchmidtReport {
  PropertyCheck zero_pattern;  // T'_{sigma(j,i,...,i)} = 0 for i < j
  PropertyCheck sign;          // nonnegative when at most one slot differs from 3
  PropertyCheck dominance;     // |T'_{j..j}| >= |T'_{i..}| when j <= every i_r
  /// Whether {T'_111, T'_112, T'_113} and {T'_221, T'_222, T'_223} each have at
  /// most one nonzero entry (n = 3 only; recorded, not required).
  bool single_nonzero_groups = false;
};

SchmidtReport verify_schmidt_properties(const CorrelationTensor& t, double tol);

}  // namespace gme
