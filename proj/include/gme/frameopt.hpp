#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "gme/corrtensor.hpp"

namespace gme {

struct OptimizerConfig {
  int restarts = 64;
  int max_iterations = 400;
  double convergence_tol = 1e-9;
  std::uint64_t seed = 42;
  /// Worker threads for independent restarts; 0 picks the hardware count.
  /// Results do not depend on this value.
  int threads = 0;

  void validate() const;
};

struct OptResult {
  double value = 0.0;
  LocalFrame frame = LocalFrame::identity(1);
  int restart_index = 0;
  int iterations = 0;
};

/// Must be pure: it may be called concurrently from several threads.
using FrameObjective = std::function<double(const CorrelationTensor&)>;

/// Multistart maximization of `objective(rotate_local_frames(t, F))` over
/// frames F that are the identity outside `subset` (0-based labels).
///
/// Restart i draws a uniform random rotation per subset qubit from a
/// generator seeded with cfg.seed + i, then runs a coordinate ascent in
/// axis-angle coordinates: each sweep tries +-step about the three local axes
/// of every subset qubit, keeps improving moves, and halves the step after a
/// sweep with no improvement (initial step 0.3 rad). A restart stops once the
/// step drops below cfg.convergence_tol or after cfg.max_iterations sweeps.
/// The best restart wins; values within 1e-12 keep the lower restart index.
///
/// Throws NumericFailure if the objective returns a non-finite value.
OptResult maximize_over_frames(const CorrelationTensor& t, const FrameObjective& objective,
                               std::span<const int> subset, const OptimizerConfig& cfg);

/// Largest magnitude any Latin component can reach under local rotations.
double t_max(const CorrelationTensor& t, const OptimizerConfig& cfg);

struct SchmidtForm {
  CorrelationTensor tensor;
  LocalFrame frame;
};

/// Rotates t into a frame where T'_{1...1} is maximal, then maximizes
/// T'_{2...2} inside the remaining planes, then picks the axis sign flips
/// that best satisfy the nonnegativity pattern. Supports 2 <= n <= 4.
SchmidtForm schmidt_normal_form(const CorrelationTensor& t, const OptimizerConfig& cfg);

Eigen::Matrix3d random_rotation(std::mt19937_64& rng);
/// Rotation by `angle` about coordinate axis `axis` (0, 1, 2).
Eigen::Matrix3d axis_rotation(int axis, double angle);
/// Nearest proper rotation (polar factor).
Eigen::Matrix3d orthonormalize(const Eigen::Matrix3d& r);

}  // namespace gme
