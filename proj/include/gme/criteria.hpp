#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gme/corrtensor.hpp"
#include "gme/frameopt.hpp"
#include "gme/metrics.hpp"
#include "gme/oracle.hpp"
#include "gme/partitions.hpp"
#include "gme/states.hpp"

namespace gme {

/// Detection requires lhs + kStrictnessMargin < rhs.
inline constexpr double kStrictnessMargin = 1e-9;

enum class Criterion { kProp1, kDirect21, kProp2, kProp3, kProp3Weak, kGhzMetric, kProp4q, kProp5q, kProp211 };

std::string_view criterion_name(Criterion c);
/// Accepts prop1 | direct21 | prop2 | prop3 | prop3-weak | ghz-metric |
/// prop4q | prop5q | prop211; throws InvalidArgument otherwise.
Criterion parse_criterion(std::string_view name);
bool criterion_supports(Criterion c, int n_qubits);

/// Bound for one partition (or one inequality tied to a partition).
struct PartitionBound {
  Partition partition;
  double lhs = 0.0;
  double rhs = 0.0;
  /// Metric the lhs bounds the product overlap in. It applies to the tensor
  /// rotated by `metric_frame` (identity when empty).
  DiagonalMetric metric;
  std::optional<LocalFrame> metric_frame;
  std::optional<OptResult> provenance;
  std::string label;
};

struct CriterionVerdict {
  std::string criterion_name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool detected = false;
  std::vector<PartitionBound> per_partition;
  OptimizerConfig config_echo;
  /// False for sampled (heuristic) left-hand sides that cannot certify.
  bool rigorous = true;
};

enum class Family { kGhz, kGeneralizedGhz, kW3 };

struct FamilySpec {
  Family family = Family::kGhz;
  int n = 3;
  double alpha = 0.7853981633974483;  // pi/4
  double visibility = 1.0;

  void validate() const;
};

std::string_view family_name(Family f);
Family parse_family(std::string_view name);
DensityMatrix family_density(const FamilySpec& spec);

// Three qubits. Each pair assignment sigma = {a, b | s} contributes one
// PartitionBound; frames rotate qubits a and b only.

/// max_sigma,frames sqrt(sum_i (|T_11i - T_22i| + |T_33i|)^2) vs ||T||^2.
CriterionVerdict prop1_three_qubit(const CorrelationTensor& t, const OptimizerConfig& cfg);
/// max_sigma,theta,frames sqrt(sum_i ((T_11i - T_22i) sin 2theta + T_33i)^2)
/// vs ||T||^2; theta is searched on a 64-point grid over [0, pi/4] followed
/// by golden-section refinement.
CriterionVerdict direct21_bound(const CorrelationTensor& t, const OptimizerConfig& cfg);
/// Per sigma: max_frames sqrt(sum_i (T_11i - T_22i)^2) vs the modified norm
/// for the same sigma, with the norm taken in the generalized Schmidt frame of
/// t (see schmidt_normal_form). Detected only when every sigma satisfies its
/// inequality; lhs/rhs report the tightest sigma.
CriterionVerdict prop2_modified(const CorrelationTensor& t, const OptimizerConfig& cfg);
/// Modified norm in the generalized Schmidt frame vs 2 * t_max, or vs 2 when
/// `weak`. Every sigma must pass; lhs/rhs report the tightest sigma.
CriterionVerdict prop3_simple(const CorrelationTensor& t, const OptimizerConfig& cfg, bool weak);

/// (2^n cos^2 alpha - 1) / (2^n - 1).
double ghz_metric_threshold(int n, double alpha);
/// Analytic bound v (2^n cos^2 alpha - 1) against the norm of the noisy
/// family tensor in the GHZ_alpha support metric. GHZ families only.
CriterionVerdict ghz_metric_test(const FamilySpec& spec);
/// Sampled stand-in for arbitrary states: lhs is the oracle's lower bound on
/// the biproduct overlap in the GHZ metric. Marked non-rigorous.
CriterionVerdict ghz_metric_heuristic(const CorrelationTensor& t, const SamplerSettings& sampler);

/// Four qubits, frames over all qubits. Requires a pure state (checked from
/// the tensor purity).
CriterionVerdict prop4q_31_check(const CorrelationTensor& t, const OptimizerConfig& cfg);
CriterionVerdict prop5q_genuine_4q(const CorrelationTensor& t, const OptimizerConfig& cfg);
/// Six pair assignments {a, b | c | d}; frames rotate a and b only.
CriterionVerdict prop211_not3sep_4q(const CorrelationTensor& t, const OptimizerConfig& cfg);

/// Dispatch on the tensor. ghz-metric is not available here (see
/// ghz_metric_test / ghz_metric_heuristic).
CriterionVerdict evaluate_criterion(Criterion c, const CorrelationTensor& t,
                                    const OptimizerConfig& cfg);
CriterionVerdict evaluate_family(Criterion c, const FamilySpec& spec, const OptimizerConfig& cfg);

/// Smallest detected visibility on [0, 1] to within `precision`, by
/// bisection; nullopt when the family is not detected even at v = 1.
std::optional<double> vcrit_scan(FamilySpec spec, Criterion c, double precision,
                                 const OptimizerConfig& cfg);
/// Closed-form threshold where one is known, nullopt otherwise.
std::optional<double> analytic_vcrit(const FamilySpec& spec, Criterion c);

/// Purity Tr(rho^2) = 2^-n sum_mu T_mu^2.
double tensor_purity(const CorrelationTensor& t);

}  // namespace gme
