#include "gme/criteria.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "gme/errors.hpp"

namespace gme {

namespace {

constexpr double kPi = std::numbers::pi;

void require_qubits(const CorrelationTensor& t, int n, const char* who) {
  if (t.n_qubits() != n) {
    throw InvalidArgument(std::string(who) + ": expects " + std::to_string(n) + " qubits, got " +
                          std::to_string(t.n_qubits()));
  }
}

// Linear index of the multi-index that puts `values[k]` on qubit `slots[k]`
// and 0 elsewhere.
std::size_t index_of(int n, std::span<const int> slots, std::span<const int> values) {
  MultiIndex mu(static_cast<std::size_t>(n), 0);
  for (std::size_t k = 0; k < slots.size(); ++k) mu[static_cast<std::size_t>(slots[k])] = values[k];
  return linear_index(mu);
}

// Three-qubit pair assignment {a, b | s}.
struct PairAssignment3 {
  int a, b, s;
  // [p][q][i] with p, q, i in 1..3 stored at 0..2.
  std::array<std::array<std::array<std::size_t, 3>, 3>, 3> idx{};
};

std::array<PairAssignment3, 3> pair_assignments_3q() {
  std::array<PairAssignment3, 3> out{{{0, 1, 2, {}}, {0, 2, 1, {}}, {1, 2, 0, {}}}};
  for (auto& pa : out) {
    const std::array<int, 3> slots{pa.a, pa.b, pa.s};
    for (int p = 1; p <= 3; ++p)
      for (int q = 1; q <= 3; ++q)
        for (int i = 1; i <= 3; ++i) {
          const std::array<int, 3> vals{p, q, i};
          pa.idx[p - 1][q - 1][i - 1] = index_of(3, slots, vals);
        }
  }
  return out;
}

Partition pair_partition(int n, int a, int b) {
  std::vector<std::vector<int>> blocks{{a, b}};
  for (int q = 0; q < n; ++q)
    if (q != a && q != b) blocks.push_back({q});
  return Partition(n, std::move(blocks));
}

CriterionVerdict make_verdict(std::string_view name, const OptimizerConfig& cfg) {
  CriterionVerdict v;
  v.criterion_name = std::string(name);
  v.config_echo = cfg;
  return v;
}

void finish(CriterionVerdict& v) {
  if (!std::isfinite(v.lhs) || !std::isfinite(v.rhs)) {
    throw NumericFailure(v.criterion_name + ": non-finite bound", -1);
  }
  v.detected = v.lhs + kStrictnessMargin < v.rhs;
}

// Verdict that needs every per-partition inequality to hold; lhs/rhs report
// the tightest one.
void fold_all_must_hold(CriterionVerdict& v) {
  std::size_t worst = 0;
  for (std::size_t k = 1; k < v.per_partition.size(); ++k) {
    const auto& c = v.per_partition[k];
    const auto& w = v.per_partition[worst];
    if (c.rhs - c.lhs < w.rhs - w.lhs) worst = k;
  }
  v.lhs = v.per_partition[worst].lhs;
  v.rhs = v.per_partition[worst].rhs;
  finish(v);
}

// Largest sum_i ((a_i s + b_i)^2) over s = sin 2theta, theta in [0, pi/4].
double best_theta_sum(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  constexpr int kGrid = 64;
  static const std::array<double, kGrid> grid_s = [] {
    std::array<double, kGrid> s{};
    for (int k = 0; k < kGrid; ++k) s[k] = std::sin(2.0 * (kPi / 4.0) * k / (kGrid - 1));
    return s;
  }();
  auto f = [&](double s) {
    double acc = 0.0;
    for (int i = 0; i < 3; ++i) acc += (a[i] * s + b[i]) * (a[i] * s + b[i]);
    return acc;
  };
  int best_k = 0;
  double best = f(grid_s[0]);
  for (int k = 1; k < kGrid; ++k) {
    const double v = f(grid_s[k]);
    if (v > best) {
      best = v;
      best_k = k;
    }
  }
  // Golden-section refinement on the bracketing grid cells.
  const double step = (kPi / 4.0) / (kGrid - 1);
  double lo = std::max(0.0, (best_k - 1) * step);
  double hi = std::min(kPi / 4.0, (best_k + 1) * step);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - g * (hi - lo);
  double x2 = lo + g * (hi - lo);
  double f1 = f(std::sin(2.0 * x1));
  double f2 = f(std::sin(2.0 * x2));
  for (int it = 0; it < 40; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + g * (hi - lo);
      f2 = f(std::sin(2.0 * x2));
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - g * (hi - lo);
      f1 = f(std::sin(2.0 * x1));
    }
  }
  return std::max({best, f1, f2});
}

enum class Pair3Kind { kProp1, kDirect21, kProp2 };

FrameObjective pair3_objective(const PairAssignment3& pa, Pair3Kind kind) {
  return [idx = pa.idx, kind](const CorrelationTensor& x) {
    std::array<double, 3> diff{};
    std::array<double, 3> zz{};
    for (int i = 0; i < 3; ++i) {
      diff[i] = x[idx[0][0][i]] - x[idx[1][1][i]];
      zz[i] = x[idx[2][2][i]];
    }
    double acc = 0.0;
    switch (kind) {
      case Pair3Kind::kProp1:
        for (int i = 0; i < 3; ++i) {
          const double s = std::abs(diff[i]) + std::abs(zz[i]);
          acc += s * s;
        }
        break;
      case Pair3Kind::kDirect21:
        acc = best_theta_sum(diff, zz);
        break;
      case Pair3Kind::kProp2:
        for (int i = 0; i < 3; ++i) acc += diff[i] * diff[i];
        break;
    }
    return std::sqrt(acc);
  };
}

std::vector<PartitionBound> pair3_bounds(const CorrelationTensor& t, Pair3Kind kind,
                                         const OptimizerConfig& cfg, bool modified_rhs) {
  std::vector<PartitionBound> out;
  for (const auto& pa : pair_assignments_3q()) {
    const std::array<int, 2> subset{pa.a, pa.b};
    OptResult r = maximize_over_frames(t, pair3_objective(pa, kind), subset, cfg);
    DiagonalMetric metric = modified_rhs ? modified_metric_3q({pa.a, pa.b})
                                         : standard_full_correlation_metric(3);
    const double rhs = g_norm_sq(t, metric);
    out.push_back(PartitionBound{pair_partition(3, pa.a, pa.b), r.value, rhs, std::move(metric),
                                 std::nullopt, std::move(r), ""});
  }
  return out;
}

CriterionVerdict max_lhs_verdict(std::string_view name, std::vector<PartitionBound> bounds,
                                 double rhs, const OptimizerConfig& cfg) {
  CriterionVerdict v = make_verdict(name, cfg);
  v.per_partition = std::move(bounds);
  v.lhs = 0.0;
  for (const auto& b : v.per_partition) v.lhs = std::max(v.lhs, b.lhs);
  v.rhs = rhs;
  finish(v);
  return v;
}

// Four-qubit signed combinations of x/y components. Each string is four
// Pauli digits; the sign applies to the whole component.
struct SignedCombo {
  const char* label;
  std::array<const char*, 4> terms;
  std::array<double, 4> signs;
  std::vector<std::vector<int>> blocks;
};

const std::array<SignedCombo, 4>& combos_31() {
  static const std::array<SignedCombo, 4> c{{
      {"1111-1221-2211-2121", {"1111", "1221", "2211", "2121"}, {1, -1, -1, -1}, {{0, 1, 2}, {3}}},
      {"1111-2211-1212-2112", {"1111", "2211", "1212", "2112"}, {1, -1, -1, -1}, {{0, 1, 3}, {2}}},
      {"1111-1122-2121-2112", {"1111", "1122", "2121", "2112"}, {1, -1, -1, -1}, {{0, 2, 3}, {1}}},
      {"1111-1122-1221-1212", {"1111", "1122", "1221", "1212"}, {1, -1, -1, -1}, {{0}, {1, 2, 3}}},
  }};
  return c;
}

const std::array<SignedCombo, 3>& combos_22() {
  static const std::array<SignedCombo, 3> c{{
      {"1111-1122-2211+2222", {"1111", "1122", "2211", "2222"}, {1, -1, -1, 1}, {{0, 1}, {2, 3}}},
      {"1111-1212-2121+2222", {"1111", "1212", "2121", "2222"}, {1, -1, -1, 1}, {{0, 2}, {1, 3}}},
      {"1111-1221-2112+2222", {"1111", "1221", "2112", "2222"}, {1, -1, -1, 1}, {{0, 3}, {1, 2}}},
  }};
  return c;
}

PartitionBound combo_bound(const CorrelationTensor& t, const SignedCombo& combo, double rhs,
                           const OptimizerConfig& cfg) {
  std::array<std::size_t, 4> idx{};
  for (int k = 0; k < 4; ++k) idx[k] = linear_index(parse_multi_index(combo.terms[k]));
  const FrameObjective obj = [idx, signs = combo.signs](const CorrelationTensor& x) {
    double acc = 0.0;
    for (int k = 0; k < 4; ++k) acc += signs[k] * x[idx[k]];
    return std::abs(acc);
  };
  const std::array<int, 4> all{0, 1, 2, 3};
  OptResult r = maximize_over_frames(t, obj, all, cfg);
  return PartitionBound{Partition(4, combo.blocks), r.value, rhs, ghz_xy_metric_4q(), std::nullopt,
                        std::move(r), combo.label};
}

}  // namespace

std::string_view criterion_name(Criterion c) {
  switch (c) {
    case Criterion::kProp1: return "prop1";
    case Criterion::kDirect21: return "direct21";
    case Criterion::kProp2: return "prop2";
    case Criterion::kProp3: return "prop3";
    case Criterion::kProp3Weak: return "prop3-weak";
    case Criterion::kGhzMetric: return "ghz-metric";
    case Criterion::kProp4q: return "prop4q";
    case Criterion::kProp5q: return "prop5q";
    case Criterion::kProp211: return "prop211";
  }
  return "unknown";
}

Criterion parse_criterion(std::string_view name) {
  for (Criterion c : {Criterion::kProp1, Criterion::kDirect21, Criterion::kProp2, Criterion::kProp3,
                      Criterion::kProp3Weak, Criterion::kGhzMetric, Criterion::kProp4q,
                      Criterion::kProp5q, Criterion::kProp211}) {
    if (criterion_name(c) == name) return c;
  }
  throw InvalidArgument("unknown criterion '" + std::string(name) + "'");
}

bool criterion_supports(Criterion c, int n_qubits) {
  switch (c) {
    case Criterion::kProp1:
    case Criterion::kDirect21:
    case Criterion::kProp2:
    case Criterion::kProp3:
    case Criterion::kProp3Weak: return n_qubits == 3;
    case Criterion::kGhzMetric: return n_qubits >= 2 && n_qubits <= kMaxQubits;
    case Criterion::kProp4q:
    case Criterion::kProp5q:
    case Criterion::kProp211: return n_qubits == 4;
  }
  return false;
}

void FamilySpec::validate() const {
  if (family == Family::kW3 && n != 3) throw InvalidArgument("w3 family requires n = 3");
  if (n < 2 || n > kMaxQubits) throw InvalidArgument("family n must lie in [2, 8]");
  if (!(alpha >= 0.0 && alpha <= kPi / 4.0 + 1e-15)) {
    throw InvalidArgument("alpha must lie in [0, pi/4]");
  }
  if (!(visibility >= 0.0 && visibility <= 1.0)) {
    throw InvalidArgument("visibility must lie in [0, 1]");
  }
}

std::string_view family_name(Family f) {
  switch (f) {
    case Family::kGhz: return "ghz";
    case Family::kGeneralizedGhz: return "generalized-ghz";
    case Family::kW3: return "w3";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  for (Family f : {Family::kGhz, Family::kGeneralizedGhz, Family::kW3}) {
    if (family_name(f) == name) return f;
  }
  throw InvalidArgument("unknown family '" + std::string(name) + "'");
}

DensityMatrix family_density(const FamilySpec& spec) {
  spec.validate();
  switch (spec.family) {
    case Family::kGhz: return mix_white_noise(density_from_pure(make_ghz(spec.n)), spec.visibility);
    case Family::kGeneralizedGhz:
      return mix_white_noise(density_from_pure(make_generalized_ghz(spec.n, spec.alpha)),
                             spec.visibility);
    case Family::kW3: return mix_white_noise(density_from_pure(make_w3()), spec.visibility);
  }
  throw InvalidArgument("unknown family");
}

CriterionVerdict prop1_three_qubit(const CorrelationTensor& t, const OptimizerConfig& cfg) {
  require_qubits(t, 3, "prop1");
  cfg.validate();
  return max_lhs_verdict("prop1", pair3_bounds(t, Pair3Kind::kProp1, cfg, false),
                         g_norm_sq(t, standard_full_correlation_metric(3)), cfg);
}

CriterionVerdict direct21_bound(const CorrelationTensor& t, const OptimizerConfig& cfg) {
  require_qubits(t, 3, "direct21");
  cfg.validate();
  return max_lhs_verdict("direct21", pair3_bounds(t, Pair3Kind::kDirect21, cfg, false),
                         g_norm_sq(t, standard_full_correlation_metric(3)), cfg);
}

CriterionVerdict prop2_modified(const CorrelationTensor& t, const OptimizerConfig& cfg) {
  require_qubits(t, 3, "prop2");
  cfg.validate();
  CriterionVerdict v = make_verdict("prop2", cfg);
  // The lhs is invariant under frames of the single qubit and maximized over
  // the pair, so it can be taken on t directly.
  v.per_partition = pair3_bounds(t, Pair3Kind::kProp2, cfg, true);
  const SchmidtForm sf = schmidt_normal_form(t, cfg);
  for (auto& b : v.per_partition) {
    b.rhs = g_norm_sq(sf.tensor, b.metric);
    b.metric_frame = sf.frame;
  }
  fold_all_must_hold(v);
  return v;
}

CriterionVerdict prop3_simple(const CorrelationTensor& t, const OptimizerConfig& cfg, bool weak) {
  require_qubits(t, 3, "prop3");
  cfg.validate();
  CriterionVerdict v = make_verdict(weak ? "prop3-weak" : "prop3", cfg);
  const double lhs = weak ? 2.0 : 2.0 * t_max(t, cfg);
  const SchmidtForm sf = schmidt_normal_form(t, cfg);
  for (const auto& pa : pair_assignments_3q()) {
    DiagonalMetric metric = modified_metric_3q({pa.a, pa.b});
    const double rhs = g_norm_sq(sf.tensor, metric);
    v.per_partition.push_back(PartitionBound{pair_partition(3, pa.a, pa.b), lhs, rhs,
                                             std::move(metric), sf.frame, std::nullopt, ""});
  }
  fold_all_must_hold(v);
  return v;
}

double ghz_metric_threshold(int n, double alpha) {
  if (n < 2 || n > kMaxQubits) throw InvalidArgument("ghz_metric_threshold: n must lie in [2, 8]");
  if (!(alpha >= 0.0 && alpha <= kPi / 4.0 + 1e-15)) {
    throw InvalidArgument("ghz_metric_threshold: alpha must lie in [0, pi/4]");
  }
  const double d = std::ldexp(1.0, n);
  const double c = std::cos(alpha);
  return (d * c * c - 1.0) / (d - 1.0);
}

CriterionVerdict ghz_metric_test(const FamilySpec& spec) {
  spec.validate();
  if (spec.family == Family::kW3) {
    throw InvalidArgument("ghz_metric_test: analytic bound holds for GHZ families only");
  }
  const double alpha = spec.family == Family::kGhz ? kPi / 4.0 : spec.alpha;
  FamilySpec s = spec;
  s.alpha = alpha;
  const CorrelationTensor t = tensor_from_density(family_density(s));
  const DiagonalMetric metric = generalized_ghz_metric(spec.n, alpha);
  const double c = std::cos(alpha);
  const double lhs = spec.visibility * (std::ldexp(1.0, spec.n) * c * c - 1.0);
  const double rhs = g_norm_sq(t, metric);

  CriterionVerdict v = make_verdict("ghz-metric", OptimizerConfig{});
  for (const Partition& p : enumerate_k_partitions(spec.n, 2)) {
    v.per_partition.push_back(PartitionBound{p, lhs, rhs, metric, std::nullopt, std::nullopt, ""});
  }
  v.lhs = lhs;
  v.rhs = rhs;
  finish(v);
  return v;
}

CriterionVerdict ghz_metric_heuristic(const CorrelationTensor& t, const SamplerSettings& sampler) {
  const int n = t.n_qubits();
  if (n < 2) throw InvalidArgument("ghz_metric_heuristic: needs at least 2 qubits");
  const DiagonalMetric metric = ghz_metric(n);
  const double rhs = g_norm_sq(t, metric);
  CriterionVerdict v = make_verdict("ghz-metric", OptimizerConfig{});
  v.rigorous = false;
  v.config_echo.seed = sampler.seed;
  v.config_echo.threads = sampler.threads;
  double lhs = 0.0;
  for (const Partition& p : enumerate_k_partitions(n, 2)) {
    const double l = max_product_overlap(t, metric, ProductSampler{p, sampler});
    lhs = std::max(lhs, l);
    v.per_partition.push_back(PartitionBound{p, l, rhs, metric, std::nullopt, std::nullopt, ""});
  }
  v.lhs = lhs;
  v.rhs = rhs;
  finish(v);
  return v;
}

double tensor_purity(const CorrelationTensor& t) {
  double acc = 0.0;
  for (double x : t.components()) acc += x * x;
  return std::ldexp(acc, -t.n_qubits());
}

CriterionVerdict prop4q_31_check(const CorrelationTensor& t, const OptimizerConfig& cfg) {
  require_qubits(t, 4, "prop4q");
  cfg.validate();
  const double purity = tensor_purity(t);
  if (purity < 1.0 - 1e-9) {
    throw InvalidArgument("prop4q: requires a pure state (purity " + std::to_string(purity) + ")");
  }
  CriterionVerdict v = make_verdict("prop4q", cfg);
  const double rhs = g_norm_sq(t, ghz_xy_metric_4q());
  for (const auto& c : combos_31()) v.per_partition.push_back(combo_bound(t, c, rhs, cfg));
  fold_all_must_hold(v);
  return v;
}

CriterionVerdict prop5q_genuine_4q(const CorrelationTensor& t, const OptimizerConfig& cfg) {
  require_qubits(t, 4, "prop5q");
  cfg.validate();
  CriterionVerdict v = make_verdict("prop5q", cfg);
  const double rhs = g_norm_sq(t, ghz_xy_metric_4q());
  for (const auto& c : combos_31()) v.per_partition.push_back(combo_bound(t, c, rhs, cfg));
  for (const auto& c : combos_22()) v.per_partition.push_back(combo_bound(t, c, rhs, cfg));
  fold_all_must_hold(v);
  return v;
}

CriterionVerdict prop211_not3sep_4q(const CorrelationTensor& t, const OptimizerConfig& cfg) {
  require_qubits(t, 4, "prop211");
  cfg.validate();
  std::vector<PartitionBound> bounds;
  for (int a = 0; a < 4; ++a) {
    for (int b = a + 1; b < 4; ++b) {
      std::array<int, 2> rest{};
      int k = 0;
      for (int q = 0; q < 4; ++q)
        if (q != a && q != b) rest[k++] = q;
      // [p][q][i][j] flattened.
      std::array<std::size_t, 81> idx{};
      const std::array<int, 4> slots{a, b, rest[0], rest[1]};
      for (int p = 1; p <= 3; ++p)
        for (int q = 1; q <= 3; ++q)
          for (int i = 1; i <= 3; ++i)
            for (int j = 1; j <= 3; ++j) {
              const std::array<int, 4> vals{p, q, i, j};
              idx[static_cast<std::size_t>(((p - 1) * 3 + (q - 1)) * 9 + (i - 1) * 3 + (j - 1))] =
                  index_of(4, slots, vals);
            }
      const FrameObjective obj = [idx](const CorrelationTensor& x) {
        double acc = 0.0;
        for (int ij = 0; ij < 9; ++ij) {
          const double s = std::abs(x[idx[ij]] - x[idx[36 + ij]]) + std::abs(x[idx[72 + ij]]);
          acc += s * s;
        }
        return std::sqrt(acc);
      };
      const std::array<int, 2> subset{a, b};
      OptResult r = maximize_over_frames(t, obj, subset, cfg);
      bounds.push_back(PartitionBound{pair_partition(4, a, b), r.value, 0.0,
                                      standard_full_correlation_metric(4), std::nullopt,
                                      std::move(r), ""});
    }
  }
  const double rhs = g_norm_sq(t, standard_full_correlation_metric(4));
  for (auto& b : bounds) b.rhs = rhs;
  return max_lhs_verdict("prop211", std::move(bounds), rhs, cfg);
}

CriterionVerdict evaluate_criterion(Criterion c, const CorrelationTensor& t,
                                    const OptimizerConfig& cfg) {
  switch (c) {
    case Criterion::kProp1: return prop1_three_qubit(t, cfg);
    case Criterion::kDirect21: return direct21_bound(t, cfg);
    case Criterion::kProp2: return prop2_modified(t, cfg);
    case Criterion::kProp3: return prop3_simple(t, cfg, false);
    case Criterion::kProp3Weak: return prop3_simple(t, cfg, true);
    case Criterion::kProp4q: return prop4q_31_check(t, cfg);
    case Criterion::kProp5q: return prop5q_genuine_4q(t, cfg);
    case Criterion::kProp211: return prop211_not3sep_4q(t, cfg);
    case Criterion::kGhzMetric: break;
  }
  throw InvalidArgument("ghz-metric needs a family (analytic) or the heuristic entry point");
}

CriterionVerdict evaluate_family(Criterion c, const FamilySpec& spec, const OptimizerConfig& cfg) {
  if (c == Criterion::kGhzMetric) return ghz_metric_test(spec);
  return evaluate_criterion(c, tensor_from_density(family_density(spec)), cfg);
}

std::optional<double> vcrit_scan(FamilySpec spec, Criterion c, double precision,
                                 const OptimizerConfig& cfg) {
  if (!(precision > 0.0)) throw InvalidArgument("vcrit_scan: precision must be positive");
  auto detected_at = [&](double v) {
    spec.visibility = v;
    return evaluate_family(c, spec, cfg).detected;
  };
  if (!detected_at(1.0)) return std::nullopt;
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > precision) {
    const double mid = 0.5 * (lo + hi);
    if (detected_at(mid)) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

std::optional<double> analytic_vcrit(const FamilySpec& spec, Criterion c) {
  spec.validate();
  const bool ghz_family = spec.family != Family::kW3;
  const double alpha = spec.family == Family::kGhz ? kPi / 4.0 : spec.alpha;
  if (ghz_family && c == Criterion::kDirect21 && spec.n == 3) {
    const double s = std::sin(2.0 * alpha);
    if (s <= 0.0) return std::nullopt;
    return 1.0 / std::sqrt(1.0 + 3.0 * s * s);
  }
  if (ghz_family && c == Criterion::kGhzMetric) {
    const double v = ghz_metric_threshold(spec.n, alpha);
    if (v >= 1.0) return std::nullopt;
    return v;
  }
  return std::nullopt;
}

}  // namespace gme
