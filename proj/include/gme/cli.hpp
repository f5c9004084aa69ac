#pragma once

#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gme/criteria.hpp"
#include "gme/frameopt.hpp"
#include "gme/oracle.hpp"
#include "gme/partitions.hpp"
#include "gme/states.hpp"

namespace gme {

inline constexpr int kReportSchemaVersion = 1;

struct LoadedState {
  DensityMatrix rho;
  /// Set when the file named a family instead of listing a matrix.
  std::optional<FamilySpec> family;
};

/// Accepts {"n_qubits": n, "matrix": [[[re, im], ...], ...]} (row-major) or
/// {"family": name, "n": n, "alpha": a, "visibility": v} with alpha defaulting
/// to pi/4 and visibility to 1. Throws ParseError (with line and field) on
/// malformed input and NotAState when the matrix fails the density checks.
LoadedState parse_state_text(const std::string& text);
LoadedState load_state_file(const std::string& path);
DensityMatrix parse_state_file(const std::string& path);

nlohmann::json frame_to_json(const LocalFrame& frame);
nlohmann::json verdict_to_json(const CriterionVerdict& v);

struct CommandResult {
  nlohmann::json report;
  int exit_code = 0;
};

/// Exit code 0 when detected, 1 otherwise. ghz-metric runs the analytic test
/// for GHZ family inputs and the sampled heuristic for anything else.
CommandResult run_detect(const LoadedState& state, Criterion c, const OptimizerConfig& cfg,
                         const SamplerSettings& sampler);
CommandResult run_vcrit(const FamilySpec& family, Criterion c, double precision,
                        const OptimizerConfig& cfg);

struct SweepRow {
  double alpha = 0.0;
  std::optional<double> numeric;
  std::optional<double> analytic;
};

std::vector<SweepRow> run_sweep(FamilySpec family, std::span<const double> alphas, Criterion c,
                                double precision, const OptimizerConfig& cfg);
/// Columns alpha, v_crit_numeric, v_crit_analytic, abs_diff; ">1" marks no
/// detection and blanks mark missing values.
void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows);

/// Without a partition the maximum runs over every bipartition. With
/// `fidelity` the oracle maximizes Tr(rho rho_prod) over biproducts instead.
CommandResult run_oracle_check(const LoadedState& state, const std::optional<Partition>& partition,
                               const std::string& metric_name, std::array<int, 2> pair,
                               bool fidelity, const SamplerSettings& sampler);
CommandResult run_schmidt(const LoadedState& state, const OptimizerConfig& cfg, double tol);

/// Pretty-printed report with a trailing newline.
std::string dump_report(const nlohmann::json& report);

}  // namespace gme
