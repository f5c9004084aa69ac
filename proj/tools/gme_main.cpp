#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gme/cli.hpp"
#include "gme/errors.hpp"

namespace {

struct StateFlags {
  std::string state_path;
  std::string family;
  int n = 3;
  double alpha = std::numbers::pi / 4.0;
  double visibility = 1.0;
};

struct RunFlags {
  std::string criterion;
  int restarts = 64;
  std::uint64_t seed = 42;
  double tol = 1e-9;
  double precision = 1e-3;
  std::string output;
  int samples = 100000;
  int threads = 0;
};

void add_state_flags(CLI::App* cmd, StateFlags& s, bool family_only) {
  if (!family_only) cmd->add_option("--state", s.state_path, "JSON state file");
  cmd->add_option("--family", s.family, "ghz | generalized-ghz | w3");
  cmd->add_option("--n", s.n, "Number of qubits for --family");
  cmd->add_option("--alpha", s.alpha, "Generalized GHZ angle in radians");
  if (!family_only) cmd->add_option("--visibility", s.visibility, "White-noise visibility");
}

void add_optimizer_flags(CLI::App* cmd, RunFlags& r) {
  cmd->add_option("--restarts", r.restarts, "Optimizer restarts")->capture_default_str();
  cmd->add_option("--seed", r.seed, "Base seed")->capture_default_str();
  cmd->add_option("--tol", r.tol, "Optimizer convergence tolerance")->capture_default_str();
  cmd->add_option("--threads", r.threads, "Worker threads (0 = all cores)");
  cmd->add_option("--output", r.output, "Write the report here instead of stdout");
}

gme::FamilySpec family_from(const StateFlags& s) {
  gme::FamilySpec f;
  f.family = gme::parse_family(s.family);
  f.n = s.n;
  f.alpha = s.alpha;
  f.visibility = s.visibility;
  f.validate();
  return f;
}

gme::LoadedState state_from(const StateFlags& s) {
  if (!s.state_path.empty() && !s.family.empty()) {
    throw gme::UsageError("give either --state or --family, not both");
  }
  if (!s.state_path.empty()) return gme::load_state_file(s.state_path);
  if (s.family.empty()) throw gme::UsageError("missing --state or --family");
  const gme::FamilySpec f = family_from(s);
  return gme::LoadedState{gme::family_density(f), f};
}

gme::OptimizerConfig config_from(const RunFlags& r) {
  gme::OptimizerConfig cfg;
  cfg.restarts = r.restarts;
  cfg.seed = r.seed;
  cfg.convergence_tol = r.tol;
  cfg.threads = r.threads;
  cfg.validate();
  return cfg;
}

gme::SamplerSettings sampler_from(const RunFlags& r) {
  gme::SamplerSettings s;
  s.seed = r.seed;
  s.samples = r.samples;
  s.threads = r.threads;
  return s;
}

gme::Criterion criterion_from(const RunFlags& r) {
  if (r.criterion.empty()) throw gme::UsageError("missing --criterion");
  try {
    return gme::parse_criterion(r.criterion);
  } catch (const gme::InvalidArgument& e) {
    throw gme::UsageError(e.what());
  }
}

void emit(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw gme::IoError("cannot write '" + path + "'");
  out << text;
  if (!out) throw gme::IoError("failed writing '" + path + "'");
}

std::vector<double> default_alpha_grid(int points) {
  std::vector<double> grid;
  const double lo = std::numbers::pi / 16.0;
  const double hi = std::numbers::pi / 4.0;
  for (int k = 0; k < points; ++k) {
    grid.push_back(points == 1 ? hi : lo + (hi - lo) * k / (points - 1));
  }
  return grid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Genuine multipartite entanglement criteria on correlation tensors"};
  app.require_subcommand(1);

  StateFlags state;
  RunFlags run;
  std::string partition_text;
  std::string metric = "standard";
  std::vector<int> pair{1, 2};
  bool fidelity = false;
  double check_tol = 1e-6;
  std::vector<double> alphas;
  int points = 9;

  auto* detect = app.add_subcommand("detect", "Evaluate one criterion on a state");
  add_state_flags(detect, state, false);
  add_optimizer_flags(detect, run);
  detect->add_option("--criterion", run.criterion, "Criterion name")->required();
  detect->add_option("--samples", run.samples, "Oracle samples for heuristic criteria");

  auto* vcrit = app.add_subcommand("vcrit", "Bisect the critical visibility of a family");
  add_state_flags(vcrit, state, true);
  add_optimizer_flags(vcrit, run);
  vcrit->add_option("--criterion", run.criterion, "Criterion name")->required();
  vcrit->add_option("--precision", run.precision, "Bisection width")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "Critical visibility over an alpha grid (CSV)");
  add_state_flags(sweep, state, true);
  add_optimizer_flags(sweep, run);
  sweep->add_option("--criterion", run.criterion, "Criterion name")->required();
  sweep->add_option("--precision", run.precision, "Bisection width")->capture_default_str();
  sweep->add_option("--alphas", alphas, "Explicit alpha values (radians)")->delimiter(',');
  sweep->add_option("--points", points, "Evenly spaced points on [pi/16, pi/4]")->capture_default_str();

  auto* oracle = app.add_subcommand("oracle-check", "Sampled maximum over product states");
  add_state_flags(oracle, state, false);
  oracle->add_option("--seed", run.seed, "Base seed")->capture_default_str();
  oracle->add_option("--samples", run.samples, "Number of samples")->capture_default_str();
  oracle->add_option("--threads", run.threads, "Worker threads (0 = all cores)");
  oracle->add_option("--output", run.output, "Write the report here instead of stdout");
  oracle->add_option("--partition", partition_text, "Partition such as 12|3 (default: all bipartitions)");
  oracle->add_option("--metric", metric, "standard | modified | ghz | ghz-xy")->capture_default_str();
  oracle->add_option("--pair", pair, "Qubit pair (1-based) for the modified metric")->delimiter(',')->expected(2);
  oracle->add_flag("--fidelity", fidelity, "Maximize the fidelity with biproduct states instead");

  auto* schmidt = app.add_subcommand("schmidt", "Generalized Schmidt normal form of a state");
  add_state_flags(schmidt, state, false);
  add_optimizer_flags(schmidt, run);
  schmidt->add_option("--check-tol", check_tol, "Tolerance of the property checks")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (detect->parsed()) {
      const gme::Criterion c = criterion_from(run);
      const auto result = gme::run_detect(state_from(state), c, config_from(run), sampler_from(run));
      emit(gme::dump_report(result.report), run.output);
      return result.exit_code;
    }
    if (vcrit->parsed()) {
      if (state.family.empty()) throw gme::UsageError("vcrit needs --family");
      const auto result =
          gme::run_vcrit(family_from(state), criterion_from(run), run.precision, config_from(run));
      emit(gme::dump_report(result.report), run.output);
      return result.exit_code;
    }
    if (sweep->parsed()) {
      if (state.family.empty()) throw gme::UsageError("sweep needs --family");
      if (alphas.empty()) alphas = default_alpha_grid(points);
      const auto rows = gme::run_sweep(family_from(state), alphas, criterion_from(run),
                                       run.precision, config_from(run));
      std::ostringstream csv;
      gme::write_sweep_csv(csv, rows);
      emit(csv.str(), run.output);
      return 0;
    }
    if (oracle->parsed()) {
      std::optional<gme::Partition> part;
      if (!partition_text.empty()) part = gme::Partition::parse(partition_text);
      const auto result = gme::run_oracle_check(state_from(state), part, metric,
                                                {pair[0] - 1, pair[1] - 1}, fidelity,
                                                sampler_from(run));
      emit(gme::dump_report(result.report), run.output);
      return 0;
    }
    if (schmidt->parsed()) {
      const auto result = gme::run_schmidt(state_from(state), config_from(run), check_tol);
      emit(gme::dump_report(result.report), run.output);
      return 0;
    }
  } catch (const gme::ParseError& e) {
    std::cerr << "error: " << e.what() << " (line " << e.line() << ")\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
