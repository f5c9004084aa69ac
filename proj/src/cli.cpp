#include "gme/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "gme/corrtensor.hpp"
#include "gme/errors.hpp"
#include "gme/metrics.hpp"

namespace gme {

using nlohmann::json;

namespace {

int line_of_offset(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<int>(std::count(text.begin(), text.begin() + static_cast<long>(offset), '\n'));
}

// Line of the first occurrence of "key", or 1 when absent.
int line_of_key(const std::string& text, const std::string& key) {
  const auto pos = text.find("\"" + key + "\"");
  return pos == std::string::npos ? 1 : line_of_offset(text, pos);
}

class FieldReader {
 public:
  explicit FieldReader(const std::string& text) : text_(text) {}

  [[noreturn]] void fail(const std::string& field, const std::string& why) const {
    const std::string key = field.substr(0, field.find('['));
    throw ParseError("state file: field '" + field + "' " + why, line_of_key(text_, key), field);
  }

  const json& require(const json& obj, const std::string& key) const {
    const auto it = obj.find(key);
    if (it == obj.end()) fail(key, "is missing");
    return *it;
  }

  double number(const json& v, const std::string& field) const {
    if (!v.is_number()) fail(field, "must be a number");
    return v.get<double>();
  }

  int integer(const json& v, const std::string& field) const {
    if (!v.is_number_integer()) fail(field, "must be an integer");
    return v.get<int>();
  }

 private:
  const std::string& text_;
};

nlohmann::json metric_summary(const PartitionBound& b) {
  json w = json::array();
  const auto weights = b.metric.weights();
  const int n = b.metric.n_qubits();
  for (std::size_t k = 0; k < weights.size(); ++k) {
    if (weights[k] == 0.0) continue;
    std::string label;
    for (int slot : multi_index(k, n)) label += static_cast<char>('0' + slot);
    w.push_back(label);
  }
  return w;
}

double elapsed_ms(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
}

json optimizer_fields(const OptimizerConfig& cfg) {
  return json{{"seed", cfg.seed},
              {"restarts", cfg.restarts},
              {"max_iterations", cfg.max_iterations},
              {"tolerance", cfg.convergence_tol}};
}

json family_to_json(const FamilySpec& f) {
  return json{{"family", std::string(family_name(f.family))},
              {"n", f.n},
              {"alpha", f.alpha},
              {"visibility", f.visibility}};
}

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

LoadedState parse_state_text(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("state file: ") + e.what(), line_of_offset(text, e.byte), "");
  }
  FieldReader rd(text);
  if (!doc.is_object()) rd.fail("<root>", "must be a JSON object");

  if (doc.contains("family")) {
    const json& fam = doc["family"];
    if (!fam.is_string()) rd.fail("family", "must be a string");
    FamilySpec spec;
    try {
      spec.family = parse_family(fam.get<std::string>());
    } catch (const InvalidArgument& e) {
      rd.fail("family", std::string("is invalid: ") + e.what());
    }
    spec.n = rd.integer(rd.require(doc, "n"), "n");
    if (doc.contains("alpha")) spec.alpha = rd.number(doc["alpha"], "alpha");
    if (doc.contains("visibility")) spec.visibility = rd.number(doc["visibility"], "visibility");
    try {
      spec.validate();
    } catch (const InvalidArgument& e) {
      rd.fail("family", std::string("has invalid parameters: ") + e.what());
    }
    return LoadedState{family_density(spec), spec};
  }

  const int n = rd.integer(rd.require(doc, "n_qubits"), "n_qubits");
  if (n < 1 || n > kMaxQubits) rd.fail("n_qubits", "must lie in [1, 8]");
  const json& rows = rd.require(doc, "matrix");
  const int dim = 1 << n;
  if (!rows.is_array() || static_cast<int>(rows.size()) != dim) {
    rd.fail("matrix", "must hold " + std::to_string(dim) + " rows");
  }
  Eigen::MatrixXcd m(dim, dim);
  for (int r = 0; r < dim; ++r) {
    const json& row = rows[static_cast<std::size_t>(r)];
    const std::string rf = "matrix[" + std::to_string(r) + "]";
    if (!row.is_array() || static_cast<int>(row.size()) != dim) {
      rd.fail(rf, "must hold " + std::to_string(dim) + " entries");
    }
    for (int c = 0; c < dim; ++c) {
      const json& e = row[static_cast<std::size_t>(c)];
      const std::string ef = rf + "[" + std::to_string(c) + "]";
      if (!e.is_array() || e.size() != 2) rd.fail(ef, "must be a [re, im] pair");
      m(r, c) = {rd.number(e[0], ef), rd.number(e[1], ef)};
    }
  }
  return LoadedState{DensityMatrix(n, std::move(m)), std::nullopt};
}

LoadedState load_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open state file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_state_text(buf.str());
}

DensityMatrix parse_state_file(const std::string& path) { return load_state_file(path).rho; }

json frame_to_json(const LocalFrame& frame) {
  json out = json::array();
  for (const auto& r : frame.rotations()) {
    json m = json::array();
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) m.push_back(r(i, j));
    out.push_back(std::move(m));
  }
  return out;
}

json verdict_to_json(const CriterionVerdict& v) {
  json parts = json::array();
  for (const auto& b : v.per_partition) {
    json p{{"partition", b.partition.to_string()},
           {"lhs", b.lhs},
           {"rhs", b.rhs},
           {"metric_support", metric_summary(b)}};
    if (!b.label.empty()) p["inequality"] = b.label;
    if (b.metric_frame) p["metric_frame"] = frame_to_json(*b.metric_frame);
    if (b.provenance) {
      p["frames"] = frame_to_json(b.provenance->frame);
      p["restart_index"] = b.provenance->restart_index;
      p["iterations"] = b.provenance->iterations;
    }
    parts.push_back(std::move(p));
  }
  return json{{"criterion", v.criterion_name},
              {"lhs", v.lhs},
              {"rhs", v.rhs},
              {"detected", v.detected},
              {"rigorous", v.rigorous},
              {"strictness_margin", kStrictnessMargin},
              {"partitions", std::move(parts)}};
}

CommandResult run_detect(const LoadedState& state, Criterion c, const OptimizerConfig& cfg,
                         const SamplerSettings& sampler) {
  const auto start = std::chrono::steady_clock::now();
  const int n = state.rho.n_qubits();
  if (!criterion_supports(c, n)) {
    throw UsageError("criterion " + std::string(criterion_name(c)) + " does not support " +
                     std::to_string(n) + "-qubit states");
  }
  CriterionVerdict v;
  if (c == Criterion::kGhzMetric) {
    if (state.family && state.family->family != Family::kW3) {
      v = ghz_metric_test(*state.family);
    } else {
      v = ghz_metric_heuristic(tensor_from_density(state.rho), sampler);
    }
  } else {
    v = evaluate_criterion(c, tensor_from_density(state.rho), cfg);
  }
  json report = verdict_to_json(v);
  report["command"] = "detect";
  report["schema_version"] = kReportSchemaVersion;
  report["n_qubits"] = n;
  if (state.family) report["family"] = family_to_json(*state.family);
  report.update(optimizer_fields(cfg));
  if (!v.rigorous) {
    report["samples"] = sampler.samples;
    report["seed"] = sampler.seed;
  }
  report["wall_time_ms"] = elapsed_ms(start);
  return CommandResult{std::move(report), v.detected ? 0 : 1};
}

CommandResult run_vcrit(const FamilySpec& family, Criterion c, double precision,
                        const OptimizerConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  if (!criterion_supports(c, family.n)) {
    throw UsageError("criterion " + std::string(criterion_name(c)) + " does not support " +
                     std::to_string(family.n) + "-qubit states");
  }
  if (c == Criterion::kGhzMetric && family.family == Family::kW3) {
    throw UsageError("ghz-metric has no rigorous bound for the w3 family");
  }
  const std::optional<double> numeric = vcrit_scan(family, c, precision, cfg);
  const std::optional<double> analytic = analytic_vcrit(family, c);
  FamilySpec shown = family;
  shown.visibility = 1.0;
  json report{{"command", "vcrit"},
              {"schema_version", kReportSchemaVersion},
              {"criterion", std::string(criterion_name(c))},
              {"family", family_to_json(shown)},
              {"precision", precision}};
  report["v_crit_numeric"] = numeric ? json(*numeric) : json(">1");
  report["v_crit_analytic"] = analytic ? json(*analytic) : json(nullptr);
  report["abs_diff"] = numeric && analytic ? json(std::abs(*numeric - *analytic)) : json(nullptr);
  report.update(optimizer_fields(cfg));
  report["wall_time_ms"] = elapsed_ms(start);
  return CommandResult{std::move(report), 0};
}

std::vector<SweepRow> run_sweep(FamilySpec family, std::span<const double> alphas, Criterion c,
                                double precision, const OptimizerConfig& cfg) {
  if (alphas.empty()) throw InvalidArgument("sweep: alpha grid is empty");
  std::vector<SweepRow> rows;
  for (double a : alphas) {
    family.alpha = a;
    rows.push_back(SweepRow{a, vcrit_scan(family, c, precision, cfg), analytic_vcrit(family, c)});
  }
  return rows;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRow> rows) {
  out << "alpha,v_crit_numeric,v_crit_analytic,abs_diff\n";
  for (const auto& r : rows) {
    out << format_g17(r.alpha) << ',' << (r.numeric ? format_g17(*r.numeric) : ">1") << ','
        << (r.analytic ? format_g17(*r.analytic) : "") << ',';
    if (r.numeric && r.analytic) out << format_g17(std::abs(*r.numeric - *r.analytic));
    out << '\n';
  }
  if (!out) throw IoError("sweep: failed writing CSV output");
}

CommandResult run_oracle_check(const LoadedState& state, const std::optional<Partition>& partition,
                               const std::string& metric_name, std::array<int, 2> pair,
                               bool fidelity, const SamplerSettings& sampler) {
  const auto start = std::chrono::steady_clock::now();
  const int n = state.rho.n_qubits();
  json report{{"command", "oracle-check"},
              {"schema_version", kReportSchemaVersion},
              {"n_qubits", n},
              {"seed", sampler.seed},
              {"samples", sampler.samples},
              {"refine_steps", sampler.refine_steps}};
  if (state.family) report["family"] = family_to_json(*state.family);
  if (fidelity) {
    report["quantity"] = "max_biprod_fidelity";
    report["value"] = max_biprod_fidelity(state.rho, sampler);
  } else {
    const CorrelationTensor t = tensor_from_density(state.rho);
    const DiagonalMetric g = metric_by_name(metric_name, n, pair);
    std::vector<Partition> parts;
    if (partition) {
      if (partition->n_qubits() != n) throw UsageError("oracle-check: partition size mismatch");
      parts.push_back(*partition);
    } else {
      parts = enumerate_k_partitions(n, 2);
    }
    json per = json::array();
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& p : parts) {
      const double value = max_product_overlap(t, g, ProductSampler{p, sampler});
      best = std::max(best, value);
      per.push_back(json{{"partition", p.to_string()}, {"value", value}});
    }
    report["quantity"] = "max_product_overlap";
    report["metric"] = metric_name;
    report["partitions"] = std::move(per);
    report["value"] = best;
  }
  report["wall_time_ms"] = elapsed_ms(start);
  return CommandResult{std::move(report), 0};
}

CommandResult run_schmidt(const LoadedState& state, const OptimizerConfig& cfg, double tol) {
  const auto start = std::chrono::steady_clock::now();
  const CorrelationTensor t = tensor_from_density(state.rho);
  const SchmidtForm form = schmidt_normal_form(t, cfg);
  const SchmidtReport checks = verify_schmidt_properties(form.tensor, tol);
  const int n = t.n_qubits();

  json comps = json::object();
  for (std::size_t k = 0; k < form.tensor.size(); ++k) {
    const double x = form.tensor[k];
    if (std::abs(x) <= tol) continue;
    std::string label;
    for (int slot : multi_index(k, n)) label += static_cast<char>('0' + slot);
    comps[label] = x;
  }
  auto check_json = [](const PropertyCheck& c) {
    return json{{"passed", c.passed}, {"worst_violation", c.worst_violation}, {"worst_index", c.worst_index}};
  };
  json report{{"command", "schmidt"},
              {"schema_version", kReportSchemaVersion},
              {"n_qubits", n},
              {"frames", frame_to_json(form.frame)},
              {"components", std::move(comps)},
              {"zero_pattern", check_json(checks.zero_pattern)},
              {"sign", check_json(checks.sign)},
              {"dominance", check_json(checks.dominance)},
              {"single_nonzero_groups", checks.single_nonzero_groups},
              {"check_tolerance", tol}};
  if (state.family) report["family"] = family_to_json(*state.family);
  report.update(optimizer_fields(cfg));
  report["wall_time_ms"] = elapsed_ms(start);
  return CommandResult{std::move(report), 0};
}

std::string dump_report(const json& report) { return report.dump(2) + "\n"; }

}  // namespace gme
