#include "gme/frameopt.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "gme/errors.hpp"
#include "parallel.hpp"

namespace gme {
namespace {

constexpr double kInitialStep = 0.3;
constexpr double kTieTol = 1e-12;

struct RestartOutcome {
  double value = -std::numeric_limits<double>::infinity();
  std::vector<Eigen::Matrix3d> rotations;
  int iterations = 0;
};

double checked(double v, int restart) {
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << "objective returned a non-finite value in restart " << restart;
    throw NumericFailure(os.str(), restart);
  }
  return v;
}

RestartOutcome run_restart(const CorrelationTensor& t, const FrameObjective& objective,
                           std::span<const int> subset, const OptimizerConfig& cfg,
                           int restart) {
  const int n = t.n_qubits();
  std::mt19937_64 rng(cfg.seed + static_cast<std::uint64_t>(restart));
  RestartOutcome out;
  out.rotations.assign(static_cast<std::size_t>(n), Eigen::Matrix3d::Identity());
  TensorWorkspace cur(t);
  for (int q : subset) {
    out.rotations[static_cast<std::size_t>(q)] = random_rotation(rng);
    cur.rotate_qubit(q, out.rotations[static_cast<std::size_t>(q)]);
  }
  TensorWorkspace trial(t);
  double f = checked(objective(cur.tensor()), restart);

  double step = kInitialStep;
  std::array<Eigen::Matrix3d, 6> moves;
  auto build_moves = [&] {
    for (int k = 0; k < 3; ++k) {
      moves[static_cast<std::size_t>(2 * k)] = axis_rotation(k, step);
      moves[static_cast<std::size_t>(2 * k + 1)] = axis_rotation(k, -step);
    }
  };
  build_moves();
  int it = 0;
  while (step >= cfg.convergence_tol && it < cfg.max_iterations) {
    ++it;
    bool improved = false;
    for (int q : subset) {
      for (int k = 0; k < 3; ++k) {
        for (int s = 0; s < 2; ++s) {
          const Eigen::Matrix3d& m = moves[static_cast<std::size_t>(2 * k + s)];
          trial.copy_from(cur);
          trial.rotate_qubit(q, m);
          const double ft = checked(objective(trial.tensor()), restart);
          if (ft > f) {
            f = ft;
            std::swap(cur, trial);
            auto& r = out.rotations[static_cast<std::size_t>(q)];
            r = m * r;
            improved = true;
            break;
          }
        }
      }
    }
    if (!improved) {
      step *= 0.5;
      build_moves();
    }
  }
  for (int q : subset) {
    auto& r = out.rotations[static_cast<std::size_t>(q)];
    r = orthonormalize(r);
  }
  out.iterations = it;
  out.value = checked(objective(rotate_local_frames(t, LocalFrame(out.rotations))), restart);
  return out;
}

std::size_t all_index(int n, int axis) {
  std::size_t idx = 0;
  for (int q = 0; q < n; ++q) idx = idx * 4 + static_cast<std::size_t>(axis + 1);
  return idx;
}

// Coordinate ascent on T'_{a...a} (a = axis) by exact single-qubit updates:
// with the other qubits fixed the component is linear in row `axis` of one
// rotation, so the best row is the normalized contraction vector. Rows below
// `axis` are held fixed.
void rank_one_sweeps(const CorrelationTensor& t, std::vector<Eigen::Matrix3d>& rots, int axis,
                     int max_sweeps) {
  const int n = t.n_qubits();
  const std::size_t diag = all_index(n, axis);
  TensorWorkspace ws(t);
  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double change = 0.0;
    for (int q = 0; q < n; ++q) {
      ws.reset();
      for (int p = 0; p < n; ++p) ws.rotate_qubit(p, rots[static_cast<std::size_t>(p)]);
      const std::size_t stride = std::size_t{1} << (2 * (n - 1 - q));
      auto& r = rots[static_cast<std::size_t>(q)];
      Eigen::Vector3d dir = Eigen::Vector3d::Zero();
      for (int a = axis; a < 3; ++a) {
        const std::size_t idx = diag + static_cast<std::size_t>(a - axis) * stride;
        dir += ws.tensor()[idx] * r.row(a).transpose();
      }
      const double norm = dir.norm();
      if (norm < 1e-300) continue;
      const Eigen::Vector3d row = dir / norm;
      change = std::max(change, (row - r.row(axis).transpose()).norm());
      Eigen::Matrix3d next;
      if (axis == 0) {
        Eigen::Vector3d r1 = r.row(1).transpose() - row.dot(r.row(1).transpose()) * row;
        if (r1.norm() < 1e-8) r1 = r.row(2).transpose() - row.dot(r.row(2).transpose()) * row;
        r1.normalize();
        next.row(0) = row.transpose();
        next.row(1) = r1.transpose();
        next.row(2) = row.cross(r1).transpose();
      } else {
        next.row(0) = r.row(0);
        next.row(1) = row.transpose();
        next.row(2) = r.row(0).transpose().cross(row).transpose();
      }
      r = orthonormalize(next);
    }
    if (change < 1e-14) break;
  }
}

constexpr std::array<std::array<double, 3>, 4> kSignFlips{{
    {1.0, 1.0, 1.0}, {1.0, -1.0, -1.0}, {-1.0, 1.0, -1.0}, {-1.0, -1.0, 1.0}}};

}  // namespace

void OptimizerConfig::validate() const {
  if (restarts <= 0) throw InvalidArgument("OptimizerConfig: restarts must be positive");
  if (max_iterations <= 0) throw InvalidArgument("OptimizerConfig: max_iterations must be positive");
  if (!(convergence_tol > 0.0 && convergence_tol < 1.0)) {
    throw InvalidArgument("OptimizerConfig: convergence_tol must lie in (0, 1)");
  }
  if (threads < 0) throw InvalidArgument("OptimizerConfig: threads must be nonnegative");
}

Eigen::Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::Quaterniond q;
  double norm = 0.0;
  do {
    q = Eigen::Quaterniond(normal(rng), normal(rng), normal(rng), normal(rng));
    norm = q.norm();
  } while (norm < 1e-12);
  q.coeffs() /= norm;
  return q.toRotationMatrix();
}

Eigen::Matrix3d axis_rotation(int axis, double angle) {
  return Eigen::AngleAxisd(angle, Eigen::Vector3d::Unit(axis)).toRotationMatrix();
}

Eigen::Matrix3d orthonormalize(const Eigen::Matrix3d& r) {
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d u = svd.matrixU();
  const Eigen::Matrix3d v = svd.matrixV();
  if ((u * v.transpose()).determinant() < 0.0) u.col(2) *= -1.0;
  return u * v.transpose();
}

OptResult maximize_over_frames(const CorrelationTensor& t, const FrameObjective& objective,
                               std::span<const int> subset, const OptimizerConfig& cfg) {
  cfg.validate();
  const int n = t.n_qubits();
  std::vector<int> qubits(subset.begin(), subset.end());
  std::sort(qubits.begin(), qubits.end());
  if (std::adjacent_find(qubits.begin(), qubits.end()) != qubits.end() ||
      (!qubits.empty() && (qubits.front() < 0 || qubits.back() >= n))) {
    throw InvalidArgument("maximize_over_frames: subset must hold distinct labels in [0, n)");
  }

  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(cfg.restarts));
  detail::parallel_for(cfg.restarts, cfg.threads, [&](int i) {
    outcomes[static_cast<std::size_t>(i)] = run_restart(t, objective, qubits, cfg, i);
  });

  std::size_t best = 0;
  for (std::size_t i = 1; i < outcomes.size(); ++i) {
    if (outcomes[i].value > outcomes[best].value + kTieTol) best = i;
  }
  OptResult res;
  res.value = outcomes[best].value;
  res.frame = LocalFrame(std::move(outcomes[best].rotations));
  res.restart_index = static_cast<int>(best);
  res.iterations = outcomes[best].iterations;
  return res;
}

double t_max(const CorrelationTensor& t, const OptimizerConfig& cfg) {
  const int n = t.n_qubits();
  const std::size_t diag = all_index(n, 0);
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) all[static_cast<std::size_t>(q)] = q;
  const OptResult r = maximize_over_frames(
      t, [diag](const CorrelationTensor& x) { return x[diag]; }, all, cfg);
  std::vector<Eigen::Matrix3d> rots = r.frame.rotations();
  rank_one_sweeps(t, rots, 0, 2000);
  const double polished = rotate_local_frames(t, LocalFrame(rots))[diag];
  return std::max({r.value, polished, 0.0});
}

SchmidtForm schmidt_normal_form(const CorrelationTensor& t, const OptimizerConfig& cfg) {
  const int n = t.n_qubits();
  if (n < 2 || n > 4) throw InvalidArgument("schmidt_normal_form: supports 2 to 4 qubits");
  std::vector<int> all(static_cast<std::size_t>(n));
  for (int q = 0; q < n; ++q) all[static_cast<std::size_t>(q)] = q;

  // Stage 1: largest T'_{1...1}.
  const std::size_t d1 = all_index(n, 0);
  const OptResult first = maximize_over_frames(
      t, [d1](const CorrelationTensor& x) { return x[d1]; }, all, cfg);
  std::vector<Eigen::Matrix3d> rots = first.frame.rotations();
  rank_one_sweeps(t, rots, 0, 5000);

  // Stage 2: largest T'_{2...2} using in-plane rotations about axis 1.
  const std::size_t d2 = all_index(n, 1);
  std::mt19937_64 rng(cfg.seed);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  const int starts = std::clamp(cfg.restarts, 1, 32);
  std::vector<Eigen::Matrix3d> best_rots = rots;
  double best_val = -std::numeric_limits<double>::infinity();
  for (int s = 0; s < starts; ++s) {
    std::vector<Eigen::Matrix3d> cand = rots;
    if (s > 0) {
      for (auto& r : cand) r = axis_rotation(0, angle(rng)) * r;
    }
    rank_one_sweeps(t, cand, 1, 5000);
    const double v = rotate_local_frames(t, LocalFrame(cand))[d2];
    if (v > best_val + kTieTol) {
      best_val = v;
      best_rots = std::move(cand);
    }
  }
  rots = std::move(best_rots);

  // Stage 3: sign flips (diag(+-1) with det +1 per qubit) minimizing the
  // negative mass on components with at most one slot differing from z,
  // preferring T'_{1..1} >= 0 and T'_{2..2} >= 0.
  const CorrelationTensor unsigned_form = rotate_local_frames(t, LocalFrame(rots));
  std::vector<std::size_t> constrained;
  for (std::size_t i = 0; i < unsigned_form.size(); ++i) {
    const MultiIndex mu = multi_index(i, n);
    if (std::count(mu.begin(), mu.end(), 0)) continue;
    if (n - std::count(mu.begin(), mu.end(), 3) <= 1) constrained.push_back(i);
  }
  const int patterns = 1 << (2 * n);
  double best_cost = std::numeric_limits<double>::infinity();
  int best_pattern = 0;
  for (int p = 0; p < patterns; ++p) {
    auto sign_of = [&](std::size_t linear) {
      const MultiIndex mu = multi_index(linear, n);
      double s = 1.0;
      for (int q = 0; q < n; ++q) {
        const auto& flip = kSignFlips[static_cast<std::size_t>((p >> (2 * q)) & 3)];
        if (mu[static_cast<std::size_t>(q)] > 0) s *= flip[static_cast<std::size_t>(mu[static_cast<std::size_t>(q)] - 1)];
      }
      return s;
    };
    double cost = 0.0;
    for (std::size_t i : constrained) cost += std::max(0.0, -sign_of(i) * unsigned_form[i]);
    cost += 1e-3 * std::max(0.0, -sign_of(d1) * unsigned_form[d1]);
    cost += 1e-6 * std::max(0.0, -sign_of(d2) * unsigned_form[d2]);
    if (cost < best_cost - 1e-15) {
      best_cost = cost;
      best_pattern = p;
    }
  }
  for (int q = 0; q < n; ++q) {
    const auto& flip = kSignFlips[static_cast<std::size_t>((best_pattern >> (2 * q)) & 3)];
    const Eigen::Vector3d d(flip[0], flip[1], flip[2]);
    rots[static_cast<std::size_t>(q)] = d.asDiagonal() * rots[static_cast<std::size_t>(q)];
  }
  LocalFrame frame(std::move(rots));
  CorrelationTensor rotated = rotate_local_frames(t, frame);
  return SchmidtForm{std::move(rotated), std::move(frame)};
}

}  // namespace gme
