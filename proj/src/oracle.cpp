#include "gme/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "gme/errors.hpp"
#include "parallel.hpp"

namespace gme {
namespace {

using Blocks = std::vector<Eigen::VectorXcd>;

struct BlockLayout {
  int n = 0;
  std::vector<std::vector<int>> blocks;
  // local_index[b][x]: basis index of block b's qubits inside full index x.
  std::vector<std::vector<int>> local_index;
};

BlockLayout make_layout(const Partition& p) {
  BlockLayout l;
  l.n = p.n_qubits();
  l.blocks = p.blocks();
  const int dim = 1 << l.n;
  for (const auto& b : l.blocks) {
    std::vector<int> idx(static_cast<std::size_t>(dim));
    for (int x = 0; x < dim; ++x) {
      int local = 0;
      for (int q : b) local = (local << 1) | ((x >> (l.n - 1 - q)) & 1);
      idx[static_cast<std::size_t>(x)] = local;
    }
    l.local_index.push_back(std::move(idx));
  }
  return l;
}

Eigen::VectorXcd random_unit_vector(Eigen::Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Eigen::VectorXcd v(dim);
  double norm = 0.0;
  do {
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = Complex(normal(rng), normal(rng));
    norm = v.norm();
  } while (norm < 1e-12);
  return v / norm;
}

Blocks random_blocks(const BlockLayout& l, std::mt19937_64& rng) {
  Blocks out;
  out.reserve(l.blocks.size());
  for (const auto& b : l.blocks) out.push_back(random_unit_vector(Eigen::Index{1} << b.size(), rng));
  return out;
}

Eigen::VectorXcd assemble(const BlockLayout& l, const Blocks& blocks) {
  const int dim = 1 << l.n;
  Eigen::VectorXcd psi(dim);
  for (int x = 0; x < dim; ++x) {
    Complex a(1.0, 0.0);
    for (std::size_t b = 0; b < blocks.size(); ++b) a *= blocks[b](l.local_index[b][static_cast<std::size_t>(x)]);
    psi(x) = a;
  }
  return psi;
}

double expectation(const Eigen::MatrixXcd& h, const Eigen::VectorXcd& psi) {
  return psi.dot(h * psi).real();
}

// Best state of block b with the other blocks held fixed: top eigenvector of
// the effective block operator.
void block_eigen_update(const Eigen::MatrixXcd& h, const BlockLayout& l, Blocks& blocks,
                        std::size_t b) {
  const int dim = 1 << l.n;
  const Eigen::Index db = blocks[b].size();
  std::vector<Complex> phi(static_cast<std::size_t>(dim));
  for (int x = 0; x < dim; ++x) {
    Complex a(1.0, 0.0);
    for (std::size_t c = 0; c < blocks.size(); ++c) {
      if (c != b) a *= blocks[c](l.local_index[c][static_cast<std::size_t>(x)]);
    }
    phi[static_cast<std::size_t>(x)] = a;
  }
  Eigen::MatrixXcd hb = Eigen::MatrixXcd::Zero(db, db);
  for (int x = 0; x < dim; ++x) {
    const Complex cx = std::conj(phi[static_cast<std::size_t>(x)]);
    if (cx == Complex{}) continue;
    const int i = l.local_index[b][static_cast<std::size_t>(x)];
    for (int y = 0; y < dim; ++y) {
      const Complex py = phi[static_cast<std::size_t>(y)];
      if (py == Complex{}) continue;
      hb(i, l.local_index[b][static_cast<std::size_t>(y)]) += cx * h(x, y) * py;
    }
  }
  hb = 0.5 * (hb + hb.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(hb);
  blocks[b] = es.eigenvectors().col(db - 1);
}

double refine(const Eigen::MatrixXcd& h, const BlockLayout& l, Blocks blocks, double value,
              int steps, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  double eps = 0.2;
  for (int s = 0; s < steps; ++s) {
    const std::size_t b = static_cast<std::size_t>(s) % blocks.size();
    Blocks cand = blocks;
    Eigen::VectorXcd& v = cand[b];
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) += eps * Complex(normal(rng), normal(rng));
    v.normalize();
    const double fc = expectation(h, assemble(l, cand));
    if (fc > value) {
      value = fc;
      blocks = std::move(cand);
      eps = std::min(1.0, eps * 1.5);
    } else {
      eps *= 0.85;
    }
  }
  for (int sweep = 0; sweep < 200; ++sweep) {
    for (std::size_t b = 0; b < blocks.size(); ++b) block_eigen_update(h, l, blocks, b);
    const double next = expectation(h, assemble(l, blocks));
    const bool done = next - value < 1e-15;
    value = std::max(value, next);
    if (done) break;
  }
  return value;
}

double maximize_product_expectation(const Eigen::MatrixXcd& h, const Partition& partition,
                                    const SamplerSettings& s) {
  if (s.samples < 1) throw InvalidArgument("sampler: samples must be >= 1");
  if (s.refine_steps < 0) throw InvalidArgument("sampler: refine_steps must be >= 0");
  const BlockLayout layout = make_layout(partition);
  std::vector<double> values(static_cast<std::size_t>(s.samples));
  detail::parallel_for(s.samples, s.threads, [&](int i) {
    std::mt19937_64 rng(s.seed + static_cast<std::uint64_t>(i));
    values[static_cast<std::size_t>(i)] =
        expectation(h, assemble(layout, random_blocks(layout, rng)));
  });
  // Samples that set a new running maximum; this set is stable under
  // extending the sample count, so the result cannot decrease.
  std::vector<int> records;
  double running = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < s.samples; ++i) {
    if (values[static_cast<std::size_t>(i)] > running) {
      running = values[static_cast<std::size_t>(i)];
      records.push_back(i);
    }
  }
  std::vector<double> refined(records.size());
  detail::parallel_for(static_cast<int>(records.size()), s.threads, [&](int r) {
    const int i = records[static_cast<std::size_t>(r)];
    std::mt19937_64 rng(s.seed + static_cast<std::uint64_t>(i));
    Blocks blocks = random_blocks(layout, rng);
    std::mt19937_64 refine_rng((s.seed + static_cast<std::uint64_t>(i)) ^ 0x9E3779B97F4A7C15ULL);
    refined[static_cast<std::size_t>(r)] =
        refine(h, layout, std::move(blocks), values[static_cast<std::size_t>(i)],
               s.refine_steps, refine_rng);
  });
  double best = running;
  for (double v : refined) best = std::max(best, v);
  return best;
}

}  // namespace

PureState sample_pure_product(const Partition& partition, std::uint64_t seed) {
  const BlockLayout layout = make_layout(partition);
  std::mt19937_64 rng(seed);
  Eigen::VectorXcd psi = assemble(layout, random_blocks(layout, rng));
  psi.normalize();
  return PureState(partition.n_qubits(), std::move(psi));
}

double max_product_overlap(const CorrelationTensor& t, const DiagonalMetric& g,
                           const ProductSampler& sampler) {
  const int n = t.n_qubits();
  if (g.n_qubits() != n || sampler.partition.n_qubits() != n) {
    throw InvalidArgument("max_product_overlap: qubit counts differ");
  }
  std::vector<double> coeffs(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) coeffs[i] = g.weight(i) * t[i];
  const Eigen::MatrixXcd h = pauli_operator_sum(n, coeffs);
  return maximize_product_expectation(h, sampler.partition, sampler.settings);
}

double max_biprod_fidelity(const DensityMatrix& target, const SamplerSettings& settings) {
  const int n = target.n_qubits();
  if (n < 2) throw InvalidArgument("max_biprod_fidelity: needs at least 2 qubits");
  double best = -std::numeric_limits<double>::infinity();
  for (const Partition& p : enumerate_k_partitions(n, 2)) {
    best = std::max(best, maximize_product_expectation(target.matrix(), p, settings));
  }
  return best;
}

SchmidtReport verify_schmidt_properties(const CorrelationTensor& t, double tol) {
  const int n = t.n_qubits();
  auto label = [](const MultiIndex& mu) {
    std::string s;
    for (int m : mu) s += static_cast<char>('0' + m);
    return s;
  };
  auto note = [&](PropertyCheck& chk, double violation, const MultiIndex& mu) {
    if (violation > chk.worst_violation) {
      chk.worst_violation = violation;
      chk.worst_index = label(mu);
    }
  };
  SchmidtReport rep;
  // Zero pattern.
  for (int i = 1; i <= 3; ++i) {
    for (int j = i + 1; j <= 3; ++j) {
      for (int pos = 0; pos < n; ++pos) {
        MultiIndex mu(static_cast<std::size_t>(n), i);
        mu[static_cast<std::size_t>(pos)] = j;
        note(rep.zero_pattern, std::abs(t.at(mu)), mu);
      }
    }
  }
  // Sign and dominance over Latin indices.
  std::array<double, 3> diag{};
  for (int j = 1; j <= 3; ++j) diag[static_cast<std::size_t>(j - 1)] = std::abs(t.at(MultiIndex(static_cast<std::size_t>(n), j)));
  for (std::size_t lin = 0; lin < t.size(); ++lin) {
    const MultiIndex mu = multi_index(lin, n);
    if (std::count(mu.begin(), mu.end(), 0)) continue;
    if (n - std::count(mu.begin(), mu.end(), 3) <= 1) note(rep.sign, std::max(0.0, -t[lin]), mu);
    const int lo = *std::min_element(mu.begin(), mu.end());
    for (int j = 1; j <= lo; ++j) {
      note(rep.dominance, std::max(0.0, std::abs(t[lin]) - diag[static_cast<std::size_t>(j - 1)]), mu);
    }
  }
  rep.zero_pattern.passed = rep.zero_pattern.worst_violation <= tol;
  rep.sign.passed = rep.sign.worst_violation <= tol;
  rep.dominance.passed = rep.dominance.worst_violation <= tol;
  if (n == 3) {
    auto nonzero = [&](const char* a, const char* b, const char* c) {
      return (std::abs(t.at(a)) > tol) + (std::abs(t.at(b)) > tol) + (std::abs(t.at(c)) > tol);
    };
    rep.single_nonzero_groups =
        nonzero("111", "112", "113") <= 1 && nonzero("221", "222", "223") <= 1;
  }
  return rep;
}

}  // namespace gme
