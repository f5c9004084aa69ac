#include "gme/partitions.hpp"

#include <algorithm>

#include "gme/errors.hpp"
#include "gme/states.hpp"

namespace gme {

Partition::Partition(int n_qubits, std::vector<std::vector<int>> blocks)
    : n_qubits_(n_qubits), blocks_(std::move(blocks)) {
  if (n_qubits_ < 1) throw InvalidArgument("Partition: n must be positive");
  std::vector<int> seen(static_cast<std::size_t>(n_qubits_), 0);
  for (auto& b : blocks_) {
    if (b.empty()) throw InvalidArgument("Partition: empty block");
    std::sort(b.begin(), b.end());
    for (int q : b) {
      if (q < 0 || q >= n_qubits_) throw InvalidArgument("Partition: label out of range");
      if (seen[static_cast<std::size_t>(q)]++) throw InvalidArgument("Partition: blocks overlap");
    }
  }
  if (std::count(seen.begin(), seen.end(), 1) != n_qubits_) {
    throw InvalidArgument("Partition: blocks do not cover all qubits");
  }
  std::sort(blocks_.begin(), blocks_.end(),
            [](const auto& x, const auto& y) { return x.front() < y.front(); });
}

std::string Partition::to_string() const {
  std::string s;
  for (std::size_t i = 0; i < blocks_.size(); ++i) {
    if (i) s += '|';
    for (int q : blocks_[i]) s += std::to_string(q + 1);
  }
  return s;
}

Partition Partition::parse(const std::string& text) {
  std::vector<std::vector<int>> blocks(1);
  int n = 0;
  for (char ch : text) {
    if (ch == '|') {
      blocks.emplace_back();
    } else if (ch >= '1' && ch <= '9') {
      blocks.back().push_back(ch - '1');
      ++n;
    } else {
      throw InvalidArgument("Partition::parse: unexpected character in '" + text + "'");
    }
  }
  return Partition(n, std::move(blocks));
}

std::vector<Partition> enumerate_k_partitions(int n, int k) {
  if (n < 1 || n > kMaxQubits) throw InvalidArgument("enumerate_k_partitions: n out of range");
  if (k < 1 || k > n) throw InvalidArgument("enumerate_k_partitions: k outside [1, n]");
  std::vector<Partition> out;
  std::vector<int> label(static_cast<std::size_t>(n), 0);
  // Restricted growth strings: label[i] <= 1 + max(label[0..i-1]).
  auto recurse = [&](auto&& self, int i, int used) -> void {
    if (n - i < k - used) return;
    if (i == n) {
      if (used != k) return;
      std::vector<std::vector<int>> blocks(static_cast<std::size_t>(k));
      for (int q = 0; q < n; ++q) blocks[static_cast<std::size_t>(label[static_cast<std::size_t>(q)])].push_back(q);
      out.emplace_back(n, std::move(blocks));
      return;
    }
    for (int b = 0; b <= std::min(used, k - 1); ++b) {
      label[static_cast<std::size_t>(i)] = b;
      self(self, i + 1, b == used ? used + 1 : used);
    }
  };
  recurse(recurse, 0, 0);
  return out;
}

std::vector<int> partition_shape(const Partition& p) {
  std::vector<int> shape;
  for (const auto& b : p.blocks()) shape.push_back(static_cast<int>(b.size()));
  std::sort(shape.begin(), shape.end());
  return shape;
}

}  // namespace gme
