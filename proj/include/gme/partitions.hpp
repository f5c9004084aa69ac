#pragma once

#include <string>
#include <vector>

namespace gme {

/// Split of qubit labels 0..n-1 into disjoint nonempty blocks. Blocks are
/// sorted internally and ordered by their smallest member.
class Partition {
 public:
  /// Canonicalizes the block order; throws InvalidArgument if the blocks do
  /// not cover 0..n-1 exactly once.
  Partition(int n_qubits, std::vector<std::vector<int>> blocks);

  int n_qubits() const noexcept { return n_qubits_; }
  std::size_t block_count() const noexcept { return blocks_.size(); }
  const std::vector<std::vector<int>>& blocks() const noexcept { return blocks_; }

  /// One-based rendering, e.g. "12|3|4".
  std::string to_string() const;
  /// Inverse of to_string for n <= 9.
  static Partition parse(const std::string& text);

  bool operator==(const Partition&) const = default;

 private:
  int n_qubits_;
  std::vector<std::vector<int>> blocks_;
};

/// All set partitions of n labels into exactly k blocks, in restricted-growth
/// (lexicographic) order.
std::vector<Partition> enumerate_k_partitions(int n, int k);

/// Block sizes in ascending order, e.g. (1, 3) for 1|234.
std::vector<int> partition_shape(const Partition& p);

}  // namespace gme
