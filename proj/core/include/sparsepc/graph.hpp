#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "sparsepc/errors.hpp"

namespace sparsepc {

/// Undirected graph on m vertices, dense bit-packed adjacency rows,
/// no self-loops. `planted` optionally records a ground-truth clique.
class Graph {
 public:
  explicit Graph(int m) : m_(m) {
    if (m < 1) throw InvalidArgument("Graph: vertex count must be >= 1");
    words_per_row_ = (m + 63) / 64;
    bits_.assign(static_cast<std::size_t>(m) * words_per_row_, 0);
  }

  int vertex_count() const { return m_; }

  bool adjacent(int i, int j) const {
    if (i == j) return false;
    return (row(i)[j >> 6] >> (j & 63)) & 1u;
  }

  void set_edge(int i, int j, bool on) {
    if (i == j) throw InvalidArgument("Graph: no self-loops");
    set_bit(i, j, on);
    set_bit(j, i, on);
  }

  int degree(int v) const {
    int deg = 0;
    const std::uint64_t* r = row(v);
    for (int w = 0; w < words_per_row_; ++w) deg += __builtin_popcountll(r[w]);
    return deg;
  }

  long long edge_count() const {
    long long total = 0;
    for (int v = 0; v < m_; ++v) total += degree(v);
    return total / 2;
  }

  const std::optional<std::vector<int>>& planted() const { return planted_; }
  void set_planted(std::vector<int> clique) { planted_ = std::move(clique); }

 private:
  const std::uint64_t* row(int i) const { return bits_.data() + static_cast<std::size_t>(i) * words_per_row_; }
  void set_bit(int i, int j, bool on) {
    std::uint64_t& word = bits_[static_cast<std::size_t>(i) * words_per_row_ + (j >> 6)];
    const std::uint64_t mask = 1ull << (j & 63);
    if (on) {
      word |= mask;
    } else {
      word &= ~mask;
    }
  }

  int m_ = 0;
  int words_per_row_ = 0;
  std::vector<std::uint64_t> bits_;
  std::optional<std::vector<int>> planted_;
};

}  // namespace sparsepc
