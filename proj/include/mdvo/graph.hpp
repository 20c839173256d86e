#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace mdvo {

/// Fixed undirected communication topology over N agents.
///
/// Stored as a dense {0,1} adjacency matrix plus a CSR neighbor list built at
/// construction; the CSR form is what the consensus kernels iterate over.
/// Indices are 0-based; configs and CSV use 1-based indices and convert via
/// from_one_based_edges().
class Graph {
 public:
  using Edge = std::pair<std::size_t, std::size_t>;

  explicit Graph(std::size_t n_agents);

  /// Throws std::invalid_argument if the matrix is not n x n, not symmetric,
  /// has a nonzero diagonal or an entry outside {0,1}.
  Graph(std::size_t n_agents, std::vector<std::uint8_t> adjacency);

  static Graph from_edges(std::size_t n_agents, std::span<const Edge> edges);
  static Graph from_one_based_edges(std::size_t n_agents, std::span<const Edge> edges);

  static Graph path(std::size_t n_agents);
  static Graph complete(std::size_t n_agents);

  std::size_t size() const { return n_; }
  bool adjacent(std::size_t i, std::size_t j) const { return adjacency_[i * n_ + j] != 0; }

  /// Ascending neighbor indices of agent i; throws std::out_of_range.
  std::span<const std::size_t> neighbors(std::size_t i) const;
  std::size_t degree(std::size_t i) const { return neighbors(i).size(); }
  std::size_t edge_count() const { return col_index_.size() / 2; }

  /// 0-based undirected edges with first < second, lexicographic order.
  std::vector<Edge> edges() const;

  // CSR view used by the kernels.
  std::span<const std::size_t> row_offsets() const { return row_offset_; }
  std::span<const std::size_t> column_indices() const { return col_index_; }

 private:
  void build_csr();

  std::size_t n_;
  std::vector<std::uint8_t> adjacency_;
  std::vector<std::size_t> row_offset_;
  std::vector<std::size_t> col_index_;
};

/// Breadth-first reachability from agent 0.
bool is_connected(const Graph& g);

}  // namespace mdvo
