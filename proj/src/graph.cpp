#include "mdvo/graph.hpp"

#include <queue>
#include <stdexcept>
#include <string>

namespace mdvo {

Graph::Graph(std::size_t n_agents) : Graph(n_agents, std::vector<std::uint8_t>(n_agents * n_agents, 0)) {}

Graph::Graph(std::size_t n_agents, std::vector<std::uint8_t> adjacency)
    : n_(n_agents), adjacency_(std::move(adjacency)) {
  if (n_ == 0) throw std::invalid_argument("graph: n_agents must be >= 1");
  if (adjacency_.size() != n_ * n_) throw std::invalid_argument("graph: adjacency must be n x n");
  for (std::size_t i = 0; i < n_; ++i) {
    if (adjacency_[i * n_ + i] != 0)
      throw std::invalid_argument("graph: self-loop at agent " + std::to_string(i + 1));
    for (std::size_t j = 0; j < n_; ++j) {
      const auto a = adjacency_[i * n_ + j];
      if (a > 1) throw std::invalid_argument("graph: adjacency entries must be 0 or 1");
      if (a != adjacency_[j * n_ + i])
        throw std::invalid_argument("graph: adjacency not symmetric at (" + std::to_string(i + 1) + "," +
                                    std::to_string(j + 1) + ")");
    }
  }
  build_csr();
}

Graph Graph::from_edges(std::size_t n_agents, std::span<const Edge> edges) {
  if (n_agents == 0) throw std::invalid_argument("graph: n_agents must be >= 1");
  std::vector<std::uint8_t> adj(n_agents * n_agents, 0);
  for (const auto& [a, b] : edges) {
    if (a >= n_agents || b >= n_agents) throw std::out_of_range("graph: edge endpoint out of range");
    if (a == b) throw std::invalid_argument("graph: self-loop at agent " + std::to_string(a + 1));
    adj[a * n_agents + b] = 1;
    adj[b * n_agents + a] = 1;
  }
  return Graph(n_agents, std::move(adj));
}

Graph Graph::from_one_based_edges(std::size_t n_agents, std::span<const Edge> edges) {
  std::vector<Edge> zero_based;
  zero_based.reserve(edges.size());
  for (const auto& [a, b] : edges) {
    if (a == 0 || b == 0) throw std::out_of_range("graph: 1-based edge endpoint is 0");
    zero_based.emplace_back(a - 1, b - 1);
  }
  return from_edges(n_agents, zero_based);
}

Graph Graph::path(std::size_t n_agents) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i + 1 < n_agents; ++i) e.emplace_back(i, i + 1);
  return from_edges(n_agents, e);
}

Graph Graph::complete(std::size_t n_agents) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i < n_agents; ++i)
    for (std::size_t j = i + 1; j < n_agents; ++j) e.emplace_back(i, j);
  return from_edges(n_agents, e);
}

std::span<const std::size_t> Graph::neighbors(std::size_t i) const {
  if (i >= n_) throw std::out_of_range("graph: agent index " + std::to_string(i) + " out of range");
  return std::span<const std::size_t>(col_index_).subspan(row_offset_[i], row_offset_[i + 1] - row_offset_[i]);
}

std::vector<Graph::Edge> Graph::edges() const {
  std::vector<Edge> out;
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = i + 1; j < n_; ++j)
      if (adjacent(i, j)) out.emplace_back(i, j);
  return out;
}

void Graph::build_csr() {
  row_offset_.assign(n_ + 1, 0);
  col_index_.clear();
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j)
      if (adjacent(i, j)) col_index_.push_back(j);
    row_offset_[i + 1] = col_index_.size();
  }
}

bool is_connected(const Graph& g) {
  const std::size_t n = g.size();
  std::vector<bool> seen(n, false);
  std::queue<std::size_t> frontier;
  frontier.push(0);
  seen[0] = true;
  std::size_t reached = 1;
  while (!frontier.empty()) {
    const auto i = frontier.front();
    frontier.pop();
    for (auto j : g.neighbors(i)) {
      if (!seen[j]) {
        seen[j] = true;
        ++reached;
        frontier.push(j);
      }
    }
  }
  return reached == n;
}

}  // namespace mdvo
