#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "pbs/matrix.hpp"

namespace pbs {

using Vertex = std::uint32_t;
using Edge = std::pair<Vertex, Vertex>;  // normalized u < v

/// Simple undirected graph. The edge set is the single source of truth;
/// sorted adjacency lists are maintained alongside it and the dense 0/1
/// adjacency matrix (symmetric, zero diagonal) is materialized on demand.
class Graph {
 public:
  explicit Graph(std::size_t n) : n_(n), adj_(n) {}
  Graph(std::size_t n, const std::vector<Edge>& edges);

  std::size_t vertex_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }

  /// Throws on self loops, out-of-range endpoints and duplicate edges.
  void add_edge(Vertex u, Vertex v);
  bool has_edge(Vertex u, Vertex v) const;

  const std::vector<Vertex>& neighbors(Vertex v) const { return adj_[v]; }
  std::size_t degree(Vertex v) const { return adj_[v].size(); }

  /// Edges sorted lexicographically with u < v.
  std::vector<Edge> sorted_edges() const;

  Matrix adjacency_matrix() const;

  /// Induced subgraph on `vertices` (sorted ascending); vertex i of the
  /// result is vertices[i].
  Graph induced_subgraph(const std::vector<Vertex>& vertices) const;

  bool is_connected() const;
  /// Two-colorability via BFS; fills side1/side2 (sorted) on success.
  bool is_bipartite(std::vector<Vertex>* side1 = nullptr,
                    std::vector<Vertex>* side2 = nullptr) const;

 private:
  std::size_t n_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Vertex>> adj_;
};

/// Entry v = |N(v)|; sums to twice the edge count.
std::vector<std::size_t> degree_sequence(const Graph& g);

/// The |rows| x |cols| matrix m[rows[a]][cols[b]] with both index sets
/// enumerated in ascending order. Throws on out-of-range indices.
Matrix restricted_submatrix(const Matrix& m, std::vector<Vertex> rows, std::vector<Vertex> cols);

/// Same-size matrix that keeps m on rows x cols and is zero elsewhere.
Matrix padded_submatrix(const Matrix& m, const std::vector<Vertex>& rows,
                        const std::vector<Vertex>& cols);

}  // namespace pbs
