#include "pbs/graph.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <string>

namespace pbs {

Graph::Graph(std::size_t n, const std::vector<Edge>& edges) : Graph(n) {
  for (const auto& [u, v] : edges) add_edge(u, v);
}

void Graph::add_edge(Vertex u, Vertex v) {
  if (u == v) throw std::invalid_argument("add_edge: self loop");
  if (u >= n_ || v >= n_) throw std::out_of_range("add_edge: vertex out of range");
  if (u > v) std::swap(u, v);
  if (has_edge(u, v)) throw std::invalid_argument("add_edge: duplicate edge");
  edges_.emplace_back(u, v);
  adj_[u].insert(std::lower_bound(adj_[u].begin(), adj_[u].end(), v), v);
  adj_[v].insert(std::lower_bound(adj_[v].begin(), adj_[v].end(), u), u);
}

bool Graph::has_edge(Vertex u, Vertex v) const {
  if (u >= n_ || v >= n_) throw std::out_of_range("has_edge: vertex out of range");
  if (u == v) return false;
  if (adj_[u].size() > adj_[v].size()) std::swap(u, v);
  return std::binary_search(adj_[u].begin(), adj_[u].end(), v);
}

std::vector<Edge> Graph::sorted_edges() const {
  std::vector<Edge> es = edges_;
  std::sort(es.begin(), es.end());
  return es;
}

Matrix Graph::adjacency_matrix() const {
  Matrix a(n_, n_);
  for (const auto& [u, v] : edges_) {
    a(u, v) = 1.0;
    a(v, u) = 1.0;
  }
  return a;
}

Graph Graph::induced_subgraph(const std::vector<Vertex>& vertices) const {
  std::vector<Vertex> vs = vertices;
  std::sort(vs.begin(), vs.end());
  std::vector<std::uint32_t> pos(n_, UINT32_MAX);
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (vs[i] >= n_) throw std::out_of_range("induced_subgraph: vertex out of range");
    if (pos[vs[i]] != UINT32_MAX) throw std::invalid_argument("induced_subgraph: duplicate vertex");
    pos[vs[i]] = static_cast<std::uint32_t>(i);
  }
  Graph sub(vs.size());
  for (const auto& [u, v] : edges_)
    if (pos[u] != UINT32_MAX && pos[v] != UINT32_MAX) sub.add_edge(pos[u], pos[v]);
  return sub;
}

bool Graph::is_connected() const {
  if (n_ == 0) return true;
  std::vector<bool> seen(n_, false);
  std::queue<Vertex> q;
  q.push(0);
  seen[0] = true;
  std::size_t count = 1;
  while (!q.empty()) {
    const Vertex u = q.front();
    q.pop();
    for (Vertex w : adj_[u])
      if (!seen[w]) {
        seen[w] = true;
        ++count;
        q.push(w);
      }
  }
  return count == n_;
}

bool Graph::is_bipartite(std::vector<Vertex>* side1, std::vector<Vertex>* side2) const {
  std::vector<int> color(n_, -1);
  for (Vertex s = 0; s < n_; ++s) {
    if (color[s] != -1) continue;
    color[s] = 0;
    std::queue<Vertex> q;
    q.push(s);
    while (!q.empty()) {
      const Vertex u = q.front();
      q.pop();
      for (Vertex w : adj_[u]) {
        if (color[w] == -1) {
          color[w] = 1 - color[u];
          q.push(w);
        } else if (color[w] == color[u]) {
          return false;
        }
      }
    }
  }
  if (side1 && side2) {
    side1->clear();
    side2->clear();
    for (Vertex v = 0; v < n_; ++v) (color[v] == 0 ? *side1 : *side2).push_back(v);
  }
  return true;
}

std::vector<std::size_t> degree_sequence(const Graph& g) {
  std::vector<std::size_t> deg(g.vertex_count());
  for (Vertex v = 0; v < g.vertex_count(); ++v) deg[v] = g.degree(v);
  return deg;
}

namespace {
std::vector<Vertex> checked_sorted(std::vector<Vertex> idx, std::size_t bound, const char* what) {
  std::sort(idx.begin(), idx.end());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (idx[i] >= bound) throw std::out_of_range(std::string(what) + ": index out of range");
    if (i > 0 && idx[i] == idx[i - 1])
      throw std::invalid_argument(std::string(what) + ": duplicate index");
  }
  return idx;
}
}  // namespace

Matrix restricted_submatrix(const Matrix& m, std::vector<Vertex> rows, std::vector<Vertex> cols) {
  rows = checked_sorted(std::move(rows), m.rows(), "restricted_submatrix");
  cols = checked_sorted(std::move(cols), m.cols(), "restricted_submatrix");
  Matrix out(rows.size(), cols.size());
  for (std::size_t a = 0; a < rows.size(); ++a)
    for (std::size_t b = 0; b < cols.size(); ++b) out(a, b) = m(rows[a], cols[b]);
  return out;
}

Matrix padded_submatrix(const Matrix& m, const std::vector<Vertex>& rows,
                        const std::vector<Vertex>& cols) {
  const auto r = checked_sorted(rows, m.rows(), "padded_submatrix");
  const auto c = checked_sorted(cols, m.cols(), "padded_submatrix");
  Matrix out(m.rows(), m.cols());
  for (Vertex i : r)
    for (Vertex j : c) out(i, j) = m(i, j);
  return out;
}

}  // namespace pbs
