#include "pbs/matching.hpp"

#include <algorithm>
#include <queue>
#include <vector>

namespace pbs {

namespace {

// State for one augmenting-path search phase.
struct BlossomSearch {
  const Graph& g;
  std::vector<int>& match;
  std::vector<int> parent, base;
  std::vector<bool> used, blossom;

  explicit BlossomSearch(const Graph& graph, std::vector<int>& m)
      : g(graph), match(m), parent(graph.vertex_count(), -1), base(graph.vertex_count()),
        used(graph.vertex_count(), false), blossom(graph.vertex_count(), false) {}

  int lowest_common_base(int a, int b) {
    std::vector<bool> mark(g.vertex_count(), false);
    while (true) {
      a = base[a];
      mark[a] = true;
      if (match[a] == -1) break;
      a = parent[match[a]];
    }
    while (true) {
      b = base[b];
      if (mark[b]) return b;
      b = parent[match[b]];
    }
  }

  void mark_path(int v, int b, int child) {
    while (base[v] != b) {
      blossom[base[v]] = true;
      blossom[base[match[v]]] = true;
      parent[v] = child;
      child = match[v];
      v = parent[match[v]];
    }
  }

  // BFS from an unmatched root; returns an exposed vertex ending an
  // augmenting path, or -1.
  int find_path(int root) {
    used[root] = true;
    base.resize(g.vertex_count());
    for (std::size_t i = 0; i < g.vertex_count(); ++i) base[i] = static_cast<int>(i);
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
      const int v = q.front();
      q.pop();
      for (Vertex tow : g.neighbors(static_cast<Vertex>(v))) {
        const int to = static_cast<int>(tow);
        if (base[v] == base[to] || match[v] == to) continue;
        if (to == root || (match[to] != -1 && parent[match[to]] != -1)) {
          // odd cycle: contract the blossom
          const int cur_base = lowest_common_base(v, to);
          std::fill(blossom.begin(), blossom.end(), false);
          mark_path(v, cur_base, to);
          mark_path(to, cur_base, v);
          for (std::size_t i = 0; i < g.vertex_count(); ++i)
            if (blossom[base[i]]) {
              base[i] = cur_base;
              if (!used[i]) {
                used[i] = true;
                q.push(static_cast<int>(i));
              }
            }
        } else if (parent[to] == -1) {
          parent[to] = v;
          if (match[to] == -1) return to;
          used[match[to]] = true;
          q.push(match[to]);
        }
      }
    }
    return -1;
  }
};

}  // namespace

std::size_t max_matching_size(const Graph& g) {
  const std::size_t n = g.vertex_count();
  std::vector<int> match(n, -1);
  std::size_t size = 0;
  for (std::size_t v = 0; v < n; ++v) {
    if (match[v] != -1) continue;
    BlossomSearch search(g, match);
    int u = search.find_path(static_cast<int>(v));
    if (u == -1) continue;
    ++size;
    while (u != -1) {
      const int pv = search.parent[u];
      const int next = match[pv];
      match[u] = pv;
      match[pv] = u;
      u = next;
    }
  }
  return size;
}

}  // namespace pbs
