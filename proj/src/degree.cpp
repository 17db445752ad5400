#include "pbs/degree.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace pbs {

DegreeRecovery recover_by_degree(const Graph& g, std::size_t k) {
  const std::size_t n = g.vertex_count();
  if (k < 1 || k > n) throw std::invalid_argument("recover_by_degree: k out of range");

  const auto deg = degree_sequence(g);
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Vertex a, Vertex b) { return deg[a] < deg[b]; });

  DegreeRecovery out;
  out.set.assign(order.begin(), order.begin() + k);
  std::sort(out.set.begin(), out.set.end());
  out.ambiguous = k < n && deg[order[k - 1]] == deg[order[k]];
  return out;
}

}  // namespace pbs
