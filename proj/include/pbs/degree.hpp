#pragma once

#include <vector>

#include "pbs/graph.hpp"

namespace pbs {

struct DegreeRecovery {
  std::vector<Vertex> set;  // k vertices of minimal degree, sorted
  /// True when the k-th and (k+1)-th smallest degrees coincide, i.e. the
  /// cut point is a tie and the answer depended on index order.
  bool ambiguous = false;
};

/// Bottom-k degree sort. Ties at the cut are broken by ascending vertex
/// index; the regime guard d <= 2pk/3 is the caller's concern.
DegreeRecovery recover_by_degree(const Graph& g, std::size_t k);

}  // namespace pbs
