#pragma once

#include "pbs/graph.hpp"

namespace pbs {

/// Maximum matching size in a general graph, via augmenting-path search
/// with blossom contraction. Neighborhood graphs here are small (tens of
/// vertices), so the O(V^3) bound is never a concern.
std::size_t max_matching_size(const Graph& g);

}  // namespace pbs
