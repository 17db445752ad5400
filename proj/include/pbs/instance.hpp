#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "pbs/graph.hpp"
#include "pbs/rng.hpp"

namespace pbs {

/// Parameters of the planted model. gamma is always recomputed as d/(pk);
/// d is taken as given by the caller (the integer rounding of gamma*p*k is
/// the caller's business).
struct ModelParams {
  std::size_t n = 0;
  std::size_t k = 0;  // planted size, even
  std::size_t d = 0;  // planted degree, 1 <= d <= k/2
  double p = 0.0;     // edge probability in (0, 1]
  double gamma = 0.0;
  double alpha = 1.0 / 6.0;  // pseudorandomness slack in (0, 1/6]

  static ModelParams make(std::size_t n, std::size_t k, std::size_t d, double p,
                          double alpha = 1.0 / 6.0);
  void validate() const;
};

/// Concrete families for the arbitrary d-regular bipartite block.
struct BipartiteTopology {
  enum class Kind { random_regular, complete_balanced, circulant };
  Kind kind = Kind::random_regular;
  /// circulant only: left i is joined to right (i + o) mod (k/2) for each
  /// offset o; offsets must be distinct mod k/2 and |offsets| = d.
  /// Empty means the default offsets {0, ..., d-1}.
  std::vector<std::uint32_t> offsets;

  static BipartiteTopology random_regular() { return {Kind::random_regular, {}}; }
  static BipartiteTopology complete_balanced() { return {Kind::complete_balanced, {}}; }
  static BipartiteTopology circulant(std::vector<std::uint32_t> offs = {}) {
    return {Kind::circulant, std::move(offs)};
  }
  std::string name() const;
  static BipartiteTopology from_name(const std::string& name);
};

/// A generated instance together with its ground truth.
struct PlantedInstance {
  Graph graph;
  std::vector<Vertex> s1, s2;  // disjoint, |s1| = |s2| = k/2, sorted
  ModelParams params;
  std::uint64_t seed = 0;
  std::vector<Edge> adversary_edges;  // subset of (V\S) x (V\S)

  std::vector<Vertex> planted_set() const;   // s1 union s2, sorted
  std::vector<Vertex> outside_set() const;   // V \ S, sorted
  /// Signed indicator u = 1_{S1} - 1_{S2} over all n coordinates.
  std::vector<double> signed_indicator() const;
  /// g = u / sqrt(k), the rank-one SDP witness direction.
  std::vector<double> sdp_witness() const;
};

/// Connected d-regular bipartite graph on k vertices with sides
/// {0..k/2-1} and {k/2..k-1}. Throws on infeasible parameters (d > k/2,
/// or d == 1 with k > 2) and when the resampling cap is exhausted.
Graph gen_regular_bipartite(std::size_t k, std::size_t d, const BipartiteTopology& topo, Rng& rng);

/// Random planted model: uniform placement of S unless fixed_s (sorted,
/// size k) is supplied; the block's sides map to fixed_s in ascending order.
PlantedInstance gen_random_planted(const ModelParams& params, const BipartiteTopology& topo,
                                   Rng& rng,
                                   std::optional<std::vector<Vertex>> fixed_s = std::nullopt);

struct SemirandomCheck {
  bool ok = false;
  double lambda_min = 0.0;  // +inf sentinel when V \ S is empty
  double threshold = 0.0;   // -((1/2-alpha)/(1/2+alpha)) * d
};

/// Eigenvalue condition of the semi-random model: lambda_min of
/// (A restricted to V\S) - p 11^T must exceed the threshold.
SemirandomCheck check_semirandom_condition(const Graph& g, const std::vector<Vertex>& s, double p,
                                           std::size_t d, double alpha);

/// Semi-random model with a caller-chosen graph on V \ S (vertex i of
/// outside_graph maps to the i-th smallest vertex of V \ S). The outside
/// graph must pass check_semirandom_condition; otherwise throws.
PlantedInstance gen_semi_random(const ModelParams& params, const BipartiteTopology& topo,
                                const Graph& outside_graph, Rng& rng);

/// Convenience policy: sample the outside graph as G(n-k, p) and validate
/// the eigenvalue condition.
PlantedInstance gen_semi_random(const ModelParams& params, const BipartiteTopology& topo, Rng& rng);

struct AdversaryStrategy {
  enum class Kind { random_extra, explicit_edges };
  Kind kind = Kind::random_extra;
  double fraction = 0.0;          // random_extra: probability per missing pair
  std::vector<Edge> edges;        // explicit_edges

  static AdversaryStrategy random_extra(double fraction) {
    return {Kind::random_extra, fraction, {}};
  }
  static AdversaryStrategy explicit_edges(std::vector<Edge> edges) {
    return {Kind::explicit_edges, 0.0, std::move(edges)};
  }
};

/// Monotone adversary: adds edges strictly inside (V\S) x (V\S). Throws if
/// an explicit edge touches S or already exists.
PlantedInstance apply_monotone_adversary(const PlantedInstance& inst,
                                         const AdversaryStrategy& strategy, Rng& rng);

/// R = A - E[A] under the random model: zero on S x S and the diagonal,
/// A_ij - p on every other pair. Only defined before adversary action.
Matrix perturbation_matrix(const PlantedInstance& inst);

}  // namespace pbs
