#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "pbs/graph.hpp"
#include "pbs/matrix.hpp"

namespace pbs {

struct SubspaceParams {
  double tau_prime = 0.0;  // eigenvalue threshold on the whole graph
  double epsilon = 0.0;    // net resolution
  double delta = 0.0;      // tolerated corruption fraction of a candidate
  std::size_t net_cap = 10'000'000;

  /// tau' = d/2, epsilon^2 = 3 k sqrt(n) / ((d/2) + 3 sqrt(n)),
  /// delta = p^2 / 16.
  static SubspaceParams defaults(std::size_t n, std::size_t k, std::size_t d, double p);
};

struct BottomSubspace {
  std::vector<double> eigenvalues;  // ascending, all <= -tau'
  Matrix vectors;                   // L' x n, orthonormal rows
  std::size_t dimension() const { return eigenvalues.size(); }
};

/// Eigenvectors of the full adjacency matrix with eigenvalue <= -tau'.
BottomSubspace bottom_subspace(const Graph& g, double tau_prime);

/// ||u - Pi_span u||^2.
double projection_gap(std::span<const double> u, const BottomSubspace& basis);

/// Thrown when the epsilon-net would exceed its point budget.
struct NetCapExceeded : std::runtime_error {
  std::size_t required;  // lower bound on the cardinality that was needed
  NetCapExceeded(std::size_t req, std::size_t cap);
};

/// Axis-aligned grid with spacing epsilon/sqrt(dim) over coefficient space,
/// kept within radius + epsilon/2 so every point of the radius ball has a
/// net point within epsilon.
struct NetSpec {
  std::size_t dimension = 0;
  double radius = 0.0;
  double epsilon = 0.0;
  double spacing = 0.0;
  std::size_t cardinality = 0;
};

/// Counts the net exactly; throws NetCapExceeded if it would exceed net_cap.
NetSpec plan_net(std::size_t dimension, double radius, double epsilon, std::size_t net_cap);

/// Streams coefficient vectors in deterministic lexicographic order.
void for_each_net_point(const NetSpec& spec,
                        const std::function<void(std::span<const double>)>& fn);

struct TopK {
  std::vector<Vertex> set;  // indices of the k largest |y_i|, sorted
  bool degenerate = false;  // the cut fell inside a tie
};

/// Top-k coordinates by absolute value, ties broken by ascending index.
TopK threshold_top_k(std::span<const double> y, std::size_t k);

struct CandidateList {
  struct Entry {
    std::vector<Vertex> set;
    std::size_t net_index = 0;  // first net point that produced the set
    double alignment = 0.0;     // ||y restricted to set|| / ||y||
    bool degenerate = false;
  };
  std::vector<Entry> entries;  // deduplicated, descending alignment
};

/// One candidate per net point over the bottom subspace, deduplicated and
/// ordered by alignment so the planted set tends to appear early.
CandidateList candidate_sets(const Graph& g, std::size_t k, const BottomSubspace& basis,
                             const SubspaceParams& params);

/// Maximum matching size of the graph induced on N(v) intersected with s_prime.
std::size_t matching_score(const Graph& g, Vertex v, const std::vector<Vertex>& s_prime);

struct FullRecovery {
  enum class Status { recovered, wrong_size, ambiguous_band, precondition_failed };
  Status status = Status::precondition_failed;
  std::vector<Vertex> set;
  double low_threshold = 0.0;   // delta k
  double high_threshold = 0.0;  // (p^2/4 - delta) k
  std::vector<std::size_t> score_histogram;  // score -> count, on failure paths
};

/// Classifies every vertex by matching score against s_prime: scores at most
/// delta k are planted, scores at least (p^2/4 - delta) k are outside, and
/// scores between are reported as an ambiguous band.
FullRecovery full_recovery(const Graph& g, std::size_t k, const std::vector<Vertex>& s_prime,
                           double p, double delta);

struct ShapeCheck {
  bool ok = false;
  std::vector<Vertex> side1, side2;
};

/// Is the induced graph on s connected, bipartite and d-regular?
ShapeCheck verify_planted_shape(const Graph& g, const std::vector<Vertex>& s, std::size_t d);

struct SubspaceOutcome {
  enum class Status { recovered, empty_basis, no_candidate_verified };
  Status status = Status::no_candidate_verified;
  std::vector<Vertex> set;
  std::size_t subspace_dimension = 0;
  std::size_t net_points = 0;
  std::size_t candidates = 0;
};

/// Full pipeline: bottom subspace, epsilon-net candidates, matching-based
/// cleanup, shape verification. Returns the first candidate (in list order)
/// whose cleanup output verifies; candidates are evaluated in parallel with
/// a deterministic lowest-index-wins selection. Throws NetCapExceeded when
/// the net is over budget.
SubspaceOutcome recover_subspace(const Graph& g, std::size_t k, double p, std::size_t d,
                                 const SubspaceParams& params);

}  // namespace pbs
