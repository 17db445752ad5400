#include "pbs/subspace.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "pbs/eig.hpp"
#include "pbs/matching.hpp"

namespace pbs {

SubspaceParams SubspaceParams::defaults(std::size_t n, std::size_t k, std::size_t d, double p) {
  SubspaceParams sp;
  sp.tau_prime = static_cast<double>(d) / 2.0;
  const double root_n = std::sqrt(static_cast<double>(n));
  sp.epsilon = std::sqrt(3.0 * static_cast<double>(k) * root_n / (sp.tau_prime + 3.0 * root_n));
  sp.delta = p * p / 16.0;
  return sp;
}

BottomSubspace bottom_subspace(const Graph& g, double tau_prime) {
  if (!(tau_prime > 0.0)) throw std::invalid_argument("bottom_subspace: tau' must be positive");
  const auto spec = symmetric_eig(g.adjacency_matrix());
  const std::size_t count = threshold_rank(spec, tau_prime);
  BottomSubspace out;
  out.eigenvalues.assign(spec.values.begin(), spec.values.begin() + count);
  out.vectors = Matrix(count, g.vertex_count());
  for (std::size_t l = 0; l < count; ++l) {
    const double* src = spec.vectors.row(l);
    std::copy(src, src + g.vertex_count(), out.vectors.row(l));
  }
  return out;
}

double projection_gap(std::span<const double> u, const BottomSubspace& basis) {
  double gap = dot(u, u);
  for (std::size_t l = 0; l < basis.dimension(); ++l) {
    const double c = dot(u, basis.vectors.row_span(l));
    gap -= c * c;
  }
  return std::max(0.0, gap);
}

NetCapExceeded::NetCapExceeded(std::size_t req, std::size_t cap)
    : std::runtime_error("epsilon-net needs at least " + std::to_string(req) +
                         " points, cap is " + std::to_string(cap)),
      required(req) {}

namespace {

// Depth-first walk of the grid points with squared norm <= limit_sq.
// Visits coordinates in ascending order per axis (lexicographic overall).
bool walk_net(std::size_t axis, double remaining_sq, double spacing, std::size_t dimension,
              std::vector<double>& point, std::size_t& visited, std::size_t cap,
              const std::function<void(std::span<const double>)>* fn) {
  if (axis == dimension) {
    if (++visited > cap) return false;
    if (fn) (*fn)(point);
    return true;
  }
  const auto max_steps = static_cast<long>(std::floor(std::sqrt(remaining_sq) / spacing));
  for (long s = -max_steps; s <= max_steps; ++s) {
    const double c = static_cast<double>(s) * spacing;
    point[axis] = c;
    if (!walk_net(axis + 1, remaining_sq - c * c, spacing, dimension, point, visited, cap, fn))
      return false;
  }
  point[axis] = 0.0;
  return true;
}

}  // namespace

NetSpec plan_net(std::size_t dimension, double radius, double epsilon, std::size_t net_cap) {
  if (dimension == 0) throw std::invalid_argument("plan_net: dimension must be positive");
  if (!(epsilon > 0.0) || !(radius >= 0.0))
    throw std::invalid_argument("plan_net: need epsilon > 0 and radius >= 0");
  NetSpec spec;
  spec.dimension = dimension;
  spec.radius = radius;
  spec.epsilon = epsilon;
  spec.spacing = epsilon / std::sqrt(static_cast<double>(dimension));
  const double ext = radius + epsilon / 2.0;
  std::vector<double> point(dimension, 0.0);
  std::size_t visited = 0;
  if (!walk_net(0, ext * ext, spec.spacing, dimension, point, visited, net_cap, nullptr))
    throw NetCapExceeded(visited, net_cap);
  spec.cardinality = visited;
  return spec;
}

void for_each_net_point(const NetSpec& spec,
                        const std::function<void(std::span<const double>)>& fn) {
  const double ext = spec.radius + spec.epsilon / 2.0;
  std::vector<double> point(spec.dimension, 0.0);
  std::size_t visited = 0;
  walk_net(0, ext * ext, spec.spacing, spec.dimension, point, visited, spec.cardinality, &fn);
}

TopK threshold_top_k(std::span<const double> y, std::size_t k) {
  const std::size_t n = y.size();
  if (k > n) throw std::invalid_argument("threshold_top_k: k exceeds length");
  std::vector<Vertex> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Vertex a, Vertex b) { return std::abs(y[a]) > std::abs(y[b]); });
  TopK out;
  out.set.assign(order.begin(), order.begin() + k);
  std::sort(out.set.begin(), out.set.end());
  out.degenerate = k > 0 && k < n && std::abs(y[order[k - 1]]) == std::abs(y[order[k]]);
  return out;
}

CandidateList candidate_sets(const Graph& g, std::size_t k, const BottomSubspace& basis,
                             const SubspaceParams& params) {
  const std::size_t n = g.vertex_count();
  const std::size_t dim = basis.dimension();
  CandidateList list;
  if (dim == 0) return list;

  const double radius = std::sqrt(static_cast<double>(k));
  const NetSpec spec = plan_net(dim, radius, params.epsilon, params.net_cap);

  std::map<std::vector<Vertex>, std::size_t> seen;  // set -> entry index
  std::vector<double> y(n);
  std::size_t index = 0;
  for_each_net_point(spec, [&](std::span<const double> coeff) {
    std::fill(y.begin(), y.end(), 0.0);
    double y_norm_sq = 0.0;
    for (std::size_t l = 0; l < dim; ++l) {
      const double c = coeff[l];
      if (c == 0.0) continue;
      const double* v = basis.vectors.row(l);
      for (std::size_t i = 0; i < n; ++i) y[i] += c * v[i];
      y_norm_sq += c * c;  // basis rows orthonormal
    }
    auto top = threshold_top_k(y, k);
    double inside_sq = 0.0;
    for (Vertex v : top.set) inside_sq += y[v] * y[v];
    const double alignment = y_norm_sq > 0.0 ? std::sqrt(inside_sq / y_norm_sq) : 0.0;

    const auto it = seen.find(top.set);
    if (it == seen.end()) {
      seen.emplace(top.set, list.entries.size());
      list.entries.push_back({std::move(top.set), index, alignment, top.degenerate});
    } else if (alignment > list.entries[it->second].alignment) {
      list.entries[it->second].alignment = alignment;
    }
    ++index;
  });

  std::stable_sort(list.entries.begin(), list.entries.end(),
                   [](const CandidateList::Entry& a, const CandidateList::Entry& b) {
                     if (a.alignment != b.alignment) return a.alignment > b.alignment;
                     return a.net_index < b.net_index;
                   });
  return list;
}

std::size_t matching_score(const Graph& g, Vertex v, const std::vector<Vertex>& s_prime) {
  std::vector<Vertex> sorted = s_prime;
  std::sort(sorted.begin(), sorted.end());
  std::vector<Vertex> nbrs;
  for (Vertex nb : g.neighbors(v))
    if (std::binary_search(sorted.begin(), sorted.end(), nb)) nbrs.push_back(nb);
  if (nbrs.size() < 2) return 0;
  return max_matching_size(g.induced_subgraph(nbrs));
}

FullRecovery full_recovery(const Graph& g, std::size_t k, const std::vector<Vertex>& s_prime,
                           double p, double delta) {
  FullRecovery out;
  const double kk = static_cast<double>(k);
  out.low_threshold = delta * kk;
  out.high_threshold = (p * p / 4.0 - delta) * kk;
  if (delta < 0.0 || delta > p * p / 16.0 || out.high_threshold <= 2.0 * delta * kk ||
      out.low_threshold >= out.high_threshold) {
    out.status = FullRecovery::Status::precondition_failed;
    return out;
  }

  const std::size_t n = g.vertex_count();
  std::vector<std::size_t> score(n, 0);
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t v = 0; v < static_cast<std::ptrdiff_t>(n); ++v)
    score[static_cast<std::size_t>(v)] = matching_score(g, static_cast<Vertex>(v), s_prime);

  const std::size_t max_score = *std::max_element(score.begin(), score.end());
  out.score_histogram.assign(max_score + 1, 0);
  for (std::size_t s : score) ++out.score_histogram[s];

  std::vector<Vertex> low;
  bool band = false;
  for (std::size_t v = 0; v < n; ++v) {
    const auto s = static_cast<double>(score[v]);
    if (s <= out.low_threshold)
      low.push_back(static_cast<Vertex>(v));
    else if (s < out.high_threshold)
      band = true;
  }
  if (band) {
    out.status = FullRecovery::Status::ambiguous_band;
    return out;
  }
  if (low.size() != k) {
    out.status = FullRecovery::Status::wrong_size;
    return out;
  }
  out.status = FullRecovery::Status::recovered;
  out.set = std::move(low);
  return out;
}

ShapeCheck verify_planted_shape(const Graph& g, const std::vector<Vertex>& s, std::size_t d) {
  ShapeCheck out;
  std::vector<Vertex> sorted = s;
  std::sort(sorted.begin(), sorted.end());
  const Graph sub = g.induced_subgraph(sorted);
  for (Vertex v = 0; v < sub.vertex_count(); ++v)
    if (sub.degree(v) != d) return out;
  if (!sub.is_connected()) return out;
  std::vector<Vertex> a, b;
  if (!sub.is_bipartite(&a, &b)) return out;
  out.ok = true;
  for (Vertex v : a) out.side1.push_back(sorted[v]);
  for (Vertex v : b) out.side2.push_back(sorted[v]);
  return out;
}

SubspaceOutcome recover_subspace(const Graph& g, std::size_t k, double p, std::size_t d,
                                 const SubspaceParams& params) {
  SubspaceOutcome out;
  const auto basis = bottom_subspace(g, params.tau_prime);
  out.subspace_dimension = basis.dimension();
  if (basis.dimension() == 0) {
    out.status = SubspaceOutcome::Status::empty_basis;
    return out;
  }

  const auto candidates = candidate_sets(g, k, basis, params);
  out.candidates = candidates.entries.size();
  out.net_points = plan_net(basis.dimension(), std::sqrt(static_cast<double>(k)), params.epsilon,
                            params.net_cap)
                       .cardinality;

  // Parallel evaluation with deterministic lowest-index-wins selection.
  std::atomic<std::size_t> best{SIZE_MAX};
  std::vector<std::vector<Vertex>> winner(candidates.entries.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t idx = 0; idx < static_cast<std::ptrdiff_t>(candidates.entries.size());
       ++idx) {
    const auto u_idx = static_cast<std::size_t>(idx);
    if (u_idx > best.load(std::memory_order_relaxed)) continue;
    const auto fr = full_recovery(g, k, candidates.entries[u_idx].set, p, params.delta);
    if (fr.status != FullRecovery::Status::recovered) continue;
    if (!verify_planted_shape(g, fr.set, d).ok) continue;
    winner[u_idx] = fr.set;
    std::size_t cur = best.load();
    while (u_idx < cur && !best.compare_exchange_weak(cur, u_idx)) {
    }
  }
  const std::size_t chosen = best.load();
  if (chosen == SIZE_MAX) {
    out.status = SubspaceOutcome::Status::no_candidate_verified;
    return out;
  }
  out.status = SubspaceOutcome::Status::recovered;
  out.set = winner[chosen];
  return out;
}

}  // namespace pbs
