#include "pbs/instance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "pbs/eig.hpp"

namespace pbs {

namespace {
constexpr int kResampleCap = 1000;

std::vector<bool> membership_mask(std::size_t n, const std::vector<Vertex>& s) {
  std::vector<bool> in(n, false);
  for (Vertex v : s) in[v] = true;
  return in;
}
}  // namespace

ModelParams ModelParams::make(std::size_t n, std::size_t k, std::size_t d, double p,
                              double alpha) {
  ModelParams mp;
  mp.n = n;
  mp.k = k;
  mp.d = d;
  mp.p = p;
  mp.alpha = alpha;
  mp.gamma = (p > 0.0 && k > 0) ? static_cast<double>(d) / (p * static_cast<double>(k)) : 0.0;
  mp.validate();
  return mp;
}

void ModelParams::validate() const {
  if (k == 0 || k % 2 != 0) throw std::invalid_argument("ModelParams: k must be positive and even");
  if (k > n) throw std::invalid_argument("ModelParams: k exceeds n");
  if (d < 1 || d > k / 2) throw std::invalid_argument("ModelParams: need 1 <= d <= k/2");
  if (!(p > 0.0 && p <= 1.0)) throw std::invalid_argument("ModelParams: need 0 < p <= 1");
  if (!(alpha > 0.0 && alpha <= 1.0 / 6.0))
    throw std::invalid_argument("ModelParams: need 0 < alpha <= 1/6");
  const double expect = static_cast<double>(d) / (p * static_cast<double>(k));
  if (std::abs(gamma - expect) > 1e-9)
    throw std::invalid_argument("ModelParams: gamma inconsistent with d/(pk)");
}

std::string BipartiteTopology::name() const {
  switch (kind) {
    case Kind::random_regular:
      return "random_regular";
    case Kind::complete_balanced:
      return "complete_balanced";
    case Kind::circulant: {
      if (offsets.empty()) return "circulant";
      std::ostringstream os;
      os << "circulant:";
      for (std::size_t i = 0; i < offsets.size(); ++i) os << (i ? "," : "") << offsets[i];
      return os.str();
    }
  }
  return "random_regular";
}

BipartiteTopology BipartiteTopology::from_name(const std::string& name) {
  if (name == "random_regular") return random_regular();
  if (name == "complete_balanced") return complete_balanced();
  if (name.rfind("circulant", 0) == 0) {
    std::vector<std::uint32_t> offs;
    if (name.size() > 9 && name[9] == ':') {
      std::istringstream is(name.substr(10));
      std::string tok;
      while (std::getline(is, tok, ',')) offs.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
    }
    return circulant(std::move(offs));
  }
  throw std::invalid_argument("unknown topology: " + name);
}

std::vector<Vertex> PlantedInstance::planted_set() const {
  std::vector<Vertex> s = s1;
  s.insert(s.end(), s2.begin(), s2.end());
  std::sort(s.begin(), s.end());
  return s;
}

std::vector<Vertex> PlantedInstance::outside_set() const {
  const auto in = membership_mask(graph.vertex_count(), planted_set());
  std::vector<Vertex> out;
  out.reserve(graph.vertex_count() - s1.size() - s2.size());
  for (Vertex v = 0; v < graph.vertex_count(); ++v)
    if (!in[v]) out.push_back(v);
  return out;
}

std::vector<double> PlantedInstance::signed_indicator() const {
  std::vector<double> u(graph.vertex_count(), 0.0);
  for (Vertex v : s1) u[v] = 1.0;
  for (Vertex v : s2) u[v] = -1.0;
  return u;
}

std::vector<double> PlantedInstance::sdp_witness() const {
  std::vector<double> g = signed_indicator();
  const double inv = 1.0 / std::sqrt(static_cast<double>(s1.size() + s2.size()));
  for (double& x : g) x *= inv;
  return g;
}

namespace {

// Union of `count` matchings between sides of size m, sampled as random
// permutations with local swap repair when an edge would be duplicated.
// Returns false when the repair budget runs out.
bool sample_matching_union(std::size_t m, std::size_t count, Rng& rng,
                           std::vector<std::vector<bool>>& used) {
  std::vector<std::uint32_t> sigma(m);
  for (std::size_t t = 0; t < count; ++t) {
    std::iota(sigma.begin(), sigma.end(), 0);
    rng.shuffle(sigma);
    std::vector<std::uint32_t> colliding;
    for (std::uint32_t i = 0; i < m; ++i)
      if (used[i][sigma[i]]) colliding.push_back(i);
    std::size_t budget = 200 * m + 1000;
    while (!colliding.empty() && budget-- > 0) {
      const std::size_t pick = rng.uniform_below(colliding.size());
      const std::uint32_t i = colliding[pick];
      const auto j = static_cast<std::uint32_t>(rng.uniform_below(m));
      if (j == i) continue;
      if (used[i][sigma[j]] || used[j][sigma[i]]) continue;
      std::swap(sigma[i], sigma[j]);
      colliding[pick] = colliding.back();
      colliding.pop_back();
      // j cannot collide after the swap; drop it if it was queued
      for (std::size_t q = 0; q < colliding.size(); ++q)
        if (colliding[q] == j) {
          colliding[q] = colliding.back();
          colliding.pop_back();
          break;
        }
    }
    if (!colliding.empty()) return false;
    for (std::uint32_t i = 0; i < m; ++i) used[i][sigma[i]] = true;
  }
  return true;
}

Graph block_from_used(std::size_t m, const std::vector<std::vector<bool>>& used, bool complement) {
  Graph g(2 * m);
  for (std::uint32_t i = 0; i < m; ++i)
    for (std::uint32_t j = 0; j < m; ++j)
      if (used[i][j] != complement) g.add_edge(i, static_cast<Vertex>(m + j));
  return g;
}

}  // namespace

Graph gen_regular_bipartite(std::size_t k, std::size_t d, const BipartiteTopology& topo,
                            Rng& rng) {
  if (k == 0 || k % 2 != 0) throw std::invalid_argument("gen_regular_bipartite: k must be even");
  const std::size_t m = k / 2;
  if (d < 1 || d > m) throw std::invalid_argument("gen_regular_bipartite: need 1 <= d <= k/2");
  if (d == 1 && k > 2)
    throw std::invalid_argument(
        "gen_regular_bipartite: 1-regular on more than two vertices is disconnected");

  switch (topo.kind) {
    case BipartiteTopology::Kind::complete_balanced: {
      if (d != m)
        throw std::invalid_argument("gen_regular_bipartite: complete_balanced requires d = k/2");
      Graph g(k);
      for (std::uint32_t i = 0; i < m; ++i)
        for (std::uint32_t j = 0; j < m; ++j) g.add_edge(i, static_cast<Vertex>(m + j));
      return g;
    }
    case BipartiteTopology::Kind::circulant: {
      std::vector<std::uint32_t> offs = topo.offsets;
      if (offs.empty()) {
        offs.resize(d);
        std::iota(offs.begin(), offs.end(), 0);
      }
      if (offs.size() != d)
        throw std::invalid_argument("gen_regular_bipartite: circulant needs exactly d offsets");
      std::vector<bool> seen(m, false);
      for (std::uint32_t o : offs) {
        const std::uint32_t r = o % m;
        if (seen[r])
          throw std::invalid_argument("gen_regular_bipartite: circulant offsets not distinct mod k/2");
        seen[r] = true;
      }
      Graph g(k);
      for (std::uint32_t i = 0; i < m; ++i)
        for (std::uint32_t o : offs) g.add_edge(i, static_cast<Vertex>(m + (i + o) % m));
      if (!g.is_connected())
        throw std::invalid_argument("gen_regular_bipartite: circulant offsets give a disconnected graph");
      return g;
    }
    case BipartiteTopology::Kind::random_regular:
      break;
  }

  if (d == m) {  // only one m-regular bipartite graph exists
    Graph g(k);
    for (std::uint32_t i = 0; i < m; ++i)
      for (std::uint32_t j = 0; j < m; ++j) g.add_edge(i, static_cast<Vertex>(m + j));
    return g;
  }

  // Sample the sparser of the graph and its bipartite complement.
  const bool complement = d > m / 2;
  const std::size_t eff_d = complement ? m - d : d;
  for (int attempt = 0; attempt < kResampleCap; ++attempt) {
    std::vector<std::vector<bool>> used(m, std::vector<bool>(m, false));
    if (!sample_matching_union(m, eff_d, rng, used)) continue;
    Graph g = block_from_used(m, used, complement);
    if (g.is_connected()) return g;
  }
  throw std::runtime_error("gen_regular_bipartite: resampling cap exceeded");
}

PlantedInstance gen_random_planted(const ModelParams& params, const BipartiteTopology& topo,
                                   Rng& rng, std::optional<std::vector<Vertex>> fixed_s) {
  params.validate();
  const std::size_t n = params.n, k = params.k, m = k / 2;

  std::vector<Vertex> s;
  if (fixed_s) {
    s = *fixed_s;
    std::sort(s.begin(), s.end());
    if (s.size() != k) throw std::invalid_argument("gen_random_planted: fixed_s has wrong size");
    for (std::size_t i = 0; i < s.size(); ++i) {
      if (s[i] >= n) throw std::out_of_range("gen_random_planted: fixed_s vertex out of range");
      if (i > 0 && s[i] == s[i - 1])
        throw std::invalid_argument("gen_random_planted: fixed_s has duplicates");
    }
  } else {
    s = rng.sample_without_replacement(static_cast<std::uint32_t>(n),
                                       static_cast<std::uint32_t>(k));
  }

  const Graph block = gen_regular_bipartite(k, params.d, topo, rng);

  Graph g(n);
  for (const auto& [u, v] : block.sorted_edges()) g.add_edge(s[u], s[v]);

  const auto in_s = membership_mask(n, s);
  for (Vertex i = 0; i + 1 < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) {
      if (in_s[i] && in_s[j]) continue;
      if (rng.bernoulli(params.p)) g.add_edge(i, j);
    }

  PlantedInstance inst{std::move(g), {}, {}, params, 0, {}};
  inst.s1.assign(s.begin(), s.begin() + m);
  inst.s2.assign(s.begin() + m, s.end());
  return inst;
}

SemirandomCheck check_semirandom_condition(const Graph& g, const std::vector<Vertex>& s, double p,
                                           std::size_t d, double alpha) {
  SemirandomCheck out;
  out.threshold = -((0.5 - alpha) / (0.5 + alpha)) * static_cast<double>(d);

  const auto in_s = membership_mask(g.vertex_count(), s);
  std::vector<Vertex> outside;
  for (Vertex v = 0; v < g.vertex_count(); ++v)
    if (!in_s[v]) outside.push_back(v);

  if (outside.empty()) {
    out.ok = true;
    out.lambda_min = std::numeric_limits<double>::infinity();
    return out;
  }

  Matrix msub = restricted_submatrix(g.adjacency_matrix(), outside, outside);
  for (std::size_t i = 0; i < msub.rows(); ++i)
    for (std::size_t j = 0; j < msub.cols(); ++j) msub(i, j) -= p;
  out.lambda_min = min_eigenvalue(msub);
  out.ok = out.lambda_min > out.threshold;
  return out;
}

PlantedInstance gen_semi_random(const ModelParams& params, const BipartiteTopology& topo,
                                const Graph& outside_graph, Rng& rng) {
  params.validate();
  const std::size_t n = params.n, k = params.k, m = k / 2;
  if (outside_graph.vertex_count() != n - k)
    throw std::invalid_argument("gen_semi_random: outside graph must have n-k vertices");

  const auto check = check_semirandom_condition(outside_graph, {}, params.p, params.d, params.alpha);
  if (!check.ok)
    throw std::invalid_argument("gen_semi_random: outside graph violates the eigenvalue condition");

  const auto s = rng.sample_without_replacement(static_cast<std::uint32_t>(n),
                                                static_cast<std::uint32_t>(k));
  const Graph block = gen_regular_bipartite(k, params.d, topo, rng);

  const auto in_s = membership_mask(n, s);
  std::vector<Vertex> outside;
  for (Vertex v = 0; v < n; ++v)
    if (!in_s[v]) outside.push_back(v);

  Graph g(n);
  for (const auto& [u, v] : block.sorted_edges()) g.add_edge(s[u], s[v]);
  for (const auto& [u, v] : outside_graph.sorted_edges()) g.add_edge(outside[u], outside[v]);
  for (Vertex i : s)
    for (Vertex j : outside)
      if (rng.bernoulli(params.p)) g.add_edge(i, j);

  PlantedInstance inst{std::move(g), {}, {}, params, 0, {}};
  inst.s1.assign(s.begin(), s.begin() + m);
  inst.s2.assign(s.begin() + m, s.end());
  return inst;
}

PlantedInstance gen_semi_random(const ModelParams& params, const BipartiteTopology& topo,
                                Rng& rng) {
  const std::size_t out_n = params.n - params.k;
  Graph outside(out_n);
  for (Vertex i = 0; i + 1 < out_n; ++i)
    for (Vertex j = i + 1; j < out_n; ++j)
      if (rng.bernoulli(params.p)) outside.add_edge(i, j);
  return gen_semi_random(params, topo, outside, rng);
}

PlantedInstance apply_monotone_adversary(const PlantedInstance& inst,
                                         const AdversaryStrategy& strategy, Rng& rng) {
  const std::size_t n = inst.graph.vertex_count();
  const auto in_s = membership_mask(n, inst.planted_set());

  std::vector<Edge> added;
  if (strategy.kind == AdversaryStrategy::Kind::random_extra) {
    if (!(strategy.fraction >= 0.0 && strategy.fraction <= 1.0))
      throw std::invalid_argument("apply_monotone_adversary: fraction must be in [0,1]");
    for (Vertex i = 0; i + 1 < n; ++i) {
      if (in_s[i]) continue;
      for (Vertex j = i + 1; j < n; ++j) {
        if (in_s[j] || inst.graph.has_edge(i, j)) continue;
        if (rng.bernoulli(strategy.fraction)) added.emplace_back(i, j);
      }
    }
  } else {
    for (auto [u, v] : strategy.edges) {
      if (u > v) std::swap(u, v);
      if (u >= n || v >= n) throw std::out_of_range("apply_monotone_adversary: vertex out of range");
      if (u == v) throw std::invalid_argument("apply_monotone_adversary: self loop");
      if (in_s[u] || in_s[v])
        throw std::invalid_argument("apply_monotone_adversary: edge touches the planted set");
      if (inst.graph.has_edge(u, v))
        throw std::invalid_argument("apply_monotone_adversary: edge already present");
      added.emplace_back(u, v);
    }
    std::sort(added.begin(), added.end());
    if (std::adjacent_find(added.begin(), added.end()) != added.end())
      throw std::invalid_argument("apply_monotone_adversary: duplicate edge in list");
  }

  PlantedInstance out = inst;
  for (const auto& [u, v] : added) out.graph.add_edge(u, v);
  out.adversary_edges.insert(out.adversary_edges.end(), added.begin(), added.end());
  std::sort(out.adversary_edges.begin(), out.adversary_edges.end());
  return out;
}

Matrix perturbation_matrix(const PlantedInstance& inst) {
  if (!inst.adversary_edges.empty())
    throw std::invalid_argument("perturbation_matrix: undefined after adversary action");
  const std::size_t n = inst.graph.vertex_count();
  const auto in_s = membership_mask(n, inst.planted_set());
  const double p = inst.params.p;

  Matrix r(n, n);
  for (Vertex i = 0; i + 1 < n; ++i)
    for (Vertex j = i + 1; j < n; ++j) {
      if (in_s[i] && in_s[j]) continue;
      const double val = (inst.graph.has_edge(i, j) ? 1.0 : 0.0) - p;
      r(i, j) = val;
      r(j, i) = val;
    }
  return r;
}

}  // namespace pbs
