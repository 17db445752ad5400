#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <set>

#include "pbs/eig.hpp"
#include "pbs/instance.hpp"
#include "pbs/matching.hpp"
#include "pbs/rng.hpp"
#include "pbs/subspace.hpp"

using namespace pbs;

namespace {

Graph k22_graph() {
  Graph g(4);
  g.add_edge(0, 2);
  g.add_edge(0, 3);
  g.add_edge(1, 2);
  g.add_edge(1, 3);
  return g;
}

// Exponential-time maximum matching by branching on the first covered vertex.
std::size_t brute_matching(const Graph& g) {
  std::vector<Edge> edges = g.sorted_edges();
  std::vector<bool> used(g.vertex_count(), false);
  std::function<std::size_t(std::size_t)> go = [&](std::size_t idx) -> std::size_t {
    if (idx == edges.size()) return 0;
    const auto [u, v] = edges[idx];
    std::size_t best = go(idx + 1);
    if (!used[u] && !used[v]) {
      used[u] = used[v] = true;
      best = std::max(best, 1 + go(idx + 1));
      used[u] = used[v] = false;
    }
    return best;
  };
  return go(0);
}

}  // namespace

TEST_CASE("bottom subspace of the lone K22 is one-dimensional") {
  const auto basis = bottom_subspace(k22_graph(), 1.0);
  CHECK(basis.dimension() == 1);
  CHECK(basis.eigenvalues[0] == doctest::Approx(-2.0));
  CHECK_THROWS_AS(bottom_subspace(k22_graph(), 0.0), std::invalid_argument);
}

TEST_CASE("bottom subspace dimension matches a direct eigenvalue count") {
  Rng rng(1);
  const auto inst = gen_random_planted(ModelParams::make(60, 20, 8, 0.4),
                                       BipartiteTopology::random_regular(), rng);
  const double tau = 4.0;
  const auto basis = bottom_subspace(inst.graph, tau);
  const auto spec = symmetric_eig(inst.graph.adjacency_matrix());
  std::size_t direct = 0;
  for (double v : spec.values)
    if (v <= -tau) ++direct;
  CHECK(basis.dimension() == direct);
}

TEST_CASE("projection gap: zero for an exact eigenvector and for the full space") {
  Rng rng(2);
  // noiseless planted block alone: u is an exact eigenvector at -d
  const auto block_inst = gen_random_planted(ModelParams::make(16, 16, 5, 0.5),
                                             BipartiteTopology::random_regular(), rng);
  const auto basis = bottom_subspace(block_inst.graph, 2.5);
  const double gap = projection_gap(block_inst.signed_indicator(), basis);
  CHECK(gap <= 1e-10);

  // span of everything: gap is zero for any vector
  BottomSubspace full;
  full.eigenvalues = {0.0, 0.0, 0.0, 0.0};
  full.vectors = Matrix::identity(4);
  const std::vector<double> any{0.3, -1.0, 2.0, 0.1};
  CHECK(projection_gap(any, full) <= 1e-12);
}

TEST_CASE("one-dimensional nets cover the interval with few points") {
  const auto spec = plan_net(1, 1.0, 1.0, 1000);
  CHECK(spec.cardinality == 3);  // {-1, 0, 1}
  std::vector<double> points;
  for_each_net_point(spec, [&](std::span<const double> c) { points.push_back(c[0]); });
  REQUIRE(points.size() == 3);
  for (double x : {-1.0, -0.4, 0.0, 0.7, 1.0}) {
    double best = 1e9;
    for (double q : points) best = std::min(best, std::abs(x - q));
    CHECK(best <= 1.0);
  }

  // radius sqrt(k) grid obeys the 1-D cardinality bound ceil(2 sqrt(k)/eps) + 1
  const double root_k = 3.0;  // k = 9
  const double eps = 1.0;
  const auto spec9 = plan_net(1, root_k, eps, 1000);
  CHECK(spec9.cardinality <= static_cast<std::size_t>(std::ceil(2.0 * root_k / eps)) + 1);
}

TEST_CASE("the planned cardinality guards the cap with the required count") {
  CHECK_THROWS_AS(plan_net(3, 40.0, 0.05, 1000), NetCapExceeded);
  try {
    plan_net(3, 40.0, 0.05, 1000);
  } catch (const NetCapExceeded& e) {
    CHECK(e.required >= 1000);
  }
}

TEST_CASE("random points of a 2-D coefficient ball always have a net point within epsilon") {
  Rng rng(3);
  const double radius = 4.0, eps = 0.8;
  const auto spec = plan_net(2, radius, eps, 200000);
  std::vector<std::array<double, 2>> net;
  for_each_net_point(spec, [&](std::span<const double> c) {
    net.push_back({c[0], c[1]});
  });
  for (int rep = 0; rep < 1000; ++rep) {
    // uniform over the disk via rejection
    double x, y;
    do {
      x = (2.0 * rng.next_double() - 1.0) * radius;
      y = (2.0 * rng.next_double() - 1.0) * radius;
    } while (x * x + y * y > radius * radius);
    double best = 1e9;
    for (const auto& q : net)
      best = std::min(best, std::hypot(x - q[0], y - q[1]));
    CHECK(best <= eps);
  }
}

TEST_CASE("threshold_top_k picks S from the signed indicator, even under small noise") {
  Rng rng(4);
  const auto inst = gen_random_planted(ModelParams::make(30, 10, 3, 0.4),
                                       BipartiteTopology::random_regular(), rng);
  auto u = inst.signed_indicator();
  const auto clean = threshold_top_k(u, 10);
  CHECK(clean.set == inst.planted_set());
  CHECK_FALSE(clean.degenerate);

  for (double& v : u) v += 0.4 * (rng.next_double() - 0.5);  // noise below 1/2 margin
  const auto noisy = threshold_top_k(u, 10);
  CHECK(noisy.set == inst.planted_set());

  const std::vector<double> zeros(8, 0.0);
  const auto degen = threshold_top_k(zeros, 3);
  CHECK(degen.set == std::vector<Vertex>{0, 1, 2});
  CHECK(degen.degenerate);
}

TEST_CASE("threshold_top_k is scale invariant and permutation equivariant") {
  Rng rng(5);
  std::vector<double> y(12);
  for (double& v : y) v = rng.normal();
  const auto base = threshold_top_k(y, 5);

  std::vector<double> scaled = y;
  for (double& v : scaled) v *= 7.5;
  CHECK(threshold_top_k(scaled, 5).set == base.set);

  std::vector<double> reversed(y.rbegin(), y.rend());
  auto rev = threshold_top_k(reversed, 5);
  std::vector<Vertex> mapped;
  for (Vertex v : rev.set) mapped.push_back(static_cast<Vertex>(11 - v));
  std::sort(mapped.begin(), mapped.end());
  CHECK(mapped == base.set);
}

TEST_CASE("matching_score: zero inside S, one on a single covered edge, brute-force parity") {
  Rng rng(6);
  const auto inst = gen_random_planted(ModelParams::make(40, 16, 6, 0.4),
                                       BipartiteTopology::random_regular(), rng);
  const auto s = inst.planted_set();
  for (Vertex v : s) CHECK(matching_score(inst.graph, v, s) == 0);

  // a vertex adjacent to exactly one edge inside s_prime scores 1
  Graph tri(4);
  tri.add_edge(0, 1);
  tri.add_edge(0, 2);
  tri.add_edge(1, 2);
  CHECK(matching_score(tri, 0, {1, 2}) == 1);

  for (int rep = 0; rep < 30; ++rep) {
    Graph g(10);
    for (Vertex i = 0; i + 1 < 10; ++i)
      for (Vertex j = i + 1; j < 10; ++j)
        if (rng.bernoulli(0.35)) g.add_edge(i, j);
    CHECK(max_matching_size(g) == brute_matching(g));
    CHECK(max_matching_size(g) * 2 <= 10);
  }
}

TEST_CASE("blossom handles odd structures the bipartite argument cannot") {
  Graph odd(5);  // 5-cycle: maximum matching 2
  for (Vertex v = 0; v < 5; ++v) odd.add_edge(v, static_cast<Vertex>((v + 1) % 5));
  CHECK(max_matching_size(odd) == 2);

  Graph two_tri(6);  // two triangles joined by an edge: matching 3
  two_tri.add_edge(0, 1);
  two_tri.add_edge(1, 2);
  two_tri.add_edge(0, 2);
  two_tri.add_edge(3, 4);
  two_tri.add_edge(4, 5);
  two_tri.add_edge(3, 5);
  two_tri.add_edge(2, 3);
  CHECK(max_matching_size(two_tri) == 3);
}

TEST_CASE("full_recovery succeeds from the truth and reports precondition failures") {
  Rng rng(7);
  const auto inst = gen_random_planted(ModelParams::make(100, 40, 18, 0.5),
                                       BipartiteTopology::random_regular(), rng);
  const auto s = inst.planted_set();
  const auto fr = full_recovery(inst.graph, 40, s, 0.5, 0.5 * 0.5 / 16.0);
  REQUIRE(fr.status == FullRecovery::Status::recovered);
  CHECK(fr.set == s);

  // delta beyond p^2/16 (equivalently a collapsed band) is refused
  const auto bad = full_recovery(inst.graph, 40, s, 0.2, 0.2);
  CHECK(bad.status == FullRecovery::Status::precondition_failed);
}

TEST_CASE("full_recovery is deterministic given separated scores") {
  Rng rng(8);
  const auto inst = gen_random_planted(ModelParams::make(100, 40, 18, 0.5),
                                       BipartiteTopology::random_regular(), rng);
  const auto s = inst.planted_set();
  const double delta = 0.5 * 0.5 / 16.0;
  // manually verify the premise: every score is outside the open band
  const double low = delta * 40.0, high = (0.25 / 4.0 - delta) * 40.0;
  bool separated = true;
  for (Vertex v = 0; v < 100; ++v) {
    const double sc = static_cast<double>(matching_score(inst.graph, v, s));
    if (sc > low && sc < high) separated = false;
  }
  REQUIRE(separated);
  CHECK(full_recovery(inst.graph, 40, s, 0.5, delta).set == s);
}

TEST_CASE("verify_planted_shape accepts the truth and rejects corruptions") {
  Rng rng(9);
  const auto inst = gen_random_planted(ModelParams::make(60, 20, 8, 0.5),
                                       BipartiteTopology::random_regular(), rng);
  const auto s = inst.planted_set();
  const auto good = verify_planted_shape(inst.graph, s, 8);
  REQUIRE(good.ok);
  // sides agree with the ground truth up to swap
  std::vector<Vertex> s1 = inst.s1, s2 = inst.s2;
  std::sort(s1.begin(), s1.end());
  std::sort(s2.begin(), s2.end());
  CHECK(((good.side1 == s1 && good.side2 == s2) || (good.side1 == s2 && good.side2 == s1)));

  auto swapped = s;
  swapped[0] = inst.outside_set()[0];
  std::sort(swapped.begin(), swapped.end());
  CHECK_FALSE(verify_planted_shape(inst.graph, swapped, 8).ok);

  Graph pentagon(5);
  for (Vertex v = 0; v < 5; ++v) pentagon.add_edge(v, static_cast<Vertex>((v + 1) % 5));
  CHECK_FALSE(verify_planted_shape(pentagon, {0, 1, 2, 3, 4}, 2).ok);  // odd cycle
}

TEST_CASE("recover_subspace on the lone K22 returns S; empty graphs flag an empty basis") {
  auto params = SubspaceParams::defaults(4, 4, 2, 0.5);
  // K22 alone has no outside noise, so the matching band never triggers:
  // every candidate goes straight through shape verification.
  const auto out = recover_subspace(k22_graph(), 4, 0.5, 2, params);
  REQUIRE(out.status == SubspaceOutcome::Status::recovered);
  CHECK(out.set == std::vector<Vertex>{0, 1, 2, 3});

  const auto empty = recover_subspace(Graph(6), 4, 0.5, 2, SubspaceParams::defaults(6, 4, 2, 0.5));
  CHECK(empty.status == SubspaceOutcome::Status::empty_basis);
}

TEST_CASE("end-to-end subspace recovery on a well-separated instance") {
  Rng rng(10);
  const auto inst = gen_random_planted(ModelParams::make(90, 36, 18, 0.3),
                                       BipartiteTopology::complete_balanced(), rng);
  const auto params = SubspaceParams::defaults(90, 36, 18, 0.3);
  const auto out = recover_subspace(inst.graph, 36, 0.3, 18, params);
  REQUIRE(out.status == SubspaceOutcome::Status::recovered);
  CHECK(out.set == inst.planted_set());
  CHECK(verify_planted_shape(inst.graph, out.set, 18).ok);
}
