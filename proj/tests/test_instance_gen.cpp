#include <doctest.h>

#include <stdexcept>

#include <cmath>
#include <queue>

#include "pbs/eig.hpp"
#include "pbs/instance.hpp"
#include "pbs/rng.hpp"

using namespace pbs;

TEST_CASE("model params validate their ranges") {
  CHECK_THROWS_AS(ModelParams::make(10, 5, 2, 0.5), std::invalid_argument);   // k odd
  CHECK_THROWS_AS(ModelParams::make(10, 4, 3, 0.5), std::invalid_argument);   // d > k/2
  CHECK_THROWS_AS(ModelParams::make(10, 4, 2, 0.0), std::invalid_argument);   // p = 0
  CHECK_THROWS_AS(ModelParams::make(10, 4, 2, 0.5, 0.3), std::invalid_argument);  // alpha
  const auto mp = ModelParams::make(10, 4, 2, 0.5);
  CHECK(mp.gamma == doctest::Approx(1.0));  // d / (p k) = 2 / 2
}

TEST_CASE("complete balanced topology gives K_{k/2,k/2}") {
  Rng rng(1);
  const Graph g = gen_regular_bipartite(4, 2, BipartiteTopology::complete_balanced(), rng);
  CHECK(g.edge_count() == 4);
  CHECK(g.has_edge(0, 2));
  CHECK(g.has_edge(0, 3));
  CHECK(g.has_edge(1, 2));
  CHECK(g.has_edge(1, 3));
  CHECK_FALSE(g.has_edge(0, 1));
  CHECK_THROWS_AS(gen_regular_bipartite(8, 2, BipartiteTopology::complete_balanced(), rng),
                  std::invalid_argument);
}

TEST_CASE("1-regular blocks beyond a single edge are rejected as disconnected") {
  Rng rng(2);
  CHECK_THROWS_AS(gen_regular_bipartite(8, 1, BipartiteTopology::random_regular(), rng),
                  std::invalid_argument);
  const Graph g = gen_regular_bipartite(2, 1, BipartiteTopology::random_regular(), rng);
  CHECK(g.edge_count() == 1);
}

TEST_CASE("random regular blocks are d-regular, bipartite across sides, connected") {
  Rng rng(3);
  for (const auto [k, d] : {std::pair<std::size_t, std::size_t>{20, 4},
                            {20, 9},
                            {16, 8},    // forces the complement path
                            {30, 13}}) {
    const Graph g = gen_regular_bipartite(k, d, BipartiteTopology::random_regular(), rng);
    REQUIRE(g.vertex_count() == k);
    for (Vertex v = 0; v < k; ++v) CHECK(g.degree(v) == d);
    const std::size_t m = k / 2;
    for (const auto& [u, v] : g.sorted_edges()) {
      CHECK(u < m);
      CHECK(v >= m);
    }
    // independent BFS connectivity check
    std::vector<bool> seen(k, false);
    std::queue<Vertex> q;
    q.push(0);
    seen[0] = true;
    std::size_t reached = 1;
    while (!q.empty()) {
      const Vertex u = q.front();
      q.pop();
      for (Vertex w : g.neighbors(u))
        if (!seen[w]) {
          seen[w] = true;
          ++reached;
          q.push(w);
        }
    }
    CHECK(reached == k);
  }
}

TEST_CASE("circulant topology validates offsets and builds the expected edges") {
  Rng rng(4);
  const Graph g = gen_regular_bipartite(20, 4, BipartiteTopology::circulant(), rng);
  for (Vertex v = 0; v < 20; ++v) CHECK(g.degree(v) == 4);
  CHECK(g.has_edge(0, 10));  // offset 0
  CHECK(g.has_edge(0, 13));  // offset 3
  CHECK_THROWS_AS(gen_regular_bipartite(20, 2, BipartiteTopology::circulant({0, 10}), rng),
                  std::invalid_argument);  // 10 mod 10 collides with 0
  CHECK_THROWS_AS(gen_regular_bipartite(20, 3, BipartiteTopology::circulant({0, 1}), rng),
                  std::invalid_argument);  // wrong offset count
}

TEST_CASE("p=0 is rejected but tiny p leaves the planted block isolated-ish") {
  // p = 0 is outside the model; the p -> 0 behavior is covered by p = 1e-9,
  // where with overwhelming probability no random edge appears.
  Rng rng(5);
  const auto inst = gen_random_planted(ModelParams::make(12, 6, 2, 1e-9),
                                       BipartiteTopology::random_regular(), rng);
  CHECK(inst.graph.edge_count() == 6);  // exactly the planted d k / 2 edges
}

TEST_CASE("p=1 makes every non-internal pair an edge with deterministic degrees") {
  Rng rng(6);
  const std::size_t n = 12, k = 6, d = 2;
  const auto inst =
      gen_random_planted(ModelParams::make(n, k, d, 1.0), BipartiteTopology::random_regular(), rng);
  const auto in_s = [&](Vertex v) {
    const auto s = inst.planted_set();
    return std::find(s.begin(), s.end(), v) != s.end();
  };
  for (Vertex v = 0; v < n; ++v) {
    if (in_s(v))
      CHECK(inst.graph.degree(v) == d + (n - k));
    else
      CHECK(inst.graph.degree(v) == n - 1);
  }
}

TEST_CASE("cross-edge density concentrates around p") {
  Rng rng(7);
  const std::size_t n = 400, k = 60, d = 20;
  const double p = 0.5;
  const auto inst =
      gen_random_planted(ModelParams::make(n, k, d, p), BipartiteTopology::random_regular(), rng);
  std::size_t cross = 0;
  const auto s = inst.planted_set();
  const auto outside = inst.outside_set();
  for (Vertex i : s)
    for (Vertex j : outside)
      if (inst.graph.has_edge(i, j)) ++cross;
  const double trials = static_cast<double>(k * (n - k));
  const double sigma = std::sqrt(trials * p * (1 - p));
  CHECK(std::abs(static_cast<double>(cross) - trials * p) <= 3.0 * sigma);
}

TEST_CASE("planted block quadratic form: u^T A|_S u = -dk and extreme eigenvalues are +-d") {
  Rng rng(8);
  const std::size_t k = 20, d = 6;
  const auto inst = gen_random_planted(ModelParams::make(50, k, d, 0.4),
                                       BipartiteTopology::random_regular(), rng);
  const auto s = inst.planted_set();
  const Matrix block = restricted_submatrix(inst.graph.adjacency_matrix(), s, s);
  const auto u_full = inst.signed_indicator();
  std::vector<double> u_s;
  for (Vertex v : s) u_s.push_back(u_full[v]);
  const auto bu = block.apply(u_s);
  CHECK(dot(u_s, bu) == doctest::Approx(-static_cast<double>(d * k)));

  const auto spec = symmetric_eig(block);
  CHECK(spec.values.front() == doctest::Approx(-static_cast<double>(d)).epsilon(1e-10));
  CHECK(spec.values.back() == doctest::Approx(static_cast<double>(d)).epsilon(1e-10));
  // connected block: the bottom eigenvector is parallel to u
  const double align = std::abs(dot(spec.vector(0), u_s)) / std::sqrt(static_cast<double>(k));
  CHECK(align == doctest::Approx(1.0).epsilon(1e-8));
}

TEST_CASE("instance generation is a deterministic function of the seed") {
  const auto params = ModelParams::make(40, 12, 4, 0.5);
  Rng r1(99), r2(99);
  const auto a = gen_random_planted(params, BipartiteTopology::random_regular(), r1);
  const auto b = gen_random_planted(params, BipartiteTopology::random_regular(), r2);
  CHECK(a.graph.sorted_edges() == b.graph.sorted_edges());
  CHECK(a.s1 == b.s1);
  CHECK(a.s2 == b.s2);
}

TEST_CASE("check_semirandom_condition sentinel, closed form, and violation") {
  // V \ S empty: vacuous truth with +inf witness
  Graph all_planted(4);
  const auto sentinel = check_semirandom_condition(all_planted, {0, 1, 2, 3}, 0.5, 2, 1.0 / 6.0);
  CHECK(sentinel.ok);
  CHECK(std::isinf(sentinel.lambda_min));

  // empty outside graph: lambda_min(-p 11^T) = -p (n - k), rank-one closed form
  const std::size_t out_n = 20;
  Graph empty_outside(out_n);
  const double p = 0.02, alpha = 1.0 / 6.0;
  const std::size_t d = 5;
  const auto chk = check_semirandom_condition(empty_outside, {}, p, d, alpha);
  CHECK(chk.lambda_min == doctest::Approx(-p * static_cast<double>(out_n)).epsilon(1e-8));
  const double threshold = -((0.5 - alpha) / (0.5 + alpha)) * static_cast<double>(d);
  CHECK(chk.ok == (chk.lambda_min > threshold));
  CHECK(chk.ok);  // 0.4 < 2.5

  // a planted d-regular bipartite block inside V \ S forces lambda_min <= -d
  Rng rng(10);
  const std::size_t big_d = 8;
  Graph bad(30);
  const Graph block = gen_regular_bipartite(20, big_d, BipartiteTopology::random_regular(), rng);
  for (const auto& [u, v] : block.sorted_edges()) bad.add_edge(u, v);
  const auto viol = check_semirandom_condition(bad, {}, 0.1, big_d, alpha);
  CHECK(viol.lambda_min <= -static_cast<double>(big_d) + 0.5);
  CHECK_FALSE(viol.ok);
}

TEST_CASE("gen_semi_random embeds a caller-supplied outside graph and rejects violations") {
  Rng rng(11);
  // the eigenvalue condition needs d comfortably above 2 sqrt((n-k) p (1-p))
  const auto params = ModelParams::make(40, 20, 10, 0.5);
  // sampled G(n-k, p) outside passes and reduces to the random model
  const auto inst = gen_semi_random(params, BipartiteTopology::random_regular(), rng);
  CHECK(inst.graph.vertex_count() == 40);
  const auto shape_sides = inst.s1.size();
  CHECK(shape_sides == 10);

  // an outside graph containing a dense planted block is rejected
  Graph bad(20);
  const Graph block = gen_regular_bipartite(16, 8, BipartiteTopology::complete_balanced(), rng);
  for (const auto& [u, v] : block.sorted_edges()) bad.add_edge(u, v);
  CHECK_THROWS_AS(gen_semi_random(params, BipartiteTopology::random_regular(), bad, rng),
                  std::invalid_argument);
}

TEST_CASE("monotone adversary: no-op, validation, and binomial volume") {
  Rng rng(12);
  const auto inst = gen_random_planted(ModelParams::make(200, 20, 6, 0.3),
                                       BipartiteTopology::random_regular(), rng);

  const auto unchanged = apply_monotone_adversary(inst, AdversaryStrategy::explicit_edges({}), rng);
  CHECK(unchanged.graph.edge_count() == inst.graph.edge_count());
  CHECK(unchanged.adversary_edges.empty());

  // an edge touching S is refused
  const Vertex s_vertex = inst.planted_set().front();
  const Vertex o_vertex = inst.outside_set().front();
  CHECK_THROWS_AS(apply_monotone_adversary(
                      inst, AdversaryStrategy::explicit_edges({{s_vertex, o_vertex}}), rng),
                  std::invalid_argument);

  const double f = 0.05;
  const auto extra = apply_monotone_adversary(inst, AdversaryStrategy::random_extra(f), rng);
  // count non-edges of the outside block
  const auto outside = inst.outside_set();
  std::size_t non_edges = 0;
  for (std::size_t a = 0; a < outside.size(); ++a)
    for (std::size_t b = a + 1; b < outside.size(); ++b)
      if (!inst.graph.has_edge(outside[a], outside[b])) ++non_edges;
  const double mean = f * static_cast<double>(non_edges);
  const double sigma = std::sqrt(static_cast<double>(non_edges) * f * (1 - f));
  CHECK(std::abs(static_cast<double>(extra.adversary_edges.size()) - mean) <= 3.0 * sigma);

  // degrees inside S never change
  for (Vertex v : inst.planted_set()) CHECK(extra.graph.degree(v) == inst.graph.degree(v));
}

TEST_CASE("perturbation matrix vanishes at the deterministic extremes") {
  Rng rng(13);
  const auto one = gen_random_planted(ModelParams::make(14, 6, 2, 1.0),
                                      BipartiteTopology::random_regular(), rng);
  CHECK(perturbation_matrix(one).max_abs() == 0.0);

  const auto tiny = gen_random_planted(ModelParams::make(14, 6, 2, 1e-12),
                                       BipartiteTopology::random_regular(), rng);
  // no random edge appears, so R = -p on the random pairs: max |R| = p
  CHECK(perturbation_matrix(tiny).max_abs() <= 1e-12);
}

TEST_CASE("perturbation matrix is centered and refuses adversary-modified instances") {
  Rng rng(14);
  const auto inst = gen_random_planted(ModelParams::make(40, 10, 3, 0.5),
                                       BipartiteTopology::random_regular(), rng);
  const Matrix r = perturbation_matrix(inst);
  CHECK(r.asymmetry() == 0.0);
  const auto s = inst.planted_set();
  // zero on S x S and the diagonal, A_ij - p elsewhere
  for (Vertex i : s)
    for (Vertex j : s) CHECK(r(i, j) == 0.0);
  const Vertex o = inst.outside_set().front();
  const Vertex s0 = s.front();
  const double expect = (inst.graph.has_edge(s0, o) ? 1.0 : 0.0) - 0.5;
  CHECK(r(s0, o) == doctest::Approx(expect));

  const auto tampered = apply_monotone_adversary(inst, AdversaryStrategy::random_extra(0.1), rng);
  CHECK_THROWS_AS(perturbation_matrix(tampered), std::invalid_argument);
}

TEST_CASE("fixed planted set placement is honored") {
  Rng rng(15);
  std::vector<Vertex> fixed{2, 3, 5, 8, 13, 21};
  const auto inst = gen_random_planted(ModelParams::make(30, 6, 2, 0.4),
                                       BipartiteTopology::random_regular(), rng, fixed);
  CHECK(inst.planted_set() == fixed);
}
