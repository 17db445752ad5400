#include <doctest.h>

#include <stdexcept>

#include <cmath>

#include "pbs/certificate.hpp"
#include "pbs/eig.hpp"
#include "pbs/instance.hpp"
#include "pbs/rng.hpp"

using namespace pbs;

namespace {

PlantedInstance k22_alone() {
  Rng rng(1);
  return gen_random_planted(ModelParams::make(4, 4, 2, 0.5),
                            BipartiteTopology::complete_balanced(), rng);
}

PlantedInstance desk_instance(std::uint64_t seed = 2) {
  // k large enough that every outside vertex sees both sides of the planted
  // bipartition; smaller blocks make some calibration columns infeasible.
  Rng rng(seed);
  return gen_random_planted(ModelParams::make(90, 40, 14, 0.5),
                            BipartiteTopology::random_regular(), rng);
}

}  // namespace

TEST_CASE("complete balanced block at tau = d/2 has a single basis vector u/sqrt(k)") {
  Rng rng(3);
  const auto inst = gen_random_planted(ModelParams::make(20, 12, 6, 0.5),
                                       BipartiteTopology::complete_balanced(), rng);
  const auto basis = threshold_basis(inst, 3.0);
  REQUIRE(basis.count() == 1);
  CHECK(basis.eigenvalues[0] == doctest::Approx(-6.0).epsilon(1e-10));
  const auto u = inst.signed_indicator();
  std::vector<double> u_s;
  for (Vertex v : basis.s) u_s.push_back(u[v]);
  const double align =
      std::abs(dot(basis.vectors.row_span(0), u_s)) / std::sqrt(12.0);
  CHECK(align == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("a threshold above d empties the basis") {
  const auto inst = desk_instance();
  const auto basis = threshold_basis(inst, static_cast<double>(inst.params.d) + 0.5);
  CHECK(basis.count() == 0);
  CHECK_THROWS_AS(threshold_basis(inst, 0.0), std::invalid_argument);
}

TEST_CASE("circulant basis count matches a direct eigenvalue count") {
  Rng rng(4);
  const auto inst = gen_random_planted(ModelParams::make(30, 20, 4, 0.5),
                                       BipartiteTopology::circulant(), rng, std::nullopt);
  const double tau = 2.0;
  const auto basis = threshold_basis(inst, tau);
  const auto s = inst.planted_set();
  const auto spec = symmetric_eig(restricted_submatrix(inst.graph.adjacency_matrix(), s, s));
  std::size_t direct = 0;
  for (double lambda : spec.values)
    if (lambda <= -tau) ++direct;
  CHECK(basis.count() == direct);
  CHECK(basis.count() >= 2);  // the clustered circulant offsets put several below -d/2
  for (double lambda : basis.eigenvalues) CHECK(lambda <= -tau);
}

TEST_CASE("basis vectors are near-exact eigenvectors of the block") {
  const auto inst = desk_instance(5);
  const auto basis = threshold_basis(inst, 5.0);
  const auto s = inst.planted_set();
  const Matrix block = restricted_submatrix(inst.graph.adjacency_matrix(), s, s);
  for (std::size_t l = 0; l < basis.count(); ++l) {
    std::vector<double> v(basis.vectors.row(l), basis.vectors.row(l) + s.size());
    auto bv = block.apply(v);
    for (std::size_t c = 0; c < v.size(); ++c) bv[c] -= basis.eigenvalues[l] * v[c];
    CHECK(norm2(bv) <= 1e-10 * spectral_norm(block));
  }
}

TEST_CASE("spectral embeddings are isotropic: zero sum and identity Gram") {
  Rng rng(6);
  for (int rep = 0; rep < 8; ++rep) {
    const std::size_t k = 12 + 2 * rng.uniform_below(5);
    const std::size_t d = 2 + rng.uniform_below(k / 2 - 2);
    const auto topo = rep % 2 == 0 ? BipartiteTopology::random_regular()
                                   : BipartiteTopology::circulant();
    PlantedInstance inst = gen_random_planted(
        ModelParams::make(k + 10, k, d, 0.5), topo, rng);
    const auto basis = threshold_basis(inst, static_cast<double>(d) / 2.0);
    if (basis.count() == 0) continue;
    const auto emb = spectral_embedding(basis);
    CHECK(norm_inf(emb.coordinate_sum()) <= 1e-8);
    Matrix gram = emb.gram();
    gram.add_scaled(Matrix::identity(basis.count()), -1.0);
    CHECK(gram.max_abs() <= 1e-8);
  }
}

TEST_CASE("K_{k/2,k/2} embeddings are +-1/sqrt(k) scalars with unit energy") {
  Rng rng(7);
  const auto inst = gen_random_planted(ModelParams::make(16, 16, 8, 0.5),
                                       BipartiteTopology::complete_balanced(), rng);
  const auto basis = threshold_basis(inst, 4.0);
  REQUIRE(basis.count() == 1);
  const auto emb = spectral_embedding(basis);
  double energy = 0.0;
  for (std::size_t r = 0; r < 16; ++r) {
    CHECK(std::abs(emb.w(r, 0)) == doctest::Approx(0.25).epsilon(1e-10));  // 1/sqrt(16)
    energy += emb.w(r, 0) * emb.w(r, 0);
  }
  CHECK(energy == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("lp_rhs vanishes at p=1 and without S-neighbors, else matches the double sum") {
  Rng rng(8);
  const auto one = gen_random_planted(ModelParams::make(20, 10, 4, 1.0),
                                      BipartiteTopology::random_regular(), rng);
  const auto basis1 = threshold_basis(one, 2.0);
  REQUIRE(basis1.count() >= 1);
  for (Vertex j : one.outside_set()) CHECK(norm_inf(lp_rhs(j, basis1, one)) <= 1e-10);

  const auto inst = desk_instance(9);
  const auto basis = threshold_basis(inst, 5.0);
  REQUIRE(basis.count() >= 1);
  const Matrix a = inst.graph.adjacency_matrix();
  for (Vertex j : inst.outside_set()) {
    const auto b = lp_rhs(j, basis, inst);
    for (std::size_t l = 0; l < basis.count(); ++l) {
      double direct = 0.0;
      for (std::size_t c = 0; c < basis.s.size(); ++c)
        direct -= a(basis.s[c], j) * basis.vectors(l, c);
      CHECK(b[l] == doctest::Approx(direct).epsilon(1e-12));
    }
  }
}

TEST_CASE("build_b_matrix: p=1 admits B = 0, an empty basis is trivial") {
  Rng rng(10);
  const auto one = gen_random_planted(ModelParams::make(20, 10, 4, 1.0),
                                      BipartiteTopology::random_regular(), rng);
  const auto basis = threshold_basis(one, 2.0);
  const auto built = build_b_matrix(one, basis, 0.5);
  REQUIRE(built.ok);
  CHECK(built.b.entries.empty());  // b = 0 per column, least-norm solution is 0

  const auto inst = desk_instance(11);
  const auto empty = threshold_basis(inst, static_cast<double>(inst.params.d) + 1.0);
  const auto trivial = build_b_matrix(inst, empty, 0.5);
  CHECK(trivial.ok);
  CHECK(trivial.b.entries.empty());
}

TEST_CASE("assembled certificate on the lone K22: Y = A + 2I with spectrum {0,2,2,4}") {
  const auto inst = k22_alone();
  const auto cert = assemble_certificate(inst, SparseB{}, 0.5);
  CHECK(cert.beta == doctest::Approx(-2.0));
  const auto spec = symmetric_eig(cert.y);
  CHECK(spec.values[0] == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(spec.values[1] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(spec.values[2] == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(spec.values[3] == doctest::Approx(4.0).epsilon(1e-12));

  // padded-u quadratic form vanishes by complementary slackness
  const auto u = inst.signed_indicator();
  CHECK(std::abs(dot(u, cert.y.apply(u))) <= 1e-12);

  const auto rep = verify_certificate(cert, inst, 1.0);
  CHECK(rep.all_ok());
}

TEST_CASE("assembly matches the entrywise formula and validates support") {
  const auto inst = desk_instance(12);
  const double tau = 5.0;
  const auto basis = threshold_basis(inst, tau);
  const double t = default_entry_cap(basis.count(), inst.params);
  const auto built = build_b_matrix(inst, basis, t);
  REQUIRE(built.ok);
  const auto cert = assemble_certificate(inst, built.b, t);

  Matrix direct = inst.graph.adjacency_matrix();
  for (std::size_t i = 0; i < direct.rows(); ++i)
    direct(i, i) += static_cast<double>(inst.params.d);
  direct.add_scaled(built.b.to_dense(direct.rows()), 1.0);
  direct.add_scaled(cert.y, -1.0);
  CHECK(direct.max_abs() == 0.0);

  // support violations are refused at assembly
  SparseB bad;
  const Vertex s0 = inst.planted_set()[0];
  const Vertex s1 = inst.planted_set()[1];
  bad.entries.push_back({s0, s1, 0.1});
  CHECK_THROWS_AS(assemble_certificate(inst, bad, t), std::invalid_argument);
}

TEST_CASE("verification passes on a desk instance and pins every eigenvector calibration") {
  const auto inst = desk_instance(13);
  const double tau = static_cast<double>(inst.params.d) / 2.0;
  const auto basis = threshold_basis(inst, tau);
  const double t = default_entry_cap(basis.count(), inst.params);
  const auto built = build_b_matrix(inst, basis, t);
  REQUIRE(built.ok);
  const auto cert = assemble_certificate(inst, built.b, t);
  const auto rep = verify_certificate(cert, inst, tau);
  CHECK(rep.calibration_ok);
  CHECK(rep.cap_ok);
  CHECK(rep.support_ok);
  CHECK(rep.norm_ok);
  CHECK(rep.slackness_ok);

  // padded basis vectors are numerically eigenvectors of Y with value d + lambda
  const std::size_t n = inst.graph.vertex_count();
  for (std::size_t l = 0; l < basis.count(); ++l) {
    const auto v = basis.padded(l, n);
    auto yv = cert.y.apply(v);
    const double expect = static_cast<double>(inst.params.d) + basis.eigenvalues[l];
    CHECK(expect >= -1e-10);  // d + lambda_l >= 0 always
    for (std::size_t c = 0; c < n; ++c) yv[c] -= expect * v[c];
    CHECK(norm_inf(yv) <= 1e-8);
  }

  // ||B||_2 <= 2 t sqrt(k (n-k)) whenever entries are capped by t
  const double cap_bound = 2.0 * t *
                           std::sqrt(static_cast<double>(inst.params.k) *
                                     static_cast<double>(n - inst.params.k));
  CHECK(rep.b_norm <= cap_bound + 1e-9);
}

TEST_CASE("a corrupted B entry is caught by the cap check with a witness") {
  const auto inst = desk_instance(14);
  const double tau = static_cast<double>(inst.params.d) / 2.0;
  const auto basis = threshold_basis(inst, tau);
  const double t = default_entry_cap(basis.count(), inst.params);
  auto built = build_b_matrix(inst, basis, t);
  REQUIRE(built.ok);
  REQUIRE(!built.b.entries.empty());
  built.b.entries.front().value = -0.25;  // inject a sign violation
  const auto cert = assemble_certificate(inst, built.b, t);
  const auto rep = verify_certificate(cert, inst, tau);
  CHECK_FALSE(rep.cap_ok);
  CHECK(rep.min_b_entry == doctest::Approx(-0.25));
  CHECK_FALSE(rep.all_ok());
}

TEST_CASE("a passing certificate has a one-dimensional kernel spanned by padded u") {
  const auto inst = desk_instance(15);
  const double tau = static_cast<double>(inst.params.d) / 2.0;
  const auto basis = threshold_basis(inst, tau);
  const double t = default_entry_cap(basis.count(), inst.params);
  const auto built = build_b_matrix(inst, basis, t);
  REQUIRE(built.ok);
  const auto cert = assemble_certificate(inst, built.b, t);
  const auto rep = verify_certificate(cert, inst, tau);
  REQUIRE(rep.all_ok());

  const auto spec = symmetric_eig(cert.y);
  const auto u = inst.signed_indicator();
  const double k = static_cast<double>(inst.params.k);
  const double align = std::abs(dot(spec.vector(0), u)) / std::sqrt(k);
  CHECK(align == doctest::Approx(1.0).epsilon(1e-7));
  CHECK(spec.values[1] >= rep.rank_tol);
}

TEST_CASE("infeasible columns abort the build with self-verifying Farkas certificates") {
  // An absurdly small cap makes columns with nonzero rhs infeasible.
  const auto inst = desk_instance(16);
  const auto basis = threshold_basis(inst, static_cast<double>(inst.params.d) / 2.0);
  REQUIRE(basis.count() >= 1);
  const auto built = build_b_matrix(inst, basis, 1e-7);
  CHECK_FALSE(built.ok);
  REQUIRE(!built.failures.empty());
  CHECK(built.b.entries.empty());
  for (const auto& f : built.failures) CHECK_FALSE(f.numerical);
}

TEST_CASE("empirical checks at p=1: embedding sums vanish and M = I exactly") {
  Rng rng(17);
  auto inst = gen_random_planted(ModelParams::make(30, 16, 6, 1.0),
                                 BipartiteTopology::random_regular(), rng);
  const auto basis = threshold_basis(inst, 3.0);
  REQUIRE(basis.count() >= 1);
  const auto emb = spectral_embedding(basis);
  Rng check_rng(18);
  const auto rep = empirical_lemma_checks(inst, basis, emb, 50, check_rng);
  CHECK(rep.sum_ok_fraction == doctest::Approx(1.0));
  CHECK(rep.isotropy_ok_fraction == doctest::Approx(1.0));
  CHECK(rep.linf_ok);
  CHECK(rep.mc_ok);  // at p = 1 every sample is exactly I
  CHECK(rep.mc_max_abs_deviation <= 1e-10);
}

TEST_CASE("the l_inf bound 2/sqrt(d) holds for every basis vector at tau = d/2") {
  Rng rng(19);
  for (int rep = 0; rep < 6; ++rep) {
    const std::size_t k = 16 + 2 * rng.uniform_below(6);
    const std::size_t d = 3 + rng.uniform_below(k / 2 - 3);
    const auto topo = rep % 2 == 0 ? BipartiteTopology::random_regular()
                                   : BipartiteTopology::circulant();
    const auto inst = gen_random_planted(ModelParams::make(k, k, d, 0.5), topo, rng);
    const auto basis = threshold_basis(inst, static_cast<double>(d) / 2.0);
    CHECK(basis.vectors.max_abs() <= 2.0 / std::sqrt(static_cast<double>(d)) + 1e-9);
  }
}
