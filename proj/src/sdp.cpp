#include "pbs/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pbs/eig.hpp"

namespace pbs {

double FeasibilityReport::max() const {
  return std::max({trace_error, diag_cap_violation, edge_sign_violation, psd_violation});
}

namespace {

// Exact projection of the diagonal onto {y : sum y = 1, y_i <= cap}.
// With the top r entries capped, the multiplier is determined in closed
// form; scan r ascending over the sorted diagonal until consistent.
void project_diagonal(std::vector<double>& diag, double cap) {
  const std::size_t n = diag.size();
  std::vector<double> sorted = diag;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::vector<double> suffix_sum(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) suffix_sum[i] = suffix_sum[i + 1] + sorted[i];

  double mu = 0.0;
  bool found = false;
  for (std::size_t r = 0; r < n; ++r) {
    // entries 0..r-1 capped; remaining n-r entries shifted by -mu
    mu = (suffix_sum[r] - (1.0 - static_cast<double>(r) * cap)) / static_cast<double>(n - r);
    const bool top_ok = r == 0 || sorted[r - 1] - mu >= cap - 1e-15;
    const bool rest_ok = sorted[r] - mu <= cap + 1e-15;
    if (top_ok && rest_ok) {
      found = true;
      break;
    }
  }
  if (!found) {
    // all entries capped; only consistent when n * cap == 1
    for (double& v : diag) v = cap;
    return;
  }
  for (double& v : diag) v = std::min(v - mu, cap);
}

// Projection onto the affine/box polytope: trace simplex on the diagonal,
// clamp on edge entries, everything else untouched.
void project_polytope(Matrix& v, const std::vector<Edge>& edges, double cap) {
  const std::size_t n = v.rows();
  std::vector<double> diag(n);
  for (std::size_t i = 0; i < n; ++i) diag[i] = v(i, i);
  project_diagonal(diag, cap);
  for (std::size_t i = 0; i < n; ++i) v(i, i) = diag[i];
  for (const auto& [a, b] : edges) {
    const double clamped = std::min(v(a, b), 0.0);
    v(a, b) = clamped;
    v(b, a) = clamped;
  }
}

}  // namespace

double sdp_objective(const Matrix& x, const Graph& g) {
  double obj = 0.0;
  for (const auto& [a, b] : g.sorted_edges()) obj += 2.0 * x(a, b);
  return obj;
}

FeasibilityReport check_feasibility(const Matrix& x, const Graph& g, std::size_t k) {
  FeasibilityReport rep;
  rep.trace_error = std::abs(x.trace() - 1.0);
  const double cap = 1.0 / static_cast<double>(k);
  for (std::size_t i = 0; i < x.rows(); ++i)
    rep.diag_cap_violation = std::max(rep.diag_cap_violation, x(i, i) - cap);
  rep.diag_cap_violation = std::max(rep.diag_cap_violation, 0.0);
  for (const auto& [a, b] : g.sorted_edges())
    rep.edge_sign_violation = std::max(rep.edge_sign_violation, x(a, b));
  rep.edge_sign_violation = std::max(rep.edge_sign_violation, 0.0);
  rep.psd_violation = std::max(0.0, -min_eigenvalue(x));
  return rep;
}

GramSolution solve_primal_sdp(const Graph& g, std::size_t k, const SolverConfig& cfg) {
  const std::size_t n = g.vertex_count();
  if (n == 0) throw std::invalid_argument("solve_primal_sdp: empty graph");
  if (k < 2 || k > n) throw std::invalid_argument("solve_primal_sdp: need 2 <= k <= n");

  const double cap = 1.0 / static_cast<double>(k);
  const auto edges = g.sorted_edges();
  const Matrix a = g.adjacency_matrix();

  double rho = cfg.rho;
  Matrix z(n, n);
  for (std::size_t i = 0; i < n; ++i) z(i, i) = 1.0 / static_cast<double>(n);
  Matrix u(n, n);
  Matrix x(n, n);

  GramSolution sol;
  int it = 0;
  const int check_every = 20;
  for (it = 1; it <= cfg.max_iterations; ++it) {
    // x-step: prox of the linear objective over the polytope
    x = z;
    x.add_scaled(u, -1.0);
    x.add_scaled(a, -1.0 / rho);
    project_polytope(x, edges, cap);

    // z-step: PSD projection of the over-relaxed iterate
    Matrix v = x;
    v.scale(cfg.relaxation);
    v.add_scaled(z, 1.0 - cfg.relaxation);
    v.add_scaled(u, 1.0);
    Matrix z_new = project_psd(v);

    Matrix dz = z_new;
    dz.add_scaled(z, -1.0);
    const double dual_res = rho * dz.frobenius_norm();

    // scaled dual update against the relaxed iterate
    v.add_scaled(z_new, -1.0);
    u = std::move(v);
    z = std::move(z_new);

    Matrix pr = x;
    pr.add_scaled(z, -1.0);
    const double primal_res = pr.frobenius_norm();

    sol.primal_residual = primal_res;
    sol.dual_residual = dual_res;

    if (primal_res <= cfg.abs_tol && dual_res <= cfg.abs_tol && it % check_every == 0) {
      // z is PSD by construction; only the polytope side needs measuring
      FeasibilityReport rep;
      rep.trace_error = std::abs(z.trace() - 1.0);
      for (std::size_t i = 0; i < n; ++i)
        rep.diag_cap_violation = std::max(rep.diag_cap_violation, z(i, i) - cap);
      rep.diag_cap_violation = std::max(rep.diag_cap_violation, 0.0);
      for (const auto& [ea, eb] : edges)
        rep.edge_sign_violation = std::max(rep.edge_sign_violation, z(ea, eb));
      rep.edge_sign_violation = std::max(rep.edge_sign_violation, 0.0);
      if (rep.max() <= cfg.abs_tol) {
        sol.converged = true;
        sol.residuals = rep;
        break;
      }
    }

    if (cfg.adaptive_rho && it % 50 == 0) {
      if (primal_res > 10.0 * dual_res && rho < 1e6) {
        rho *= 2.0;
        u.scale(0.5);
      } else if (dual_res > 10.0 * primal_res && rho > 1e-6) {
        rho *= 0.5;
        u.scale(2.0);
      }
    }
  }

  sol.iterations = std::min(it, cfg.max_iterations);
  sol.x = std::move(z);
  sol.objective = sdp_objective(sol.x, g);
  if (!sol.converged) sol.residuals = check_feasibility(sol.x, g, k);
  return sol;
}

Extraction extract_planted_set(const GramSolution& sol, std::size_t k) {
  Extraction ex;
  ex.theta = 1.0 / (2.0 * static_cast<double>(k));
  ex.min_inside = 1.0;
  ex.max_outside = 0.0;
  for (std::size_t i = 0; i < sol.x.rows(); ++i) {
    const double di = sol.x(i, i);
    if (di > ex.theta) {
      ex.set.push_back(static_cast<Vertex>(i));
      ex.min_inside = std::min(ex.min_inside, di);
    } else {
      ex.max_outside = std::max(ex.max_outside, di);
    }
  }
  if (ex.set.empty()) ex.min_inside = 0.0;
  ex.size_ok = ex.set.size() == k;
  return ex;
}

}  // namespace pbs
