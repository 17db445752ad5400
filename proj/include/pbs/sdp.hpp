#pragma once

#include <cstdint>
#include <vector>

#include "pbs/graph.hpp"
#include "pbs/matrix.hpp"

namespace pbs {

struct SolverConfig {
  double abs_tol = 1e-7;
  int max_iterations = 50000;
  double rho = 1.0;          // ADMM penalty parameter
  bool adaptive_rho = true;  // residual-balancing updates
  double relaxation = 1.6;   // over-relaxation factor in [1, 1.8]
};

struct FeasibilityReport {
  double trace_error = 0.0;         // |tr X - 1|
  double diag_cap_violation = 0.0;  // max_i (X_ii - 1/k)+
  double edge_sign_violation = 0.0; // max_{edges} (X_ij)+
  double psd_violation = 0.0;       // (-lambda_min(X))+
  bool ok(double tol) const {
    return trace_error <= tol && diag_cap_violation <= tol && edge_sign_violation <= tol &&
           psd_violation <= tol;
  }
  double max() const;
};

struct GramSolution {
  Matrix x;  // PSD by construction (returned from the cone projection)
  double objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  FeasibilityReport residuals;
  int iterations = 0;
  bool converged = false;
};

/// Relaxation solved: min sum_{edges} 2 X_ij subject to tr X = 1,
/// X_ii <= 1/k, X_ij <= 0 on edges, X PSD. Operator splitting with exact
/// projections on both blocks: the polytope projector is closed-form
/// (water-filling on the diagonal, clamps on edges) and the cone projector
/// is a full eigendecomposition. Single-threaded per solve and
/// deterministic for a fixed config; run separate solves in parallel freely.
GramSolution solve_primal_sdp(const Graph& g, std::size_t k, const SolverConfig& cfg = {});

struct Extraction {
  std::vector<Vertex> set;  // {i : X_ii > theta}, sorted
  bool size_ok = false;     // |set| == k
  double theta = 0.0;       // 1/(2k)
  double min_inside = 0.0;  // min diagonal over the set
  double max_outside = 0.0; // max diagonal off the set
};

/// Threshold the diagonal at theta = 1/(2k), the midpoint of the two
/// integral values {0, 1/k}.
Extraction extract_planted_set(const GramSolution& sol, std::size_t k);

/// sum over edges of 2 X_ij.
double sdp_objective(const Matrix& x, const Graph& g);

FeasibilityReport check_feasibility(const Matrix& x, const Graph& g, std::size_t k);

}  // namespace pbs
