#pragma once

#include "pbs/eig.hpp"
#include "pbs/graph.hpp"
#include "pbs/matrix.hpp"

namespace pbs::reference {

/// Serial cyclic Jacobi eigensolver. Much slower than symmetric_eig but
/// short enough to audit by eye; kept as the independent reference the fast
/// path is tested and benchmarked against.
SymmetricSpectrum jacobi_eig(const Matrix& m, int max_sweeps = 100);

/// Plain serial triple-loop product.
Matrix multiply_serial(const Matrix& a, const Matrix& b);

/// Log-barrier path-following solve of the same relaxation as
/// solve_primal_sdp, dense Newton steps over the full symmetric
/// parameterization. An entirely separate route to the optimum, usable as a
/// cross-check at micro scale only (n up to ~25; cost grows as n^6).
/// Requires k < n so the feasible set has nonempty interior.
double sdp_optimum_barrier(const Graph& g, std::size_t k, double tol = 1e-7);

}  // namespace pbs::reference
