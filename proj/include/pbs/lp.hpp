#pragma once

#include <vector>

#include "pbs/matrix.hpp"

namespace pbs {

/// Witness that the system {Wx = b, 0 <= x <= t1} is infeasible:
/// W^T y + z >= 0 entrywise with z >= 0, yet b^T y + t <z,1> < 0.
struct FarkasCertificate {
  std::vector<double> y;  // length = rows of W
  std::vector<double> z;  // length = cols of W, nonnegative
};

struct LpResult {
  enum class Status { feasible, infeasible, numerical_failure };
  Status status = Status::numerical_failure;
  std::vector<double> x;      // feasible point (status == feasible)
  FarkasCertificate farkas;   // witness (status == infeasible)
  double residual = 0.0;      // ||Wx - b||_inf for feasible results
  double phase1_objective = 0.0;
};

/// Feasibility of Wx = b with box 0 <= x <= t1, decided by a phase-1
/// bounded-variable simplex. Exactly one of the two Farkas alternatives is
/// certified; if rounding noise leaves the verdict ambiguous the result is
/// reported as numerical_failure rather than guessed.
LpResult solve_bounded_lp(const Matrix& w, const std::vector<double>& b, double t);

/// Direct substitution checks used by callers and tests.
bool farkas_self_verifies(const Matrix& w, const std::vector<double>& b, double t,
                          const FarkasCertificate& cert, double tol = 1e-8);

/// Least-norm point of {Wx = b, 0 <= x <= t1}, given any feasible start.
/// Simplex vertices concentrate a column's whole mass on few coordinates;
/// the least-norm point spreads it, which is what downstream spectral
/// bounds want. Alternating projections locate the active set, then an
/// exact equality-constrained solve on the free coordinates removes the
/// remaining residual. Falls back to `start` if the polish does not pan out.
std::vector<double> least_norm_box_point(const Matrix& w, const std::vector<double>& b, double t,
                                         const std::vector<double>& start);

}  // namespace pbs
