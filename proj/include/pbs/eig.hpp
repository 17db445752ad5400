#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "pbs/matrix.hpp"

namespace pbs {

/// Full spectrum of a real symmetric matrix. Eigenvalues are sorted
/// ascending and `vectors` stores the matching orthonormal eigenvectors as
/// rows, so reconstruction is sum_i values[i] * v_i v_i^T. Within a
/// degenerate eigenspace the basis is arbitrary; callers must not depend on
/// the particular choice.
struct SymmetricSpectrum {
  std::vector<double> values;
  Matrix vectors;  // row l = eigenvector for values[l]

  std::size_t size() const { return values.size(); }
  std::span<const double> vector(std::size_t l) const { return vectors.row_span(l); }

  /// sum_i values[i] v_i v_i^T, for testing reconstruction residuals.
  Matrix reconstruct() const;
  /// max_{i,j} |<v_i, v_j> - delta_ij|.
  double orthonormality_error() const;
};

/// Full dense eigendecomposition: Householder tridiagonalization followed by
/// implicit-shift QL iteration. Input must be symmetric within
/// 1e-9 * max(1, max|m|); it is symmetrized by averaging before
/// decomposition. Throws std::invalid_argument on asymmetric input and
/// std::runtime_error if the QL iteration fails to converge.
SymmetricSpectrum symmetric_eig(const Matrix& m);

/// Number of eigenvalues <= -tau (tau >= 0).
std::size_t threshold_rank(const SymmetricSpectrum& s, double tau);

double min_eigenvalue(const Matrix& m);
double spectral_norm(const Matrix& m);

/// Projection onto the PSD cone: clamp negative eigenvalues to zero. The
/// cheaper of the two equivalent accumulations (over positive or negative
/// eigenvalues) is used.
Matrix project_psd(const Matrix& m);

}  // namespace pbs
