#pragma once

#include <cstdint>
#include <vector>

#include "pbs/graph.hpp"
#include "pbs/instance.hpp"
#include "pbs/lp.hpp"
#include "pbs/matrix.hpp"
#include "pbs/rng.hpp"

namespace pbs {

/// Orthonormal eigenvectors of the planted block with eigenvalue <= -tau.
/// Vectors live on S-coordinates (columns follow the sorted planted set);
/// padded views over [n] are available per vector.
struct ThresholdBasis {
  double tau = 0.0;
  std::vector<double> eigenvalues;  // ascending, all <= -tau
  Matrix vectors;                   // count x k, row l = v^(l)
  std::vector<Vertex> s;            // sorted planted set

  std::size_t count() const { return eigenvalues.size(); }
  std::vector<double> padded(std::size_t l, std::size_t n) const;
};

/// Per-vertex embedding w^(i) in R^L for i in S: column i of the stacked
/// eigenvector matrix.
struct SpectralEmbedding {
  Matrix w;  // k x L, row r = embedding of s[r]
  std::vector<Vertex> s;

  std::size_t dimension() const { return w.cols(); }
  std::vector<double> coordinate_sum() const;  // sum_i w^(i), zero in exact arithmetic
  Matrix gram() const;                         // sum_i w^(i) w^(i)^T, identity in exact arithmetic
};

/// tau in (0, d]. The basis is re-orthogonalized against 1_S when rounding
/// in a degenerate eigenspace leaks a component onto it.
ThresholdBasis threshold_basis(const PlantedInstance& inst, double tau);

SpectralEmbedding spectral_embedding(const ThresholdBasis& basis);

/// b_l = -sum_{i in S} A_ij v^(l)_i for an outside vertex j.
std::vector<double> lp_rhs(Vertex j, const ThresholdBasis& basis, const PlantedInstance& inst);

/// Entry cap for the per-column LPs: t = (56 L / p^{3/2}) sqrt(log k / (gamma k)).
double default_entry_cap(std::size_t basis_count, const ModelParams& params);

/// Symmetric nonnegative matrix supported on edges with exactly one endpoint
/// in S, stored as cross-block triplets.
struct SparseB {
  struct Entry {
    Vertex inside;   // endpoint in S
    Vertex outside;  // endpoint in V \ S
    double value;
  };
  std::vector<Entry> entries;

  Matrix to_dense(std::size_t n) const;
  double max_entry() const;
  double min_entry() const;
};

struct ColumnFailure {
  Vertex j;
  FarkasCertificate farkas;
  bool numerical = false;  // neither LP alternative certified
};

struct BuildBResult {
  bool ok = false;
  SparseB b;
  double t = 0.0;
  std::vector<ColumnFailure> failures;
};

/// One bounded feasibility LP per outside vertex j, calibrating every basis
/// vector to lie in the kernel of the cross block of A + B. Columns are
/// independent and solved in parallel; any infeasible column aborts the
/// build and its Farkas certificate is returned instead.
BuildBResult build_b_matrix(const PlantedInstance& inst, const ThresholdBasis& basis, double t);

struct DualCertificate {
  double beta = 0.0;           // -d
  std::vector<double> gammas;  // all zero
  SparseB b;
  Matrix y;  // A + d I + B
  double t_cap = 0.0;
};

/// Y = A + dI + B with beta = -d, gamma = 0. Throws if B has support
/// outside the cross edges of the instance.
DualCertificate assemble_certificate(const PlantedInstance& inst, const SparseB& b, double t_cap);

struct CertReport {
  bool psd_ok = false;          // lambda_min(Y) >= -psd_tol
  bool rank_ok = false;         // lambda_2(Y) >= rank_tol
  bool slackness_ok = false;    // |<g g^T, Y>| <= psd_tol
  bool calibration_ok = false;  // max_{l, j outside} |sum_i v_i (A_ij + B_ij)| <= calib_tol
  bool cap_ok = false;          // 0 <= B_ij <= t
  bool norm_ok = false;         // ||B||_2 <= 896 sqrt(n log k) / p^{5/2}
  bool support_ok = false;

  double lambda_min = 0.0;
  double lambda_second = 0.0;
  double y_norm = 0.0;
  double slackness = 0.0;
  double calibration_residual = 0.0;
  double max_b_entry = 0.0;
  double min_b_entry = 0.0;
  double b_norm = 0.0;
  double b_norm_bound = 0.0;
  double psd_tol = 0.0;
  double rank_tol = 0.0;

  bool all_ok() const {
    return psd_ok && rank_ok && slackness_ok && calibration_ok && cap_ok && norm_ok && support_ok;
  }
};

/// Numerical check of every optimality condition the certificate is supposed
/// to witness. Failures are report entries, never exceptions.
CertReport verify_certificate(const DualCertificate& cert, const PlantedInstance& inst, double tau,
                              double psd_rel_tol = 1e-6, double rank_rel_tol = 1e-9,
                              double calib_tol = 1e-8);

/// Empirical counterparts of the probabilistic lemmas: concentration of the
/// embedding sums, p/2-isotropy of neighborhood Grams, the negative-part
/// bound, the Monte-Carlo expectation of the neighborhood Gram, and the
/// deterministic l_inf bound on basis vectors.
struct EmpiricalReport {
  std::size_t pairs_sampled = 0;
  double sum_bound = 0.0;          // 3 sqrt(L log k)
  double sum_ok_fraction = 0.0;    // ||sum_{i in N(j)} w^(i)|| <= bound
  double isotropy_bound = 0.0;     // p / 2
  double isotropy_ok_fraction = 0.0;
  double negative_part_bound = 0.0;  // -(p/16) sqrt(d / L)
  double negative_part_ok_fraction = 0.0;
  double linf_bound = 0.0;  // 2 / sqrt(d)
  double linf_max = 0.0;
  bool linf_ok = false;
  // Monte-Carlo E[M] vs p I, entrywise
  std::size_t mc_samples = 0;
  double mc_max_abs_deviation = 0.0;
  double mc_max_sigma_units = 0.0;  // deviation / (sigma_hat / sqrt(T))
  bool mc_ok = false;               // all entries within 4 sigma units
};

EmpiricalReport empirical_lemma_checks(const PlantedInstance& inst, const ThresholdBasis& basis,
                                       const SpectralEmbedding& embedding, std::size_t trials,
                                       Rng& rng);

}  // namespace pbs
