#include "pbs/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pbs/eig.hpp"

namespace pbs {

std::vector<double> ThresholdBasis::padded(std::size_t l, std::size_t n) const {
  std::vector<double> v(n, 0.0);
  for (std::size_t c = 0; c < s.size(); ++c) v[s[c]] = vectors(l, c);
  return v;
}

std::vector<double> SpectralEmbedding::coordinate_sum() const {
  std::vector<double> sum(w.cols(), 0.0);
  for (std::size_t r = 0; r < w.rows(); ++r)
    for (std::size_t c = 0; c < w.cols(); ++c) sum[c] += w(r, c);
  return sum;
}

Matrix SpectralEmbedding::gram() const { return gram_of_rows(w.transposed()); }

ThresholdBasis threshold_basis(const PlantedInstance& inst, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("threshold_basis: need tau > 0");

  ThresholdBasis basis;
  basis.tau = tau;
  basis.s = inst.planted_set();
  const Matrix block = restricted_submatrix(inst.graph.adjacency_matrix(), basis.s, basis.s);
  const auto spec = symmetric_eig(block);
  const std::size_t count = threshold_rank(spec, tau);

  const std::size_t k = basis.s.size();
  basis.eigenvalues.assign(spec.values.begin(), spec.values.begin() + count);
  basis.vectors = Matrix(count, k);
  const double inv_sqrt_k = 1.0 / std::sqrt(static_cast<double>(k));
  for (std::size_t l = 0; l < count; ++l) {
    const double* src = spec.vectors.row(l);
    double* dst = basis.vectors.row(l);
    std::copy(src, src + k, dst);
    // Exact eigenvectors below -tau are orthogonal to the degree eigenvector
    // 1_S already; strip any rounding leakage from degenerate eigenspaces.
    double along_ones = 0.0;
    for (std::size_t c = 0; c < k; ++c) along_ones += dst[c] * inv_sqrt_k;
    if (std::abs(along_ones) > 1e-13) {
      for (std::size_t c = 0; c < k; ++c) dst[c] -= along_ones * inv_sqrt_k;
      const double nrm = norm2({dst, k});
      for (std::size_t c = 0; c < k; ++c) dst[c] /= nrm > 0.0 ? nrm : 1.0;
    }
  }
  return basis;
}

SpectralEmbedding spectral_embedding(const ThresholdBasis& basis) {
  if (basis.count() == 0) throw std::invalid_argument("spectral_embedding: empty basis");
  SpectralEmbedding emb;
  emb.s = basis.s;
  emb.w = basis.vectors.transposed();
  return emb;
}

std::vector<double> lp_rhs(Vertex j, const ThresholdBasis& basis, const PlantedInstance& inst) {
  std::vector<double> b(basis.count(), 0.0);
  for (Vertex nb : inst.graph.neighbors(j)) {
    const auto it = std::lower_bound(basis.s.begin(), basis.s.end(), nb);
    if (it == basis.s.end() || *it != nb) continue;
    const auto col = static_cast<std::size_t>(it - basis.s.begin());
    for (std::size_t l = 0; l < basis.count(); ++l) b[l] -= basis.vectors(l, col);
  }
  return b;
}

double default_entry_cap(std::size_t basis_count, const ModelParams& params) {
  const double k = static_cast<double>(params.k);
  const double l = static_cast<double>(std::max<std::size_t>(basis_count, 1));
  return (56.0 * l / std::pow(params.p, 1.5)) * std::sqrt(std::log(k) / (params.gamma * k));
}

Matrix SparseB::to_dense(std::size_t n) const {
  Matrix b(n, n);
  for (const auto& e : entries) {
    b(e.inside, e.outside) = e.value;
    b(e.outside, e.inside) = e.value;
  }
  return b;
}

double SparseB::max_entry() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, e.value);
  return m;
}

double SparseB::min_entry() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::min(m, e.value);
  return m;
}

BuildBResult build_b_matrix(const PlantedInstance& inst, const ThresholdBasis& basis, double t) {
  BuildBResult out;
  out.t = t;
  const auto outside = inst.outside_set();
  if (basis.count() == 0) {  // nothing to calibrate
    out.ok = true;
    return out;
  }

  struct ColumnResult {
    std::vector<Vertex> inside;
    std::vector<double> values;
    bool failed = false;
    bool numerical = false;
    FarkasCertificate farkas;
  };
  std::vector<ColumnResult> cols(outside.size());

#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t idx = 0; idx < static_cast<std::ptrdiff_t>(outside.size()); ++idx) {
    const Vertex j = outside[static_cast<std::size_t>(idx)];
    ColumnResult& cr = cols[static_cast<std::size_t>(idx)];
    for (Vertex nb : inst.graph.neighbors(j))
      if (std::binary_search(basis.s.begin(), basis.s.end(), nb)) cr.inside.push_back(nb);
    std::sort(cr.inside.begin(), cr.inside.end());

    Matrix w(basis.count(), cr.inside.size());
    for (std::size_t c = 0; c < cr.inside.size(); ++c) {
      const auto col = static_cast<std::size_t>(
          std::lower_bound(basis.s.begin(), basis.s.end(), cr.inside[c]) - basis.s.begin());
      for (std::size_t l = 0; l < basis.count(); ++l) w(l, c) = basis.vectors(l, col);
    }
    const auto b = lp_rhs(j, basis, inst);
    auto lp = solve_bounded_lp(w, b, t);
    if (lp.status == LpResult::Status::feasible) {
      // The simplex vertex dumps the column mass on few coordinates; spread
      // it out so the assembled B perturbs the spectrum as little as it must.
      cr.values = least_norm_box_point(w, b, t, lp.x);
    } else {
      cr.failed = true;
      cr.numerical = lp.status == LpResult::Status::numerical_failure;
      cr.farkas = std::move(lp.farkas);
    }
  }

  for (std::size_t idx = 0; idx < outside.size(); ++idx) {
    const auto& cr = cols[idx];
    if (cr.failed) {
      out.failures.push_back({outside[idx], cr.farkas, cr.numerical});
      continue;
    }
    for (std::size_t c = 0; c < cr.inside.size(); ++c)
      if (cr.values[c] != 0.0) out.b.entries.push_back({cr.inside[c], outside[idx], cr.values[c]});
  }
  out.ok = out.failures.empty();
  if (!out.ok) out.b.entries.clear();
  return out;
}

DualCertificate assemble_certificate(const PlantedInstance& inst, const SparseB& b, double t_cap) {
  const std::size_t n = inst.graph.vertex_count();
  const auto s = inst.planted_set();
  std::vector<bool> in_s(n, false);
  for (Vertex v : s) in_s[v] = true;

  for (const auto& e : b.entries) {
    if (e.inside >= n || e.outside >= n)
      throw std::out_of_range("assemble_certificate: B index out of range");
    if (!in_s[e.inside] || in_s[e.outside])
      throw std::invalid_argument("assemble_certificate: B entry off the cross block");
    if (!inst.graph.has_edge(e.inside, e.outside))
      throw std::invalid_argument("assemble_certificate: B entry on a non-edge");
  }

  DualCertificate cert;
  cert.beta = -static_cast<double>(inst.params.d);
  cert.gammas.assign(n, 0.0);
  cert.b = b;
  cert.t_cap = t_cap;
  cert.y = inst.graph.adjacency_matrix();
  for (std::size_t i = 0; i < n; ++i) cert.y(i, i) += static_cast<double>(inst.params.d);
  for (const auto& e : b.entries) {
    cert.y(e.inside, e.outside) += e.value;
    cert.y(e.outside, e.inside) += e.value;
  }
  return cert;
}

CertReport verify_certificate(const DualCertificate& cert, const PlantedInstance& inst, double tau,
                              double psd_rel_tol, double rank_rel_tol, double calib_tol) {
  CertReport rep;
  const std::size_t n = inst.graph.vertex_count();
  const auto s = inst.planted_set();
  std::vector<bool> in_s(n, false);
  for (Vertex v : s) in_s[v] = true;

  const auto spec = symmetric_eig(cert.y);
  rep.lambda_min = spec.values.front();
  rep.lambda_second = spec.size() > 1 ? spec.values[1] : spec.values.front();
  rep.y_norm = std::max(std::abs(spec.values.front()), std::abs(spec.values.back()));
  rep.psd_tol = psd_rel_tol * rep.y_norm;
  rep.rank_tol = rank_rel_tol * rep.y_norm;
  rep.psd_ok = rep.lambda_min >= -rep.psd_tol;
  rep.rank_ok = rep.lambda_second >= rep.rank_tol;

  const auto g = inst.sdp_witness();
  const auto yg = cert.y.apply(g);
  rep.slackness = std::abs(dot(g, yg));
  rep.slackness_ok = rep.slackness <= rep.psd_tol;

  // calibration: every basis vector lies in the kernel of the cross rows of A + B
  const auto basis = threshold_basis(inst, tau);
  Matrix apb = inst.graph.adjacency_matrix();
  for (const auto& e : cert.b.entries) {
    apb(e.inside, e.outside) += e.value;
    apb(e.outside, e.inside) += e.value;
  }
  double calib = 0.0;
  for (std::size_t l = 0; l < basis.count(); ++l) {
    for (Vertex j = 0; j < n; ++j) {
      if (in_s[j]) continue;
      double sum = 0.0;
      for (std::size_t c = 0; c < s.size(); ++c) sum += basis.vectors(l, c) * apb(s[c], j);
      calib = std::max(calib, std::abs(sum));
    }
  }
  rep.calibration_residual = calib;
  rep.calibration_ok = calib <= calib_tol;

  rep.max_b_entry = cert.b.max_entry();
  rep.min_b_entry = cert.b.min_entry();
  rep.cap_ok = rep.min_b_entry >= -1e-12 && rep.max_b_entry <= cert.t_cap + 1e-12;

  rep.support_ok = true;
  for (const auto& e : cert.b.entries) {
    if (!in_s[e.inside] || in_s[e.outside] || !inst.graph.has_edge(e.inside, e.outside)) {
      rep.support_ok = false;
      break;
    }
  }

  const double k = static_cast<double>(inst.params.k);
  const double p = inst.params.p;
  rep.b_norm = cert.b.entries.empty() ? 0.0 : spectral_norm(cert.b.to_dense(n));
  rep.b_norm_bound = 896.0 * std::sqrt(static_cast<double>(n) * std::log(k)) / std::pow(p, 2.5);
  rep.norm_ok = rep.b_norm <= rep.b_norm_bound;
  return rep;
}

EmpiricalReport empirical_lemma_checks(const PlantedInstance& inst, const ThresholdBasis& basis,
                                       const SpectralEmbedding& embedding, std::size_t trials,
                                       Rng& rng) {
  EmpiricalReport rep;
  const std::size_t l_dim = basis.count();
  const std::size_t k = basis.s.size();
  const std::size_t d = inst.params.d;
  const double p = inst.params.p;

  rep.linf_bound = 2.0 / std::sqrt(static_cast<double>(d));
  rep.linf_max = basis.vectors.max_abs();
  rep.linf_ok = rep.linf_max <= rep.linf_bound + 1e-9;

  if (l_dim == 0) return rep;

  rep.sum_bound = 3.0 * std::sqrt(static_cast<double>(l_dim) * std::log(static_cast<double>(k)));
  rep.isotropy_bound = p / 2.0;
  rep.negative_part_bound =
      -(p / 16.0) * std::sqrt(static_cast<double>(d) / static_cast<double>(l_dim));

  std::vector<std::size_t> row_of(inst.graph.vertex_count(), SIZE_MAX);
  for (std::size_t r = 0; r < basis.s.size(); ++r) row_of[basis.s[r]] = r;

  const auto outside = inst.outside_set();
  std::size_t sum_ok = 0, iso_ok = 0, neg_ok = 0, pairs = 0;
  if (!outside.empty()) {
    for (std::size_t trial = 0; trial < trials; ++trial) {
      const Vertex j = outside[rng.uniform_below(outside.size())];
      std::vector<std::size_t> nbr_rows;
      for (Vertex nb : inst.graph.neighbors(j))
        if (row_of[nb] != SIZE_MAX) nbr_rows.push_back(row_of[nb]);

      std::vector<double> sum(l_dim, 0.0);
      Matrix gram(l_dim, l_dim);
      for (std::size_t r : nbr_rows) {
        const double* w = embedding.w.row(r);
        for (std::size_t a = 0; a < l_dim; ++a) {
          sum[a] += w[a];
          for (std::size_t b = 0; b < l_dim; ++b) gram(a, b) += w[a] * w[b];
        }
      }
      if (norm2(sum) <= rep.sum_bound) ++sum_ok;
      if (min_eigenvalue(gram) >= rep.isotropy_bound) ++iso_ok;

      std::vector<double> y(l_dim);
      for (double& v : y) v = rng.normal();
      const double nrm = norm2(y);
      for (double& v : y) v /= nrm > 0.0 ? nrm : 1.0;
      double neg = 0.0;
      for (std::size_t r : nbr_rows) neg += std::min(0.0, dot({embedding.w.row(r), l_dim}, y));
      if (neg <= rep.negative_part_bound) ++neg_ok;
      ++pairs;
    }
  }
  rep.pairs_sampled = pairs;
  if (pairs > 0) {
    rep.sum_ok_fraction = static_cast<double>(sum_ok) / static_cast<double>(pairs);
    rep.isotropy_ok_fraction = static_cast<double>(iso_ok) / static_cast<double>(pairs);
    rep.negative_part_ok_fraction = static_cast<double>(neg_ok) / static_cast<double>(pairs);
  }

  // Monte-Carlo estimate of E[M] over fresh Bernoulli(p) neighborhoods of S
  const std::size_t t_mc = std::max<std::size_t>(trials, 2);
  Matrix mean(l_dim, l_dim), mean_sq(l_dim, l_dim);
  for (std::size_t t = 0; t < t_mc; ++t) {
    Matrix m(l_dim, l_dim);
    for (std::size_t r = 0; r < k; ++r) {
      if (!rng.bernoulli(p)) continue;
      const double* w = embedding.w.row(r);
      for (std::size_t a = 0; a < l_dim; ++a)
        for (std::size_t b = 0; b < l_dim; ++b) m(a, b) += w[a] * w[b];
    }
    for (std::size_t a = 0; a < l_dim; ++a)
      for (std::size_t b = 0; b < l_dim; ++b) {
        mean(a, b) += m(a, b);
        mean_sq(a, b) += m(a, b) * m(a, b);
      }
  }
  rep.mc_samples = t_mc;
  rep.mc_ok = true;
  for (std::size_t a = 0; a < l_dim; ++a)
    for (std::size_t b = 0; b < l_dim; ++b) {
      const double mu = mean(a, b) / static_cast<double>(t_mc);
      const double var = std::max(0.0, mean_sq(a, b) / static_cast<double>(t_mc) - mu * mu);
      const double sem = std::sqrt(var / static_cast<double>(t_mc));
      const double target = a == b ? p : 0.0;
      const double dev = std::abs(mu - target);
      rep.mc_max_abs_deviation = std::max(rep.mc_max_abs_deviation, dev);
      if (dev > 1e-12) {  // exact-arithmetic cases (p = 1) sit at rounding noise
        const double units = sem > 0.0 ? dev / sem : std::numeric_limits<double>::infinity();
        rep.mc_max_sigma_units = std::max(rep.mc_max_sigma_units, units);
        if (units > 4.0) rep.mc_ok = false;
      }
    }
  return rep;
}

}  // namespace pbs
