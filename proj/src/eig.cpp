#include "pbs/eig.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace pbs {

namespace {

constexpr std::size_t kParallelMinDim = 192;  // below this, serial is faster
constexpr int kMaxQlSweeps = 64;

// Householder reduction of symmetric a (n x n) to tridiagonal form.
// On return, d holds the diagonal, e the subdiagonal (e[0] = 0), and q the
// accumulated orthogonal transform with ROWS as the transform columns
// (q is Q^T), so that a = Q T Q^T.
void householder_tridiag(Matrix& a, std::vector<double>& d, std::vector<double>& e) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(a.rows());
  std::vector<double> p(n, 0.0);

  for (std::ptrdiff_t i = n - 1; i >= 1; --i) {
    const std::ptrdiff_t l = i - 1;
    double h = 0.0;
    if (l > 0) {
      double scale = 0.0;
      for (std::ptrdiff_t k = 0; k <= l; ++k) scale += std::abs(a(i, k));
      if (scale == 0.0) {
        e[i] = a(i, l);
      } else {
        for (std::ptrdiff_t k = 0; k <= l; ++k) {
          a(i, k) /= scale;
          h += a(i, k) * a(i, k);
        }
        double f = a(i, l);
        double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        a(i, l) = f - g;
        // p = A u / h over the leading (l+1) block, then the symmetric
        // rank-2 update A -= q u^T + u q^T with q = p - (u.p / 2h) u.
#pragma omp parallel for schedule(static) if (l >= static_cast<std::ptrdiff_t>(kParallelMinDim))
        for (std::ptrdiff_t j = 0; j <= l; ++j) {
          double s = 0.0;
          for (std::ptrdiff_t k = 0; k <= j; ++k) s += a(j, k) * a(i, k);
          for (std::ptrdiff_t k = j + 1; k <= l; ++k) s += a(k, j) * a(i, k);
          p[j] = s / h;
        }
        double up = 0.0;
        for (std::ptrdiff_t j = 0; j <= l; ++j) up += p[j] * a(i, j);
        const double hh = up / (h + h);
        for (std::ptrdiff_t j = 0; j <= l; ++j) p[j] -= hh * a(i, j);
#pragma omp parallel for schedule(static) if (l >= static_cast<std::ptrdiff_t>(kParallelMinDim))
        for (std::ptrdiff_t j = 0; j <= l; ++j) {
          const double fj = a(i, j);
          const double gj = p[j];
          for (std::ptrdiff_t k = 0; k <= j; ++k) a(j, k) -= fj * p[k] + gj * a(i, k);
        }
        // store u / h in column i for the accumulation pass
        for (std::ptrdiff_t j = 0; j <= l; ++j) a(j, i) = a(i, j) / h;
      }
    } else {
      e[i] = a(i, l);
    }
    d[i] = h;
  }
  d[0] = 0.0;
  e[0] = 0.0;

  // Accumulate the product of Householder transforms into a.
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const std::ptrdiff_t l = i - 1;
    if (d[i] != 0.0) {
#pragma omp parallel for schedule(static) if (l >= static_cast<std::ptrdiff_t>(kParallelMinDim))
      for (std::ptrdiff_t j = 0; j <= l; ++j) {
        double g = 0.0;
        for (std::ptrdiff_t k = 0; k <= l; ++k) g += a(i, k) * a(k, j);
        for (std::ptrdiff_t k = 0; k <= l; ++k) a(k, j) -= g * a(k, i);
      }
    }
    d[i] = a(i, i);
    a(i, i) = 1.0;
    for (std::ptrdiff_t j = 0; j <= l; ++j) a(i, j) = a(j, i) = 0.0;
  }
}

// Implicit-shift QL on the tridiagonal (d, e), rotating the rows of zt
// (eigenvectors accumulate as rows). Returns false if any eigenvalue fails
// to converge within kMaxQlSweeps sweeps.
bool ql_implicit(std::vector<double>& d, std::vector<double>& e, Matrix& zt) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(d.size());
  if (n <= 1) return true;
  for (std::ptrdiff_t i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  const double eps = std::numeric_limits<double>::epsilon();

  for (std::ptrdiff_t l = 0; l < n; ++l) {
    int iter = 0;
    std::ptrdiff_t m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == kMaxQlSweeps) return false;
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        std::ptrdiff_t i = m - 1;
        for (; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          double* zi = zt.row(static_cast<std::size_t>(i));
          double* zi1 = zt.row(static_cast<std::size_t>(i + 1));
#pragma omp parallel for simd schedule(static) if (n >= static_cast<std::ptrdiff_t>(kParallelMinDim) * 2)
          for (std::ptrdiff_t k = 0; k < n; ++k) {
            const double fk = zi1[k];
            zi1[k] = s * zi[k] + c * fk;
            zi[k] = c * zi[k] - s * fk;
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  return true;
}

}  // namespace

Matrix SymmetricSpectrum::reconstruct() const {
  const std::size_t n = vectors.cols();
  Matrix m(n, n);
  for (std::size_t l = 0; l < values.size(); ++l) {
    const double* v = vectors.row(l);
    const double lam = values[l];
    if (lam == 0.0) continue;
    for (std::size_t i = 0; i < n; ++i) {
      const double f = lam * v[i];
      for (std::size_t j = 0; j < n; ++j) m(i, j) += f * v[j];
    }
  }
  return m;
}

double SymmetricSpectrum::orthonormality_error() const {
  double err = 0.0;
  for (std::size_t i = 0; i < size(); ++i)
    for (std::size_t j = i; j < size(); ++j) {
      const double p = dot(vector(i), vector(j));
      err = std::max(err, std::abs(p - (i == j ? 1.0 : 0.0)));
    }
  return err;
}

SymmetricSpectrum symmetric_eig(const Matrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("symmetric_eig: matrix not square");
  const std::size_t n = m.rows();
  const double sym_tol = 1e-9 * std::max(1.0, m.max_abs());
  if (n > 0 && m.asymmetry() > sym_tol)
    throw std::invalid_argument("symmetric_eig: input is not symmetric within tolerance");

  SymmetricSpectrum out;
  if (n == 0) return out;

  Matrix work = m;
  work.symmetrize();
  if (n == 1) {
    out.values = {work(0, 0)};
    out.vectors = Matrix(1, 1);
    out.vectors(0, 0) = 1.0;
    return out;
  }

  std::vector<double> d(n, 0.0), e(n, 0.0);
  householder_tridiag(work, d, e);
  // work now holds Q with rows = transform columns; rotate rows in place.
  Matrix zt = work.transposed();
  if (!ql_implicit(d, e, zt))
    throw std::runtime_error("symmetric_eig: QL iteration did not converge");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t l = 0; l < n; ++l) {
    out.values[l] = d[order[l]];
    const double* src = zt.row(order[l]);
    std::copy(src, src + n, out.vectors.row(l));
  }
  return out;
}

std::size_t threshold_rank(const SymmetricSpectrum& s, double tau) {
  if (tau < 0.0) throw std::invalid_argument("threshold_rank: tau must be nonnegative");
  // values sorted ascending: count entries <= -tau
  return static_cast<std::size_t>(
      std::upper_bound(s.values.begin(), s.values.end(), -tau) - s.values.begin());
}

double min_eigenvalue(const Matrix& m) {
  const auto s = symmetric_eig(m);
  if (s.values.empty()) throw std::invalid_argument("min_eigenvalue: empty matrix");
  return s.values.front();
}

double spectral_norm(const Matrix& m) {
  const auto s = symmetric_eig(m);
  if (s.values.empty()) return 0.0;
  return std::max(std::abs(s.values.front()), std::abs(s.values.back()));
}

Matrix project_psd(const Matrix& m) {
  const auto s = symmetric_eig(m);
  const std::size_t n = m.rows();
  std::size_t n_neg = 0;
  while (n_neg < n && s.values[n_neg] < 0.0) ++n_neg;

  if (n_neg <= n - n_neg) {
    // few negative eigenvalues: subtract their contribution from m
    Matrix out = m;
    out.symmetrize();
    for (std::size_t l = 0; l < n_neg; ++l) {
      const double* v = s.vectors.row(l);
      const double lam = s.values[l];
#pragma omp parallel for schedule(static) if (n >= kParallelMinDim)
      for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        const double f = lam * v[i];
        double* oi = out.row(static_cast<std::size_t>(i));
        for (std::size_t j = 0; j < n; ++j) oi[j] -= f * v[j];
      }
    }
    return out;
  }
  // few positive eigenvalues: accumulate them directly
  Matrix out(n, n);
  for (std::size_t l = n_neg; l < n; ++l) {
    const double* v = s.vectors.row(l);
    const double lam = s.values[l];
#pragma omp parallel for schedule(static) if (n >= kParallelMinDim)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      const double f = lam * v[i];
      double* oi = out.row(static_cast<std::size_t>(i));
      for (std::size_t j = 0; j < n; ++j) oi[j] += f * v[j];
    }
  }
  return out;
}

}  // namespace pbs
