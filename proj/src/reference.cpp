#include "pbs/reference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <utility>

namespace pbs::reference {

SymmetricSpectrum jacobi_eig(const Matrix& m, int max_sweeps) {
  if (m.rows() != m.cols()) throw std::invalid_argument("jacobi_eig: matrix not square");
  const std::size_t n = m.rows();
  Matrix a = m;
  a.symmetrize();
  Matrix v = Matrix::identity(n);

  for (int sweep = 0; sweep < max_sweeps; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off <= 1e-30 * std::max(1.0, a.frobenius_norm())) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = std::copysign(1.0, theta) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t i = 0; i < n; ++i) {
          const double aip = a(i, p), aiq = a(i, q);
          a(i, p) = c * aip - s * aiq;
          a(i, q) = s * aip + c * aiq;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double api = a(p, i), aqi = a(q, i);
          a(p, i) = c * api - s * aqi;
          a(q, i) = s * api + c * aqi;
        }
        for (std::size_t i = 0; i < n; ++i) {
          const double vip = v(i, p), viq = v(i, q);
          v(i, p) = c * vip - s * viq;
          v(i, q) = s * vip + c * viq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

  SymmetricSpectrum out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t l = 0; l < n; ++l) {
    out.values[l] = a(order[l], order[l]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(l, i) = v(i, order[l]);
  }
  return out;
}

Matrix multiply_serial(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("multiply_serial: shape mismatch");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t l = 0; l < a.cols(); ++l) {
      const double ail = a(i, l);
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += ail * b(l, j);
    }
  return c;
}

namespace {

// Cholesky factorization; returns false if not positive definite, otherwise
// stores the lower factor in l and the log-determinant in logdet.
bool cholesky(const Matrix& m, Matrix& l, double& logdet) {
  const std::size_t n = m.rows();
  l = Matrix(n, n);
  logdet = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = m(i, j);
      for (std::size_t q = 0; q < j; ++q) s -= l(i, q) * l(j, q);
      if (i == j) {
        if (s <= 0.0) return false;
        l(i, i) = std::sqrt(s);
        logdet += 2.0 * std::log(l(i, i));
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  }
  return true;
}

Matrix inverse_from_cholesky(const Matrix& l) {
  const std::size_t n = l.rows();
  Matrix inv(n, n);
  std::vector<double> col(n);
  for (std::size_t c = 0; c < n; ++c) {
    std::fill(col.begin(), col.end(), 0.0);
    col[c] = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t q = 0; q < i; ++q) col[i] -= l(i, q) * col[q];
      col[i] /= l(i, i);
    }
    for (std::size_t i = n; i-- > 0;) {
      for (std::size_t q = i + 1; q < n; ++q) col[i] -= l(q, i) * col[q];
      col[i] /= l(i, i);
    }
    for (std::size_t i = 0; i < n; ++i) inv(i, c) = col[i];
  }
  return inv;
}

std::vector<double> gauss_solve(Matrix a, std::vector<double> rhs) {
  const std::size_t n = a.rows();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
    if (piv != col) {
      for (std::size_t c = 0; c < n; ++c) std::swap(a(col, c), a(piv, c));
      std::swap(rhs[col], rhs[piv]);
    }
    if (std::abs(a(col, col)) < 1e-14)
      throw std::runtime_error("sdp_optimum_barrier: singular Newton system");
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      for (std::size_t c = col; c < n; ++c) a(r, c) -= f * a(col, c);
      rhs[r] -= f * rhs[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = rhs[i];
    for (std::size_t j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

}  // namespace

double sdp_optimum_barrier(const Graph& g, std::size_t k, double tol) {
  const std::size_t n = g.vertex_count();
  if (n == 0 || k < 2 || k >= n)
    throw std::invalid_argument("sdp_optimum_barrier: need 2 <= k < n");
  const double cap = 1.0 / static_cast<double>(k);
  const auto edges = g.sorted_edges();
  const Matrix a = g.adjacency_matrix();

  // coordinate layout: upper triangle pairs (i <= j)
  std::vector<std::pair<std::size_t, std::size_t>> coords;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) coords.emplace_back(i, j);
  const std::size_t m = coords.size();
  std::vector<std::vector<std::size_t>> coord_of(n, std::vector<std::size_t>(n));
  for (std::size_t c = 0; c < m; ++c)
    coord_of[coords[c].first][coords[c].second] = coord_of[coords[c].second][coords[c].first] = c;

  // strictly feasible start: (I - s A) / n
  std::size_t max_deg = 0;
  for (Vertex v = 0; v < n; ++v) max_deg = std::max(max_deg, g.degree(v));
  const double shrink = 0.5 / (static_cast<double>(max_deg) + 1.0);
  Matrix x = Matrix::identity(n);
  x.add_scaled(a, -shrink);
  x.scale(1.0 / static_cast<double>(n));

  const double barrier_terms =
      static_cast<double>(n) + static_cast<double>(n) + static_cast<double>(edges.size());

  auto barrier_value = [&](const Matrix& xx, double t, double& logdet_out) -> double {
    Matrix l;
    if (!cholesky(xx, l, logdet_out)) return std::numeric_limits<double>::infinity();
    double f = -logdet_out;
    for (std::size_t i = 0; i < n; ++i) {
      const double slack = cap - xx(i, i);
      if (slack <= 0.0) return std::numeric_limits<double>::infinity();
      f -= std::log(slack);
    }
    double lin = 0.0;
    for (const auto& [u, v] : edges) {
      if (xx(u, v) >= 0.0) return std::numeric_limits<double>::infinity();
      f -= std::log(-xx(u, v));
      lin += 2.0 * xx(u, v);
    }
    return t * lin + f;
  };

  double t = 1.0;
  while (barrier_terms / t > tol * 0.5) {
    for (int newton = 0; newton < 60; ++newton) {
      Matrix l;
      double logdet;
      if (!cholesky(x, l, logdet))
        throw std::runtime_error("sdp_optimum_barrier: iterate left the cone");
      const Matrix s = inverse_from_cholesky(l);

      std::vector<double> grad(m, 0.0);
      Matrix hess(m, m);
      for (std::size_t ci = 0; ci < m; ++ci) {
        const auto [ai, bi] = coords[ci];
        grad[ci] = -(ai == bi ? s(ai, ai) : 2.0 * s(ai, bi));
        for (std::size_t cj = ci; cj < m; ++cj) {
          const auto [aj, bj] = coords[cj];
          double h;
          if (ai == bi && aj == bj)
            h = s(ai, aj) * s(ai, aj);
          else if (ai == bi)
            h = 2.0 * s(ai, aj) * s(ai, bj);
          else if (aj == bj)
            h = 2.0 * s(aj, ai) * s(aj, bi);
          else
            h = 2.0 * (s(ai, aj) * s(bi, bj) + s(ai, bj) * s(bi, aj));
          hess(ci, cj) = h;
          hess(cj, ci) = h;
        }
      }
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = coord_of[i][i];
        const double slack = cap - x(i, i);
        grad[c] += 1.0 / slack;
        hess(c, c) += 1.0 / (slack * slack);
      }
      for (const auto& [u, v] : edges) {
        const std::size_t c = coord_of[u][v];
        grad[c] += t * 2.0 - 1.0 / x(u, v);
        hess(c, c) += 1.0 / (x(u, v) * x(u, v));
      }

      // KKT system with the trace constraint
      Matrix kkt(m + 1, m + 1);
      std::vector<double> rhs(m + 1, 0.0);
      for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) kkt(i, j) = hess(i, j);
        rhs[i] = -grad[i];
      }
      for (std::size_t i = 0; i < n; ++i) {
        const std::size_t c = coord_of[i][i];
        kkt(c, m) = 1.0;
        kkt(m, c) = 1.0;
      }
      const auto sol = gauss_solve(std::move(kkt), std::move(rhs));

      double decrement = 0.0;
      for (std::size_t c = 0; c < m; ++c) decrement += -grad[c] * sol[c];
      if (decrement < 1e-12) break;

      Matrix step(n, n);
      for (std::size_t c = 0; c < m; ++c) {
        const auto [ai, bi] = coords[c];
        step(ai, bi) = sol[c];
        step(bi, ai) = sol[c];
      }

      double ld;
      const double f0 = barrier_value(x, t, ld);
      double alpha = 1.0;
      for (int back = 0; back < 60; ++back) {
        Matrix cand = x;
        cand.add_scaled(step, alpha);
        const double f1 = barrier_value(cand, t, ld);
        if (f1 <= f0 - 0.25 * alpha * decrement) {
          x = std::move(cand);
          break;
        }
        alpha *= 0.5;
        if (back == 59) alpha = 0.0;
      }
      if (alpha == 0.0) break;
    }
    t *= 10.0;
  }

  double obj = 0.0;
  for (const auto& [u, v] : edges) obj += 2.0 * x(u, v);
  return obj;
}

}  // namespace pbs::reference
