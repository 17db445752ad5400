#include "pbs/lp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace pbs {

namespace {

constexpr double kPivotTol = 1e-11;
constexpr double kReducedCostTol = 1e-9;

// Dense LU solve with partial pivoting; systems here are tiny (L x L).
class SquareSolver {
 public:
  explicit SquareSolver(Matrix a) : n_(a.rows()), lu_(std::move(a)), perm_(n_) {
    for (std::size_t i = 0; i < n_; ++i) perm_[i] = i;
    for (std::size_t col = 0; col < n_; ++col) {
      std::size_t piv = col;
      for (std::size_t r = col + 1; r < n_; ++r)
        if (std::abs(lu_(r, col)) > std::abs(lu_(piv, col))) piv = r;
      if (piv != col) {
        for (std::size_t c = 0; c < n_; ++c) std::swap(lu_(col, c), lu_(piv, c));
        std::swap(perm_[col], perm_[piv]);
      }
      if (std::abs(lu_(col, col)) < kPivotTol) {
        singular_ = true;
        return;
      }
      for (std::size_t r = col + 1; r < n_; ++r) {
        const double f = lu_(r, col) / lu_(col, col);
        lu_(r, col) = f;
        for (std::size_t c = col + 1; c < n_; ++c) lu_(r, c) -= f * lu_(col, c);
      }
    }
  }

  bool singular() const { return singular_; }

  std::vector<double> solve(const std::vector<double>& rhs) const {
    std::vector<double> x(n_);
    for (std::size_t i = 0; i < n_; ++i) x[i] = rhs[perm_[i]];
    for (std::size_t i = 0; i < n_; ++i)
      for (std::size_t j = 0; j < i; ++j) x[i] -= lu_(i, j) * x[j];
    for (std::size_t i = n_; i-- > 0;) {
      for (std::size_t j = i + 1; j < n_; ++j) x[i] -= lu_(i, j) * x[j];
      x[i] /= lu_(i, i);
    }
    return x;
  }

  std::vector<double> solve_transposed(const std::vector<double>& rhs) const {
    // (PA)=LU  =>  A^T y = r  solved via U^T w = r, L^T v = w, y = P^T v
    std::vector<double> w(rhs);
    for (std::size_t i = 0; i < n_; ++i) {
      for (std::size_t j = 0; j < i; ++j) w[i] -= lu_(j, i) * w[j];
      w[i] /= lu_(i, i);
    }
    for (std::size_t i = n_; i-- > 0;)
      for (std::size_t j = i + 1; j < n_; ++j) w[i] -= lu_(j, i) * w[j];
    std::vector<double> y(n_);
    for (std::size_t i = 0; i < n_; ++i) y[perm_[i]] = w[i];
    return y;
  }

 private:
  std::size_t n_;
  Matrix lu_;
  std::vector<std::size_t> perm_;
  bool singular_ = false;
};

enum class VarState { at_lower, at_upper, basic, fixed_out };

}  // namespace

bool farkas_self_verifies(const Matrix& w, const std::vector<double>& b, double t,
                          const FarkasCertificate& cert, double tol) {
  const std::size_t rows = w.rows(), cols = w.cols();
  if (cert.y.size() != rows || cert.z.size() != cols) return false;
  double zy_min = 0.0;
  for (std::size_t j = 0; j < cols; ++j) {
    if (cert.z[j] < -tol) return false;
    double s = cert.z[j];
    for (std::size_t i = 0; i < rows; ++i) s += w(i, j) * cert.y[i];
    zy_min = std::min(zy_min, s);
  }
  double gap = 0.0;
  for (std::size_t i = 0; i < rows; ++i) gap += b[i] * cert.y[i];
  for (std::size_t j = 0; j < cols; ++j) gap += t * cert.z[j];
  return zy_min >= -tol && gap <= -tol;
}

LpResult solve_bounded_lp(const Matrix& w, const std::vector<double>& b, double t) {
  if (t <= 0.0) throw std::invalid_argument("solve_bounded_lp: t must be positive");
  const std::size_t rows = w.rows(), cols = w.cols();
  if (b.size() != rows) throw std::invalid_argument("solve_bounded_lp: b length mismatch");

  LpResult out;
  const double scale = std::max(1.0, norm_inf(b));

  if (rows == 0) {
    out.status = LpResult::Status::feasible;
    out.x.assign(cols, 0.0);
    return out;
  }

  // Phase-1: min sum of artificials, W x + D s = b, 0 <= x <= t, s >= 0,
  // with D = diag(sign(b)) so the all-artificial basis starts feasible.
  const std::size_t total = cols + rows;
  std::vector<double> sign(rows);
  for (std::size_t i = 0; i < rows; ++i) sign[i] = b[i] >= 0.0 ? 1.0 : -1.0;

  auto column = [&](std::size_t j, std::vector<double>& col) {
    std::fill(col.begin(), col.end(), 0.0);
    if (j < cols)
      for (std::size_t i = 0; i < rows; ++i) col[i] = w(i, j);
    else
      col[j - cols] = sign[j - cols];
  };
  auto cost = [&](std::size_t j) { return j < cols ? 0.0 : 1.0; };
  auto upper = [&](std::size_t j) {
    return j < cols ? t : std::numeric_limits<double>::infinity();
  };

  std::vector<VarState> state(total, VarState::at_lower);
  std::vector<std::size_t> basis(rows);
  std::vector<double> value(rows);  // values of basic variables
  for (std::size_t i = 0; i < rows; ++i) {
    basis[i] = cols + i;
    state[cols + i] = VarState::basic;
    value[i] = std::abs(b[i]);
  }

  std::vector<double> col(rows), pi(rows), dir(rows), cb(rows);
  const std::size_t max_iters = 200 * (total + 10);
  bool ok = true;

  for (std::size_t iter = 0;; ++iter) {
    if (iter >= max_iters) {
      ok = false;
      break;
    }
    Matrix bmat(rows, rows);
    for (std::size_t i = 0; i < rows; ++i) {
      column(basis[i], col);
      for (std::size_t r = 0; r < rows; ++r) bmat(r, i) = col[r];
    }
    SquareSolver solver(std::move(bmat));
    if (solver.singular()) {
      ok = false;
      break;
    }
    for (std::size_t i = 0; i < rows; ++i) cb[i] = cost(basis[i]);
    pi = solver.solve_transposed(cb);

    // Bland's rule: smallest-index eligible entering variable.
    std::size_t enter = total;
    double enter_sign = 1.0;
    for (std::size_t j = 0; j < total; ++j) {
      if (state[j] == VarState::basic || state[j] == VarState::fixed_out) continue;
      column(j, col);
      double red = cost(j);
      for (std::size_t i = 0; i < rows; ++i) red -= pi[i] * col[i];
      if (state[j] == VarState::at_lower && red < -kReducedCostTol) {
        enter = j;
        enter_sign = 1.0;
        break;
      }
      if (state[j] == VarState::at_upper && red > kReducedCostTol) {
        enter = j;
        enter_sign = -1.0;
        break;
      }
    }
    if (enter == total) break;  // optimal

    column(enter, col);
    dir = solver.solve(col);  // B^-1 A_enter

    // Ratio test over basic variables plus the entering bound span.
    double theta = upper(enter);
    std::size_t leave = rows;  // rows = bound flip
    for (std::size_t i = 0; i < rows; ++i) {
      const double delta = -enter_sign * dir[i];
      const std::size_t q = basis[i];
      double limit = std::numeric_limits<double>::infinity();
      if (delta < -kPivotTol)
        limit = value[i] / (-delta);
      else if (delta > kPivotTol && std::isfinite(upper(q)))
        limit = (upper(q) - value[i]) / delta;
      if (limit < theta - 1e-12 ||
          (limit < theta + 1e-12 && leave < rows && q < basis[leave])) {
        theta = std::max(0.0, limit);
        leave = i;
      }
    }

    if (!std::isfinite(theta)) {
      ok = false;  // cost bounded below by 0, so this is numerical trouble
      break;
    }

    for (std::size_t i = 0; i < rows; ++i) value[i] -= enter_sign * dir[i] * theta;

    if (leave == rows) {
      state[enter] = enter_sign > 0 ? VarState::at_upper : VarState::at_lower;
      continue;
    }

    const std::size_t out_var = basis[leave];
    const double out_delta = -enter_sign * dir[leave];
    if (out_var >= cols) {
      state[out_var] = VarState::fixed_out;  // artificials never come back
    } else {
      state[out_var] = out_delta < 0.0 ? VarState::at_lower : VarState::at_upper;
    }
    basis[leave] = enter;
    state[enter] = VarState::basic;
    value[leave] = enter_sign > 0 ? theta : t - theta;
  }

  double z_star = 0.0;
  for (std::size_t i = 0; i < rows; ++i)
    if (basis[i] >= cols) z_star += value[i];
  out.phase1_objective = z_star;

  if (ok && z_star <= 1e-9 * scale) {
    out.x.assign(cols, 0.0);
    for (std::size_t j = 0; j < cols; ++j)
      if (state[j] == VarState::at_upper) out.x[j] = t;
    for (std::size_t i = 0; i < rows; ++i)
      if (basis[i] < cols) out.x[basis[i]] = std::clamp(value[i], 0.0, t);
    double res = 0.0;
    for (std::size_t i = 0; i < rows; ++i) {
      double s = -b[i];
      for (std::size_t j = 0; j < cols; ++j) s += w(i, j) * out.x[j];
      res = std::max(res, std::abs(s));
    }
    out.residual = res;
    if (res <= 1e-8 * scale) {
      out.status = LpResult::Status::feasible;
      return out;
    }
    out.status = LpResult::Status::numerical_failure;
    return out;
  }

  if (ok) {
    // Farkas certificate from the optimal dual prices: y = -pi,
    // z_j = max(0, W_j . pi).
    Matrix bmat(rows, rows);
    for (std::size_t i = 0; i < rows; ++i) {
      column(basis[i], col);
      for (std::size_t r = 0; r < rows; ++r) bmat(r, i) = col[r];
    }
    SquareSolver solver(std::move(bmat));
    if (!solver.singular()) {
      for (std::size_t i = 0; i < rows; ++i) cb[i] = cost(basis[i]);
      pi = solver.solve_transposed(cb);
      FarkasCertificate cert;
      cert.y.resize(rows);
      for (std::size_t i = 0; i < rows; ++i) cert.y[i] = -pi[i];
      cert.z.assign(cols, 0.0);
      for (std::size_t j = 0; j < cols; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i < rows; ++i) s += w(i, j) * pi[i];
        cert.z[j] = std::max(0.0, s);
      }
      if (farkas_self_verifies(w, b, t, cert, 1e-10 * scale)) {
        out.status = LpResult::Status::infeasible;
        out.farkas = std::move(cert);
        return out;
      }
    }
  }

  out.status = LpResult::Status::numerical_failure;
  return out;
}

namespace {

// x - W^T (W W^T)^{-1} (W x - b), i.e. exact projection onto {Wx = b}.
// Returns false when the normal matrix is singular (dependent rows).
class AffineProjector {
 public:
  AffineProjector(const Matrix& w, const std::vector<double>& b) : w_(w), b_(b) {
    Matrix normal(w.rows(), w.rows());
    for (std::size_t i = 0; i < w.rows(); ++i)
      for (std::size_t j = 0; j < w.rows(); ++j) {
        double s = 0.0;
        for (std::size_t c = 0; c < w.cols(); ++c) s += w(i, c) * w(j, c);
        normal(i, j) = s;
      }
    solver_.emplace(std::move(normal));
  }

  bool ok() const { return !solver_->singular(); }

  void project(std::vector<double>& x) const {
    std::vector<double> resid(w_.rows(), 0.0);
    for (std::size_t i = 0; i < w_.rows(); ++i) {
      double s = -b_[i];
      for (std::size_t c = 0; c < w_.cols(); ++c) s += w_(i, c) * x[c];
      resid[i] = s;
    }
    const auto mult = solver_->solve(resid);
    for (std::size_t c = 0; c < w_.cols(); ++c) {
      double s = 0.0;
      for (std::size_t i = 0; i < w_.rows(); ++i) s += w_(i, c) * mult[i];
      x[c] -= s;
    }
  }

 private:
  const Matrix& w_;
  const std::vector<double>& b_;
  mutable std::optional<SquareSolver> solver_;
};

double box_residual(const Matrix& w, const std::vector<double>& b,
                    const std::vector<double>& x) {
  double res = 0.0;
  for (std::size_t i = 0; i < w.rows(); ++i) {
    double s = -b[i];
    for (std::size_t c = 0; c < w.cols(); ++c) s += w(i, c) * x[c];
    res = std::max(res, std::abs(s));
  }
  return res;
}

}  // namespace

std::vector<double> least_norm_box_point(const Matrix& w, const std::vector<double>& b, double t,
                                         const std::vector<double>& start) {
  const std::size_t rows = w.rows(), cols = w.cols();
  if (rows == 0 || cols == 0) return start;
  const double scale = std::max(1.0, norm_inf(b));
  const double target = 1e-9 * scale;

  AffineProjector affine(w, b);
  if (!affine.ok()) return start;

  // Alternating projections from zero approach the least-norm point and,
  // more importantly, settle which coordinates are active.
  std::vector<double> x(cols, 0.0);
  affine.project(x);
  for (int iter = 0; iter < 400; ++iter) {
    for (auto& v : x) v = std::clamp(v, 0.0, t);
    affine.project(x);
    bool inside = true;
    for (double v : x)
      if (v < -1e-12 || v > t + 1e-12) {
        inside = false;
        break;
      }
    if (inside) break;
  }

  // Exact solve on the free coordinates with the active ones pinned.
  std::vector<double> polished(cols);
  std::vector<std::size_t> free_idx;
  std::vector<double> rhs = b;
  const double edge = 1e-10 * std::max(1.0, t);
  for (std::size_t c = 0; c < cols; ++c) {
    if (x[c] <= edge) {
      polished[c] = 0.0;
    } else if (x[c] >= t - edge) {
      polished[c] = t;
      for (std::size_t i = 0; i < rows; ++i) rhs[i] -= w(i, c) * t;
    } else {
      free_idx.push_back(c);
    }
  }
  bool polish_ok = false;
  if (!free_idx.empty()) {
    Matrix wf(rows, free_idx.size());
    for (std::size_t i = 0; i < rows; ++i)
      for (std::size_t c = 0; c < free_idx.size(); ++c) wf(i, c) = w(i, free_idx[c]);
    AffineProjector sub(wf, rhs);
    if (sub.ok()) {
      std::vector<double> xf(free_idx.size(), 0.0);
      sub.project(xf);
      polish_ok = true;
      for (std::size_t c = 0; c < free_idx.size(); ++c) {
        if (xf[c] < -1e-11 || xf[c] > t + 1e-11) {
          polish_ok = false;
          break;
        }
        polished[free_idx[c]] = std::clamp(xf[c], 0.0, t);
      }
    }
  } else {
    polish_ok = true;
  }

  if (polish_ok && box_residual(w, b, polished) <= target &&
      norm2(polished) <= norm2(start) + 1e-12) {
    return polished;
  }
  // Polish failed; keep the clamped alternating-projection point if it is
  // both accurate and shorter than the vertex, otherwise the vertex stands.
  for (auto& v : x) v = std::clamp(v, 0.0, t);
  if (box_residual(w, b, x) <= target && norm2(x) < norm2(start)) return x;
  return start;
}

}  // namespace pbs
