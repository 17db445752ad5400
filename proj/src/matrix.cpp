#include "pbs/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace pbs {

namespace {
// Below this many output elements the OpenMP fork/join overhead dominates.
constexpr std::size_t kParallelThreshold = 64 * 64;
}  // namespace

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

void Matrix::add_scaled(const Matrix& other, double factor) {
  if (other.rows_ != rows_ || other.cols_ != cols_)
    throw std::invalid_argument("Matrix::add_scaled: shape mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += factor * other.data_[i];
}

void Matrix::scale(double factor) {
  for (double& x : data_) x *= factor;
}

double Matrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
  return t;
}

double Matrix::frobenius_norm() const {
  double s = 0.0;
  for (double x : data_) s += x * x;
  return std::sqrt(s);
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double x : data_) m = std::max(m, std::abs(x));
  return m;
}

double Matrix::asymmetry() const {
  if (rows_ != cols_) throw std::invalid_argument("asymmetry: matrix not square");
  double m = 0.0;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      m = std::max(m, std::abs((*this)(i, j) - (*this)(j, i)));
  return m;
}

void Matrix::symmetrize() {
  if (rows_ != cols_) throw std::invalid_argument("symmetrize: matrix not square");
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j) {
      const double avg = 0.5 * ((*this)(i, j) + (*this)(j, i));
      (*this)(i, j) = avg;
      (*this)(j, i) = avg;
    }
}

std::vector<double> Matrix::apply(std::span<const double> v) const {
  if (v.size() != cols_) throw std::invalid_argument("apply: length mismatch");
  std::vector<double> out(rows_, 0.0);
#pragma omp parallel for schedule(static) if (rows_ * cols_ >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(rows_); ++i) {
    const double* r = row(static_cast<std::size_t>(i));
    double s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) s += r[j] * v[j];
    out[static_cast<std::size_t>(i)] = s;
  }
  return out;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("multiply: shape mismatch");
  Matrix c(a.rows(), b.cols());
  const std::size_t n = a.rows(), m = b.cols(), inner = a.cols();
#pragma omp parallel for schedule(static) if (n* m >= kParallelThreshold)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
    double* ci = c.row(static_cast<std::size_t>(i));
    const double* ai = a.row(static_cast<std::size_t>(i));
    for (std::size_t l = 0; l < inner; ++l) {
      const double ail = ai[l];
      if (ail == 0.0) continue;
      const double* bl = b.row(l);
      for (std::size_t j = 0; j < m; ++j) ci[j] += ail * bl[j];
    }
  }
  return c;
}

Matrix gram_of_rows(const Matrix& a) {
  const std::size_t r = a.rows(), n = a.cols();
  Matrix g(r, r);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = i; j < r; ++j) {
      double s = dot({a.row(i), n}, {a.row(j), n});
      g(i, j) = s;
      g(j, i) = s;
    }
  return g;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double norm_inf(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace pbs
