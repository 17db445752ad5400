#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace pbs {

/// Dense row-major matrix of doubles. The workhorse container for adjacency
/// views, spectra and SDP iterates; sized for desk-scale problems (n up to a
/// few thousand), so everything is O(n^2) storage and O(n^3) compute.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  double* row(std::size_t i) { return data_.data() + i * cols_; }
  const double* row(std::size_t i) const { return data_.data() + i * cols_; }
  std::span<const double> row_span(std::size_t i) const { return {row(i), cols_}; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  bool operator==(const Matrix& other) const = default;

  Matrix transposed() const;

  void add_scaled(const Matrix& other, double factor);  // *this += factor * other
  void scale(double factor);

  double trace() const;
  double frobenius_norm() const;
  double max_abs() const;
  /// max |m - m^T| over all entries; 0 for non-square would be meaningless,
  /// so requires rows == cols.
  double asymmetry() const;
  /// Replace with (m + m^T) / 2.
  void symmetrize();

  /// this * v, for v of length cols().
  std::vector<double> apply(std::span<const double> v) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// a * b. Parallelized over rows when the output is large enough to be worth
/// it; each output element is written by exactly one iteration, so results
/// are bitwise identical for any thread count.
Matrix multiply(const Matrix& a, const Matrix& b);

/// a^T * a for a with rows interpreted as vectors (Gram of the rows).
Matrix gram_of_rows(const Matrix& a);

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> v);
double norm_inf(std::span<const double> v);

}  // namespace pbs
