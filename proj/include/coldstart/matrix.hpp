#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace coldstart {

// Dense row-major matrix of doubles. Small helper; no BLAS behind it.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Row-streamed y = M x, rows computed independently (OpenMP across rows).
std::vector<double> matvec(const Matrix& m, std::span<const double> x);

// Summation with a fixed pairwise reduction tree; result does not depend on
// chunking or thread count.
double pairwise_sum(std::span<const double> xs);

namespace serial {
std::vector<double> matvec(const Matrix& m, std::span<const double> x);
}

}  // namespace coldstart
