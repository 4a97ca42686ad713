#include "coldstart/matrix.hpp"

namespace coldstart {

namespace {

double row_dot(std::span<const double> row, std::span<const double> x) {
  double acc = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) acc += row[j] * x[j];
  return acc;
}

}  // namespace

std::vector<double> matvec(const Matrix& m, std::span<const double> x) {
  std::vector<double> y(m.rows(), 0.0);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(m.rows());
#pragma omp parallel for schedule(static) if (n > 64)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    y[static_cast<std::size_t>(i)] = row_dot(m.row(static_cast<std::size_t>(i)), x);
  }
  return y;
}

namespace serial {

std::vector<double> matvec(const Matrix& m, std::span<const double> x) {
  std::vector<double> y(m.rows(), 0.0);
  for (std::size_t i = 0; i < m.rows(); ++i) y[i] = row_dot(m.row(i), x);
  return y;
}

}  // namespace serial

double pairwise_sum(std::span<const double> xs) {
  if (xs.size() <= 16) {
    double acc = 0.0;
    for (double v : xs) acc += v;
    return acc;
  }
  const std::size_t half = xs.size() / 2;
  return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

}  // namespace coldstart
