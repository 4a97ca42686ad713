#pragma once

// Shared helpers for the unit and acceptance suites.

#include <random>
#include <vector>

#include "coldstart/criteria.hpp"
#include "coldstart/rng.hpp"

namespace coldstart::testsupport {

// Random pre-calibration bundle with the documented structural properties:
// p in (0,1), potential on the rating scale, D derived from potential,
// o >= 0, S symmetric in [-1,1] with a zero diagonal.
inline CriteriaBundle random_bundle(std::size_t n, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  CriteriaBundle b;
  b.users.resize(n);
  for (std::size_t i = 0; i < n; ++i) b.users[i] = static_cast<int>(i);
  b.p.resize(n);
  b.potential.resize(n);
  b.o.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    b.p[i] = 0.02 + 0.96 * unit(rng);
    b.potential[i] = 1.0 + 4.0 * unit(rng);
    b.o[i] = 4.0 * unit(rng);
  }
  b.d = diversity_matrix(b.potential);
  b.s = Matrix(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) b.s(i, j) = b.s(j, i) = 2.0 * unit(rng) - 1.0;
  return b;
}

// The four-term selection objective evaluated directly on the calibrated
// structures (independent route for checking q^T M q).
inline double four_term_objective(const CriteriaBundle& b, double alpha, double beta,
                                  double gamma, double sigma,
                                  const std::vector<std::uint8_t>& q) {
  const std::size_t n = b.users.size();
  double total = 0.0;
  for (std::size_t m = 0; m < n; ++m) {
    if (!q[m]) continue;
    total += alpha * b.p[m] - gamma * b.o[m];
    for (std::size_t k = 0; k < n; ++k) {
      if (q[k]) total += beta * b.d(m, k);
      total += sigma * b.s(m, k) * (1.0 - (q[k] ? 1.0 : 0.0));
    }
  }
  return total;
}

}  // namespace coldstart::testsupport
