#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "coldstart/criteria.hpp"
#include "coldstart/matrix.hpp"

namespace coldstart {

// max_q q^T M q with q binary, sum(q) = k. `m` is stored unshifted; `shift`
// is the diagonal offset the iterative solver works with.
struct SelectionProblem {
  Matrix m;
  int k = 0;
  double alpha = 0.0, beta = 0.0, gamma = 0.0, sigma = 0.0;
  double shift = 0.0;
};

struct SelectionResult {
  std::vector<std::uint8_t> q;  // exactly k ones
  double objective = 0.0;       // unshifted q^T M q
  int iterations = 0;
  bool converged = false;
  bool monotone = true;  // shifted objective never decreased across iterates

  std::vector<int> selected() const;
};

// Off-diagonal beta*D - sigma*S, diagonal alpha*p - gamma*o + sigma*(S 1).
// Requires a calibrated bundle.
SelectionProblem build_m(const CriteriaBundle& bundle, double alpha, double beta, double gamma,
                         double sigma, int k);

// Unshifted objective; q must be binary with exactly problem.k ones.
double objective(const SelectionProblem& problem, std::span<const std::uint8_t> q);

// Sets shift = max(0, -gershgorin_lower_bound) + epsilon so the shifted
// matrix is positive semi-definite; selection under the cardinality
// constraint is unaffected.
SelectionProblem psd_shift(SelectionProblem problem);

// Ones at the k largest column sums of M, ties to the lower index.
std::vector<std::uint8_t> initial_solution(const SelectionProblem& problem);

// Truncated power iteration: q <- top_k(M_shifted q) until two consecutive
// iterates match. A period-2 cycle stops early and reports non-convergence.
// When `trace` is set, one "iter,objective_shifted" line per iteration.
SelectionResult solve(const SelectionProblem& problem, int max_iter = 100,
                      std::ostream* trace = nullptr);

// Exhaustive oracle over all k-subsets; requires C(n,k) <= 1e6. Ties resolve
// to the lexicographically smallest q.
SelectionResult brute_force_select(const SelectionProblem& problem);

// k largest entries, ties to the lower index.
std::vector<std::uint8_t> top_k_mask(std::span<const double> values, int k);

}  // namespace coldstart
