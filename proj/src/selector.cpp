#include "coldstart/selector.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "coldstart/common.hpp"

namespace coldstart {

namespace {

constexpr double kShiftEpsilon = 1e-9;

double quadratic_form(const Matrix& m, std::span<const std::uint8_t> q) {
  double total = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    if (!q[i]) continue;
    const auto row = m.row(i);
    double acc = 0.0;
    for (std::size_t j = 0; j < row.size(); ++j)
      if (q[j]) acc += row[j];
    total += acc;
  }
  return total;
}

std::vector<double> shifted_matvec(const SelectionProblem& problem,
                                   std::span<const std::uint8_t> q) {
  std::vector<double> x(q.size(), 0.0);
  for (std::size_t i = 0; i < q.size(); ++i) x[i] = q[i] ? 1.0 : 0.0;
  std::vector<double> y = matvec(problem.m, x);
  if (problem.shift != 0.0)
    for (std::size_t i = 0; i < y.size(); ++i) y[i] += problem.shift * x[i];
  return y;
}

}  // namespace

std::vector<int> SelectionResult::selected() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < q.size(); ++i)
    if (q[i]) out.push_back(static_cast<int>(i));
  return out;
}

SelectionProblem build_m(const CriteriaBundle& bundle, double alpha, double beta, double gamma,
                         double sigma, int k) {
  if (!bundle.calibrated) throw ContractError("build_m: bundle must be calibrated");
  const std::size_t n = bundle.users.size();
  if (k < 0 || static_cast<std::size_t>(k) > n)
    throw ValidationError("build_m: k must be between 0 and the pool size");

  SelectionProblem problem;
  problem.k = k;
  problem.alpha = alpha;
  problem.beta = beta;
  problem.gamma = gamma;
  problem.sigma = sigma;
  problem.m = Matrix(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double s_row_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      problem.m(i, j) = beta * bundle.d(i, j) - sigma * bundle.s(i, j);
      s_row_sum += bundle.s(i, j);
    }
    problem.m(i, i) = alpha * bundle.p[i] - gamma * bundle.o[i] + sigma * s_row_sum;
  }
  return problem;
}

double objective(const SelectionProblem& problem, std::span<const std::uint8_t> q) {
  if (q.size() != problem.m.rows()) throw ContractError("objective: q has the wrong length");
  long long ones = 0;
  for (std::uint8_t qi : q) {
    if (qi != 0 && qi != 1) throw ContractError("objective: q must be binary");
    ones += qi;
  }
  if (ones != problem.k)
    throw ContractError("objective: q has " + std::to_string(ones) + " ones, expected k=" +
                        std::to_string(problem.k));
  return quadratic_form(problem.m, q);
}

SelectionProblem psd_shift(SelectionProblem problem) {
  double bound = 0.0;  // lower bound on the smallest eigenvalue
  const std::size_t n = problem.m.rows();
  for (std::size_t i = 0; i < n; ++i) {
    double radius = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) radius += std::fabs(problem.m(i, j));
    const double disc_low = problem.m(i, i) - radius;
    if (i == 0 || disc_low < bound) bound = disc_low;
  }
  problem.shift = std::max(0.0, -bound) + kShiftEpsilon;
  return problem;
}

std::vector<std::uint8_t> top_k_mask(std::span<const double> values, int k) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&values](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  std::vector<std::uint8_t> mask(values.size(), 0);
  for (int i = 0; i < k; ++i) mask[order[static_cast<std::size_t>(i)]] = 1;
  return mask;
}

std::vector<std::uint8_t> initial_solution(const SelectionProblem& problem) {
  const std::size_t n = problem.m.rows();
  if (static_cast<std::size_t>(problem.k) > n)
    throw ValidationError("initial_solution: k exceeds pool size");
  std::vector<double> col_sums(n, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) col_sums[j] += problem.m(i, j);
  return top_k_mask(col_sums, problem.k);
}

SelectionResult solve(const SelectionProblem& problem, int max_iter, std::ostream* trace) {
  if (problem.k < 1) throw ValidationError("solve: k must be >= 1");
  const std::size_t n = problem.m.rows();
  if (static_cast<std::size_t>(problem.k) > n)
    throw ValidationError("solve: k exceeds pool size");

  SelectionResult result;
  std::vector<std::uint8_t> prev2;
  std::vector<std::uint8_t> prev = initial_solution(problem);
  double prev_shifted = quadratic_form(problem.m, prev) +
                        problem.shift * static_cast<double>(problem.k);

  for (int t = 1; t <= max_iter; ++t) {
    const std::vector<double> scores = shifted_matvec(problem, prev);
    std::vector<std::uint8_t> next = top_k_mask(scores, problem.k);
    const double next_shifted = quadratic_form(problem.m, next) +
                                problem.shift * static_cast<double>(problem.k);
    result.iterations = t;
    if (trace) *trace << t << ',' << next_shifted << '\n';
    if (next_shifted < prev_shifted) result.monotone = false;

    if (next == prev) {
      result.converged = true;
      prev = std::move(next);
      break;
    }
    if (!prev2.empty() && next == prev2) {  // period-2 cycle
      result.converged = false;
      prev = std::move(next);
      break;
    }
    prev2 = std::move(prev);
    prev = std::move(next);
    prev_shifted = next_shifted;
  }

  result.q = std::move(prev);
  result.objective = quadratic_form(problem.m, result.q);
  return result;
}

SelectionResult brute_force_select(const SelectionProblem& problem) {
  const int n = static_cast<int>(problem.m.rows());
  const int k = problem.k;
  if (k < 1 || k > n) throw ValidationError("brute_force_select: bad k");

  double combos = 1.0;
  for (int i = 0; i < k; ++i) combos = combos * static_cast<double>(n - i) / static_cast<double>(i + 1);
  if (combos > 1e6)
    throw ValidationError("brute_force_select: C(n,k) exceeds the 1e6 enumeration bound");

  std::vector<int> pick(static_cast<std::size_t>(k));
  std::iota(pick.begin(), pick.end(), 0);
  std::vector<std::uint8_t> q(static_cast<std::size_t>(n), 0);
  std::vector<std::uint8_t> best_q;
  double best = 0.0;
  bool have_best = false;

  while (true) {
    std::fill(q.begin(), q.end(), 0);
    for (int i : pick) q[static_cast<std::size_t>(i)] = 1;
    const double value = quadratic_form(problem.m, q);
    if (!have_best || value > best || (value == best && q < best_q)) {
      have_best = true;
      best = value;
      best_q = q;
    }
    // next combination in lexicographic index order
    int pos = k - 1;
    while (pos >= 0 && pick[static_cast<std::size_t>(pos)] == n - k + pos) --pos;
    if (pos < 0) break;
    ++pick[static_cast<std::size_t>(pos)];
    for (int i = pos + 1; i < k; ++i)
      pick[static_cast<std::size_t>(i)] = pick[static_cast<std::size_t>(i - 1)] + 1;
  }

  SelectionResult result;
  result.q = std::move(best_q);
  result.objective = best;
  result.iterations = 0;
  result.converged = true;
  return result;
}

}  // namespace coldstart
