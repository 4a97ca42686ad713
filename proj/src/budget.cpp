#include "coldstart/budget.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "coldstart/common.hpp"

namespace coldstart {

std::vector<double> popularity(std::span<const std::vector<double>> p_vectors) {
  std::vector<double> out;
  out.reserve(p_vectors.size());
  for (const auto& p : p_vectors) {
    if (p.empty()) throw ValidationError("popularity: empty user pool");
    double sum = 0.0;
    for (double v : p) sum += v;
    out.push_back(sum / static_cast<double>(p.size()));
  }
  return out;
}

std::vector<double> controversy(std::span<const std::vector<double>> potential_vectors) {
  std::vector<double> out;
  out.reserve(potential_vectors.size());
  for (const auto& pr : potential_vectors) {
    if (pr.empty()) throw ValidationError("controversy: empty user pool");
    double mean = 0.0;
    for (double v : pr) mean += v;
    mean /= static_cast<double>(pr.size());
    double sq = 0.0;
    for (double v : pr) sq += (v - mean) * (v - mean);
    out.push_back(std::sqrt(sq) / static_cast<double>(pr.size()));
  }
  return out;
}

namespace {

std::vector<double> min_max_normalize(std::span<const double> xs) {
  const auto [lo_it, hi_it] = std::minmax_element(xs.begin(), xs.end());
  const double lo = *lo_it, hi = *hi_it;
  std::vector<double> out(xs.size());
  if (hi == lo) {
    std::fill(out.begin(), out.end(), 0.5);
    return out;
  }
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = (xs[i] - lo) / (hi - lo);
  return out;
}

}  // namespace

std::vector<int> integerize_budget(std::span<const double> scores, long long k_total) {
  const std::size_t l = scores.size();
  if (l == 0) throw ValidationError("integerize_budget: empty batch");
  if (k_total < static_cast<long long>(l))
    throw ValidationError("integerize_budget: k_total smaller than the batch size");
  double total = 0.0;
  for (double s : scores) {
    if (s < 0.0) throw ValidationError("integerize_budget: negative score");
    total += s;
  }

  std::vector<double> raw(l);
  if (total == 0.0) {
    std::fill(raw.begin(), raw.end(), static_cast<double>(k_total) / static_cast<double>(l));
  } else {
    for (std::size_t i = 0; i < l; ++i)
      raw[i] = static_cast<double>(k_total) * scores[i] / total;
  }

  std::vector<int> k(l);
  long long assigned = 0;
  for (std::size_t i = 0; i < l; ++i) {
    k[i] = std::max(1, static_cast<int>(std::floor(raw[i])));
    assigned += k[i];
  }

  if (assigned < k_total) {
    // Largest remainders first; items already bumped to 1 carry a negative
    // remainder and queue last.
    std::vector<std::size_t> order(l);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return raw[a] - static_cast<double>(k[a]) > raw[b] - static_cast<double>(k[b]);
    });
    for (std::size_t idx = 0; assigned < k_total; idx = (idx + 1) % l) {
      ++k[order[idx]];
      ++assigned;
    }
  }
  while (assigned > k_total) {
    // Take back from the most over-allocated item that can spare a request.
    std::size_t victim = l;
    double worst = 0.0;
    for (std::size_t i = 0; i < l; ++i) {
      if (k[i] < 2) continue;
      const double over = static_cast<double>(k[i]) - raw[i];
      if (victim == l || over > worst) {
        victim = i;
        worst = over;
      }
    }
    --k[victim];
    --assigned;
  }
  return k;
}

BudgetPlan allocate(std::span<const double> popularity, std::span<const double> controversy,
                    double lambda, long long k_total, bool normalize) {
  if (popularity.size() != controversy.size())
    throw ContractError("allocate: feature vectors differ in length");
  const std::size_t l = popularity.size();
  if (l == 0) throw ValidationError("allocate: empty batch");
  if (k_total < static_cast<long long>(l))
    throw ValidationError("allocate: k_total must be at least the number of items");
  if (lambda < 0.0) throw ValidationError("allocate: lambda must be >= 0");

  BudgetPlan plan;
  plan.items.resize(l);
  std::iota(plan.items.begin(), plan.items.end(), 0);
  plan.popularity.assign(popularity.begin(), popularity.end());
  plan.controversy.assign(controversy.begin(), controversy.end());
  plan.lambda = lambda;
  plan.k_total = k_total;

  std::vector<double> pop = normalize ? min_max_normalize(popularity)
                                      : std::vector<double>(popularity.begin(), popularity.end());
  std::vector<double> con = normalize ? min_max_normalize(controversy)
                                      : std::vector<double>(controversy.begin(), controversy.end());
  plan.scores.resize(l);
  for (std::size_t i = 0; i < l; ++i) plan.scores[i] = pop[i] + lambda * con[i];
  plan.k = integerize_budget(plan.scores, k_total);
  return plan;
}

}  // namespace coldstart
