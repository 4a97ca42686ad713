#pragma once

#include <span>
#include <vector>

namespace coldstart {

struct BudgetPlan {
  std::vector<int> items;  // batch order; filled with 0..l-1 unless overridden
  std::vector<double> popularity;
  std::vector<double> controversy;
  std::vector<double> scores;
  double lambda = 0.0;
  long long k_total = 0;
  std::vector<int> k;  // k[i] >= 1, sums to k_total exactly
};

// Mean willingness per item.
std::vector<double> popularity(std::span<const std::vector<double>> p_vectors);

// (1/n) * sqrt(sum_m (P_r(m) - mean)^2) per item, exactly as written.
std::vector<double> controversy(std::span<const std::vector<double>> potential_vectors);

// Largest-remainder integerization of k_total * score_i / sum(score) with
// every item floored to at least one request.
std::vector<int> integerize_budget(std::span<const double> scores, long long k_total);

// score_i = pop_i + lambda * contro_i after min-max normalization of each
// feature across the batch (constant feature -> all 0.5). `normalize=false`
// combines the raw features instead.
BudgetPlan allocate(std::span<const double> popularity, std::span<const double> controversy,
                    double lambda, long long k_total, bool normalize = true);

}  // namespace coldstart
