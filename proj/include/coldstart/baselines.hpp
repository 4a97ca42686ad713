#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coldstart/data_model.hpp"
#include "coldstart/matrix.hpp"
#include "coldstart/selector.hpp"

namespace coldstart {

enum class Strategy {
  kFmfc,
  kFmfcDb,
  kRandom,
  kEpsGreedy,
  kPopular,
  kCoverage,
  kExploration,
  kFmNoAl,
  kHbrnn,
};

std::string strategy_name(Strategy s);
std::optional<Strategy> parse_strategy(std::string_view name);
bool uses_active_learning(Strategy s);

// Attribute-cosine nearest-neighbour prediction: similarity-weighted mean of
// the user's training ratings, falling back to the global training mean when
// no rated item shares attributes with the new item.
class HbrnnScorer {
 public:
  HbrnnScorer(const RatingStore& store, const Split& split, std::span<const int> new_item_attrs);
  double predict(int user) const;

 private:
  const RatingStore& store_;
  const Split& split_;
  std::vector<double> item_sim_;  // cosine(T(item,:), new item attrs)
  double global_mean_ = 0.0;
};

double hbrnn_predict(const RatingStore& store, const Split& split,
                     std::span<const int> new_item_attrs, int user);

// All selectors return sorted positions into the pool ordering (k of them).
std::vector<int> select_random(int pool_size, int k, std::uint64_t seed);

// k sequential draws; each takes the remaining argmax of p with probability
// 1-epsilon and a uniform remaining user otherwise.
std::vector<int> select_eps_greedy(std::span<const double> p, int k, double epsilon,
                                   std::uint64_t seed);

// Most training ratings given; the same set for every new item.
std::vector<int> select_popular(const RatingStore& store, const Split& split,
                                std::span<const int> pool, int k);

// Highest co-rating count with all other users over training items.
std::vector<int> select_coverage(const RatingStore& store, const Split& split,
                                 std::span<const int> pool, int k);

// Maximizes -q^T S q + gamma_e q^T S (1-q) through the same truncated power
// iteration as the main selector.
std::vector<int> select_exploration(const Matrix& s, int k, double gamma_e, int max_iter = 100);

}  // namespace coldstart
