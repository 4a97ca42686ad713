#include "coldstart/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "coldstart/common.hpp"
#include "coldstart/rng.hpp"

namespace coldstart {

std::string strategy_name(Strategy s) {
  switch (s) {
    case Strategy::kFmfc: return "fmfc";
    case Strategy::kFmfcDb: return "fmfc_db";
    case Strategy::kRandom: return "random";
    case Strategy::kEpsGreedy: return "eps_greedy";
    case Strategy::kPopular: return "popular";
    case Strategy::kCoverage: return "coverage";
    case Strategy::kExploration: return "exploration";
    case Strategy::kFmNoAl: return "fm_no_al";
    case Strategy::kHbrnn: return "hbrnn";
  }
  return "?";
}

std::optional<Strategy> parse_strategy(std::string_view name) {
  static const std::pair<std::string_view, Strategy> table[] = {
      {"fmfc", Strategy::kFmfc},           {"fmfc_db", Strategy::kFmfcDb},
      {"random", Strategy::kRandom},       {"eps_greedy", Strategy::kEpsGreedy},
      {"popular", Strategy::kPopular},     {"coverage", Strategy::kCoverage},
      {"exploration", Strategy::kExploration}, {"fm_no_al", Strategy::kFmNoAl},
      {"hbrnn", Strategy::kHbrnn},
  };
  for (const auto& [key, value] : table)
    if (key == name) return value;
  return std::nullopt;
}

bool uses_active_learning(Strategy s) {
  return s != Strategy::kFmNoAl && s != Strategy::kHbrnn;
}

namespace {

double attr_cosine(std::span<const int> a, std::span<const int> b) {
  if (a.empty() || b.empty()) return 0.0;
  std::size_t i = 0, j = 0;
  long long shared = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) ++i;
    else if (a[i] > b[j]) ++j;
    else { ++shared; ++i; ++j; }
  }
  return static_cast<double>(shared) /
         (std::sqrt(static_cast<double>(a.size())) * std::sqrt(static_cast<double>(b.size())));
}

}  // namespace

HbrnnScorer::HbrnnScorer(const RatingStore& store, const Split& split,
                         std::span<const int> new_item_attrs)
    : store_(store), split_(split), item_sim_(static_cast<std::size_t>(store.num_items()), 0.0) {
  std::vector<int> attrs(new_item_attrs.begin(), new_item_attrs.end());
  std::sort(attrs.begin(), attrs.end());
  for (int i : split.train_items)
    item_sim_[static_cast<std::size_t>(i)] = attr_cosine(store.item_attrs(i), attrs);

  double sum = 0.0;
  long long count = 0;
  for (const Rating& r : store.ratings()) {
    if (split.is_test_item(r.item)) continue;
    sum += r.value;
    ++count;
  }
  global_mean_ = count > 0 ? sum / static_cast<double>(count) : store.scale().mid();
}

double HbrnnScorer::predict(int user) const {
  double num = 0.0, den = 0.0;
  for (const auto& [item, value] : store_.user_ratings(user)) {
    if (split_.is_test_item(item)) continue;
    const double sim = item_sim_[static_cast<std::size_t>(item)];
    num += value * sim;
    den += sim;
  }
  if (den == 0.0) return global_mean_;
  return num / den;
}

double hbrnn_predict(const RatingStore& store, const Split& split,
                     std::span<const int> new_item_attrs, int user) {
  return HbrnnScorer(store, split, new_item_attrs).predict(user);
}

std::vector<int> select_random(int pool_size, int k, std::uint64_t seed) {
  if (k < 0 || k > pool_size) throw ValidationError("select_random: k exceeds the pool");
  std::vector<int> positions(static_cast<std::size_t>(pool_size));
  std::iota(positions.begin(), positions.end(), 0);
  Rng rng = make_rng(derive_seed(seed, 0x7A));
  // Partial Fisher-Yates: the first k entries end up being the sample.
  for (int i = 0; i < k; ++i) {
    std::uniform_int_distribution<int> pick(i, pool_size - 1);
    std::swap(positions[static_cast<std::size_t>(i)],
              positions[static_cast<std::size_t>(pick(rng))]);
  }
  positions.resize(static_cast<std::size_t>(k));
  std::sort(positions.begin(), positions.end());
  return positions;
}

std::vector<int> select_eps_greedy(std::span<const double> p, int k, double epsilon,
                                   std::uint64_t seed) {
  const int n = static_cast<int>(p.size());
  if (k < 0 || k > n) throw ValidationError("select_eps_greedy: k exceeds the pool");
  if (epsilon < 0.0 || epsilon > 1.0)
    throw ValidationError("select_eps_greedy: epsilon must be in [0,1]");

  Rng rng = make_rng(derive_seed(seed, 0xE6));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<int> remaining(static_cast<std::size_t>(n));
  std::iota(remaining.begin(), remaining.end(), 0);
  std::vector<int> chosen;
  chosen.reserve(static_cast<std::size_t>(k));
  for (int step = 0; step < k; ++step) {
    std::size_t take;
    if (unit(rng) < 1.0 - epsilon) {
      take = 0;
      for (std::size_t i = 1; i < remaining.size(); ++i)
        if (p[static_cast<std::size_t>(remaining[i])] >
            p[static_cast<std::size_t>(remaining[take])])
          take = i;
    } else {
      std::uniform_int_distribution<std::size_t> pick(0, remaining.size() - 1);
      take = pick(rng);
    }
    chosen.push_back(remaining[take]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(take));
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

namespace {

std::vector<int> top_k_positions(std::span<const long long> score, int k) {
  std::vector<std::size_t> order(score.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&score](std::size_t a, std::size_t b) { return score[a] > score[b]; });
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) out.push_back(static_cast<int>(order[static_cast<std::size_t>(i)]));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<int> select_popular(const RatingStore& store, const Split& split,
                                std::span<const int> pool, int k) {
  if (k < 0 || static_cast<std::size_t>(k) > pool.size())
    throw ValidationError("select_popular: k exceeds the pool");
  std::vector<long long> counts(pool.size(), 0);
  for (std::size_t m = 0; m < pool.size(); ++m)
    for (const auto& [item, value] : store.user_ratings(pool[m]))
      if (!split.is_test_item(item)) ++counts[m];
  return top_k_positions(counts, k);
}

std::vector<int> select_coverage(const RatingStore& store, const Split& split,
                                 std::span<const int> pool, int k) {
  if (k < 0 || static_cast<std::size_t>(k) > pool.size())
    throw ValidationError("select_coverage: k exceeds the pool");
  // sum_j |I_i cap I_j| over j != i collapses to sum over i's rated training
  // items of (raters - 1).
  std::vector<long long> raters(static_cast<std::size_t>(store.num_items()), 0);
  for (int i = 0; i < store.num_items(); ++i)
    if (!split.is_test_item(i)) raters[static_cast<std::size_t>(i)] =
        static_cast<long long>(store.item_ratings(i).size());

  std::vector<long long> coverage(pool.size(), 0);
  for (std::size_t m = 0; m < pool.size(); ++m)
    for (const auto& [item, value] : store.user_ratings(pool[m]))
      if (!split.is_test_item(item)) coverage[m] += raters[static_cast<std::size_t>(item)] - 1;
  return top_k_positions(coverage, k);
}

std::vector<int> select_exploration(const Matrix& s, int k, double gamma_e, int max_iter) {
  const std::size_t n = s.rows();
  if (k < 1 || static_cast<std::size_t>(k) > n)
    throw ValidationError("select_exploration: bad k");

  // -q^T S q + gamma_e q^T S (1-q) = q^T M q with
  // M(m,n) = -(1+gamma_e) S(m,n) off-diagonal, M(m,m) = gamma_e (S 1)(m).
  SelectionProblem problem;
  problem.k = k;
  problem.m = Matrix(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    double row_sum = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      problem.m(i, j) = -(1.0 + gamma_e) * s(i, j);
      row_sum += s(i, j);
    }
    problem.m(i, i) = gamma_e * row_sum;
  }
  const SelectionResult result = solve(psd_shift(std::move(problem)), max_iter);
  return result.selected();
}

}  // namespace coldstart
