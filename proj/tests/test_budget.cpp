#include <doctest.h>

#include <numeric>
#include <random>

#include "coldstart/budget.hpp"
#include "coldstart/common.hpp"
#include "coldstart/rng.hpp"

using namespace coldstart;

TEST_CASE("popularity is the mean willingness per item") {
  const std::vector<std::vector<double>> vectors = {
      {0.5, 0.5, 0.5}, {0.2, 0.8}, {0.3, 0.5, 0.4, 0.4}};
  const auto pop = popularity(vectors);
  CHECK(pop[0] == doctest::Approx(0.5));
  CHECK(pop[1] == doctest::Approx(0.5));
  CHECK(pop[2] == doctest::Approx(0.4));

  // adding a user at the current mean leaves it unchanged
  const std::vector<std::vector<double>> extended = {{0.2, 0.8, 0.5}};
  CHECK(popularity(extended)[0] == doctest::Approx(0.5));

  CHECK_THROWS_AS(popularity(std::vector<std::vector<double>>{{}}), ValidationError);
}

TEST_CASE("controversy follows the printed formula") {
  const std::vector<std::vector<double>> flat = {{3.0, 3.0, 3.0}};
  CHECK(controversy(flat)[0] == doctest::Approx(0.0));

  const std::vector<std::vector<double>> pair = {{1.0, 5.0}};
  CHECK(controversy(pair)[0] == doctest::Approx(1.4142135623730951).epsilon(1e-12));

  const std::vector<std::vector<double>> permuted = {{5.0, 1.0}};
  CHECK(controversy(permuted)[0] == controversy(pair)[0]);
}

TEST_CASE("allocation fixtures") {
  SUBCASE("equal scores split evenly") {
    const std::vector<double> pop = {0.4, 0.4};
    const std::vector<double> con = {0.1, 0.1};
    const BudgetPlan plan = allocate(pop, con, 1.0, 50);
    CHECK(plan.k == std::vector<int>{25, 25});
  }
  SUBCASE("largest remainder on (0.25, 0.5, 0.75) with k_total 12") {
    // raw feature mode so the scores are used as-is
    const std::vector<double> pop = {0.25, 0.5, 0.75};
    const std::vector<double> con = {0.0, 0.0, 0.0};
    const BudgetPlan plan = allocate(pop, con, 0.0, 12, /*normalize=*/false);
    CHECK(plan.scores == pop);
    CHECK(plan.k == std::vector<int>{2, 4, 6});
  }
  SUBCASE("k_total equal to the batch size gives everyone one request") {
    const std::vector<double> pop = {0.0, 0.1, 0.9};
    const std::vector<double> con = {0.3, 0.0, 0.9};
    const BudgetPlan plan = allocate(pop, con, 2.0, 3);
    CHECK(plan.k == std::vector<int>{1, 1, 1});
  }
  SUBCASE("k_total below the batch size is rejected") {
    const std::vector<double> xs = {0.5, 0.5};
    CHECK_THROWS_AS(allocate(xs, xs, 1.0, 1), ValidationError);
  }
}

TEST_CASE("allocation invariants over random instances") {
  Rng rng = make_rng(44);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> batch(1, 12);
  for (int trial = 0; trial < 300; ++trial) {
    const int l = batch(rng);
    std::vector<double> pop(static_cast<std::size_t>(l)), con(static_cast<std::size_t>(l));
    for (double& v : pop) v = unit(rng);
    for (double& v : con) v = 2.0 * unit(rng);
    const long long k_total = l + static_cast<long long>(unit(rng) * 60.0);
    const BudgetPlan plan = allocate(pop, con, 1.0, k_total);
    CHECK(std::accumulate(plan.k.begin(), plan.k.end(), 0LL) == k_total);
    for (int ki : plan.k) CHECK(ki >= 1);
  }
}

TEST_CASE("integerization is monotone and scale-invariant") {
  Rng rng = make_rng(45);
  std::uniform_real_distribution<double> unit(0.01, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> scores(6);
    for (double& v : scores) v = unit(rng);
    const long long k_total = 24;
    const std::vector<int> base = integerize_budget(scores, k_total);

    // raising one item's share never lowers its allocation
    std::vector<double> raised = scores;
    const std::size_t target = static_cast<std::size_t>(trial) % scores.size();
    raised[target] += unit(rng);
    const std::vector<int> after = integerize_budget(raised, k_total);
    CHECK(after[target] >= base[target]);

    // positive rescaling changes nothing
    std::vector<double> scaled = scores;
    for (double& v : scaled) v *= 7.5;
    CHECK(integerize_budget(scaled, k_total) == base);
  }
}
