#include <doctest.h>

#include <cmath>
#include <random>

#include "coldstart/common.hpp"
#include "coldstart/fm.hpp"
#include "coldstart/rng.hpp"

using namespace coldstart;

namespace {

// Independent oracle: the quadratic term as the literal double sum.
double naive_raw_score(const FmModel& m, const FeatureVector& x) {
  std::vector<double> dense(static_cast<std::size_t>(m.layout.dim()), 0.0);
  for (const auto& [i, v] : x.entries) dense[static_cast<std::size_t>(i)] = v;
  double score = m.w0;
  for (std::size_t i = 0; i < dense.size(); ++i) score += m.w[i] * dense[i];
  for (std::size_t i = 0; i < dense.size(); ++i)
    for (std::size_t j = i + 1; j < dense.size(); ++j) {
      double inner = 0.0;
      for (int f = 0; f < m.k_f; ++f)
        inner += m.v(i, static_cast<std::size_t>(f)) * m.v(j, static_cast<std::size_t>(f));
      score += dense[i] * dense[j] * inner;
    }
  return score;
}

double oracle_loss(const FmModel& m, const FeatureVector& x, double label,
                   const TrainConfig& cfg) {
  const double raw = naive_raw_score(m, x);
  double loss;
  if (m.task == Task::kRegression) {
    loss = (raw - label) * (raw - label);
  } else {
    const double z = raw;
    const double softplus = z > 30.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
    loss = softplus - label * z;
  }
  loss += cfg.l2_w0 * m.w0 * m.w0;
  for (double wi : m.w) loss += cfg.l2_w * wi * wi;
  for (double vi : m.v.data()) loss += cfg.l2_v * vi * vi;
  return loss;
}

FmModel random_model(Task task, int dim, int k_f, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 0.5);
  FmModel m(task, FeatureLayout{dim, 0, 0}, k_f);
  m.w0 = normal(rng);
  for (double& w : m.w) w = normal(rng);
  for (double& v : m.v.data()) v = normal(rng);
  return m;
}

FeatureVector random_instance(int dim, Rng& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  FeatureVector x;
  for (int i = 0; i < dim; ++i)
    if (unit(rng) < 0.6) x.entries.emplace_back(i, 2.0 * unit(rng) - 1.0);
  if (x.entries.empty()) x.entries.emplace_back(0, 1.0);
  return x;
}

}  // namespace

TEST_CASE("predict matches the hand-evaluated score") {
  FmModel m(Task::kRegression, FeatureLayout{2, 0, 0}, 2);
  m.w0 = 0.1;
  m.w = {0.2, -0.1};
  m.v(0, 0) = m.v(0, 1) = m.v(1, 0) = m.v(1, 1) = 0.5;
  const FeatureVector x{{{0, 1.0}, {1, 1.0}}};
  CHECK(m.predict(x) == doctest::Approx(0.7).epsilon(1e-12));
}

TEST_CASE("zero model predicts 0 / 0.5 and bias-only predicts w0") {
  FmModel reg(Task::kRegression, FeatureLayout{3, 0, 0}, 2);
  FmModel clf(Task::kClassification, FeatureLayout{3, 0, 0}, 2);
  const FeatureVector x{{{1, 1.0}}};
  CHECK(reg.predict(x) == 0.0);
  CHECK(clf.predict(x) == doctest::Approx(0.5).epsilon(1e-15));

  reg.w0 = 3.6;
  CHECK(reg.predict(FeatureVector{}) == doctest::Approx(3.6));
}

TEST_CASE("predict rejects out-of-range feature indices") {
  FmModel m(Task::kRegression, FeatureLayout{2, 0, 0}, 1);
  CHECK_THROWS_AS(m.predict(FeatureVector{{{5, 1.0}}}), ContractError);
}

TEST_CASE("factorized score equals the naive double sum") {
  Rng rng = make_rng(17);
  for (int trial = 0; trial < 50; ++trial) {
    const FmModel m = random_model(Task::kRegression, 8, 3, rng);
    const FeatureVector x = random_instance(8, rng);
    CHECK(m.raw_score(x) == doctest::Approx(naive_raw_score(m, x)).epsilon(1e-10));
  }
}

TEST_CASE("classification link output stays in (0,1)") {
  Rng rng = make_rng(23);
  for (int trial = 0; trial < 40; ++trial) {
    const FmModel m = random_model(Task::kClassification, 6, 2, rng);
    const double p = m.predict(random_instance(6, rng));
    CHECK(p > 0.0);
    CHECK(p < 1.0);
  }
}

TEST_CASE("training memorizes a single bias instance") {
  const FeatureLayout layout{1, 0, 0};
  const std::vector<Instance> data = {{FeatureVector{{{0, 1.0}}}, 3.0}};
  TrainConfig cfg;
  cfg.epochs = 400;
  cfg.learning_rate = 0.05;
  const FmModel m = train(data, Task::kRegression, layout, cfg);
  CHECK(m.predict(data[0].x) == doctest::Approx(3.0).epsilon(1e-2));
}

TEST_CASE("zero-epoch training returns the init model unchanged") {
  Rng rng = make_rng(5);
  const FmModel init = random_model(Task::kRegression, 4, 2, rng);
  const std::vector<Instance> data = {{FeatureVector{{{0, 1.0}}}, 2.0}};
  TrainConfig cfg;
  cfg.epochs = 0;
  cfg.k_f = 2;
  const FmModel out = train(data, Task::kRegression, init.layout, cfg, &init);
  CHECK(out == init);
}

TEST_CASE("training is deterministic and reports divergence") {
  const FeatureLayout layout{3, 0, 0};
  std::vector<Instance> data;
  for (int i = 0; i < 3; ++i)
    data.push_back({FeatureVector{{{i, 1.0}}}, 2.0 + i});
  TrainConfig cfg;
  cfg.epochs = 20;
  const FmModel a = train(data, Task::kRegression, layout, cfg);
  const FmModel b = train(data, Task::kRegression, layout, cfg);
  CHECK(a == b);

  TrainConfig wild = cfg;
  wild.learning_rate = 1e12;
  wild.epochs = 2000;
  CHECK_THROWS_AS(train(data, Task::kRegression, layout, wild), TrainingDiverged);
}

TEST_CASE("training rejects empty input and bad labels") {
  const FeatureLayout layout{2, 0, 0};
  CHECK_THROWS_AS(train({}, Task::kRegression, layout, TrainConfig{}), ValidationError);
  const std::vector<Instance> bad = {{FeatureVector{{{0, 1.0}}}, 0.7}};
  CHECK_THROWS_AS(train(bad, Task::kClassification, layout, TrainConfig{}), ValidationError);
}

TEST_CASE("full-pass regularized loss is non-increasing at a small rate") {
  const FeatureLayout layout{3, 0, 0};
  const std::vector<Instance> data = {
      {FeatureVector{{{0, 1.0}, {1, 1.0}}}, 4.0}, {FeatureVector{{{1, 1.0}}}, 2.0},
      {FeatureVector{{{2, 1.0}}}, 3.5},           {FeatureVector{{{0, 1.0}, {2, 1.0}}}, 1.5},
      {FeatureVector{{{1, 1.0}, {2, 1.0}}}, 5.0},
  };
  TrainConfig cfg;
  cfg.learning_rate = 1e-3;
  cfg.epochs = 40;
  std::vector<double> losses;
  train(data, Task::kRegression, layout, cfg, nullptr, &losses);
  REQUIRE(losses.size() == 40);
  for (std::size_t e = 1; e < losses.size(); ++e) CHECK(losses[e] <= losses[e - 1] + 1e-12);
}

TEST_CASE("gradient of the zero model is -2y at w0") {
  FmModel m(Task::kRegression, FeatureLayout{2, 0, 0}, 2);
  TrainConfig cfg;
  const double y = 1.7;
  const FmGradient g = gradient(m, FeatureVector{{{0, 1.0}}}, y, cfg);
  CHECK(g.w0 == doctest::Approx(-2.0 * y).epsilon(1e-12));
}

TEST_CASE("gradient with an all-zero instance touches only w0 and regularization") {
  Rng rng = make_rng(31);
  const FmModel m = random_model(Task::kRegression, 4, 2, rng);
  TrainConfig cfg;
  const FmGradient g = gradient(m, FeatureVector{}, 1.0, cfg);
  for (std::size_t i = 0; i < m.w.size(); ++i)
    CHECK(g.w[i] == doctest::Approx(2.0 * cfg.l2_w * m.w[i]).epsilon(1e-12));
  for (std::size_t i = 0; i < m.v.rows(); ++i)
    for (std::size_t f = 0; f < m.v.cols(); ++f)
      CHECK(g.v(i, f) == doctest::Approx(2.0 * cfg.l2_v * m.v(i, f)).epsilon(1e-12));
}

TEST_CASE("analytic gradient matches central finite differences") {
  Rng rng = make_rng(101);
  std::uniform_real_distribution<double> label_dist(1.0, 5.0);
  TrainConfig cfg;
  int checked = 0;
  for (int trial = 0; trial < 30; ++trial) {
    const Task task = trial % 2 == 0 ? Task::kRegression : Task::kClassification;
    FmModel m = random_model(task, 5, 2, rng);
    const FeatureVector x = random_instance(5, rng);
    const double label = task == Task::kRegression ? label_dist(rng) : (trial % 4 == 1 ? 1.0 : 0.0);
    const FmGradient g = gradient(m, x, label, cfg);

    auto fd = [&](double& param, double analytic) {
      const double h = 1e-5 * std::max(1.0, std::fabs(param));
      const double saved = param;
      param = saved + h;
      const double up = oracle_loss(m, x, label, cfg);
      param = saved - h;
      const double down = oracle_loss(m, x, label, cfg);
      param = saved;
      const double numeric = (up - down) / (2.0 * h);
      const double rel = std::fabs(analytic - numeric) /
                         std::max({1e-8, std::fabs(analytic), std::fabs(numeric)});
      CHECK(rel <= 1e-4);
      ++checked;
    };
    fd(m.w0, g.w0);
    for (std::size_t i = 0; i < m.w.size(); ++i) fd(m.w[i], g.w[i]);
    for (std::size_t i = 0; i < m.v.rows(); ++i)
      for (std::size_t f = 0; f < m.v.cols(); ++f) fd(m.v(i, f), g.v(i, f));
  }
  CHECK(checked > 100);
}

TEST_CASE("sample_negatives draws from the zero set without replacement") {
  const RatingStore store = RatingStore::build(
      {"a", "b"}, {"x", "y"}, {}, {{0, 0, 4.0}, {1, 1, 2.0}},
      std::vector<std::vector<int>>(2), {});
  const BinaryMatrix r01 = binarize(store);
  const std::vector<int> all_items = {0, 1};
  const auto sample = sample_negatives(r01, all_items, 3);
  REQUIRE(sample.size() == 2);
  for (const auto& [u, i] : sample) {
    CHECK_FALSE(r01.contains(u, i));
  }
  CHECK(sample[0] != sample[1]);
  CHECK(sample == sample_negatives(r01, all_items, 3));

  // all-ones matrix has no zeros to sample
  const RatingStore full = RatingStore::build(
      {"a", "b"}, {"x"}, {}, {{0, 0, 4.0}, {1, 0, 2.0}}, std::vector<std::vector<int>>(1), {});
  CHECK(sample_negatives(binarize(full), std::vector<int>{0}, 1).empty());
}

TEST_CASE("sample_negatives caps the draw when zeros are scarce") {
  // 3 ones, 1 zero in the restricted column set
  const RatingStore store = RatingStore::build(
      {"a", "b"}, {"x", "y"}, {}, {{0, 0, 4.0}, {1, 0, 2.0}, {1, 1, 3.0}},
      std::vector<std::vector<int>>(2), {});
  const auto sample = sample_negatives(binarize(store), std::vector<int>{0, 1}, 1);
  REQUIRE(sample.size() == 1);
  CHECK(sample[0] == std::pair<int, int>{0, 1});
}

namespace {

Split manual_split(int num_items, int num_users, std::vector<int> test_items,
                   std::vector<int> active_users) {
  Split s;
  s.test_items = std::move(test_items);
  s.active_users = std::move(active_users);
  s.test_mask_.assign(static_cast<std::size_t>(num_items), 0);
  for (int i : s.test_items) s.test_mask_[static_cast<std::size_t>(i)] = 1;
  s.active_mask_.assign(static_cast<std::size_t>(num_users), 0);
  for (int u : s.active_users) s.active_mask_[static_cast<std::size_t>(u)] = 1;
  for (int i = 0; i < num_items; ++i)
    if (!s.test_mask_[static_cast<std::size_t>(i)]) s.train_items.push_back(i);
  for (int u = 0; u < num_users; ++u)
    if (!s.active_mask_[static_cast<std::size_t>(u)]) s.prediction_users.push_back(u);
  return s;
}

}  // namespace

TEST_CASE("pretrain fails when all ratings sit on test items") {
  const RatingStore store = RatingStore::build(
      {"a", "b"}, {"x", "y"}, {"g"}, {{0, 1, 4.0}, {1, 1, 2.0}},
      {{0}, {0}}, {});
  const Split split = manual_split(2, 2, {1}, {0});
  CHECK_THROWS_AS(pretrain_models(store, split, TrainConfig{}), ValidationError);
}

TEST_CASE("pretrain is deterministic and the item block helps fit") {
  SyntheticSpec spec;
  spec.users = 60;
  spec.items = 40;
  spec.attrs = 12;
  spec.density = 0.3;
  spec.noise_std = 0.1;
  spec.seed = 21;
  const RatingStore store = generate_synthetic(spec);
  const Split split = make_split(store, 0.2, 2);
  TrainConfig cfg;
  cfg.epochs = 30;
  const PretrainedModels a = pretrain_models(store, split, cfg);
  const PretrainedModels b = pretrain_models(store, split, cfg);
  CHECK(a.clf == b.clf);
  CHECK(a.reg_no_item == b.reg_no_item);
  CHECK(a.reg_with_item == b.reg_with_item);

  // richer features should not fit worse on the training ratings
  const FeatureLayout no_item{store.num_users(), 0, store.num_attrs()};
  const FeatureLayout with_item{store.num_users(), store.num_items(), store.num_attrs()};
  double se_plain = 0.0, se_full = 0.0;
  long long count = 0;
  for (const Rating& r : store.ratings()) {
    if (split.is_test_item(r.item)) continue;
    const auto& attrs = store.item_attrs(r.item);
    const double plain = a.reg_no_item.predict(encode(r.user, std::nullopt, attrs, no_item));
    const double full = a.reg_with_item.predict(encode(r.user, r.item, attrs, with_item));
    se_plain += (plain - r.value) * (plain - r.value);
    se_full += (full - r.value) * (full - r.value);
    ++count;
  }
  REQUIRE(count > 0);
  CHECK(std::sqrt(se_full / count) <= std::sqrt(se_plain / count));
}

TEST_CASE("retrain warm start: empty feedback and zero epochs is the identity") {
  SyntheticSpec spec;
  spec.users = 20;
  spec.items = 15;
  spec.attrs = 6;
  spec.density = 0.4;
  spec.seed = 13;
  const RatingStore store = generate_synthetic(spec);
  const Split split = make_split(store, 0.2, 3);
  TrainConfig cfg;
  cfg.epochs = 10;
  const PretrainedModels models = pretrain_models(store, split, cfg);

  TrainConfig frozen = cfg;
  frozen.epochs = 0;
  const FmModel same = retrain_with_feedback(models.reg_with_item, store, split, {}, frozen);
  CHECK(same == models.reg_with_item);

  const int test_item = split.test_items.front();
  const int active_user = split.active_users.front();
  const std::vector<Rating> fb = {{active_user, test_item, 4.0}};
  const FmModel r1 = retrain_with_feedback(models.reg_with_item, store, split, fb, cfg);
  const FmModel r2 = retrain_with_feedback(models.reg_with_item, store, split, fb, cfg);
  CHECK(r1 == r2);

  const std::vector<Rating> leak = {{split.prediction_users.front(), test_item, 4.0}};
  CHECK_THROWS_AS(retrain_with_feedback(models.reg_with_item, store, split, leak, cfg),
                  ContractError);
}

TEST_CASE("model serialization round-trips exactly") {
  Rng rng = make_rng(77);
  const FmModel m = random_model(Task::kClassification, 6, 3, rng);
  save_model(m, "tmp_model.txt");
  const FmModel back = load_model("tmp_model.txt");
  CHECK(back == m);
}

TEST_CASE("batch user prediction matches the serial reference bit for bit") {
  SyntheticSpec spec;
  spec.users = 150;
  spec.items = 30;
  spec.attrs = 10;
  spec.density = 0.3;
  spec.seed = 4;
  const RatingStore store = generate_synthetic(spec);
  const Split split = make_split(store, 0.2, 5);
  TrainConfig cfg;
  cfg.epochs = 5;
  const PretrainedModels models = pretrain_models(store, split, cfg);
  std::vector<int> users(static_cast<std::size_t>(store.num_users()));
  for (int u = 0; u < store.num_users(); ++u) users[static_cast<std::size_t>(u)] = u;
  const auto& attrs = store.item_attrs(split.test_items.front());
  CHECK(predict_users(models.clf, users, attrs) ==
        serial::predict_users(models.clf, users, attrs));
}
