#include "coldstart/fm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>

#include "coldstart/common.hpp"
#include "coldstart/rng.hpp"

namespace coldstart {

namespace {

// ln(1 + e^z) without overflow.
double softplus(double z) {
  if (z > 30.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

double data_loss(Task task, double raw, double label) {
  if (task == Task::kRegression) {
    const double err = raw - label;
    return err * err;
  }
  return softplus(raw) - label * raw;  // log loss, logistic link
}

// d(data_loss)/d(raw)
double loss_slope(Task task, double raw, double label) {
  if (task == Task::kRegression) return 2.0 * (raw - label);
  return logistic(raw) - label;
}

void check_instance(const FeatureVector& x, int dim) {
  for (const auto& [index, value] : x.entries) {
    if (index < 0 || index >= dim)
      throw ContractError("feature index " + std::to_string(index) +
                          " outside model dimension " + std::to_string(dim));
    (void)value;
  }
}

}  // namespace

FmModel::FmModel(Task task_, FeatureLayout layout_, int k_f_)
    : task(task_), layout(layout_), k_f(k_f_),
      w(static_cast<std::size_t>(layout_.dim()), 0.0),
      v(static_cast<std::size_t>(layout_.dim()), static_cast<std::size_t>(k_f_), 0.0) {}

double FmModel::raw_score(const FeatureVector& x) const {
  check_instance(x, layout.dim());
  double score = w0;
  for (const auto& [i, xi] : x.entries) score += w[static_cast<std::size_t>(i)] * xi;
  for (int f = 0; f < k_f; ++f) {
    double sum = 0.0, sum_sq = 0.0;
    for (const auto& [i, xi] : x.entries) {
      const double vx = v(static_cast<std::size_t>(i), static_cast<std::size_t>(f)) * xi;
      sum += vx;
      sum_sq += vx * vx;
    }
    score += 0.5 * (sum * sum - sum_sq);
  }
  return score;
}

double FmModel::predict(const FeatureVector& x) const {
  const double raw = raw_score(x);
  return task == Task::kClassification ? logistic(raw) : raw;
}

FmModel train(std::span<const Instance> instances, Task task, const FeatureLayout& layout,
              const TrainConfig& config, const FmModel* init, std::vector<double>* loss_trace) {
  if (instances.empty()) throw ValidationError("train: no instances");
  if (config.k_f < 1 || config.epochs < 0 || !(config.learning_rate > 0.0) ||
      !(config.init_std > 0.0))
    throw ValidationError("train: bad config");
  for (const Instance& inst : instances) {
    check_instance(inst.x, layout.dim());
    if (!std::isfinite(inst.label)) throw ValidationError("train: non-finite label");
    if (task == Task::kClassification && inst.label != 0.0 && inst.label != 1.0)
      throw ValidationError("train: classification labels must be 0 or 1");
  }

  FmModel model;
  if (init) {
    if (init->layout != layout || init->k_f != config.k_f || init->task != task)
      throw ContractError("train: init model shape does not match");
    model = *init;
  } else {
    model = FmModel(task, layout, config.k_f);
    Rng rng = make_rng(derive_seed(config.seed, 0xF1));
    std::normal_distribution<double> normal(0.0, config.init_std);
    for (double& value : model.v.data()) value = normal(rng);
  }

  const std::size_t n = instances.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng shuffle_rng = make_rng(derive_seed(config.seed, 0x0D));
  std::vector<double> sums(static_cast<std::size_t>(config.k_f));

  const double lr = config.learning_rate;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    if (config.shuffle) std::shuffle(order.begin(), order.end(), shuffle_rng);
    for (std::size_t idx : order) {
      const Instance& inst = instances[idx];
      double raw = model.w0;
      for (const auto& [i, xi] : inst.x.entries) raw += model.w[static_cast<std::size_t>(i)] * xi;
      for (int f = 0; f < config.k_f; ++f) {
        double sum = 0.0, sum_sq = 0.0;
        for (const auto& [i, xi] : inst.x.entries) {
          const double vx = model.v(static_cast<std::size_t>(i), static_cast<std::size_t>(f)) * xi;
          sum += vx;
          sum_sq += vx * vx;
        }
        sums[static_cast<std::size_t>(f)] = sum;
        raw += 0.5 * (sum * sum - sum_sq);
      }
      if (!std::isfinite(data_loss(task, raw, inst.label)))
        throw TrainingDiverged(epoch, "non-finite training loss");

      const double g = loss_slope(task, raw, inst.label);
      model.w0 -= lr * (g + 2.0 * config.l2_w0 * model.w0);
      for (const auto& [i, xi] : inst.x.entries) {
        const std::size_t si = static_cast<std::size_t>(i);
        model.w[si] -= lr * (g * xi + 2.0 * config.l2_w * model.w[si]);
        for (int f = 0; f < config.k_f; ++f) {
          double& vif = model.v(si, static_cast<std::size_t>(f));
          const double grad = xi * sums[static_cast<std::size_t>(f)] - vif * xi * xi;
          vif -= lr * (g * grad + 2.0 * config.l2_v * vif);
        }
      }
    }
    if (loss_trace) {
      double total = 0.0;
      for (const Instance& inst : instances)
        total += data_loss(task, model.raw_score(inst.x), inst.label);
      double reg = config.l2_w0 * model.w0 * model.w0;
      for (double wi : model.w) reg += config.l2_w * wi * wi;
      for (double vi : model.v.data()) reg += config.l2_v * vi * vi;
      loss_trace->push_back(total / static_cast<double>(n) + reg);
    }
  }
  return model;
}

FmGradient gradient(const FmModel& model, const FeatureVector& x, double label,
                    const TrainConfig& config) {
  check_instance(x, model.layout.dim());
  const std::size_t dim = static_cast<std::size_t>(model.layout.dim());
  FmGradient grad;
  grad.w.assign(dim, 0.0);
  grad.v = Matrix(dim, static_cast<std::size_t>(model.k_f), 0.0);

  double raw = model.w0;
  std::vector<double> sums(static_cast<std::size_t>(model.k_f), 0.0);
  for (const auto& [i, xi] : x.entries) raw += model.w[static_cast<std::size_t>(i)] * xi;
  for (int f = 0; f < model.k_f; ++f) {
    double sum = 0.0, sum_sq = 0.0;
    for (const auto& [i, xi] : x.entries) {
      const double vx = model.v(static_cast<std::size_t>(i), static_cast<std::size_t>(f)) * xi;
      sum += vx;
      sum_sq += vx * vx;
    }
    sums[static_cast<std::size_t>(f)] = sum;
    raw += 0.5 * (sum * sum - sum_sq);
  }
  const double g = loss_slope(model.task, raw, label);

  grad.w0 = g + 2.0 * config.l2_w0 * model.w0;
  for (std::size_t i = 0; i < dim; ++i) grad.w[i] = 2.0 * config.l2_w * model.w[i];
  for (std::size_t i = 0; i < dim; ++i)
    for (int f = 0; f < model.k_f; ++f)
      grad.v(i, static_cast<std::size_t>(f)) =
          2.0 * config.l2_v * model.v(i, static_cast<std::size_t>(f));
  for (const auto& [i, xi] : x.entries) {
    const std::size_t si = static_cast<std::size_t>(i);
    grad.w[si] += g * xi;
    for (int f = 0; f < model.k_f; ++f)
      grad.v(si, static_cast<std::size_t>(f)) +=
          g * (xi * sums[static_cast<std::size_t>(f)] -
               model.v(si, static_cast<std::size_t>(f)) * xi * xi);
  }
  return grad;
}

std::vector<std::pair<int, int>> sample_negatives(const BinaryMatrix& r01,
                                                  std::span<const int> restrict_items,
                                                  std::uint64_t seed) {
  long long ones = 0;
  for (int c : restrict_items) ones += r01.ones_in_column(c);
  long long zeros = static_cast<long long>(r01.rows()) * static_cast<long long>(restrict_items.size()) - ones;
  long long need = std::min(ones, zeros);

  std::vector<std::pair<int, int>> sample;
  sample.reserve(static_cast<std::size_t>(need));
  if (need == 0) return sample;

  // Knuth selection sampling over the zero cells, column-major.
  Rng rng = make_rng(derive_seed(seed, 0x4E6));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  long long remaining = zeros;
  for (int c : restrict_items) {
    for (int u = 0; u < r01.rows(); ++u) {
      if (r01.contains(u, c)) continue;
      if (unit(rng) * static_cast<double>(remaining) < static_cast<double>(need)) {
        sample.emplace_back(u, c);
        if (--need == 0) return sample;
      }
      --remaining;
    }
  }
  return sample;
}

namespace {

std::vector<Instance> rating_instances(const RatingStore& store, const Split& split,
                                       const FeatureLayout& layout) {
  std::vector<Instance> out;
  for (const Rating& r : store.ratings()) {
    if (split.is_test_item(r.item)) continue;
    std::optional<int> item = layout.with_item() ? std::optional<int>(r.item) : std::nullopt;
    out.push_back({encode(r.user, item, store.item_attrs(r.item), layout), r.value});
  }
  return out;
}

}  // namespace

PretrainedModels pretrain_models(const RatingStore& store, const Split& split,
                                 const TrainConfig& config) {
  const FeatureLayout no_item{store.num_users(), 0, store.num_attrs()};
  const FeatureLayout with_item{store.num_users(), store.num_items(), store.num_attrs()};

  std::vector<Instance> reg_plain = rating_instances(store, split, no_item);
  if (reg_plain.empty()) throw ValidationError("pretrain: no ratings on training items");

  // Rate/no-rate instances: every observed training cell is a positive, an
  // equal number of empty cells are negatives.
  std::vector<Instance> clf_set;
  clf_set.reserve(reg_plain.size() * 2);
  for (const Rating& r : store.ratings()) {
    if (split.is_test_item(r.item)) continue;
    clf_set.push_back({encode(r.user, std::nullopt, store.item_attrs(r.item), no_item), 1.0});
  }
  const BinaryMatrix r01 = binarize(store);
  for (auto [u, i] : sample_negatives(r01, split.train_items, derive_seed(config.seed, 0x9A))) {
    clf_set.push_back({encode(u, std::nullopt, store.item_attrs(i), no_item), 0.0});
  }

  PretrainedModels models;
  TrainConfig clf_cfg = config;
  clf_cfg.seed = derive_seed(config.seed, 1);
  models.clf = train(clf_set, Task::kClassification, no_item, clf_cfg);

  TrainConfig reg_cfg = config;
  reg_cfg.seed = derive_seed(config.seed, 2);
  models.reg_no_item = train(reg_plain, Task::kRegression, no_item, reg_cfg);

  TrainConfig full_cfg = config;
  full_cfg.seed = derive_seed(config.seed, 3);
  models.reg_with_item =
      train(rating_instances(store, split, with_item), Task::kRegression, with_item, full_cfg);
  return models;
}

FmModel retrain_with_feedback(const FmModel& reg_with_item, const RatingStore& store,
                              const Split& split, std::span<const Rating> feedback,
                              const TrainConfig& config) {
  for (const Rating& f : feedback) {
    if (!split.is_test_item(f.item))
      throw ContractError("retrain: feedback item is not a test item");
    if (!split.is_active_user(f.user))
      throw ContractError("retrain: feedback user is not in the active-selection set");
  }
  std::vector<Instance> instances = rating_instances(store, split, reg_with_item.layout);
  for (const Rating& f : feedback)
    instances.push_back(
        {encode(f.user, f.item, store.item_attrs(f.item), reg_with_item.layout), f.value});

  TrainConfig cfg = config;
  cfg.seed = derive_seed(config.seed, 5);
  return train(instances, Task::kRegression, reg_with_item.layout, cfg, &reg_with_item);
}

void save_model(const FmModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write model file: " + path);
  char buf[64];
  auto fmt = [&buf](double value) {
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return std::string(buf);
  };
  out << "fm 1\n";
  out << "task " << (model.task == Task::kRegression ? "regression" : "classification") << '\n';
  out << "layout " << model.layout.num_users << ' ' << model.layout.num_items << ' '
      << model.layout.num_attrs << '\n';
  out << "k_f " << model.k_f << '\n';
  out << "w0 " << fmt(model.w0) << '\n';
  out << "w";
  for (double wi : model.w) out << ' ' << fmt(wi);
  out << '\n';
  for (std::size_t i = 0; i < model.v.rows(); ++i) {
    out << "v";
    for (std::size_t f = 0; f < model.v.cols(); ++f) out << ' ' << fmt(model.v(i, f));
    out << '\n';
  }
}

FmModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open model file: " + path);
  std::string tag;
  int version = 0;
  in >> tag >> version;
  if (tag != "fm" || version != 1) throw ValidationError("bad model file header: " + path);

  std::string task_name;
  FeatureLayout layout;
  int k_f = 0;
  in >> tag >> task_name;
  in >> tag >> layout.num_users >> layout.num_items >> layout.num_attrs;
  in >> tag >> k_f;

  Task task;
  if (task_name == "regression") task = Task::kRegression;
  else if (task_name == "classification") task = Task::kClassification;
  else throw ValidationError("bad task in model file: " + task_name);

  FmModel model(task, layout, k_f);
  in >> tag >> model.w0;
  in >> tag;
  for (double& wi : model.w) in >> wi;
  for (std::size_t i = 0; i < model.v.rows(); ++i) {
    in >> tag;
    for (std::size_t f = 0; f < model.v.cols(); ++f) in >> model.v(i, f);
  }
  if (!in) throw ValidationError("truncated model file: " + path);
  return model;
}

std::vector<double> predict_users(const FmModel& model, std::span<const int> users,
                                  std::span<const int> attrs) {
  std::vector<double> out(users.size(), 0.0);
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(users.size());
#pragma omp parallel for schedule(static) if (n > 64)
  for (std::ptrdiff_t k = 0; k < n; ++k) {
    const std::size_t sk = static_cast<std::size_t>(k);
    out[sk] = model.predict(encode(users[sk], std::nullopt, attrs, model.layout));
  }
  return out;
}

namespace serial {

std::vector<double> predict_users(const FmModel& model, std::span<const int> users,
                                  std::span<const int> attrs) {
  std::vector<double> out(users.size(), 0.0);
  for (std::size_t k = 0; k < users.size(); ++k)
    out[k] = model.predict(encode(users[k], std::nullopt, attrs, model.layout));
  return out;
}

}  // namespace serial

}  // namespace coldstart
