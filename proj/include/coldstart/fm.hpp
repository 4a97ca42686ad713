#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "coldstart/data_model.hpp"
#include "coldstart/matrix.hpp"

namespace coldstart {

enum class Task { kRegression, kClassification };

struct TrainConfig {
  int k_f = 8;
  int epochs = 50;
  double learning_rate = 0.01;
  double l2_w0 = 1e-4;
  double l2_w = 1e-4;
  double l2_v = 1e-4;
  double init_std = 0.01;
  std::uint64_t seed = 1;
  bool shuffle = true;
};

// Second-order factorization machine y = w0 + <w,x> + sum_{i<j} x_i x_j <V_i,V_j>.
// Classification passes the raw score through a logistic link.
class FmModel {
 public:
  FmModel() = default;
  FmModel(Task task, FeatureLayout layout, int k_f);

  // Raw second-order score, evaluated with the O(k_f * nnz(x)) identity.
  double raw_score(const FeatureVector& x) const;
  // raw_score, plus the logistic link in classification mode. Always in (0,1)
  // for classification.
  double predict(const FeatureVector& x) const;

  Task task = Task::kRegression;
  FeatureLayout layout;
  int k_f = 0;
  double w0 = 0.0;
  std::vector<double> w;  // length layout.dim()
  Matrix v;               // layout.dim() x k_f

  bool operator==(const FmModel&) const = default;
};

inline double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct Instance {
  FeatureVector x;
  double label;
};

// SGD with per-parameter-group L2. Warm-starts from `init` when given,
// otherwise w0=0, w=0, V ~ Normal(0, init_std^2) from the config seed.
// Deterministic for fixed (instances, config, init). `loss_trace`, when
// non-null, receives the full-pass regularized loss after every epoch.
FmModel train(std::span<const Instance> instances, Task task, const FeatureLayout& layout,
              const TrainConfig& config, const FmModel* init = nullptr,
              std::vector<double>* loss_trace = nullptr);

struct FmGradient {
  double w0 = 0.0;
  std::vector<double> w;
  Matrix v;
};

// Analytic gradient of the per-instance regularized loss (squared error or
// log loss, plus the config's L2 terms) with respect to all parameters.
FmGradient gradient(const FmModel& model, const FeatureVector& x, double label,
                    const TrainConfig& config);

// Uniform sample, without replacement, of zero entries of r01 restricted to
// the given item columns. Sample size matches the number of one-entries in
// those columns, capped at the number of available zeros.
std::vector<std::pair<int, int>> sample_negatives(const BinaryMatrix& r01,
                                                  std::span<const int> restrict_items,
                                                  std::uint64_t seed);

struct PretrainedModels {
  FmModel clf;           // rate-probability model, user+attribute features
  FmModel reg_no_item;   // rating model, user+attribute features
  FmModel reg_with_item; // rating model, user+item+attribute features
};

// Trains the three pre-feedback models on the split's training items.
PretrainedModels pretrain_models(const RatingStore& store, const Split& split,
                                 const TrainConfig& config);

// Warm-start continuation of reg_with_item on previous ratings plus feedback.
FmModel retrain_with_feedback(const FmModel& reg_with_item, const RatingStore& store,
                              const Split& split, std::span<const Rating> feedback,
                              const TrainConfig& config);

// Text serialization, exact round-trip.
void save_model(const FmModel& model, const std::string& path);
FmModel load_model(const std::string& path);

// Batch prediction across users for one item's attribute row; OpenMP across
// users, per-user arithmetic identical to the scalar path.
std::vector<double> predict_users(const FmModel& model, std::span<const int> users,
                                  std::span<const int> attrs);
namespace serial {
std::vector<double> predict_users(const FmModel& model, std::span<const int> users,
                                  std::span<const int> attrs);
}

}  // namespace coldstart
