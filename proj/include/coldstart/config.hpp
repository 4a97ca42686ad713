#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "coldstart/baselines.hpp"
#include "coldstart/data_model.hpp"
#include "coldstart/fm.hpp"

namespace coldstart {

// One experiment: data source, split, training, selection weights, budget,
// baselines, evaluation and repetition settings. Defaults mirror the tuned
// reference values; every key is overridable from a config file.
struct ExperimentConfig {
  // Data: either both file paths or a synthetic spec.
  std::optional<std::string> ratings_path;
  std::optional<std::string> attributes_path;
  std::optional<SyntheticSpec> synth;
  RatingScale scale;

  double test_fraction = 0.2;
  std::uint64_t split_seed = 1;

  TrainConfig fm;
  std::optional<int> retrain_epochs;
  std::optional<double> retrain_learning_rate;

  // Criteria weights.
  double alpha = 1.0, beta = 0.3, gamma = 0.1, sigma = 0.1;
  // Step-2 calibration divisor: pool size unless told to use all users.
  bool divide_by_all_users = false;

  int k = 25;  // fixed budget per item
  std::optional<long long> k_total;  // dynamic total; defaults to k * |test items|
  double lambda = 1.0;
  bool budget_normalize = true;

  double epsilon = 0.5;
  double gamma_e = 1.0;
  int max_iter = 100;

  int topn = 10;
  double topn_threshold = 3.0;

  std::vector<Strategy> strategies;

  int repetitions = 1;
  std::uint64_t seed = 42;  // run r adds r to every seed in play
  std::string output_path = "report.json";

  void validate() const;
};

// key = value file, '#' comments, unknown keys rejected.
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text, const std::string& origin = "<config>");

}  // namespace coldstart
