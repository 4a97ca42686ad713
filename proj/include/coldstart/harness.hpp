#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "coldstart/baselines.hpp"
#include "coldstart/budget.hpp"
#include "coldstart/config.hpp"
#include "coldstart/criteria.hpp"
#include "coldstart/data_model.hpp"
#include "coldstart/fm.hpp"
#include "coldstart/metrics.hpp"

namespace coldstart {

struct FeedbackResult {
  std::vector<Rating> feedback;  // the actual held-out ratings, verbatim
  ItemRequests log;
};

// Requests the item's rating from each selected user; those with an actual
// held-out rating answer with it.
FeedbackResult simulate_feedback(const RatingStore& store, const Split& split, int item,
                                 std::span<const int> selected_users);

struct StrategyMetrics {
  Strategy strategy = Strategy::kFmfc;
  std::optional<double> pfr;  // absent for strategies without an active phase
  std::optional<double> ast;
  long long requests = 0;
  long long answered = 0;
  double rmse = 0.0;
  double mae = 0.0;
  TopNResult topn;
  // Criterion diagnostics over the answered feedback / the selection sets.
  std::optional<double> feedback_diversity;
  std::optional<double> selected_unselected_similarity;
  std::optional<BudgetPlan> budget;
  int solver_iterations = 0;
  bool solver_converged = true;
  bool solver_monotone = true;
};

struct RunReport {
  std::uint64_t run_index = 0;
  std::vector<StrategyMetrics> strategies;
};

struct PairedTestEntry {
  std::string metric;
  std::string method;   // hypothesized better strategy
  std::string baseline;
  std::string alternative;  // "less" (error metrics) or "greater"
  double t = 0.0;
  double p = 1.0;
  bool significant = false;
};

struct ExperimentReport {
  std::vector<RunReport> runs;
  std::vector<StrategyMetrics> mean;  // field-wise mean over runs
  std::vector<PairedTestEntry> paired_tests;  // present when repetitions >= 2
  double wall_clock_seconds = 0.0;
};

// Per-run pipeline state: split, pre-trained models and the selection
// signals, all built lazily and cached so weight sweeps reuse them.
class ExperimentContext {
 public:
  ExperimentContext(const RatingStore& store, ExperimentConfig config,
                    std::uint64_t run_index = 0);

  const RatingStore& store() const { return store_; }
  const ExperimentConfig& config() const { return config_; }
  const Split& split() const { return split_; }
  const PretrainedModels& models();
  std::span<const int> pool() const { return split_.active_users; }

  const std::vector<double>& item_willingness(std::size_t test_pos);
  const std::vector<double>& item_potential(std::size_t test_pos);
  const CriteriaBundle& item_bundle(std::size_t test_pos);  // calibrated
  const Matrix& raw_similarity();
  const std::vector<double>& raw_objectivity();

  // Cache-hit instrumentation: how many per-item signal builds and
  // pool-structure builds have actually run.
  int item_signal_builds() const { return item_signal_builds_; }
  int pool_structure_builds() const { return pool_structure_builds_; }

  StrategyMetrics run_strategy(Strategy strategy);
  // Same pipeline with explicit criteria weights (sweeps, ablations).
  StrategyMetrics run_strategy_weighted(Strategy strategy, double alpha, double beta,
                                        double gamma, double sigma);

 private:
  std::vector<int> select_for_item(Strategy strategy, std::size_t test_pos, int k, double alpha,
                                   double beta, double gamma, double sigma,
                                   StrategyMetrics& metrics);
  PredictionSet predict_all(const FmModel& model);
  TrainConfig run_train_config() const;

  const RatingStore& store_;
  ExperimentConfig config_;
  std::uint64_t run_index_ = 0;
  Split split_;
  std::optional<PretrainedModels> models_;
  std::optional<Matrix> s_raw_;
  std::optional<std::vector<double>> o_raw_;
  std::vector<std::unique_ptr<std::vector<double>>> item_p_, item_pr_;
  std::vector<std::unique_ptr<CriteriaBundle>> item_bundles_;
  std::optional<std::vector<int>> popular_set_, coverage_set_;
  int item_signal_builds_ = 0;
  int pool_structure_builds_ = 0;
};

struct AlphaSweepRow {
  double alpha = 0.0;
  double pfr = 0.0;
  double rmse = 0.0;
};

// Re-runs the four-criteria strategy per alpha, reusing every
// alpha-independent structure in the context.
std::vector<AlphaSweepRow> alpha_sweep(ExperimentContext& ctx, std::span<const double> alphas);

// Full experiment: load/generate data, run every configured strategy for
// every repetition, aggregate and (optionally) write the JSON report.
ExperimentReport run_experiment(const RatingStore& store, const ExperimentConfig& config);
ExperimentReport run_experiment(const ExperimentConfig& config);  // also writes output_path

std::string report_to_json(const ExperimentReport& report, const ExperimentConfig& config);
void write_report(const ExperimentReport& report, const ExperimentConfig& config,
                  const std::string& path);

}  // namespace coldstart
