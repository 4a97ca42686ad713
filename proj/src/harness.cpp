#include "coldstart/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>

#include <json.hpp>

#include "coldstart/common.hpp"
#include "coldstart/rng.hpp"
#include "coldstart/selector.hpp"

namespace coldstart {

FeedbackResult simulate_feedback(const RatingStore& store, const Split& split, int item,
                                 std::span<const int> selected_users) {
  if (!split.is_test_item(item))
    throw ContractError("simulate_feedback: item is not a test item");
  FeedbackResult result;
  result.log.item = item;
  for (int user : selected_users) {
    if (!split.is_active_user(user))
      throw ContractError("simulate_feedback: user is not in the active-selection set");
    result.log.requested.push_back(user);
    const auto& rated = store.user_ratings(user);
    const auto it = std::lower_bound(rated.begin(), rated.end(), item,
                                     [](const auto& entry, int key) { return entry.first < key; });
    if (it != rated.end() && it->first == item) {
      result.log.answered.push_back(user);
      result.feedback.push_back({user, item, it->second});
    }
  }
  return result;
}

ExperimentContext::ExperimentContext(const RatingStore& store, ExperimentConfig config,
                                     std::uint64_t run_index)
    : store_(store), config_(std::move(config)), run_index_(run_index),
      split_(make_split(store, config_.test_fraction, config_.split_seed + run_index)) {
  if (split_.train_items.empty() || split_.test_items.empty())
    throw ValidationError("experiment: split left no train or no test items");
  item_p_.resize(split_.test_items.size());
  item_pr_.resize(split_.test_items.size());
  item_bundles_.resize(split_.test_items.size());
}

TrainConfig ExperimentContext::run_train_config() const {
  TrainConfig cfg = config_.fm;
  cfg.seed = config_.fm.seed + run_index_;
  return cfg;
}

const PretrainedModels& ExperimentContext::models() {
  if (!models_) models_ = pretrain_models(store_, split_, run_train_config());
  return *models_;
}

const std::vector<double>& ExperimentContext::item_willingness(std::size_t test_pos) {
  if (!item_p_[test_pos]) {
    const int item = split_.test_items[test_pos];
    ++item_signal_builds_;
    item_p_[test_pos] = std::make_unique<std::vector<double>>(
        willingness(models().clf, pool(), store_.item_attrs(item)));
  }
  return *item_p_[test_pos];
}

const std::vector<double>& ExperimentContext::item_potential(std::size_t test_pos) {
  if (!item_pr_[test_pos]) {
    const int item = split_.test_items[test_pos];
    item_pr_[test_pos] = std::make_unique<std::vector<double>>(
        potential_ratings(models().reg_no_item, pool(), store_.item_attrs(item)));
  }
  return *item_pr_[test_pos];
}

const Matrix& ExperimentContext::raw_similarity() {
  if (!s_raw_) {
    ++pool_structure_builds_;
    s_raw_ = similarity_matrix(store_, split_, pool());
    o_raw_ = objectivity(store_, split_, pool());
  }
  return *s_raw_;
}

const std::vector<double>& ExperimentContext::raw_objectivity() {
  raw_similarity();
  return *o_raw_;
}

const CriteriaBundle& ExperimentContext::item_bundle(std::size_t test_pos) {
  if (!item_bundles_[test_pos]) {
    CriteriaBundle bundle;
    bundle.users.assign(pool().begin(), pool().end());
    bundle.p = item_willingness(test_pos);
    bundle.potential = item_potential(test_pos);
    bundle.o = raw_objectivity();
    bundle.d = diversity_matrix(bundle.potential);
    bundle.s = raw_similarity();
    const double divisor =
        config_.divide_by_all_users ? static_cast<double>(store_.num_users()) : 0.0;
    item_bundles_[test_pos] = std::make_unique<CriteriaBundle>(calibrate(std::move(bundle), divisor));
  }
  return *item_bundles_[test_pos];
}

std::vector<int> ExperimentContext::select_for_item(Strategy strategy, std::size_t test_pos,
                                                    int k, double alpha, double beta,
                                                    double gamma, double sigma,
                                                    StrategyMetrics& metrics) {
  const std::uint64_t seed = derive_seed(config_.seed + run_index_,
                                         0x5E1u + static_cast<std::uint64_t>(strategy), test_pos);
  switch (strategy) {
    case Strategy::kFmfc:
    case Strategy::kFmfcDb: {
      SelectionProblem problem = psd_shift(build_m(item_bundle(test_pos), alpha, beta, gamma,
                                                   sigma, k));
      const SelectionResult result = solve(problem, config_.max_iter);
      metrics.solver_iterations += result.iterations;
      metrics.solver_converged = metrics.solver_converged && result.converged;
      metrics.solver_monotone = metrics.solver_monotone && result.monotone;
      return result.selected();
    }
    case Strategy::kRandom:
      return select_random(static_cast<int>(pool().size()), k, seed);
    case Strategy::kEpsGreedy:
      return select_eps_greedy(item_willingness(test_pos), k, config_.epsilon, seed);
    case Strategy::kPopular:
      if (!popular_set_) popular_set_ = select_popular(store_, split_, pool(), k);
      return *popular_set_;
    case Strategy::kCoverage:
      if (!coverage_set_) coverage_set_ = select_coverage(store_, split_, pool(), k);
      return *coverage_set_;
    case Strategy::kExploration:
      return select_exploration(raw_similarity(), k, config_.gamma_e, config_.max_iter);
    case Strategy::kFmNoAl:
    case Strategy::kHbrnn:
      break;
  }
  throw ContractError("select_for_item: strategy has no active phase");
}

PredictionSet ExperimentContext::predict_all(const FmModel& model) {
  PredictionSet preds;
  for (int user : split_.prediction_users) {
    for (const auto& [item, actual] : store_.user_ratings(user)) {
      if (!split_.is_test_item(item)) continue;
      const double predicted =
          model.predict(encode(user, item, store_.item_attrs(item), model.layout));
      preds.push_back({user, item, actual, predicted});
    }
  }
  if (preds.empty())
    throw ValidationError("experiment: prediction users have no held-out test ratings");
  return preds;
}

namespace {

// Mean pairwise diverse value of the answered ratings, averaged over items
// with at least two answers.
std::optional<double> feedback_diversity_diag(const RatingStore& store,
                                              const std::vector<ItemRequests>& log) {
  std::vector<double> per_item;
  for (const auto& entry : log) {
    if (entry.answered.size() < 2) continue;
    std::vector<double> values;
    values.reserve(entry.answered.size());
    for (int user : entry.answered) {
      const auto& rated = store.user_ratings(user);
      const auto it = std::lower_bound(rated.begin(), rated.end(), entry.item,
                                       [](const auto& e, int key) { return e.first < key; });
      values.push_back(it->second);
    }
    double sum = 0.0;
    long long pairs = 0;
    for (std::size_t i = 0; i < values.size(); ++i)
      for (std::size_t j = i + 1; j < values.size(); ++j) {
        sum += std::sqrt(std::fabs(values[i] - values[j]));
        ++pairs;
      }
    per_item.push_back(sum / static_cast<double>(pairs));
  }
  if (per_item.empty()) return std::nullopt;
  double total = 0.0;
  for (double v : per_item) total += v;
  return total / static_cast<double>(per_item.size());
}

}  // namespace

StrategyMetrics ExperimentContext::run_strategy(Strategy strategy) {
  return run_strategy_weighted(strategy, config_.alpha, config_.beta, config_.gamma,
                               config_.sigma);
}

StrategyMetrics ExperimentContext::run_strategy_weighted(Strategy strategy, double alpha,
                                                         double beta, double gamma,
                                                         double sigma) {
  StrategyMetrics metrics;
  metrics.strategy = strategy;

  if (strategy == Strategy::kFmNoAl) {
    const PredictionSet preds = predict_all(models().reg_with_item);
    metrics.rmse = rmse(preds);
    metrics.mae = mae(preds);
    metrics.topn = topn_eval(preds, config_.topn, config_.topn_threshold);
    return metrics;
  }
  if (strategy == Strategy::kHbrnn) {
    PredictionSet preds;
    for (std::size_t t = 0; t < split_.test_items.size(); ++t) {
      const int item = split_.test_items[t];
      const HbrnnScorer scorer(store_, split_, store_.item_attrs(item));
      for (int user : split_.prediction_users) {
        const auto& rated = store_.user_ratings(user);
        const auto it = std::lower_bound(rated.begin(), rated.end(), item,
                                         [](const auto& e, int key) { return e.first < key; });
        if (it == rated.end() || it->first != item) continue;
        preds.push_back({user, item, it->second, scorer.predict(user)});
      }
    }
    if (preds.empty())
      throw ValidationError("experiment: prediction users have no held-out test ratings");
    metrics.rmse = rmse(preds);
    metrics.mae = mae(preds);
    metrics.topn = topn_eval(preds, config_.topn, config_.topn_threshold);
    return metrics;
  }

  const std::size_t l = split_.test_items.size();
  const int pool_size = static_cast<int>(pool().size());

  // Per-item request budget: fixed k, or the popularity/controversy split of
  // k_total for the dynamic-budget strategy.
  std::vector<int> k_per_item(l, config_.k);
  if (strategy == Strategy::kFmfcDb) {
    std::vector<std::vector<double>> p_vectors, pr_vectors;
    p_vectors.reserve(l);
    pr_vectors.reserve(l);
    for (std::size_t t = 0; t < l; ++t) {
      p_vectors.push_back(item_willingness(t));
      pr_vectors.push_back(item_potential(t));
    }
    const long long k_total =
        config_.k_total.value_or(static_cast<long long>(config_.k) * static_cast<long long>(l));
    BudgetPlan plan = allocate(popularity(p_vectors), controversy(pr_vectors), config_.lambda,
                               k_total, config_.budget_normalize);
    plan.items = split_.test_items;
    k_per_item = plan.k;
    metrics.budget = std::move(plan);
  } else {
    if (config_.k > pool_size)
      throw ValidationError("experiment: select.k exceeds the active pool size");
  }

  RequestLog log;
  std::vector<Rating> feedback;
  std::vector<std::vector<int>> selected_positions(l);
  for (std::size_t t = 0; t < l; ++t) {
    // A dynamic plan may assign an item more requests than there are users.
    const int k = std::min(k_per_item[t], pool_size);
    selected_positions[t] = select_for_item(strategy, t, k, alpha, beta, gamma, sigma, metrics);
    std::vector<int> users;
    users.reserve(selected_positions[t].size());
    for (int pos : selected_positions[t]) users.push_back(pool()[static_cast<std::size_t>(pos)]);
    FeedbackResult fb = simulate_feedback(store_, split_, split_.test_items[t], users);
    log.items.push_back(std::move(fb.log));
    feedback.insert(feedback.end(), fb.feedback.begin(), fb.feedback.end());
  }

  // Feedback must never leak prediction users' ratings into training.
  for (const Rating& f : feedback)
    if (!split_.is_active_user(f.user))
      throw ContractError("experiment: feedback from outside the active pool");

  metrics.requests = log.total_requests();
  metrics.answered = log.total_answered();
  metrics.pfr = pfr(log);
  metrics.ast = ast(log);
  metrics.feedback_diversity = feedback_diversity_diag(store_, log.items);

  // Mean raw similarity between selected and unselected pool users.
  {
    const Matrix& s = raw_similarity();
    double total = 0.0;
    long long count = 0;
    for (std::size_t t = 0; t < l; ++t) {
      std::vector<char> chosen(pool().size(), 0);
      for (int pos : selected_positions[t]) chosen[static_cast<std::size_t>(pos)] = 1;
      for (std::size_t m = 0; m < pool().size(); ++m) {
        if (!chosen[m]) continue;
        for (std::size_t n = 0; n < pool().size(); ++n) {
          if (chosen[n]) continue;
          total += s(m, n);
          ++count;
        }
      }
    }
    if (count > 0) metrics.selected_unselected_similarity = total / static_cast<double>(count);
  }

  TrainConfig retrain_cfg = run_train_config();
  if (config_.retrain_epochs) retrain_cfg.epochs = *config_.retrain_epochs;
  if (config_.retrain_learning_rate) retrain_cfg.learning_rate = *config_.retrain_learning_rate;
  const FmModel retrained =
      retrain_with_feedback(models().reg_with_item, store_, split_, feedback, retrain_cfg);

  const PredictionSet preds = predict_all(retrained);
  metrics.rmse = rmse(preds);
  metrics.mae = mae(preds);
  metrics.topn = topn_eval(preds, config_.topn, config_.topn_threshold);
  return metrics;
}

std::vector<AlphaSweepRow> alpha_sweep(ExperimentContext& ctx, std::span<const double> alphas) {
  if (alphas.size() < 2) throw ValidationError("alpha_sweep: need at least 2 alpha values");
  std::vector<AlphaSweepRow> rows;
  rows.reserve(alphas.size());
  for (double alpha : alphas) {
    const StrategyMetrics m = ctx.run_strategy_weighted(
        Strategy::kFmfc, alpha, ctx.config().beta, ctx.config().gamma, ctx.config().sigma);
    rows.push_back({alpha, m.pfr.value_or(0.0), m.rmse});
  }
  return rows;
}

namespace {

StrategyMetrics mean_metrics(const std::vector<const StrategyMetrics*>& runs) {
  StrategyMetrics out;
  out.strategy = runs.front()->strategy;
  const double n = static_cast<double>(runs.size());
  bool any_pfr = false;
  double pfr_sum = 0.0, ast_sum = 0.0, fb_div_sum = 0.0, sim_sum = 0.0;
  int fb_div_count = 0, sim_count = 0;
  for (const StrategyMetrics* m : runs) {
    out.requests += m->requests;
    out.answered += m->answered;
    out.rmse += m->rmse / n;
    out.mae += m->mae / n;
    out.topn.precision5 += m->topn.precision5 / n;
    out.topn.precision_n += m->topn.precision_n / n;
    out.topn.recall5 += m->topn.recall5 / n;
    out.topn.recall_n += m->topn.recall_n / n;
    out.topn.ndcg5 += m->topn.ndcg5 / n;
    out.topn.ndcg_n += m->topn.ndcg_n / n;
    out.solver_iterations += m->solver_iterations;
    out.solver_converged = out.solver_converged && m->solver_converged;
    out.solver_monotone = out.solver_monotone && m->solver_monotone;
    if (m->pfr) {
      any_pfr = true;
      pfr_sum += *m->pfr;
      ast_sum += m->ast.value_or(0.0);
    }
    if (m->feedback_diversity) {
      fb_div_sum += *m->feedback_diversity;
      ++fb_div_count;
    }
    if (m->selected_unselected_similarity) {
      sim_sum += *m->selected_unselected_similarity;
      ++sim_count;
    }
  }
  if (any_pfr) {
    out.pfr = pfr_sum / n;
    out.ast = ast_sum / n;
  }
  if (fb_div_count > 0) out.feedback_diversity = fb_div_sum / fb_div_count;
  if (sim_count > 0) out.selected_unselected_similarity = sim_sum / sim_count;
  return out;
}

std::vector<PairedTestEntry> paired_tests(const ExperimentReport& report,
                                          const ExperimentConfig& config) {
  std::vector<PairedTestEntry> entries;
  auto series = [&report](Strategy s, auto field) {
    std::vector<double> values;
    for (const RunReport& run : report.runs)
      for (const StrategyMetrics& m : run.strategies)
        if (m.strategy == s) {
          const auto v = field(m);
          if (v) values.push_back(*v);
        }
    return values;
  };
  auto add_pair = [&](Strategy method, Strategy baseline) {
    struct Probe {
      const char* name;
      Tail tail;
      std::function<std::optional<double>(const StrategyMetrics&)> field;
    };
    const Probe probes[] = {
        {"rmse", Tail::kLess, [](const StrategyMetrics& m) { return std::optional<double>(m.rmse); }},
        {"mae", Tail::kLess, [](const StrategyMetrics& m) { return std::optional<double>(m.mae); }},
        {"pfr", Tail::kGreater, [](const StrategyMetrics& m) { return m.pfr; }},
    };
    for (const Probe& probe : probes) {
      const std::vector<double> a = series(method, probe.field);
      const std::vector<double> b = series(baseline, probe.field);
      if (a.size() != b.size() || a.size() < 2) continue;
      PairedTestEntry entry;
      entry.metric = probe.name;
      entry.method = strategy_name(method);
      entry.baseline = strategy_name(baseline);
      entry.alternative = probe.tail == Tail::kLess ? "less" : "greater";
      try {
        const TTestResult r = paired_t_test(a, b, probe.tail);
        entry.t = r.t;
        entry.p = r.p;
        entry.significant = r.significant;
      } catch (const ValidationError&) {
        continue;  // degenerate series (all differences zero)
      }
      entries.push_back(std::move(entry));
    }
  };

  const auto& strategies = config.strategies;
  auto have = [&strategies](Strategy s) {
    return std::find(strategies.begin(), strategies.end(), s) != strategies.end();
  };
  for (Strategy ours : {Strategy::kFmfc, Strategy::kFmfcDb}) {
    if (!have(ours)) continue;
    for (Strategy other : strategies)
      if (other != ours && !(ours == Strategy::kFmfc && other == Strategy::kFmfcDb))
        add_pair(ours, other);
  }
  return entries;
}

}  // namespace

ExperimentReport run_experiment(const RatingStore& store, const ExperimentConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();

  ExperimentReport report;
  for (int run = 0; run < config.repetitions; ++run) {
    ExperimentContext ctx(store, config, static_cast<std::uint64_t>(run));
    RunReport run_report;
    run_report.run_index = static_cast<std::uint64_t>(run);
    for (Strategy strategy : config.strategies)
      run_report.strategies.push_back(ctx.run_strategy(strategy));
    report.runs.push_back(std::move(run_report));
  }

  for (std::size_t s = 0; s < config.strategies.size(); ++s) {
    std::vector<const StrategyMetrics*> across;
    for (const RunReport& run : report.runs) across.push_back(&run.strategies[s]);
    report.mean.push_back(mean_metrics(across));
  }
  if (config.repetitions >= 2) report.paired_tests = paired_tests(report, config);

  report.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
  config.validate();
  const RatingStore store = config.synth
                                ? generate_synthetic(*config.synth)
                                : ingest(*config.ratings_path, *config.attributes_path,
                                         config.scale);
  ExperimentReport report = run_experiment(store, config);
  write_report(report, config, config.output_path);
  return report;
}

namespace {

using json = nlohmann::ordered_json;

// Numbers are reported at 6 significant digits.
json sig6(double value) {
  if (!std::isfinite(value)) return json(value > 0 ? "inf" : (value < 0 ? "-inf" : "nan"));
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", value);
  return json(std::strtod(buf, nullptr));
}

json metrics_json(const StrategyMetrics& m) {
  json j;
  j["strategy"] = strategy_name(m.strategy);
  j["pfr"] = m.pfr ? sig6(*m.pfr) : json(nullptr);
  j["ast"] = m.ast ? sig6(*m.ast) : json(nullptr);
  j["requests"] = m.requests;
  j["answered"] = m.answered;
  j["rmse"] = sig6(m.rmse);
  j["mae"] = sig6(m.mae);
  j["precision@5"] = sig6(m.topn.precision5);
  j["precision@n"] = sig6(m.topn.precision_n);
  j["recall@5"] = sig6(m.topn.recall5);
  j["recall@n"] = sig6(m.topn.recall_n);
  j["ndcg@5"] = sig6(m.topn.ndcg5);
  j["ndcg@n"] = sig6(m.topn.ndcg_n);
  j["feedback_diversity"] = m.feedback_diversity ? sig6(*m.feedback_diversity) : json(nullptr);
  j["selected_unselected_similarity"] =
      m.selected_unselected_similarity ? sig6(*m.selected_unselected_similarity) : json(nullptr);
  if (m.budget) {
    json b;
    b["k_total"] = m.budget->k_total;
    b["lambda"] = sig6(m.budget->lambda);
    b["items"] = m.budget->items;
    b["k"] = m.budget->k;
    json scores = json::array();
    for (double s : m.budget->scores) scores.push_back(sig6(s));
    b["scores"] = scores;
    json pop = json::array(), con = json::array();
    for (double v : m.budget->popularity) pop.push_back(sig6(v));
    for (double v : m.budget->controversy) con.push_back(sig6(v));
    b["popularity"] = pop;
    b["controversy"] = con;
    j["budget"] = b;
  } else {
    j["budget"] = json(nullptr);
  }
  j["solver_iterations"] = m.solver_iterations;
  j["solver_converged"] = m.solver_converged;
  j["solver_monotone"] = m.solver_monotone;
  return j;
}

json config_json(const ExperimentConfig& c) {
  json j;
  if (c.ratings_path) j["data.ratings"] = *c.ratings_path;
  if (c.attributes_path) j["data.attributes"] = *c.attributes_path;
  if (c.synth) {
    j["synth.users"] = c.synth->users;
    j["synth.items"] = c.synth->items;
    j["synth.attrs"] = c.synth->attrs;
    j["synth.latent_dim"] = c.synth->latent_dim;
    j["synth.density"] = sig6(c.synth->density);
    j["synth.noise_std"] = sig6(c.synth->noise_std);
    j["synth.seed"] = c.synth->seed;
  }
  j["rating.min"] = sig6(c.scale.min);
  j["rating.max"] = sig6(c.scale.max);
  j["split.test_fraction"] = sig6(c.test_fraction);
  j["split.seed"] = c.split_seed;
  j["fm.k_f"] = c.fm.k_f;
  j["fm.epochs"] = c.fm.epochs;
  j["fm.learning_rate"] = sig6(c.fm.learning_rate);
  j["fm.l2_w0"] = sig6(c.fm.l2_w0);
  j["fm.l2_w"] = sig6(c.fm.l2_w);
  j["fm.l2_v"] = sig6(c.fm.l2_v);
  j["fm.init_std"] = sig6(c.fm.init_std);
  j["fm.seed"] = c.fm.seed;
  j["fm.shuffle"] = c.fm.shuffle;
  if (c.retrain_epochs) j["retrain.epochs"] = *c.retrain_epochs;
  if (c.retrain_learning_rate) j["retrain.learning_rate"] = sig6(*c.retrain_learning_rate);
  j["criteria.alpha"] = sig6(c.alpha);
  j["criteria.beta"] = sig6(c.beta);
  j["criteria.gamma"] = sig6(c.gamma);
  j["criteria.sigma"] = sig6(c.sigma);
  j["criteria.divisor"] = c.divide_by_all_users ? "users" : "pool";
  j["select.k"] = c.k;
  j["select.max_iter"] = c.max_iter;
  if (c.k_total) j["budget.k_total"] = *c.k_total;
  j["budget.lambda"] = sig6(c.lambda);
  j["budget.normalize"] = c.budget_normalize;
  j["baselines.epsilon"] = sig6(c.epsilon);
  j["baselines.gamma_e"] = sig6(c.gamma_e);
  j["topn.n"] = c.topn;
  j["topn.threshold"] = sig6(c.topn_threshold);
  json names = json::array();
  for (Strategy s : c.strategies) names.push_back(strategy_name(s));
  j["strategies"] = names;
  j["runs.repetitions"] = c.repetitions;
  j["runs.seed"] = c.seed;
  return j;
}

}  // namespace

std::string report_to_json(const ExperimentReport& report, const ExperimentConfig& config) {
  json j;
  j["config"] = config_json(config);
  json mean = json::array();
  for (const StrategyMetrics& m : report.mean) mean.push_back(metrics_json(m));
  j["strategies"] = mean;
  json runs = json::array();
  for (const RunReport& run : report.runs) {
    json r;
    r["run"] = run.run_index;
    json per = json::array();
    for (const StrategyMetrics& m : run.strategies) per.push_back(metrics_json(m));
    r["strategies"] = per;
    runs.push_back(r);
  }
  j["runs"] = runs;
  json tests = json::array();
  for (const PairedTestEntry& e : report.paired_tests) {
    json t;
    t["metric"] = e.metric;
    t["method"] = e.method;
    t["baseline"] = e.baseline;
    t["alternative"] = e.alternative;
    t["t"] = sig6(e.t);
    t["p"] = sig6(e.p);
    t["significant"] = e.significant;
    tests.push_back(t);
  }
  j["paired_tests"] = tests;
  j["wall_clock_seconds"] = sig6(report.wall_clock_seconds);
  return j.dump(2) + "\n";
}

void write_report(const ExperimentReport& report, const ExperimentConfig& config,
                  const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write report file: " + path);
  out << report_to_json(report, config);
}

}  // namespace coldstart
