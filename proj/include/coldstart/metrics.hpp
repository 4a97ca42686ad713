#pragma once

#include <span>
#include <vector>

namespace coldstart {

struct PredictionRecord {
  int user;
  int item;
  double actual;
  double predicted;
};
using PredictionSet = std::vector<PredictionRecord>;

struct ItemRequests {
  int item;
  std::vector<int> requested;  // user indices
  std::vector<int> answered;   // subset of requested
};

struct RequestLog {
  std::vector<ItemRequests> items;

  long long total_requests() const;
  long long total_answered() const;
};

// Answered requests over all requests, in [0,1].
double pfr(const RequestLog& log);

// Requests per distinct requested user.
double ast(const RequestLog& log);

double rmse(const PredictionSet& preds);
double mae(const PredictionSet& preds);

struct TopNResult {
  double precision5 = 0.0, precision_n = 0.0;
  double recall5 = 0.0, recall_n = 0.0;
  double ndcg5 = 0.0, ndcg_n = 0.0;
  int precision_users = 0;  // users with at least one candidate
  int recall_users = 0;     // users with at least one preferred item
};

// Per user: rank candidates by predicted rating (ties to the lower item
// index), take the top n; preferred means actual > threshold. Precision
// averages over all users with candidates, recall and NDCG skip users with
// no preferred item.
TopNResult topn_eval(const PredictionSet& preds, int n, double threshold);

enum class Tail { kGreater, kLess };

struct TTestResult {
  double t = 0.0;
  double p = 1.0;
  bool significant = false;  // p < 0.05
};

// Paired one-tailed t-test of mean(a-b) against zero. Zero-variance nonzero
// differences report p=0 (or 1 against the direction); all-zero differences
// are a validation error.
TTestResult paired_t_test(std::span<const double> a, std::span<const double> b, Tail alternative);

// Regularized incomplete beta I_x(a,b) via the Lentz continued fraction;
// exposed for the t CDF and its tests.
double regularized_incomplete_beta(double a, double b, double x);

}  // namespace coldstart
