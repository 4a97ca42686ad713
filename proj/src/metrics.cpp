#include "coldstart/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

#include "coldstart/common.hpp"
#include "coldstart/matrix.hpp"

namespace coldstart {

long long RequestLog::total_requests() const {
  long long total = 0;
  for (const auto& item : items) total += static_cast<long long>(item.requested.size());
  return total;
}

long long RequestLog::total_answered() const {
  long long total = 0;
  for (const auto& item : items) total += static_cast<long long>(item.answered.size());
  return total;
}

double pfr(const RequestLog& log) {
  const long long requests = log.total_requests();
  if (requests == 0) throw ValidationError("pfr: no rating requests logged");
  return static_cast<double>(log.total_answered()) / static_cast<double>(requests);
}

double ast(const RequestLog& log) {
  const long long requests = log.total_requests();
  if (requests == 0) throw ValidationError("ast: no rating requests logged");
  std::set<int> distinct;
  for (const auto& item : log.items) distinct.insert(item.requested.begin(), item.requested.end());
  return static_cast<double>(requests) / static_cast<double>(distinct.size());
}

double rmse(const PredictionSet& preds) {
  if (preds.empty()) throw ValidationError("rmse: empty prediction set");
  std::vector<double> sq;
  sq.reserve(preds.size());
  for (const auto& p : preds) sq.push_back((p.actual - p.predicted) * (p.actual - p.predicted));
  return std::sqrt(pairwise_sum(sq) / static_cast<double>(preds.size()));
}

double mae(const PredictionSet& preds) {
  if (preds.empty()) throw ValidationError("mae: empty prediction set");
  std::vector<double> abs;
  abs.reserve(preds.size());
  for (const auto& p : preds) abs.push_back(std::fabs(p.actual - p.predicted));
  return pairwise_sum(abs) / static_cast<double>(preds.size());
}

namespace {

double dcg_at(std::span<const double> gains, int k) {
  double dcg = 0.0;
  const int limit = std::min<int>(k, static_cast<int>(gains.size()));
  for (int pos = 0; pos < limit; ++pos)
    dcg += gains[static_cast<std::size_t>(pos)] / std::log2(static_cast<double>(pos) + 2.0);
  return dcg;
}

}  // namespace

TopNResult topn_eval(const PredictionSet& preds, int n, double threshold) {
  if (n < 5) throw ValidationError("topn_eval: n must be >= 5");

  std::map<int, std::vector<const PredictionRecord*>> by_user;
  for (const auto& p : preds) by_user[p.user].push_back(&p);

  std::vector<double> prec5, precn, rec5, recn, nd5, ndn;
  for (auto& [user, records] : by_user) {
    std::sort(records.begin(), records.end(),
              [](const PredictionRecord* a, const PredictionRecord* b) {
                if (a->predicted != b->predicted) return a->predicted > b->predicted;
                return a->item < b->item;
              });

    int preferred_total = 0;
    std::vector<double> gains(records.size(), 0.0);  // ranked by prediction
    for (std::size_t pos = 0; pos < records.size(); ++pos) {
      if (records[pos]->actual > threshold) {
        ++preferred_total;
        gains[pos] = std::pow(2.0, records[pos]->actual) - 1.0;
      }
    }
    auto preferred_in_top = [&records, threshold](int k) {
      int hits = 0;
      const int limit = std::min<int>(k, static_cast<int>(records.size()));
      for (int pos = 0; pos < limit; ++pos)
        if (records[static_cast<std::size_t>(pos)]->actual > threshold) ++hits;
      return hits;
    };

    prec5.push_back(static_cast<double>(preferred_in_top(5)) / 5.0);
    precn.push_back(static_cast<double>(preferred_in_top(n)) / static_cast<double>(n));

    if (preferred_total == 0) continue;  // recall/NDCG undefined for this user
    rec5.push_back(static_cast<double>(preferred_in_top(5)) / static_cast<double>(preferred_total));
    recn.push_back(static_cast<double>(preferred_in_top(n)) / static_cast<double>(preferred_total));

    std::vector<double> ideal = gains;
    std::sort(ideal.begin(), ideal.end(), std::greater<>());
    nd5.push_back(dcg_at(gains, 5) / dcg_at(ideal, 5));
    ndn.push_back(dcg_at(gains, n) / dcg_at(ideal, n));
  }

  auto mean = [](const std::vector<double>& xs) {
    return xs.empty() ? 0.0 : pairwise_sum(xs) / static_cast<double>(xs.size());
  };
  TopNResult result;
  result.precision5 = mean(prec5);
  result.precision_n = mean(precn);
  result.recall5 = mean(rec5);
  result.recall_n = mean(recn);
  result.ndcg5 = mean(nd5);
  result.ndcg_n = mean(ndn);
  result.precision_users = static_cast<int>(prec5.size());
  result.recall_users = static_cast<int>(rec5.size());
  return result;
}

double regularized_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;

  // Lentz's continued fraction for I_x(a,b).
  auto contfrac = [](double aa, double bb, double xx) {
    const double tiny = 1e-300;
    double c = 1.0;
    double d = 1.0 - (aa + bb) * xx / (aa + 1.0);
    if (std::fabs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= 300; ++m) {
      const double dm = static_cast<double>(m);
      double num = dm * (bb - dm) * xx / ((aa + 2.0 * dm - 1.0) * (aa + 2.0 * dm));
      d = 1.0 + num * d;
      if (std::fabs(d) < tiny) d = tiny;
      c = 1.0 + num / c;
      if (std::fabs(c) < tiny) c = tiny;
      d = 1.0 / d;
      h *= d * c;
      num = -(aa + dm) * (aa + bb + dm) * xx / ((aa + 2.0 * dm) * (aa + 2.0 * dm + 1.0));
      d = 1.0 + num * d;
      if (std::fabs(d) < tiny) d = tiny;
      c = 1.0 + num / c;
      if (std::fabs(c) < tiny) c = tiny;
      d = 1.0 / d;
      const double delta = d * c;
      h *= delta;
      if (std::fabs(delta - 1.0) < 1e-14) break;
    }
    return h;
  };

  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  if (x < (a + 1.0) / (a + b + 2.0))
    return std::exp(log_front) * contfrac(a, b, x) / a;
  return 1.0 - std::exp(log_front) * contfrac(b, a, 1.0 - x) / b;
}

namespace {

// P(T >= t) for Student's t with df degrees of freedom.
double t_survival(double t, double df) {
  const double x = df / (df + t * t);
  const double half_tail = 0.5 * regularized_incomplete_beta(df / 2.0, 0.5, x);
  return t >= 0.0 ? half_tail : 1.0 - half_tail;
}

}  // namespace

TTestResult paired_t_test(std::span<const double> a, std::span<const double> b, Tail alternative) {
  if (a.size() != b.size()) throw ValidationError("paired_t_test: unequal lengths");
  const std::size_t n = a.size();
  if (n < 2) throw ValidationError("paired_t_test: need at least 2 pairs");

  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
  double mean = 0.0;
  for (double di : d) mean += di;
  mean /= static_cast<double>(n);
  double var = 0.0;
  for (double di : d) var += (di - mean) * (di - mean);
  var /= static_cast<double>(n - 1);  // sample variance
  const double sd = std::sqrt(var);

  TTestResult result;
  if (sd == 0.0) {
    if (mean == 0.0) throw ValidationError("paired_t_test: all differences are zero");
    const bool matches = (alternative == Tail::kGreater) == (mean > 0.0);
    result.t = (mean > 0.0 ? 1.0 : -1.0) * std::numeric_limits<double>::infinity();
    result.p = matches ? 0.0 : 1.0;
    result.significant = matches;
    return result;
  }

  result.t = mean / (sd / std::sqrt(static_cast<double>(n)));
  const double df = static_cast<double>(n - 1);
  result.p = alternative == Tail::kGreater ? t_survival(result.t, df)
                                           : t_survival(-result.t, df);
  result.significant = result.p < 0.05;
  return result;
}

}  // namespace coldstart
