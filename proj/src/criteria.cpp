#include "coldstart/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "coldstart/common.hpp"

namespace coldstart {

namespace {

void require_layout(const FmModel& model, Task task, const char* who) {
  if (model.task != task)
    throw ContractError(std::string(who) + ": model has the wrong task mode");
  if (model.layout.with_item())
    throw ContractError(std::string(who) + ": model must use user+attribute features");
}

double diversity_entry(double a, double b) { return std::sqrt(std::fabs(a - b)); }

// Restricted rating rows for the pool, plus norms.
struct PoolRows {
  std::vector<std::vector<std::pair<int, double>>> rows;
  std::vector<double> norms;
};

PoolRows restricted_rows(const RatingStore& store, const Split& split,
                         std::span<const int> users) {
  PoolRows out;
  out.rows.resize(users.size());
  out.norms.resize(users.size(), 0.0);
  for (std::size_t m = 0; m < users.size(); ++m) {
    double sq = 0.0;
    for (const auto& [item, value] : store.user_ratings(users[m])) {
      if (split.is_test_item(item)) continue;
      out.rows[m].emplace_back(item, value);
      sq += value * value;
    }
    out.norms[m] = std::sqrt(sq);
  }
  return out;
}

double cosine_entry(const PoolRows& pool, std::size_t m, std::size_t n) {
  if (pool.norms[m] == 0.0 || pool.norms[n] == 0.0) return 0.0;
  const auto& a = pool.rows[m];
  const auto& b = pool.rows[n];
  double dot = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i].first < b[j].first) ++i;
    else if (a[i].first > b[j].first) ++j;
    else dot += a[i++].second * b[j++].second;
  }
  return dot / (pool.norms[m] * pool.norms[n]);
}

}  // namespace

std::vector<double> willingness(const FmModel& clf, std::span<const int> users,
                                std::span<const int> item_attrs) {
  require_layout(clf, Task::kClassification, "willingness");
  return predict_users(clf, users, item_attrs);
}

std::vector<double> potential_ratings(const FmModel& reg_no_item, std::span<const int> users,
                                      std::span<const int> item_attrs) {
  require_layout(reg_no_item, Task::kRegression, "potential_ratings");
  return predict_users(reg_no_item, users, item_attrs);
}

Matrix diversity_matrix(std::span<const double> potential) {
  const std::size_t n = potential.size();
  Matrix d(n, n, 0.0);
  const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) if (rows > 32)
  for (std::ptrdiff_t m = 0; m < rows; ++m) {
    const std::size_t sm = static_cast<std::size_t>(m);
    for (std::size_t k = 0; k < n; ++k)
      if (k != sm) d(sm, k) = diversity_entry(potential[sm], potential[k]);
  }
  return d;
}

std::vector<double> objectivity(const RatingStore& store, const Split& split,
                                std::span<const int> users) {
  // Item means over all training ratings of each item.
  std::vector<double> item_mean(static_cast<std::size_t>(store.num_items()), 0.0);
  for (int i = 0; i < store.num_items(); ++i) {
    if (split.is_test_item(i)) continue;
    const auto& col = store.item_ratings(i);
    if (col.empty()) continue;
    double sum = 0.0;
    for (const auto& [user, value] : col) sum += value;
    item_mean[static_cast<std::size_t>(i)] = sum / static_cast<double>(col.size());
  }

  std::vector<double> o(users.size(), 0.0);
  std::vector<char> empty_history(users.size(), 0);
  double max_o = 0.0;
  for (std::size_t m = 0; m < users.size(); ++m) {
    double sum = 0.0;
    long long count = 0;
    for (const auto& [item, value] : store.user_ratings(users[m])) {
      if (split.is_test_item(item)) continue;
      const double dev = value - item_mean[static_cast<std::size_t>(item)];
      sum += dev * dev;
      ++count;
    }
    if (count == 0) {
      empty_history[m] = 1;
      continue;
    }
    const double cnt = static_cast<double>(count);
    o[m] = (1.0 / (std::log(cnt) + 1.0)) * (sum / cnt);
    max_o = std::max(max_o, o[m]);
  }
  for (std::size_t m = 0; m < users.size(); ++m)
    if (empty_history[m]) o[m] = max_o;
  return o;
}

Matrix similarity_matrix(const RatingStore& store, const Split& split,
                         std::span<const int> users) {
  const PoolRows pool = restricted_rows(store, split, users);
  const std::size_t n = users.size();
  Matrix s(n, n, 0.0);
  const std::ptrdiff_t rows = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static) if (rows > 32)
  for (std::ptrdiff_t m = 0; m < rows; ++m) {
    const std::size_t sm = static_cast<std::size_t>(m);
    for (std::size_t k = 0; k < n; ++k)
      if (k != sm) s(sm, k) = cosine_entry(pool, sm, k);
  }
  return s;
}

namespace serial {

Matrix diversity_matrix(std::span<const double> potential) {
  const std::size_t n = potential.size();
  Matrix d(n, n, 0.0);
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t k = 0; k < n; ++k)
      if (k != m) d(m, k) = diversity_entry(potential[m], potential[k]);
  return d;
}

Matrix similarity_matrix(const RatingStore& store, const Split& split,
                         std::span<const int> users) {
  const PoolRows pool = restricted_rows(store, split, users);
  const std::size_t n = users.size();
  Matrix s(n, n, 0.0);
  for (std::size_t m = 0; m < n; ++m)
    for (std::size_t k = 0; k < n; ++k)
      if (k != m) s(m, k) = cosine_entry(pool, m, k);
  return s;
}

}  // namespace serial

namespace {

void standardize_vector(std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : xs) var += (x - mean) * (x - mean);
  const double sd = std::sqrt(var / n);
  if (sd == 0.0) {
    std::fill(xs.begin(), xs.end(), 0.0);
    return;
  }
  for (double& x : xs) x = (x - mean) / sd;
}

// Standardize over all n^2 entries, scale by 1/n, re-zero the diagonal.
void standardize_matrix(Matrix& m, double divisor) {
  auto& data = m.data();
  const double n = static_cast<double>(data.size());
  double mean = 0.0;
  for (double x : data) mean += x;
  mean /= n;
  double var = 0.0;
  for (double x : data) var += (x - mean) * (x - mean);
  const double sd = std::sqrt(var / n);
  if (sd == 0.0) {
    std::fill(data.begin(), data.end(), 0.0);
  } else {
    for (double& x : data) x = (x - mean) / (sd * divisor);
  }
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, i) = 0.0;
}

}  // namespace

CriteriaBundle calibrate(CriteriaBundle bundle, double divisor) {
  if (bundle.calibrated) throw ContractError("calibrate: bundle already calibrated");
  const std::size_t n = bundle.users.size();
  if (n < 2) throw ValidationError("calibrate: need at least 2 pool users");
  if (bundle.p.size() != n || bundle.o.size() != n || bundle.d.rows() != n ||
      bundle.s.rows() != n)
    throw ContractError("calibrate: inconsistent bundle shapes");
  if (divisor < 0.0) throw ValidationError("calibrate: divisor must be positive");
  if (divisor == 0.0) divisor = static_cast<double>(n);

  standardize_vector(bundle.p);
  standardize_vector(bundle.o);
  standardize_matrix(bundle.d, divisor);
  standardize_matrix(bundle.s, divisor);
  bundle.calibrated = true;
  return bundle;
}

namespace {

void dump_vector(const std::vector<double>& xs, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write dump file: " + path);
  char buf[48];
  for (std::size_t i = 0; i < xs.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.12g", xs[i]);
    out << buf << (i + 1 == xs.size() ? "" : " ");
  }
  out << '\n';
}

void dump_matrix(const Matrix& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write dump file: " + path);
  char buf[48];
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), "%.12g", m(i, j));
      out << buf << (j + 1 == m.cols() ? "" : " ");
    }
    out << '\n';
  }
}

}  // namespace

void dump_bundle(const CriteriaBundle& bundle, const std::string& prefix) {
  dump_vector(bundle.p, prefix + "p.txt");
  dump_vector(bundle.potential, prefix + "potential.txt");
  dump_vector(bundle.o, prefix + "o.txt");
  dump_matrix(bundle.d, prefix + "D.txt");
  dump_matrix(bundle.s, prefix + "S.txt");
}

}  // namespace coldstart
