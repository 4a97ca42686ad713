#include "coldstart/data_model.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "coldstart/common.hpp"
#include "coldstart/rng.hpp"

namespace coldstart {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  std::stringstream ss(line);
  while (std::getline(ss, cur, ',')) fields.push_back(trim(cur));
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

bool parse_double(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size() && std::isfinite(out);
}

class IdIndex {
 public:
  int get_or_add(const std::string& raw) {
    auto [it, added] = map_.try_emplace(raw, static_cast<int>(ids_.size()));
    if (added) ids_.push_back(raw);
    return it->second;
  }
  std::vector<std::string> take() { return std::move(ids_); }

 private:
  std::unordered_map<std::string, int> map_;
  std::vector<std::string> ids_;
};

}  // namespace

RatingStore RatingStore::build(std::vector<std::string> user_ids,
                               std::vector<std::string> item_ids,
                               std::vector<std::string> attr_ids,
                               std::vector<Rating> ratings,
                               std::vector<std::vector<int>> item_attrs,
                               RatingScale scale) {
  if (scale.min >= scale.max) throw ValidationError("rating scale must have min < max");
  const int nu = static_cast<int>(user_ids.size());
  const int ni = static_cast<int>(item_ids.size());
  const int na = static_cast<int>(attr_ids.size());
  if (item_attrs.size() != static_cast<std::size_t>(ni))
    throw ValidationError("attribute table size does not match item count");

  RatingStore store;
  store.user_ids_ = std::move(user_ids);
  store.item_ids_ = std::move(item_ids);
  store.attr_ids_ = std::move(attr_ids);
  store.scale_ = scale;

  store.by_user_.resize(static_cast<std::size_t>(nu));
  store.by_item_.resize(static_cast<std::size_t>(ni));
  for (const Rating& r : ratings) {
    if (r.user < 0 || r.user >= nu || r.item < 0 || r.item >= ni)
      throw ValidationError("rating index out of range");
    if (!scale.contains(r.value))
      throw ValidationError("rating " + std::to_string(r.value) + " for (" +
                            store.user_ids_[static_cast<std::size_t>(r.user)] + "," +
                            store.item_ids_[static_cast<std::size_t>(r.item)] +
                            ") outside the rating scale");
    store.by_user_[static_cast<std::size_t>(r.user)].emplace_back(r.item, r.value);
    store.by_item_[static_cast<std::size_t>(r.item)].emplace_back(r.user, r.value);
  }
  for (auto& row : store.by_user_) std::sort(row.begin(), row.end());
  for (auto& col : store.by_item_) std::sort(col.begin(), col.end());
  for (int u = 0; u < nu; ++u) {
    const auto& row = store.by_user_[static_cast<std::size_t>(u)];
    for (std::size_t k = 1; k < row.size(); ++k) {
      if (row[k].first == row[k - 1].first)
        throw ValidationError("duplicate rating for (" +
                              store.user_ids_[static_cast<std::size_t>(u)] + "," +
                              store.item_ids_[static_cast<std::size_t>(row[k].first)] + ")");
    }
  }

  for (std::size_t i = 0; i < item_attrs.size(); ++i) {
    auto& attrs = item_attrs[i];
    std::sort(attrs.begin(), attrs.end());
    for (std::size_t k = 0; k < attrs.size(); ++k) {
      if (attrs[k] < 0 || attrs[k] >= na)
        throw ValidationError("attribute index out of range for item " + store.item_ids_[i]);
      if (k > 0 && attrs[k] == attrs[k - 1])
        throw ValidationError("duplicate attribute pair (" + store.item_ids_[i] + "," +
                              store.attr_ids_[static_cast<std::size_t>(attrs[k])] + ")");
    }
  }
  store.attrs_ = std::move(item_attrs);
  store.ratings_ = std::move(ratings);
  return store;
}

RatingStore ingest(const std::string& ratings_path, const std::string& attributes_path,
                   RatingScale scale) {
  std::ifstream rf(ratings_path);
  if (!rf) throw ValidationError("cannot open ratings file: " + ratings_path);

  IdIndex users, items, attrs;
  std::vector<Rating> ratings;
  std::string line;
  long line_no = 0;
  bool first_data_line = true;
  while (std::getline(rf, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = split_csv(line);
    if (fields.size() != 3 && fields.size() != 4)
      throw ParseError(ratings_path, line_no, "expected user_id,item_id,rating[,timestamp]");
    double value = 0.0;
    if (!parse_double(fields[2], value)) {
      if (first_data_line) {  // header row
        first_data_line = false;
        continue;
      }
      throw ParseError(ratings_path, line_no, "rating field is not numeric: " + fields[2]);
    }
    first_data_line = false;
    ratings.push_back({users.get_or_add(fields[0]), items.get_or_add(fields[1]), value});
  }

  std::ifstream af(attributes_path);
  if (!af) throw ValidationError("cannot open attributes file: " + attributes_path);
  std::vector<std::pair<int, int>> attr_pairs;
  line_no = 0;
  while (std::getline(af, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    auto fields = split_csv(line);
    if (fields.size() != 2)
      throw ParseError(attributes_path, line_no, "expected item_id,attr_id");
    attr_pairs.emplace_back(items.get_or_add(fields[0]), attrs.get_or_add(fields[1]));
  }

  auto item_ids = items.take();
  std::vector<std::vector<int>> item_attrs(item_ids.size());
  for (auto [item, attr] : attr_pairs) item_attrs[static_cast<std::size_t>(item)].push_back(attr);

  return RatingStore::build(users.take(), std::move(item_ids), attrs.take(),
                            std::move(ratings), std::move(item_attrs), scale);
}

RatingStore generate_synthetic(const SyntheticSpec& spec) {
  if (spec.users < 1 || spec.items < 1 || spec.attrs < 1 || spec.latent_dim < 1)
    throw ValidationError("synthetic counts must be >= 1");
  if (!(spec.density > 0.0) || spec.density > 1.0)
    throw ValidationError("synthetic density must be in (0,1]");
  if (spec.noise_std < 0.0) throw ValidationError("noise_std must be >= 0");

  Rng rng = make_rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  // Item attribute sets: 1..4 distinct attributes each.
  const int max_per_item = std::min(4, spec.attrs);
  std::uniform_int_distribution<int> attr_count(1, max_per_item);
  std::uniform_int_distribution<int> attr_pick(0, spec.attrs - 1);
  std::vector<std::vector<int>> item_attrs(static_cast<std::size_t>(spec.items));
  for (auto& set : item_attrs) {
    const int want = attr_count(rng);
    while (static_cast<int>(set.size()) < want) {
      int a = attr_pick(rng);
      if (std::find(set.begin(), set.end(), a) == set.end()) set.push_back(a);
    }
    std::sort(set.begin(), set.end());
  }

  // Ground-truth second-order factorization model over user + attribute
  // features, scaled so scores mostly stay inside the rating scale.
  const double sigma_w_user = 0.40;
  const double sigma_w_attr = 0.35;
  const double sigma_v = std::sqrt(0.45 / std::sqrt(static_cast<double>(spec.latent_dim)));
  const double w0 = spec.scale.mid();
  std::vector<double> w_user(static_cast<std::size_t>(spec.users));
  std::vector<double> w_attr(static_cast<std::size_t>(spec.attrs));
  for (auto& w : w_user) w = sigma_w_user * normal(rng);
  for (auto& w : w_attr) w = sigma_w_attr * normal(rng);
  const std::size_t kf = static_cast<std::size_t>(spec.latent_dim);
  std::vector<double> v_user(static_cast<std::size_t>(spec.users) * kf);
  std::vector<double> v_attr(static_cast<std::size_t>(spec.attrs) * kf);
  for (auto& v : v_user) v = sigma_v * normal(rng);
  for (auto& v : v_attr) v = sigma_v * normal(rng);

  // Observation propensities; p(observe) = density^(1/(a_u*b_i)) keeps
  // density=1 exhaustive while skewing sparser corpora.
  std::vector<double> prop_user(static_cast<std::size_t>(spec.users));
  std::vector<double> prop_item(static_cast<std::size_t>(spec.items));
  for (auto& p : prop_user) p = std::exp(0.7 * normal(rng));
  for (auto& p : prop_item) p = std::exp(0.7 * normal(rng));

  std::vector<Rating> ratings;
  for (int u = 0; u < spec.users; ++u) {
    for (int i = 0; i < spec.items; ++i) {
      const double p_obs =
          std::pow(spec.density, 1.0 / (prop_user[static_cast<std::size_t>(u)] *
                                        prop_item[static_cast<std::size_t>(i)]));
      if (unit(rng) >= p_obs) continue;
      const auto& set = item_attrs[static_cast<std::size_t>(i)];
      double score = w0 + w_user[static_cast<std::size_t>(u)];
      for (int a : set) score += w_attr[static_cast<std::size_t>(a)];
      for (std::size_t f = 0; f < kf; ++f) {
        double sum = v_user[static_cast<std::size_t>(u) * kf + f];
        double sum_sq = sum * sum;
        for (int a : set) {
          const double va = v_attr[static_cast<std::size_t>(a) * kf + f];
          sum += va;
          sum_sq += va * va;
        }
        score += 0.5 * (sum * sum - sum_sq);
      }
      if (spec.noise_std > 0.0) score += spec.noise_std * normal(rng);
      ratings.push_back({u, i, std::clamp(score, spec.scale.min, spec.scale.max)});
    }
  }

  std::vector<std::string> user_ids(static_cast<std::size_t>(spec.users));
  std::vector<std::string> item_ids(static_cast<std::size_t>(spec.items));
  std::vector<std::string> attr_ids(static_cast<std::size_t>(spec.attrs));
  for (int u = 0; u < spec.users; ++u) user_ids[static_cast<std::size_t>(u)] = "u" + std::to_string(u);
  for (int i = 0; i < spec.items; ++i) item_ids[static_cast<std::size_t>(i)] = "i" + std::to_string(i);
  for (int a = 0; a < spec.attrs; ++a) attr_ids[static_cast<std::size_t>(a)] = "a" + std::to_string(a);

  return RatingStore::build(std::move(user_ids), std::move(item_ids), std::move(attr_ids),
                            std::move(ratings), std::move(item_attrs), spec.scale);
}

void write_corpus(const RatingStore& store, const std::string& ratings_path,
                  const std::string& attributes_path) {
  std::ofstream rf(ratings_path);
  if (!rf) throw ValidationError("cannot write ratings file: " + ratings_path);
  std::vector<Rating> sorted = store.ratings();
  std::sort(sorted.begin(), sorted.end(), [](const Rating& a, const Rating& b) {
    return std::tie(a.user, a.item) < std::tie(b.user, b.item);
  });
  char buf[64];
  for (const Rating& r : sorted) {
    std::snprintf(buf, sizeof(buf), "%.17g", r.value);
    rf << store.user_id(r.user) << ',' << store.item_id(r.item) << ',' << buf << '\n';
  }

  std::ofstream af(attributes_path);
  if (!af) throw ValidationError("cannot write attributes file: " + attributes_path);
  for (int i = 0; i < store.num_items(); ++i)
    for (int a : store.item_attrs(i)) af << store.item_id(i) << ',' << store.attr_id(a) << '\n';
}

Split make_split(const RatingStore& store, double test_fraction, std::uint64_t seed) {
  if (store.num_items() < 2 || store.num_users() < 2)
    throw ValidationError("split needs at least 2 items and 2 users");
  if (!(test_fraction > 0.0) || !(test_fraction < 1.0))
    throw ValidationError("test_fraction must be in (0,1)");

  const int ni = store.num_items();
  const int nu = store.num_users();
  // round-half-up
  const int n_test = static_cast<int>(std::floor(test_fraction * ni + 0.5));

  Rng rng = make_rng(derive_seed(seed, 0x5117));
  std::vector<int> items(static_cast<std::size_t>(ni));
  for (int i = 0; i < ni; ++i) items[static_cast<std::size_t>(i)] = i;
  std::shuffle(items.begin(), items.end(), rng);

  Split split;
  split.seed = seed;
  split.test_items.assign(items.begin(), items.begin() + n_test);
  split.train_items.assign(items.begin() + n_test, items.end());
  std::sort(split.test_items.begin(), split.test_items.end());
  std::sort(split.train_items.begin(), split.train_items.end());

  std::vector<int> users(static_cast<std::size_t>(nu));
  for (int u = 0; u < nu; ++u) users[static_cast<std::size_t>(u)] = u;
  std::shuffle(users.begin(), users.end(), rng);
  const int n_active = (nu + 1) / 2;
  split.active_users.assign(users.begin(), users.begin() + n_active);
  split.prediction_users.assign(users.begin() + n_active, users.end());
  std::sort(split.active_users.begin(), split.active_users.end());
  std::sort(split.prediction_users.begin(), split.prediction_users.end());

  split.test_mask_.assign(static_cast<std::size_t>(ni), 0);
  for (int i : split.test_items) split.test_mask_[static_cast<std::size_t>(i)] = 1;
  split.active_mask_.assign(static_cast<std::size_t>(nu), 0);
  for (int u : split.active_users) split.active_mask_[static_cast<std::size_t>(u)] = 1;
  return split;
}

BinaryMatrix::BinaryMatrix(int rows, int cols, std::vector<std::vector<int>> row_items)
    : rows_(rows), cols_(cols), row_items_(std::move(row_items)),
      col_counts_(static_cast<std::size_t>(cols), 0) {
  for (auto& row : row_items_) {
    std::sort(row.begin(), row.end());
    for (int c : row) {
      ++col_counts_[static_cast<std::size_t>(c)];
      ++total_ones_;
    }
  }
}

bool BinaryMatrix::contains(int row, int col) const {
  const auto& r = row_items_[static_cast<std::size_t>(row)];
  return std::binary_search(r.begin(), r.end(), col);
}

BinaryMatrix binarize(const RatingStore& store) {
  std::vector<std::vector<int>> rows(static_cast<std::size_t>(store.num_users()));
  for (int u = 0; u < store.num_users(); ++u) {
    const auto& rated = store.user_ratings(u);
    rows[static_cast<std::size_t>(u)].reserve(rated.size());
    for (const auto& [item, value] : rated) rows[static_cast<std::size_t>(u)].push_back(item);
  }
  return BinaryMatrix(store.num_users(), store.num_items(), std::move(rows));
}

FeatureVector encode(int user, std::optional<int> item, std::span<const int> attrs,
                     const FeatureLayout& layout) {
  if (user < 0 || user >= layout.num_users) throw ContractError("encode: user index out of range");
  if (layout.with_item() && !item.has_value())
    throw ContractError("encode: layout has an item block but no item was given");
  if (!layout.with_item() && item.has_value())
    throw ContractError("encode: item given but layout has no item block");

  FeatureVector x;
  x.entries.reserve(2 + attrs.size());
  x.entries.emplace_back(user, 1.0);
  if (item.has_value()) {
    if (*item < 0 || *item >= layout.num_items)
      throw ContractError("encode: item index out of range");
    x.entries.emplace_back(layout.num_users + *item, 1.0);
  }
  const int attr_base = layout.num_users + layout.num_items;
  for (int a : attrs) {
    if (a < 0 || a >= layout.num_attrs) throw ContractError("encode: attribute index out of range");
    x.entries.emplace_back(attr_base + a, 1.0);
  }
  return x;
}

}  // namespace coldstart
