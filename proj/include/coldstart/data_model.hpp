#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace coldstart {

struct RatingScale {
  double min = 1.0;
  double max = 5.0;
  double step = 0.5;  // informational; bounds are what get enforced

  double mid() const { return 0.5 * (min + max); }
  bool contains(double r) const { return r >= min && r <= max; }

  bool operator==(const RatingScale&) const = default;
};

struct Rating {
  int user;
  int item;
  double value;

  bool operator==(const Rating&) const = default;
};

// Immutable container for the rating matrix R and the item-attribute
// matrix T, with raw-id maps kept for reporting. Built by ingest() or
// generate_synthetic(); safe to share across threads.
class RatingStore {
 public:
  int num_users() const { return static_cast<int>(user_ids_.size()); }
  int num_items() const { return static_cast<int>(item_ids_.size()); }
  int num_attrs() const { return static_cast<int>(attr_ids_.size()); }

  const std::vector<Rating>& ratings() const { return ratings_; }
  // Per-user (item, value) pairs sorted by item index.
  const std::vector<std::pair<int, double>>& user_ratings(int user) const {
    return by_user_[static_cast<std::size_t>(user)];
  }
  // Per-item (user, value) pairs sorted by user index.
  const std::vector<std::pair<int, double>>& item_ratings(int item) const {
    return by_item_[static_cast<std::size_t>(item)];
  }
  // Sorted attribute indices of one item (row of T).
  const std::vector<int>& item_attrs(int item) const {
    return attrs_[static_cast<std::size_t>(item)];
  }

  const RatingScale& scale() const { return scale_; }
  const std::string& user_id(int u) const { return user_ids_[static_cast<std::size_t>(u)]; }
  const std::string& item_id(int i) const { return item_ids_[static_cast<std::size_t>(i)]; }
  const std::string& attr_id(int a) const { return attr_ids_[static_cast<std::size_t>(a)]; }

  bool operator==(const RatingStore& other) const = default;

  // Validates invariants and builds the per-user/per-item indexes.
  static RatingStore build(std::vector<std::string> user_ids,
                           std::vector<std::string> item_ids,
                           std::vector<std::string> attr_ids,
                           std::vector<Rating> ratings,
                           std::vector<std::vector<int>> item_attrs,
                           RatingScale scale);

 private:
  std::vector<std::string> user_ids_, item_ids_, attr_ids_;
  std::vector<Rating> ratings_;
  std::vector<std::vector<int>> attrs_;  // item -> sorted attr indices
  std::vector<std::vector<std::pair<int, double>>> by_user_, by_item_;
  RatingScale scale_;
};

// CSV loaders: ratings `user_id,item_id,rating[,timestamp]` (optional header),
// attributes `item_id,attr_id`. Raw ids map to dense indices in first-seen
// order, ratings file first.
RatingStore ingest(const std::string& ratings_path, const std::string& attributes_path,
                   RatingScale scale = {});

struct SyntheticSpec {
  int users = 300;
  int items = 200;
  int attrs = 50;
  int latent_dim = 4;
  double density = 0.05;
  double noise_std = 0.2;
  std::uint64_t seed = 7;
  RatingScale scale = {};
};

// Seeded corpus with FM-form ground truth and skewed observation propensity
// per user and item, so willingness models have something to find.
RatingStore generate_synthetic(const SyntheticSpec& spec);

// Writes the two-file CSV corpus format back out (ratings sorted by
// (user,item), attributes by (item,attr)).
void write_corpus(const RatingStore& store, const std::string& ratings_path,
                  const std::string& attributes_path);

struct Split {
  std::vector<int> train_items, test_items;       // disjoint, cover all items
  std::vector<int> active_users, prediction_users;  // halves, |diff| <= 1
  std::uint64_t seed = 0;

  bool is_test_item(int item) const { return test_mask_[static_cast<std::size_t>(item)]; }
  bool is_active_user(int user) const { return active_mask_[static_cast<std::size_t>(user)]; }

  std::vector<char> test_mask_, active_mask_;  // filled by make_split
};

// 80/20-style item holdout plus an active/prediction user half split.
// |test_items| = round-half-up(test_fraction * |I|).
Split make_split(const RatingStore& store, double test_fraction, std::uint64_t seed);

// Sparse binary indicator R01: one iff a rating exists.
class BinaryMatrix {
 public:
  BinaryMatrix() = default;
  BinaryMatrix(int rows, int cols, std::vector<std::vector<int>> row_items);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool contains(int row, int col) const;
  const std::vector<int>& row_entries(int row) const {
    return row_items_[static_cast<std::size_t>(row)];
  }
  long long ones_in_column(int col) const { return col_counts_[static_cast<std::size_t>(col)]; }
  long long total_ones() const { return total_ones_; }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<std::vector<int>> row_items_;  // sorted column indices per row
  std::vector<long long> col_counts_;
  long long total_ones_ = 0;
};

BinaryMatrix binarize(const RatingStore& store);

// Feature blocks are laid out user | item (optional) | attributes.
struct FeatureLayout {
  int num_users = 0;
  int num_items = 0;  // 0 means no item block
  int num_attrs = 0;

  bool with_item() const { return num_items > 0; }
  int dim() const { return num_users + num_items + num_attrs; }

  bool operator==(const FeatureLayout&) const = default;
};

struct FeatureVector {
  std::vector<std::pair<int, double>> entries;  // sorted by index

  bool operator==(const FeatureVector&) const = default;
};

// One-hot user, optional one-hot item, then the binary attribute row.
FeatureVector encode(int user, std::optional<int> item, std::span<const int> attrs,
                     const FeatureLayout& layout);

}  // namespace coldstart
