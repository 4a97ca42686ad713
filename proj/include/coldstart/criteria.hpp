#pragma once

#include <span>
#include <string>
#include <vector>

#include "coldstart/data_model.hpp"
#include "coldstart/fm.hpp"
#include "coldstart/matrix.hpp"

namespace coldstart {

// The four selection signals for one new item over the active-selection
// pool: willingness p, potential ratings, pairwise diversity D, objectivity
// o and pairwise similarity S. `calibrated` marks the standardized form.
struct CriteriaBundle {
  std::vector<int> users;  // pool, ordered
  std::vector<double> p;
  std::vector<double> potential;
  std::vector<double> o;
  Matrix d;
  Matrix s;
  bool calibrated = false;
};

// p(m): probability that pool user m would rate an item with these
// attributes, from the rate/no-rate classification model.
std::vector<double> willingness(const FmModel& clf, std::span<const int> users,
                                std::span<const int> item_attrs);

// Attribute-only rating estimates from the no-item regression model.
std::vector<double> potential_ratings(const FmModel& reg_no_item, std::span<const int> users,
                                      std::span<const int> item_attrs);

// D(m,n) = |potential(m) - potential(n)|^(1/2), zero diagonal.
Matrix diversity_matrix(std::span<const double> potential);

// o(m) = (1/(ln|I_m|+1)) * (1/|I_m|) * sum_i (R(m,i) - item_mean(i))^2 over
// training items. Users with no training history get the maximum computed
// value (least preferred).
std::vector<double> objectivity(const RatingStore& store, const Split& split,
                                std::span<const int> users);

// Cosine similarity of rating rows restricted to training items; zero
// diagonal, zero-norm rows are similar to nobody.
Matrix similarity_matrix(const RatingStore& store, const Split& split,
                         std::span<const int> users);

namespace serial {
Matrix diversity_matrix(std::span<const double> potential);
Matrix similarity_matrix(const RatingStore& store, const Split& split,
                         std::span<const int> users);
}

// Standardizes p and o over their entries and D and S over all n^2 entries,
// then divides D and S by the pool size (or `divisor` when positive) and
// re-zeroes their diagonals. A structure with zero spread becomes all zeros.
CriteriaBundle calibrate(CriteriaBundle bundle, double divisor = 0.0);

// Debug dump: <prefix>{p,potential,o,D,S}.txt, row-major, %.12g.
void dump_bundle(const CriteriaBundle& bundle, const std::string& prefix);

}  // namespace coldstart
