#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <set>

#include "coldstart/common.hpp"
#include "coldstart/data_model.hpp"

using namespace coldstart;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
  const std::string path = "tmp_" + name;
  std::ofstream f(path);
  f << content;
  return path;
}

}  // namespace

TEST_CASE("ingest parses a minimal corpus") {
  const auto ratings = write_temp("min_ratings.csv", "u1,i1,4.0\n");
  const auto attrs = write_temp("min_attrs.csv", "");
  const RatingStore store = ingest(ratings, attrs);
  CHECK(store.num_users() == 1);
  CHECK(store.num_items() == 1);
  CHECK(store.num_attrs() == 0);
  CHECK(store.ratings().size() == 1);
  CHECK(store.ratings()[0].value == 4.0);
  CHECK(store.user_id(0) == "u1");
}

TEST_CASE("ingest skips a header line and a timestamp column") {
  const auto ratings =
      write_temp("hdr_ratings.csv", "user_id,item_id,rating,timestamp\nu1,i1,4.0,123456\nu2,i1,2.5,9\n");
  const auto attrs = write_temp("hdr_attrs.csv", "i1,genre_action\ni1,genre_drama\n");
  const RatingStore store = ingest(ratings, attrs);
  CHECK(store.num_users() == 2);
  CHECK(store.num_items() == 1);
  CHECK(store.num_attrs() == 2);
  CHECK(store.item_attrs(0) == std::vector<int>{0, 1});
}

TEST_CASE("ingest rejects duplicates, bad ratings and malformed lines") {
  const auto attrs = write_temp("err_attrs.csv", "");
  SUBCASE("duplicate pair") {
    const auto ratings = write_temp("dup_ratings.csv", "u1,i1,4.0\nu1,i1,3.0\n");
    CHECK_THROWS_WITH_AS(ingest(ratings, attrs), doctest::Contains("duplicate rating"),
                         ValidationError);
  }
  SUBCASE("rating outside the scale") {
    const auto ratings = write_temp("oob_ratings.csv", "u1,i1,9.5\n");
    CHECK_THROWS_AS(ingest(ratings, attrs), ValidationError);
  }
  SUBCASE("malformed line reports its number") {
    const auto ratings = write_temp("bad_ratings.csv", "u1,i1,4.0\nu2,i1\n");
    try {
      ingest(ratings, attrs);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      CHECK(e.line_number == 2);
    }
  }
  SUBCASE("non-numeric rating past the first line") {
    const auto ratings = write_temp("nan_ratings.csv", "u1,i1,4.0\nu2,i1,abc\n");
    CHECK_THROWS_AS(ingest(ratings, attrs), ParseError);
  }
  SUBCASE("missing file") {
    CHECK_THROWS_AS(ingest("definitely_missing.csv", attrs), ValidationError);
  }
}

TEST_CASE("synthetic generation is deterministic") {
  SyntheticSpec spec;
  spec.users = 300;
  spec.items = 200;
  spec.attrs = 50;
  spec.latent_dim = 4;
  spec.density = 0.05;
  spec.noise_std = 0.2;
  spec.seed = 7;
  const RatingStore a = generate_synthetic(spec);
  const RatingStore b = generate_synthetic(spec);
  CHECK(a == b);
  CHECK(a.num_users() == 300);
  CHECK(a.ratings().size() > 0);
}

TEST_CASE("synthetic generation validates density and handles one attribute") {
  SyntheticSpec spec;
  spec.users = 5;
  spec.items = 6;
  spec.attrs = 1;
  spec.density = 0.0;
  CHECK_THROWS_AS(generate_synthetic(spec), ValidationError);
  spec.density = 1.0;
  const RatingStore store = generate_synthetic(spec);
  for (int i = 0; i < store.num_items(); ++i) CHECK(store.item_attrs(i) == std::vector<int>{0});
  // density 1 observes every cell
  CHECK(store.ratings().size() == 30);
}

TEST_CASE("synthetic corpora round-trip through the CSV format") {
  SyntheticSpec spec;
  spec.users = 12;
  spec.items = 9;
  spec.attrs = 7;
  spec.density = 0.4;
  spec.seed = 3;
  const RatingStore store = generate_synthetic(spec);
  write_corpus(store, "tmp_rt_ratings.csv", "tmp_rt_attrs.csv");
  const RatingStore back = ingest("tmp_rt_ratings.csv", "tmp_rt_attrs.csv");
  CHECK(back.ratings().size() == store.ratings().size());
  CHECK(back.num_attrs() == store.num_attrs());
}

TEST_CASE("make_split honours the rounding rule and determinism") {
  SyntheticSpec spec;
  spec.users = 10;
  spec.items = 10;
  spec.attrs = 3;
  spec.density = 0.5;
  const RatingStore store = generate_synthetic(spec);

  const Split s = make_split(store, 0.2, 11);
  CHECK(s.test_items.size() == 2);
  CHECK(s.train_items.size() == 8);
  CHECK(s.active_users.size() == 5);
  CHECK(s.prediction_users.size() == 5);

  const Split again = make_split(store, 0.2, 11);
  CHECK(s.test_items == again.test_items);
  CHECK(s.active_users == again.active_users);

  // every rating lands in exactly one side of the item split
  for (const Rating& r : store.ratings())
    CHECK((s.is_test_item(r.item) ||
           std::find(s.train_items.begin(), s.train_items.end(), r.item) != s.train_items.end()));
}

TEST_CASE("make_split round-half-up matches the 9998-item corpus") {
  std::vector<std::string> items(9998);
  for (std::size_t i = 0; i < items.size(); ++i) items[i] = "i" + std::to_string(i);
  const RatingStore store = RatingStore::build(
      {"u0", "u1"}, std::move(items), {}, {}, std::vector<std::vector<int>>(9998), {});
  const Split s = make_split(store, 0.2, 1);
  CHECK(s.test_items.size() == 2000);
}

TEST_CASE("make_split validates its inputs") {
  SyntheticSpec spec;
  spec.users = 1;
  spec.items = 5;
  spec.attrs = 2;
  spec.density = 1.0;
  const RatingStore store = generate_synthetic(spec);
  CHECK_THROWS_AS(make_split(store, 0.2, 1), ValidationError);
}

TEST_CASE("binarize puts ones exactly at rated cells") {
  const RatingStore store = RatingStore::build(
      {"a", "b"}, {"x", "y", "z"}, {}, {{0, 0, 4.5}, {1, 2, 1.0}},
      std::vector<std::vector<int>>(3), {});
  const BinaryMatrix r01 = binarize(store);
  CHECK(r01.contains(0, 0));
  CHECK(r01.contains(1, 2));
  CHECK_FALSE(r01.contains(0, 1));
  CHECK_FALSE(r01.contains(1, 0));
  CHECK(r01.total_ones() == 2);

  const RatingStore empty = RatingStore::build({"a"}, {"x"}, {}, {},
                                               std::vector<std::vector<int>>(1), {});
  CHECK(binarize(empty).total_ones() == 0);
}

TEST_CASE("encode lays blocks out as user|item|attributes") {
  SUBCASE("no item block") {
    const FeatureLayout layout{4, 0, 3};
    const std::vector<int> attrs = {0, 2};  // attribute row (1,0,1)
    const FeatureVector x = encode(0, std::nullopt, attrs, layout);
    const FeatureVector expected{{{0, 1.0}, {4, 1.0}, {6, 1.0}}};
    CHECK(x == expected);
  }
  SUBCASE("with item block") {
    const FeatureLayout layout{4, 2, 3};
    const FeatureVector x = encode(3, 1, {}, layout);
    const FeatureVector expected{{{3, 1.0}, {5, 1.0}}};
    CHECK(x == expected);
  }
  SUBCASE("purity") {
    const FeatureLayout layout{4, 0, 3};
    const std::vector<int> attrs = {1};
    CHECK(encode(2, std::nullopt, attrs, layout) == encode(2, std::nullopt, attrs, layout));
  }
  SUBCASE("missing item is a contract error") {
    const FeatureLayout layout{4, 2, 3};
    CHECK_THROWS_AS(encode(0, std::nullopt, {}, layout), ContractError);
  }
}

TEST_CASE("encode length and sparsity bookkeeping") {
  SyntheticSpec spec;
  spec.users = 9;
  spec.items = 7;
  spec.attrs = 11;
  spec.density = 0.6;
  const RatingStore store = generate_synthetic(spec);
  const FeatureLayout with_item{store.num_users(), store.num_items(), store.num_attrs()};
  CHECK(with_item.dim() == 9 + 7 + 11);
  for (int i = 0; i < store.num_items(); ++i) {
    const FeatureVector x = encode(3, i, store.item_attrs(i), with_item);
    CHECK(x.entries.size() == 2 + store.item_attrs(i).size());
    for (const auto& [index, value] : x.entries) {
      CHECK(index < with_item.dim());
      CHECK(value == 1.0);
    }
  }
}
