// Copyright 2026 The GeoInfer Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <doctest.h>

#include "geoinfer/error.hpp"
#include "geoinfer/movement.hpp"
#include "geoinfer/random.hpp"
#include "geoinfer/synth.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace geoinfer {
namespace {

using testing::at;
using testing::pointers;
using testing::us;

// `miles` north of (lat, lon) along the meridian.
GeoPoint north(double lat, double lon, double miles) {
  return {lat + miles / kEarthRadiusMiles * 180.0 / std::numbers::pi, lon};
}

TEST_CASE("haversine known distances") {
  const GeoPoint nyc{40.7128, -74.0060};
  const GeoPoint la{34.0522, -118.2437};
  // Closed-form haversine with R = 3958.8 gives 2445.59 for these points.
  CHECK(haversine_miles(nyc, la) == doctest::Approx(2445.5866).epsilon(1e-7));
  CHECK(haversine_miles(nyc, la) ==
        doctest::Approx(oracle::great_circle_miles(nyc, la)).epsilon(1e-9));
  CHECK(haversine_miles(nyc, nyc) == 0.0);
  CHECK(haversine_miles({0, 0}, {0, 180}) ==
        doctest::Approx(std::numbers::pi * kEarthRadiusMiles).epsilon(1e-9));
  CHECK(haversine_miles(nyc, la) == haversine_miles(la, nyc));
}

TEST_CASE("haversine agrees with the chord oracle") {
  Rng rng(100);
  for (int i = 0; i < 100; ++i) {
    const GeoPoint a{rng.uniform(-89, 89), rng.uniform(-180, 180)};
    const GeoPoint b{rng.uniform(-89, 89), rng.uniform(-180, 180)};
    const double want = oracle::great_circle_miles(a, b);
    CHECK(std::abs(haversine_miles(a, b) - want) <= 1e-3 * want + 1e-9);
  }
}

TEST_CASE("distance buckets") {
  CHECK(bucket_for(0) == DistanceBucket::k0To10);
  CHECK(bucket_for(10) == DistanceBucket::k0To10);
  CHECK(bucket_for(10.5) == DistanceBucket::k11To100);
  CHECK(bucket_for(100) == DistanceBucket::k11To100);
  CHECK(bucket_for(100.01) == DistanceBucket::k101To500);
  CHECK(bucket_for(500) == DistanceBucket::k101To500);
  CHECK(bucket_for(501) == DistanceBucket::kOver500);
  CHECK(to_string(DistanceBucket::kOver500) == "500+");
}

TEST_CASE("movement stats over collinear points") {
  const std::vector<GeoPoint> g = {north(30, -90, 0), north(30, -90, 10), north(30, -90, 20)};
  const MovementStats s = movement_stats("u", g);
  CHECK(s.n_geotagged == 3);
  CHECK(s.avg_pairwise_miles == doctest::Approx(40.0 / 3.0).epsilon(1e-9));
  CHECK(s.max_pairwise_miles == doctest::Approx(20.0).epsilon(1e-9));
  CHECK(s.bucket_avg == DistanceBucket::k11To100);
  CHECK(s.bucket_max == DistanceBucket::k11To100);
  CHECK_FALSE(label_traveling(s));
}

TEST_CASE("fewer than two geotags means no movement") {
  const std::vector<GeoPoint> one = {{10, 10}};
  const MovementStats s = movement_stats("u", one);
  CHECK(s.avg_pairwise_miles == 0.0);
  CHECK(s.max_pairwise_miles == 0.0);
  CHECK(movement_stats("v", std::vector<GeoPoint>{}).n_geotagged == 0);
}

TEST_CASE("traveling means strictly above the threshold") {
  MovementStats s;
  s.max_pairwise_miles = 100.0;
  CHECK_FALSE(label_traveling(s));
  s.max_pairwise_miles = std::nextafter(100.0, 200.0);
  CHECK(label_traveling(s));
  s.max_pairwise_miles = 99.0;
  CHECK_FALSE(label_traveling(s));
  CHECK(label_traveling(s, 50.0));
}

TEST_CASE("movement stats invariants") {
  Rng rng(55);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<GeoPoint> g;
    const std::size_t n = rng.below(8);
    for (std::size_t i = 0; i < n; ++i) g.push_back({rng.uniform(25, 49), rng.uniform(-124, -67)});
    const MovementStats s = movement_stats("u", g);
    CHECK(s.max_pairwise_miles >= s.avg_pairwise_miles);
    CHECK(s.avg_pairwise_miles >= 0.0);
    CHECK(s.bucket_max == bucket_for(s.max_pairwise_miles));
    CHECK(s.bucket_avg == bucket_for(s.avg_pairwise_miles));
    double max = 0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      for (std::size_t j = i + 1; j < g.size(); ++j) max = std::max(max, haversine_miles(g[i], g[j]));
    }
    CHECK(s.max_pairwise_miles == doctest::Approx(max));
  }
}

TEST_CASE("movement report format") {
  const std::vector<GeoPoint> g = {north(30, -90, 0), north(30, -90, 10), north(30, -90, 20)};
  const std::vector<MovementStats> rows = {movement_stats("u1", g)};
  std::ostringstream out;
  write_movement_report(out, rows);
  CHECK(out.str() ==
        "user_id\tn_geotagged\tavg_miles\tmax_miles\tbucket_avg\tbucket_max\n"
        "u1\t3\t13.333\t20.000\t11-100\t11-100\n");
}

TEST_CASE("time spread") {
  // Day 1 all at 10h, day 2 all at 10h: no spread.
  std::vector<Timestamp> same = {at("2013-01-01T10:00:00Z"), at("2013-01-02T10:05:00Z")};
  for (double v : time_spread(same)) CHECK(v == doctest::Approx(0.0));
  // Day 1 at 10h, day 2 at 11h: shares 1/0 and 0/1, population std 0.5.
  std::vector<Timestamp> moved = {at("2013-01-01T10:00:00Z"), at("2013-01-02T11:00:00Z")};
  const auto s = time_spread(moved);
  CHECK(s[10] == doctest::Approx(0.5));
  CHECK(s[11] == doctest::Approx(0.5));
  CHECK(s[3] == doctest::Approx(0.0));
}

TEST_CASE("travel classifier finds planted travelers") {
  SynthSpec spec;
  spec.seed = 2;
  spec.users_per_city = 8;
  spec.messages_per_user = 80;
  spec.traveler_fraction = 0.25;
  const auto profiles = us().profiles(synthesize_corpus(spec, us().taxonomy).users);
  const auto all = pointers(profiles);
  int tp = 0, fp = 0, fn = 0;
  TravelModel m;
  std::vector<const UserProfile*> test;
  for (const Fold& f : split_folds(all.size(), 5, 1)) {
    std::vector<const UserProfile*> train;
    for (std::size_t i : f.train) train.push_back(all[i]);
    m = train_travel_model(train);
    CHECK(m.weights.size() == m.vocabulary.size() + kTimeSpreadSlots);
    test.clear();
    for (std::size_t i : f.test) test.push_back(all[i]);
    for (const UserProfile* u : test) {
      const bool truth = label_traveling(movement_stats(u->user_id, u->geotags));
      const bool got = m.is_traveling(*u);
      tp += truth && got;
      fp += !truth && got;
      fn += truth && !got;
      const double p = m.probability(*u);
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
    }
  }
  CHECK(2.0 * tp / (2.0 * tp + fp + fn) >= 0.75);

  const TravelSplit split = filter_travelers(test, m);
  CHECK(split.kept.size() + split.removed.size() == test.size());
  for (std::size_t i : split.removed) CHECK(m.is_traveling(*test[i]));
  for (std::size_t i : split.kept) CHECK_FALSE(m.is_traveling(*test[i]));
}

TEST_CASE("travel training needs both classes") {
  SynthSpec spec;
  spec.users_per_city = 2;
  spec.messages_per_user = 20;
  const auto profiles = us().profiles(synthesize_corpus(spec, us().taxonomy).users);
  CHECK_THROWS_AS(train_travel_model(pointers(profiles)), DataError);
}

}  // namespace
}  // namespace geoinfer
