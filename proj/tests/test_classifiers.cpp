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
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include <doctest.h>

#include "geoinfer/classifiers.hpp"
#include "geoinfer/error.hpp"
#include "geoinfer/random.hpp"
#include "oracles.hpp"
#include "support.hpp"

namespace geoinfer {
namespace {

using testing::at;
using testing::msg;

LocationTaxonomy small_taxonomy() {
  return LocationTaxonomy::build(
      {{"boston_ma", "Boston", "MA", {42.3601, -71.0589}},
       {"cambridge_ma", "Cambridge", "MA", {42.3736, -71.1097}},
       {"new_york_ny", "New York", "NY", {40.7128, -74.0060}},
       {"chicago_il", "Chicago", "IL", {41.8781, -87.6298}},
       {"dallas_tx", "Dallas", "TX", {32.7767, -96.7970}},
       {"los_angeles_ca", "Los Angeles", "CA", {34.0522, -118.2437}}},
      {{"MA", "eastern", "northeast", "region_01"},
       {"NY", "eastern", "northeast", "region_02"},
       {"IL", "central", "midwest", "region_05"},
       {"TX", "central", "south", "region_06"},
       {"CA", "pacific", "west", "region_09"}});
}

std::vector<TermDocument> documents(const oracle::NbCase& c) {
  std::vector<TermDocument> out;
  for (std::size_t i = 0; i < c.docs.size(); ++i) out.push_back({c.labels[i], &c.docs[i]});
  return out;
}

TEST_CASE("naive Bayes matches the brute-force posterior") {
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    const oracle::NbCase c = oracle::random_nb_case(rng);
    const auto docs = documents(c);
    const TermModel m = train_term_model(docs, c.vocabulary, Granularity::kCity, Member::kWords);
    const Classification got = classify_term_model(m, c.query);
    const oracle::NbAnswer want = oracle::brute_force_nb(c, 1.0);
    if (want.matching == 0) {
      // No training user shares a query term: no evidence, so abstain.
      CHECK(got.abstained());
      continue;
    }
    REQUIRE(got.prediction);
    REQUIRE(m.labels == want.labels);
    REQUIRE(got.posterior.size() == want.posterior.size());
    double sum = 0;
    for (std::size_t i = 0; i < want.posterior.size(); ++i) {
      CHECK(std::abs(got.posterior[i] - want.posterior[i]) <= 1e-9);
      sum += got.posterior[i];
    }
    CHECK(std::abs(sum - 1.0) <= 1e-9);
    CHECK(got.prediction->label == want.argmax);
    CHECK(got.matching_set_size == want.matching);
    CHECK(got.prediction->weight == 1.0 / static_cast<double>(want.matching));
  }
}

TEST_CASE("naive Bayes by hand") {
  // a: {sun: 2, surf: 1}; b: {snow: 1}. alpha 1, vocabulary {snow, sun, surf}.
  // P(sun|a) = 3/6, P(sun|b) = 1/4; priors 1/2 each.
  std::vector<TermBag> bags = {{{"sun", 2}, {"surf", 1}}, {{"snow", 1}}};
  std::vector<TermDocument> docs = {{"a", &bags[0]}, {"b", &bags[1]}};
  const TermModel m =
      train_term_model(docs, {"snow", "sun", "surf"}, Granularity::kCity, Member::kWords);
  const Classification c = classify_term_model(m, {{"sun", 1}});
  REQUIRE(c.prediction);
  CHECK(c.prediction->label == "a");
  CHECK(c.posterior[0] == doctest::Approx(0.5 / 0.75).epsilon(1e-12));
  CHECK(c.prediction->weight == 1.0);  // only a's documents contain "sun"
  CHECK(classify_term_model(m, {{"rain", 4}}).abstained());
}

TEST_CASE("term model parameters normalize") {
  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const oracle::NbCase c = oracle::random_nb_case(rng);
    const auto docs = documents(c);
    const TermModel m =
        train_term_model(docs, c.vocabulary, Granularity::kCity, Member::kWords, 0.5);
    double prior = 0;
    for (double lp : m.log_priors) prior += std::exp(lp);
    CHECK(std::abs(prior - 1.0) <= 1e-9);
    for (const auto& row : m.log_likelihoods) {
      double s = 0;
      for (double ll : row) s += std::exp(ll);
      CHECK(std::abs(s - 1.0) <= 1e-9);
    }
  }
}

TEST_CASE("term model rejects empty input") {
  std::vector<TermBag> bags = {{{"a", 1}}};
  std::vector<TermDocument> docs = {{"x", &bags[0]}};
  CHECK_THROWS_AS(train_term_model(docs, {}, Granularity::kCity, Member::kWords), DataError);
  CHECK_THROWS_AS(train_term_model({}, {"a"}, Granularity::kCity, Member::kWords), DataError);
}

TEST_CASE("scaling counts scales the log-odds") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    // One document per label gives equal priors.
    std::vector<TermBag> bags(2);
    std::set<std::string> vocab;
    for (int t = 0; t < 5; ++t) {
      const std::string term = "t" + std::to_string(t);
      vocab.insert(term);
      for (TermBag& b : bags) {
        if (rng.bernoulli(0.6)) b[term] = 1 + static_cast<int>(rng.below(3));
      }
    }
    std::vector<TermDocument> docs = {{"a", &bags[0]}, {"b", &bags[1]}};
    const TermModel m = train_term_model(docs, vocab, Granularity::kCity, Member::kWords);
    TermBag q;
    q["t" + std::to_string(rng.below(5))] = 1;
    q["t" + std::to_string(rng.below(5))] += 1;
    const Classification base = classify_term_model(m, q);
    if (base.abstained()) continue;
    const double odds = std::log(base.posterior[0] / base.posterior[1]);
    for (int k = 2; k <= 4; ++k) {
      TermBag scaled = q;
      for (auto& [t, n] : scaled) n *= k;
      const Classification s = classify_term_model(m, scaled);
      CHECK(std::log(s.posterior[0] / s.posterior[1]) ==
            doctest::Approx(k * odds).epsilon(1e-9));
      if (std::abs(odds) > 1e-12) CHECK(s.prediction->label == base.prediction->label);
    }
  }
}

TEST_CASE("five-city matching set gives strength 0.2") {
  const std::vector<std::string> cities = {"New York", "Los Angeles", "Chicago", "Dallas",
                                           "Boston"};
  std::vector<TermBag> bags;
  for (std::size_t i = 0; i < cities.size(); ++i) bags.push_back({{"pizza", 1}, {"x", 1}});
  bags.push_back({{"x", 1}});
  std::vector<TermDocument> docs;
  for (std::size_t i = 0; i < cities.size(); ++i) docs.push_back({cities[i], &bags[i]});
  docs.push_back({"Seattle", &bags.back()});
  const TermModel m = train_term_model(docs, {"pizza", "x"}, Granularity::kCity, Member::kWords);
  const Classification c = classify_term_model(m, {{"pizza", 3}});
  CHECK(c.matching_set_size == 5);
  CHECK(c.prediction->weight == 0.2);
}

TEST_CASE("strength times matching set is one") {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const oracle::NbCase c = oracle::random_nb_case(rng);
    const auto docs = documents(c);
    const TermModel m = train_term_model(docs, c.vocabulary, Granularity::kCity, Member::kWords);
    const Classification got = classify_term_model(m, c.query);
    if (got.abstained()) continue;
    CHECK(got.prediction->weight * static_cast<double>(got.matching_set_size) == 1.0);
  }
}

TEST_CASE("local place heuristic") {
  const LocationTaxonomy tax = small_taxonomy();
  Gazetteer g;
  g.add("boston", {PlaceKind::kCity, "boston_ma"}, tax);
  g.add("cambridge", {PlaceKind::kCity, "cambridge_ma"}, tax);
  g.add("massachusetts", {PlaceKind::kState, "MA"}, tax);
  g.add("dallas", {PlaceKind::kCity, "dallas_tx"}, tax);

  const Classification city = classify_local_place(
      TermBag{{"boston", 2}, {"dallas", 1}}, Granularity::kCity, g, tax);
  REQUIRE(city.prediction);
  CHECK(city.prediction->label == "boston_ma");
  CHECK(city.prediction->weight == 0.5);

  // Projection merges Boston and Cambridge into MA.
  const auto counts = local_place_counts(TermBag{{"boston", 1}, {"cambridge", 1}},
                                         Granularity::kState, g, tax);
  CHECK(counts == std::map<std::string, int>{{"MA", 2}});
  const Classification state = classify_local_place(
      TermBag{{"boston", 1}, {"cambridge", 1}}, Granularity::kState, g, tax);
  CHECK(state.prediction->weight == 1.0);
  CHECK(classify_local_place(TermBag{}, Granularity::kCity, g, tax).abstained());
  CHECK_THROWS_AS(classify_local_place(TermBag{{"boston", 1}}, Granularity::kTimeZone, g, tax),
                  ConfigError);
}

TEST_CASE("heuristic counts equal a recount and strength is reciprocal") {
  const LocationTaxonomy tax = small_taxonomy();
  Rng rng(8);
  const std::vector<std::string> ids = {"boston_ma", "cambridge_ma", "new_york_ny",
                                        "chicago_il", "dallas_tx", "los_angeles_ca"};
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<std::string> venues;
    const std::size_t n = rng.below(8);
    for (std::size_t i = 0; i < n; ++i) venues.push_back(ids[rng.below(ids.size())]);
    for (Granularity g : {Granularity::kCity, Granularity::kState, Granularity::kTimeZone}) {
      std::map<std::string, int> recount;
      for (const std::string& v : venues) ++recount[tax.project(v, g)];
      CHECK(visit_counts(venues, g, tax) == recount);
      const Classification c = classify_visit_history(venues, g, tax);
      if (venues.empty()) {
        CHECK(c.abstained());
        continue;
      }
      REQUIRE(c.prediction);
      CHECK(c.prediction->weight * static_cast<double>(recount.size()) == 1.0);
      int best = 0;
      for (const auto& [label, k] : recount) best = std::max(best, k);
      CHECK(recount.at(c.prediction->label) == best);
      for (const auto& [label, k] : recount) {
        if (k == best) {
          CHECK(label == c.prediction->label);  // smallest label among ties
          break;
        }
      }
    }
  }
}

TEST_CASE("visit history on records skips unknown venues") {
  const LocationTaxonomy tax = small_taxonomy();
  UserRecord u;
  u.user_id = "u";
  Message m1 = msg("checked in");
  m1.venue = Venue{"Boston", "MA"};
  Message m2 = msg("checked in");
  m2.venue = Venue{"Springfield", "MA"};
  u.messages = {m1, m2};
  std::size_t unknown = 0;
  PreResolvedVenues resolver;
  const Classification c =
      classify_visit_history(u, Granularity::kCity, resolver, tax, &unknown);
  CHECK(c.prediction->label == "boston_ma");
  CHECK(unknown == 1);
}

TEST_CASE("slot profile normalizes") {
  std::vector<Timestamp> times;
  for (int i = 0; i < 4; ++i) times.push_back(at("2013-01-05T10:30:00Z"));
  for (int i = 0; i < 6; ++i) times.push_back(at("2013-01-05T00:00:00Z") + std::chrono::hours(i));
  const std::vector<double> p = slot_profile(times, 1);
  CHECK(p.size() == 1440);
  CHECK(p[10 * 60 + 30] == doctest::Approx(0.4));
  CHECK(std::accumulate(p.begin(), p.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(slot_profile(times, 60).size() == 24);
  CHECK(slot_profile(times, 60)[10] == doctest::Approx(0.4));
  CHECK(slot_profile(times, 60)[0] == doctest::Approx(0.1));
  CHECK_THROWS_AS(slot_profile(times, 7), ConfigError);
}

TEST_CASE("slot weights scale with the class profiles") {
  Rng rng(4);
  std::vector<std::vector<double>> profiles(4, std::vector<double>(24));
  for (auto& p : profiles) {
    for (double& v : p) v = rng.uniform();
  }
  const std::vector<double> w = slot_weights(profiles);
  for (auto& p : profiles) {
    for (double& v : p) v *= 3.0;
  }
  const std::vector<double> w3 = slot_weights(profiles);
  for (std::size_t s = 0; s < w.size(); ++s) CHECK(w3[s] == doctest::Approx(3.0 * w[s]));
}

std::vector<Timestamp> diurnal(Rng& rng, int peak_hour, int n) {
  std::vector<Timestamp> out;
  for (int i = 0; i < n; ++i) {
    const int hour = (peak_hour + static_cast<int>(rng.below(5)) + 22) % 24;
    out.push_back(at("2013-01-01T00:00:00Z") + std::chrono::days(rng.below(30)) +
                  std::chrono::hours(hour) + std::chrono::minutes(rng.below(60)));
  }
  return out;
}

TEST_CASE("behavior model separates shifted profiles") {
  Rng rng(12);
  const std::vector<std::string> zones = {"central", "eastern", "mountain", "pacific"};
  const std::vector<int> peaks = {3, 0, 6, 9};
  std::vector<std::vector<Timestamp>> times;
  std::vector<std::string> labels;
  for (std::size_t z = 0; z < zones.size(); ++z) {
    for (int u = 0; u < 30; ++u) {
      times.push_back(diurnal(rng, peaks[z], 40));
      labels.push_back(zones[z]);
    }
  }
  std::vector<BehaviorDocument> docs;
  for (std::size_t i = 0; i < times.size(); ++i) docs.push_back({labels[i], times[i]});
  const BehaviorModel m = train_behavior_model(docs, zones, 60);
  CHECK(m.slot_count() == 24);
  CHECK(m.min_variance > 0.0);
  for (const auto& row : m.variances) {
    for (double v : row) CHECK(v >= m.min_variance);
  }
  int correct = 0;
  for (std::size_t z = 0; z < zones.size(); ++z) {
    for (int u = 0; u < 10; ++u) {
      const Classification c = classify_behavior(m, diurnal(rng, peaks[z], 40));
      REQUIRE(c.prediction);
      CHECK(c.prediction->weight > 0.25);
      CHECK(c.prediction->weight ==
            doctest::Approx(*std::max_element(c.posterior.begin(), c.posterior.end())));
      correct += c.prediction->label == zones[z];
    }
  }
  CHECK(correct >= 36);

  // Scaling weights by c, means by c and variances by c^2 is the same model.
  BehaviorModel scaled = m;
  for (double& w : scaled.slot_weights) w *= 2.5;
  for (auto& row : scaled.means) {
    for (double& v : row) v *= 2.5;
  }
  for (auto& row : scaled.variances) {
    for (double& v : row) v *= 6.25;
  }
  for (int i = 0; i < 20; ++i) {
    const auto t = diurnal(rng, static_cast<int>(rng.below(24)), 1 + static_cast<int>(rng.below(30)));
    CHECK(classify_behavior(scaled, t).prediction->label ==
          classify_behavior(m, t).prediction->label);
  }

  CHECK(classify_behavior(m, std::vector<Timestamp>{}).abstained());
  CHECK_FALSE(classify_behavior(m, std::vector<Timestamp>{at("2013-02-01T05:00:00Z")}).abstained());
}

TEST_CASE("identical zone profiles fall back to the priors") {
  Rng rng(6);
  const std::vector<std::string> zones = {"central", "eastern", "mountain", "pacific"};
  // The same per-user activity everywhere; eastern has the most users.
  std::vector<std::vector<Timestamp>> times;
  std::vector<std::string> labels;
  const std::vector<int> sizes = {2, 5, 2, 2};
  for (std::size_t z = 0; z < zones.size(); ++z) {
    for (int u = 0; u < sizes[z]; ++u) {
      times.push_back({at("2013-01-01T01:00:00Z"), at("2013-01-02T13:00:00Z")});
      labels.push_back(zones[z]);
    }
  }
  std::vector<BehaviorDocument> docs;
  for (std::size_t i = 0; i < times.size(); ++i) docs.push_back({labels[i], times[i]});
  const BehaviorModel m = train_behavior_model(docs, zones, 60);
  for (double w : m.slot_weights) CHECK(w == 0.0);
  const Classification c = classify_behavior(m, diurnal(rng, 7, 10));
  CHECK(c.prediction->label == "eastern");
  CHECK(c.prediction->weight == doctest::Approx(5.0 / 11.0));
}

TEST_CASE("behavior training needs every zone") {
  std::vector<Timestamp> t = {at("2013-01-01T01:00:00Z")};
  std::vector<BehaviorDocument> docs = {{"eastern", t}};
  CHECK_THROWS_AS(train_behavior_model(docs, {"eastern", "pacific"}, 60), DataError);
}

TEST_CASE("member names round-trip") {
  for (Member m : {Member::kWords, Member::kHashtags, Member::kPlaceNames, Member::kSingle,
                   Member::kLocalPlace, Member::kVisitHistory, Member::kBehavior}) {
    CHECK(parse_member(to_string(m)) == m);
  }
  CHECK_THROWS_AS(parse_member("svm"), ConfigError);
}

}  // namespace
}  // namespace geoinfer
