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

#include <map>
#include <string>
#include <vector>

#include <doctest.h>

#include "geoinfer/error.hpp"
#include "geoinfer/eval.hpp"
#include "geoinfer/features.hpp"
#include "geoinfer/movement.hpp"
#include "geoinfer/synth.hpp"
#include "support.hpp"

namespace geoinfer {
namespace {

using testing::us;

SynthSpec small(std::uint64_t seed) {
  SynthSpec s;
  s.seed = seed;
  s.users_per_city = 5;
  s.messages_per_user = 50;
  return s;
}

TEST_CASE("same spec, same corpus") {
  const SyntheticCorpus a = synthesize_corpus(small(3), us().taxonomy);
  const SyntheticCorpus b = synthesize_corpus(small(3), us().taxonomy);
  CHECK(a.users == b.users);
  const SyntheticCorpus c = synthesize_corpus(small(4), us().taxonomy);
  CHECK_FALSE(a.users == c.users);
}

TEST_CASE("generator bookkeeping matches the labels") {
  SynthSpec s = small(6);
  s.traveler_fraction = 0.3;
  const SyntheticCorpus c = synthesize_corpus(s, us().taxonomy);
  REQUIRE(c.users.size() == 100);
  REQUIRE(c.truth.size() == c.users.size());
  std::map<std::string, int> per_city;
  int plain = 0;
  for (std::size_t i = 0; i < c.users.size(); ++i) {
    const UserRecord& u = c.users[i];
    const SyntheticTruth& t = c.truth[i];
    CHECK(t.user_id == u.user_id);
    REQUIRE(u.home_label);
    CHECK(t.planted_city == *u.home_label);
    ++per_city[*u.home_label];
    CHECK(u.messages.size() == 50);
    // Planted words per city, to see whose vocabulary dominates.
    std::map<std::string, int> tokens;
    for (const Message& m : u.messages) {
      for (const Token& tok : tokenize(m.text)) ++tokens[tok.surface];
    }
    std::map<std::size_t, int> hits;
    for (std::size_t ci = 0; ci < us().taxonomy.cities().size(); ++ci) {
      for (const std::string& w : planted_city_words(ci, s.local_words_per_city)) {
        const auto it = tokens.find(w);
        if (it != tokens.end()) hits[ci] += it->second;
      }
    }
    std::size_t home = 0;
    while (us().taxonomy.cities()[home].id != *u.home_label) ++home;
    bool dominant = true;
    for (const auto& [ci, n] : hits) dominant = dominant && n <= hits[home];
    // Without an affinity city or a trip, only leakage competes with home.
    if (!t.affinity_city && !t.travel_city) {
      CHECK(dominant);
      ++plain;
    }
    if (t.travel_city) {
      CHECK(label_traveling(movement_stats(u)));
    } else {
      CHECK_FALSE(label_traveling(movement_stats(u)));
    }
  }
  CHECK(plain > 20);
  for (const auto& [city, n] : per_city) CHECK(n == 5);
  CHECK(per_city.size() == 20);
}

TEST_CASE("spec validation") {
  SynthSpec s;
  CHECK_NOTHROW(s.validate());
  s.users_per_city = 0;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = {};
  s.leakage = 1.5;
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = {};
  s.traveler_fraction = 0.2;
  s.traveler_min_displacement_miles = 80;  // not above the 100-mile threshold
  CHECK_THROWS_AS(s.validate(), ConfigError);
  s = {};
  s.cities = {"atlantis"};
  CHECK_THROWS(synthesize_corpus(s, us().taxonomy));
}

TEST_CASE("clean place names make the place-name classifier exact") {
  SynthSpec s = small(8);
  s.leakage = 0.0;
  s.affinity_user_fraction = 0.0;
  s.place_mention_rate = 0.5;
  s.place_mentioner_fraction = 1.0;
  const auto profiles = us().profiles(synthesize_corpus(s, us().taxonomy).users);
  ExperimentConfig c;
  c.folds = 5;
  c.predictor = EnsembleSpec{{Member::kPlaceNames}, Combiner::kDynamicWeighted,
                             Granularity::kCity};
  const EvalReport r =
      run_experiment(c, std::span<const UserProfile>(profiles), us().knowledge());
  CHECK(r.members[0].accuracy >= 0.99);
}

TEST_CASE("taxonomy gazetteer covers city names") {
  const Gazetteer g = taxonomy_gazetteer(us().taxonomy);
  for (const City& c : us().taxonomy.cities()) {
    CHECK_FALSE(g.lookup(join_tokens(tokenize(c.name))).empty());
  }
}

}  // namespace
}  // namespace geoinfer
