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

// Seeded synthetic corpora with planted location signal.
//
// Each user lives in one city. Messages mix background vocabulary with
// terms planted for the home city (and, per user, an "affinity" city whose
// terms compete with the home ones), occasional mentions of the home city or
// state by name, and check-ins. Posting times follow one diurnal curve in
// local time, shifted to UTC by a per-zone offset. Travelers spend part of
// their history in a distant city: those messages carry that city's terms,
// travel vocabulary and displaced geotags while home_label stays put.

#ifndef GEOINFER_SYNTH_HPP_
#define GEOINFER_SYNTH_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "geoinfer/corpus.hpp"
#include "geoinfer/gazetteer.hpp"
#include "geoinfer/taxonomy.hpp"

namespace geoinfer {

struct SynthSpec {
  std::vector<std::string> cities;  // empty: every taxonomy city
  int users_per_city = 50;
  int messages_per_user = 200;
  int days = 60;

  int local_words_per_city = 8;
  int hashtags_per_city = 3;
  int zone_words_per_zone = 6;
  int background_vocabulary = 400;

  double local_word_rate = 0.25;
  double hashtag_rate = 0.04;
  double zone_word_rate = 0.0;
  double place_mention_rate = 0.04;
  double place_mentioner_fraction = 0.6;
  double checkin_rate = 0.04;
  double checkin_user_fraction = 0.4;
  // Chance that a planted item comes from a uniformly drawn other city.
  double leakage = 0.1;
  // Fraction of users with an affinity city, and the upper bound of such a
  // user's share of local words drawn from it (uniform in [0, max]).
  double affinity_user_fraction = 0.5;
  double max_affinity_share = 0.9;
  // Whether hashtags follow the affinity city like words do.
  bool affinity_hashtags = false;

  // Local time -> UTC shift of zone i is utc_base + i * zone_offset.
  int zone_offset_minutes = 180;
  int utc_base_offset_minutes = 300;

  double geotag_rate = 0.65;
  double geotag_jitter_miles = 3.0;

  double traveler_fraction = 0.0;
  double traveler_min_displacement_miles = 300.0;
  double travel_message_share = 0.4;
  double travel_term_rate = 0.5;
  double travel_threshold_miles = 100.0;

  std::uint64_t seed = 1;

  // Throws ConfigError for rates outside [0, 1], non-positive sizes, or a
  // traveler displacement not above the travel threshold.
  void validate() const;
};

// Generator bookkeeping for one user, parallel to the corpus.
struct SyntheticTruth {
  std::string user_id;
  std::string planted_city;  // city whose vocabulary dominates
  std::optional<std::string> affinity_city;
  std::optional<std::string> travel_city;
};

struct SyntheticCorpus {
  std::vector<UserRecord> users;
  std::vector<SyntheticTruth> truth;
};

SyntheticCorpus synthesize_corpus(const SynthSpec& spec,
                                  const LocationTaxonomy& taxonomy);

// The terms planted for a city, as they appear after tokenization.
std::vector<std::string> planted_city_words(std::size_t city_index, int count);
std::vector<std::string> planted_city_hashtags(std::size_t city_index,
                                               int count);
inline const std::vector<std::string> kTravelTerms = {
    "flight", "airport", "hotel", "boarding", "layover", "roadtrip"};

// City and state display names of the taxonomy, as a gazetteer.
Gazetteer taxonomy_gazetteer(const LocationTaxonomy& taxonomy);

}  // namespace geoinfer

#endif  // GEOINFER_SYNTH_HPP_
