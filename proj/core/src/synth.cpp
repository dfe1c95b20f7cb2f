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

#include "geoinfer/synth.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <numbers>

#include "geoinfer/error.hpp"
#include "geoinfer/movement.hpp"
#include "geoinfer/random.hpp"

namespace geoinfer {
namespace {

using namespace std::chrono;

// Relative message volume per local hour: quiet nights, evening peak.
constexpr std::array<double, 24> kDiurnal = {
    3.0, 1.5, 0.8, 0.4, 0.3, 0.5, 1.2, 2.5, 3.5, 4.0, 4.2, 4.6,
    5.2, 5.0, 4.6, 4.4, 4.8, 5.6, 6.6, 7.6, 8.2, 8.0, 6.6, 4.8};

constexpr int kBackgroundWordsPerMessage = 6;
constexpr double kMilesPerDegreeLat = 69.0;

const sys_days kEpoch = sys_days{year{2013} / January / 1};

void check_rate(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ConfigError(std::string(name) + " must lie in [0, 1]");
  }
}

int sample_local_minute(Rng& rng) {
  static const double total = [] {
    double t = 0.0;
    for (double w : kDiurnal) t += w;
    return t;
  }();
  double u = rng.uniform() * total;
  int hour = 23;
  for (int h = 0; h < 24; ++h) {
    if (u < kDiurnal[h]) {
      hour = h;
      break;
    }
    u -= kDiurnal[h];
  }
  return hour * 60 + static_cast<int>(rng.below(60));
}

GeoPoint jitter(const GeoPoint& p, double max_miles, Rng& rng) {
  const double d = max_miles * std::sqrt(rng.uniform());
  const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
  const double dlat = d * std::cos(theta) / kMilesPerDegreeLat;
  const double dlon = d * std::sin(theta) /
                      (kMilesPerDegreeLat * std::cos(p.lat * std::numbers::pi / 180.0));
  return GeoPoint{std::clamp(p.lat + dlat, -90.0, 90.0),
                  std::clamp(p.lon + dlon, -180.0, 180.0)};
}

// Uniform index in [0, n) other than `skip`.
std::size_t other_index(std::size_t n, std::size_t skip, Rng& rng) {
  const std::size_t i = rng.below(n - 1);
  return i >= skip ? i + 1 : i;
}

}  // namespace

void SynthSpec::validate() const {
  if (users_per_city <= 0) {
    throw ConfigError("users_per_city must be positive; the corpus would be empty");
  }
  if (messages_per_user <= 0 || days <= 0) {
    throw ConfigError("messages_per_user and days must be positive");
  }
  if (local_words_per_city <= 0 || hashtags_per_city <= 0 ||
      zone_words_per_zone <= 0 || background_vocabulary <= 0) {
    throw ConfigError("vocabulary sizes must be positive");
  }
  check_rate(local_word_rate, "local_word_rate");
  check_rate(hashtag_rate, "hashtag_rate");
  check_rate(zone_word_rate, "zone_word_rate");
  check_rate(place_mention_rate, "place_mention_rate");
  check_rate(place_mentioner_fraction, "place_mentioner_fraction");
  check_rate(checkin_rate, "checkin_rate");
  check_rate(checkin_user_fraction, "checkin_user_fraction");
  check_rate(leakage, "leakage");
  check_rate(affinity_user_fraction, "affinity_user_fraction");
  check_rate(max_affinity_share, "max_affinity_share");
  check_rate(geotag_rate, "geotag_rate");
  check_rate(traveler_fraction, "traveler_fraction");
  check_rate(travel_message_share, "travel_message_share");
  check_rate(travel_term_rate, "travel_term_rate");
  if (zone_offset_minutes < 0 || utc_base_offset_minutes < 0) {
    throw ConfigError("zone offsets must be non-negative");
  }
  if (!(geotag_jitter_miles >= 0.0)) {
    throw ConfigError("geotag_jitter_miles must be non-negative");
  }
  if (traveler_fraction > 0.0 &&
      !(traveler_min_displacement_miles > travel_threshold_miles)) {
    throw ConfigError("traveler displacement must exceed the travel threshold");
  }
  if (2.0 * geotag_jitter_miles >= travel_threshold_miles) {
    throw ConfigError("geotag jitter would make home users look like travelers");
  }
}

std::vector<std::string> planted_city_words(std::size_t city_index, int count) {
  std::vector<std::string> out;
  for (int j = 0; j < count; ++j) {
    out.push_back("loc" + std::to_string(city_index) + "w" + std::to_string(j));
  }
  return out;
}

std::vector<std::string> planted_city_hashtags(std::size_t city_index,
                                               int count) {
  std::vector<std::string> out;
  for (int j = 0; j < count; ++j) {
    out.push_back("#loc" + std::to_string(city_index) + "tag" + std::to_string(j));
  }
  return out;
}

Gazetteer taxonomy_gazetteer(const LocationTaxonomy& taxonomy) {
  Gazetteer g;
  for (const City& c : taxonomy.cities()) {
    g.add(c.name, PlaceRef{PlaceKind::kCity, c.id}, taxonomy);
  }
  return g;
}

SyntheticCorpus synthesize_corpus(const SynthSpec& spec,
                                  const LocationTaxonomy& taxonomy) {
  spec.validate();
  const std::vector<City>& all = taxonomy.cities();
  std::vector<std::size_t> chosen;
  if (spec.cities.empty()) {
    for (std::size_t i = 0; i < all.size(); ++i) chosen.push_back(i);
  } else {
    for (const std::string& id : spec.cities) {
      const auto it = std::find_if(all.begin(), all.end(),
                                   [&](const City& c) { return c.id == id; });
      if (it == all.end()) throw ConfigError("unknown city '" + id + "'");
      chosen.push_back(static_cast<std::size_t>(it - all.begin()));
    }
    std::sort(chosen.begin(), chosen.end());
    chosen.erase(std::unique(chosen.begin(), chosen.end()), chosen.end());
  }
  if (chosen.empty()) throw ConfigError("taxonomy has no cities");

  const std::vector<std::string> zones = taxonomy.labels(Granularity::kTimeZone);
  auto zone_of = [&](std::size_t ci) {
    const std::string& z = taxonomy.project(all[ci].id, Granularity::kTimeZone);
    return static_cast<std::size_t>(
        std::lower_bound(zones.begin(), zones.end(), z) - zones.begin());
  };

  std::vector<std::vector<std::string>> words(all.size());
  std::vector<std::vector<std::string>> tags(all.size());
  for (std::size_t ci = 0; ci < all.size(); ++ci) {
    words[ci] = planted_city_words(ci, spec.local_words_per_city);
    tags[ci] = planted_city_hashtags(ci, spec.hashtags_per_city);
  }

  Rng rng(spec.seed);
  SyntheticCorpus out;
  const int trip_days = std::max(
      1, static_cast<int>(std::lround(spec.days * spec.travel_message_share)));
  std::size_t serial = 0;

  for (std::size_t ci : chosen) {
    for (int k = 0; k < spec.users_per_city; ++k) {
      char id[32];
      std::snprintf(id, sizeof(id), "u%06zu", serial++);
      UserRecord user;
      user.user_id = id;
      user.home_label = all[ci].id;
      SyntheticTruth truth;
      truth.user_id = id;
      truth.planted_city = all[ci].id;

      std::optional<std::size_t> affinity;
      double affinity_share = 0.0;
      if (chosen.size() > 1 && rng.bernoulli(spec.affinity_user_fraction)) {
        affinity = chosen[other_index(chosen.size(),
                                      static_cast<std::size_t>(
                                          std::find(chosen.begin(), chosen.end(), ci) -
                                          chosen.begin()),
                                      rng)];
        affinity_share = rng.uniform(0.0, spec.max_affinity_share);
        truth.affinity_city = all[*affinity].id;
      }
      const bool mentioner = rng.bernoulli(spec.place_mentioner_fraction);
      const bool checker = rng.bernoulli(spec.checkin_user_fraction);

      std::optional<std::size_t> travel;
      int trip_start = 0;
      if (rng.bernoulli(spec.traveler_fraction)) {
        std::vector<std::size_t> far;
        for (std::size_t j = 0; j < all.size(); ++j) {
          if (haversine_miles(all[ci].location, all[j].location) >=
              spec.traveler_min_displacement_miles) {
            far.push_back(j);
          }
        }
        if (far.empty()) {
          throw ConfigError("no city lies far enough from '" + all[ci].id +
                            "' for a traveler");
        }
        travel = far[rng.below(far.size())];
        trip_start = static_cast<int>(
            rng.below(static_cast<std::uint64_t>(spec.days - trip_days + 1)));
        truth.travel_city = all[*travel].id;
      }

      const int utc_shift = spec.utc_base_offset_minutes +
                            static_cast<int>(zone_of(ci)) * spec.zone_offset_minutes;

      for (int mi = 0; mi < spec.messages_per_user; ++mi) {
        const int day = static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.days)));
        const bool away =
            travel && day >= trip_start && day < trip_start + trip_days;
        const std::size_t here = away ? *travel : ci;
        const int local_minute = sample_local_minute(rng);

        // Planted items follow the current city, except that a user's
        // affinity city and leakage compete with home.
        auto planted_city = [&](bool use_affinity) -> std::size_t {
          if (spec.leakage > 0.0 && rng.bernoulli(spec.leakage)) {
            return all.size() > 1 ? other_index(all.size(), here, rng) : here;
          }
          if (!away && use_affinity && affinity && rng.bernoulli(affinity_share)) {
            return *affinity;
          }
          return here;
        };
        auto pick = [&](const std::vector<std::string>& v) -> const std::string& {
          return v[rng.below(v.size())];
        };

        std::string text;
        auto append = [&](std::string_view w) {
          if (!text.empty()) text += ' ';
          text += w;
        };
        for (int b = 0; b < kBackgroundWordsPerMessage; ++b) {
          append("bg" + std::to_string(rng.below(
                            static_cast<std::uint64_t>(spec.background_vocabulary))));
        }
        if (rng.bernoulli(spec.local_word_rate)) {
          append(pick(words[planted_city(true)]));
        }
        if (rng.bernoulli(spec.hashtag_rate)) {
          append(pick(tags[planted_city(spec.affinity_hashtags)]));
        }
        if (spec.zone_word_rate > 0.0 && rng.bernoulli(spec.zone_word_rate)) {
          append("zone" + std::to_string(zone_of(here)) + "w" +
                 std::to_string(rng.below(
                     static_cast<std::uint64_t>(spec.zone_words_per_zone))));
        }
        if (mentioner && rng.bernoulli(spec.place_mention_rate)) {
          append("back in");
          append(all[planted_city(false)].name);
        }
        if (away && rng.bernoulli(spec.travel_term_rate)) {
          append(pick(kTravelTerms));
        }

        Message m;
        if (checker && rng.bernoulli(spec.checkin_rate)) {
          const City& venue = all[planted_city(false)];
          m.venue = Venue{venue.name, venue.state_id};
          append("checked in");
        }
        if (rng.bernoulli(spec.geotag_rate)) {
          m.geotag = jitter(all[here].location, spec.geotag_jitter_miles, rng);
        }
        m.text = std::move(text);
        m.created_at = Timestamp{kEpoch} + days{day} +
                       minutes{local_minute + utc_shift};
        user.messages.push_back(std::move(m));
      }
      normalize_message_order(user);
      out.users.push_back(std::move(user));
      out.truth.push_back(std::move(truth));
    }
  }
  return out;
}

}  // namespace geoinfer
