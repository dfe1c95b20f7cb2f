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

#ifndef GEOINFER_TAXONOMY_HPP_
#define GEOINFER_TAXONOMY_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace geoinfer {

struct GeoPoint {
  double lat = 0.0;
  double lon = 0.0;

  bool operator==(const GeoPoint&) const = default;
};

// True when lat is in [-90, 90] and lon in [-180, 180].
bool is_valid(const GeoPoint& p);

enum class Granularity { kCity, kState, kTimeZone, kCensusRegion, kFederalRegion };

inline constexpr std::array<Granularity, 5> kAllGranularities = {
    Granularity::kCity, Granularity::kState, Granularity::kTimeZone,
    Granularity::kCensusRegion, Granularity::kFederalRegion};

// "city", "state", "timezone", "census_region", "federal_region".
std::string_view to_string(Granularity g);
// Accepts the names above. Throws ConfigError otherwise.
Granularity parse_granularity(std::string_view name);

struct City {
  std::string id;
  std::string name;
  std::string state_id;
  GeoPoint location;
};

struct StateInfo {
  std::string id;
  std::string timezone;
  std::string census_region;
  std::string federal_region;
};

// The closed world of location labels. Immutable once built.
class LocationTaxonomy {
 public:
  LocationTaxonomy() = default;

  // Validates and cross-links the two tables. Throws DataError on dangling
  // state references, duplicate ids, invalid coordinates or missing region
  // assignments.
  static LocationTaxonomy build(std::vector<City> cities,
                                std::vector<StateInfo> states);

  const std::vector<City>& cities() const { return cities_; }
  const std::vector<StateInfo>& states() const { return states_; }

  bool has_city(std::string_view id) const;
  bool has_state(std::string_view id) const;
  // Throws DataError(kUnknownLabel).
  const City& city(std::string_view id) const;
  const StateInfo& state(std::string_view id) const;

  // Label of `city_id` at granularity `g`.
  const std::string& project(std::string_view city_id, Granularity g) const;
  // Label of a state at `g`; `g` must not be kCity.
  const std::string& project_state(std::string_view state_id,
                                   Granularity g) const;

  // Sorted distinct labels at `g` (states without cities included).
  std::vector<std::string> labels(Granularity g) const;
  // Sorted ids of cities whose projection at `g` equals `label`.
  std::vector<std::string> cities_in(Granularity g, std::string_view label) const;

  // City id for a venue, matched on case-insensitive display name and exact
  // state id. Lexicographically smallest id wins a collision.
  std::optional<std::string> find_city(std::string_view name,
                                       std::string_view state_id) const;

  // FNV-1a over the canonical serialization; stable across runs.
  std::uint64_t fingerprint() const;

 private:
  std::vector<City> cities_;
  std::vector<StateInfo> states_;
  std::map<std::string, std::size_t, std::less<>> city_index_;
  std::map<std::string, std::size_t, std::less<>> state_index_;
  std::map<std::pair<std::string, std::string>, std::string> by_name_;
};

// Reads the sectioned tabular format:
//
//   [cities]
//   city_id<TAB>name<TAB>state_id<TAB>lat<TAB>lon
//   ...
//   [states]
//   state_id<TAB>timezone<TAB>census_region<TAB>federal_region
//   ...
//
// Blank lines and lines starting with '#' are ignored.
LocationTaxonomy read_taxonomy(std::istream& in);
LocationTaxonomy load_taxonomy(const std::filesystem::path& path);
void write_taxonomy(std::ostream& out, const LocationTaxonomy& taxonomy);

}  // namespace geoinfer

#endif  // GEOINFER_TAXONOMY_HPP_
