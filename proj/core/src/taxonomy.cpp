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

#include "geoinfer/taxonomy.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

#include "geoinfer/error.hpp"
#include "geoinfer/features.hpp"
#include "strings.hpp"

namespace geoinfer {
namespace {

constexpr std::string_view kCityHeader = "city_id\tname\tstate_id\tlat\tlon";
constexpr std::string_view kStateHeader =
    "state_id\ttimezone\tcensus_region\tfederal_region";

std::string format_coordinate(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

}  // namespace

bool is_valid(const GeoPoint& p) {
  return p.lat >= -90.0 && p.lat <= 90.0 && p.lon >= -180.0 && p.lon <= 180.0;
}

std::string_view to_string(Granularity g) {
  switch (g) {
    case Granularity::kCity: return "city";
    case Granularity::kState: return "state";
    case Granularity::kTimeZone: return "timezone";
    case Granularity::kCensusRegion: return "census_region";
    case Granularity::kFederalRegion: return "federal_region";
  }
  return "?";
}

Granularity parse_granularity(std::string_view name) {
  for (Granularity g : kAllGranularities) {
    if (to_string(g) == name) return g;
  }
  throw ConfigError("unknown granularity '" + std::string(name) +
                    "' (expected city, state, timezone, census_region or "
                    "federal_region)");
}

LocationTaxonomy LocationTaxonomy::build(std::vector<City> cities,
                                         std::vector<StateInfo> states) {
  LocationTaxonomy t;
  std::sort(states.begin(), states.end(),
            [](const StateInfo& a, const StateInfo& b) { return a.id < b.id; });
  std::sort(cities.begin(), cities.end(),
            [](const City& a, const City& b) { return a.id < b.id; });

  for (std::size_t i = 0; i < states.size(); ++i) {
    const StateInfo& s = states[i];
    if (s.id.empty()) {
      throw DataError(DataErrc::kParse, "state with empty id");
    }
    if (s.timezone.empty() || s.census_region.empty() ||
        s.federal_region.empty()) {
      throw DataError(DataErrc::kMissingRegion,
                      "state '" + s.id + "' lacks a region assignment");
    }
    if (!t.state_index_.emplace(s.id, i).second) {
      throw DataError(DataErrc::kDuplicate, "duplicate state_id '" + s.id + "'");
    }
  }
  for (std::size_t i = 0; i < cities.size(); ++i) {
    const City& c = cities[i];
    if (c.id.empty() || c.name.empty()) {
      throw DataError(DataErrc::kParse, "city with empty id or name");
    }
    if (!is_valid(c.location)) {
      throw DataError(DataErrc::kRange,
                      "city '" + c.id + "' has invalid coordinates");
    }
    if (!t.state_index_.contains(c.state_id)) {
      throw DataError(DataErrc::kDanglingReference,
                      "city '" + c.id + "' references unknown state '" +
                          c.state_id + "'");
    }
    if (!t.city_index_.emplace(c.id, i).second) {
      throw DataError(DataErrc::kDuplicate, "duplicate city_id '" + c.id + "'");
    }
    // Cities are sorted by id, so the first insert is the smallest id.
    t.by_name_.emplace(std::make_pair(casefold(c.name), c.state_id), c.id);
  }
  t.cities_ = std::move(cities);
  t.states_ = std::move(states);
  return t;
}

bool LocationTaxonomy::has_city(std::string_view id) const {
  return city_index_.find(id) != city_index_.end();
}

bool LocationTaxonomy::has_state(std::string_view id) const {
  return state_index_.find(id) != state_index_.end();
}

const City& LocationTaxonomy::city(std::string_view id) const {
  const auto it = city_index_.find(id);
  if (it == city_index_.end()) {
    throw DataError(DataErrc::kUnknownLabel,
                    "unknown city '" + std::string(id) + "'");
  }
  return cities_[it->second];
}

const StateInfo& LocationTaxonomy::state(std::string_view id) const {
  const auto it = state_index_.find(id);
  if (it == state_index_.end()) {
    throw DataError(DataErrc::kUnknownLabel,
                    "unknown state '" + std::string(id) + "'");
  }
  return states_[it->second];
}

const std::string& LocationTaxonomy::project(std::string_view city_id,
                                             Granularity g) const {
  const City& c = city(city_id);
  if (g == Granularity::kCity) return c.id;
  return project_state(c.state_id, g);
}

const std::string& LocationTaxonomy::project_state(std::string_view state_id,
                                                   Granularity g) const {
  const StateInfo& s = state(state_id);
  switch (g) {
    case Granularity::kState: return s.id;
    case Granularity::kTimeZone: return s.timezone;
    case Granularity::kCensusRegion: return s.census_region;
    case Granularity::kFederalRegion: return s.federal_region;
    case Granularity::kCity: break;
  }
  throw ConfigError("a state cannot be projected to city granularity");
}

std::vector<std::string> LocationTaxonomy::labels(Granularity g) const {
  std::set<std::string> out;
  if (g == Granularity::kCity) {
    for (const City& c : cities_) out.insert(c.id);
  } else {
    for (const StateInfo& s : states_) out.insert(project_state(s.id, g));
  }
  return {out.begin(), out.end()};
}

std::vector<std::string> LocationTaxonomy::cities_in(
    Granularity g, std::string_view label) const {
  std::vector<std::string> out;
  for (const City& c : cities_) {
    if (project(c.id, g) == label) out.push_back(c.id);
  }
  return out;
}

std::optional<std::string> LocationTaxonomy::find_city(
    std::string_view name, std::string_view state_id) const {
  const auto it =
      by_name_.find(std::make_pair(casefold(name), std::string(state_id)));
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

std::uint64_t LocationTaxonomy::fingerprint() const {
  std::ostringstream out;
  write_taxonomy(out, *this);
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : out.str()) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

LocationTaxonomy read_taxonomy(std::istream& in) {
  enum class Section { kNone, kCities, kStates };
  Section section = Section::kNone;
  bool expect_header = false;
  std::vector<City> cities;
  std::vector<StateInfo> states;
  std::string raw;
  std::size_t line_no = 0;

  const auto fail = [&](DataErrc code, const std::string& what) {
    return DataError(code, "taxonomy line " + std::to_string(line_no) + ": " +
                               what);
  };

  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = internal::chomp(raw);
    if (internal::is_comment_or_blank(line)) continue;
    const std::string_view trimmed = internal::trim(line);
    if (trimmed == "[cities]") {
      section = Section::kCities;
      expect_header = true;
      continue;
    }
    if (trimmed == "[states]") {
      section = Section::kStates;
      expect_header = true;
      continue;
    }
    if (expect_header) {
      const std::string_view want =
          section == Section::kCities ? kCityHeader : kStateHeader;
      if (line != want) {
        throw fail(DataErrc::kParse,
                   "expected header '" + std::string(want) + "'");
      }
      expect_header = false;
      continue;
    }
    const auto cols = internal::split(line, '\t');
    switch (section) {
      case Section::kNone:
        throw fail(DataErrc::kParse, "row outside a [cities]/[states] section");
      case Section::kCities: {
        if (cols.size() != 5) throw fail(DataErrc::kParse, "expected 5 columns");
        const auto lat = internal::parse_double(cols[3]);
        const auto lon = internal::parse_double(cols[4]);
        if (!lat || !lon) throw fail(DataErrc::kParse, "bad coordinate");
        cities.push_back(City{std::string(internal::trim(cols[0])),
                              std::string(internal::trim(cols[1])),
                              std::string(internal::trim(cols[2])),
                              GeoPoint{*lat, *lon}});
        break;
      }
      case Section::kStates: {
        if (cols.size() < 4) {
          throw fail(DataErrc::kMissingRegion,
                     "state row needs timezone, census_region and "
                     "federal_region");
        }
        if (cols.size() > 4) throw fail(DataErrc::kParse, "expected 4 columns");
        states.push_back(StateInfo{std::string(internal::trim(cols[0])),
                                   std::string(internal::trim(cols[1])),
                                   std::string(internal::trim(cols[2])),
                                   std::string(internal::trim(cols[3]))});
        break;
      }
    }
  }
  return LocationTaxonomy::build(std::move(cities), std::move(states));
}

LocationTaxonomy load_taxonomy(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError(DataErrc::kParse,
                    "cannot open taxonomy file '" + path.string() + "'");
  }
  return read_taxonomy(in);
}

void write_taxonomy(std::ostream& out, const LocationTaxonomy& taxonomy) {
  out << "[cities]\n" << kCityHeader << '\n';
  for (const City& c : taxonomy.cities()) {
    out << c.id << '\t' << c.name << '\t' << c.state_id << '\t'
        << format_coordinate(c.location.lat) << '\t'
        << format_coordinate(c.location.lon) << '\n';
  }
  out << "[states]\n" << kStateHeader << '\n';
  for (const StateInfo& s : taxonomy.states()) {
    out << s.id << '\t' << s.timezone << '\t' << s.census_region << '\t'
        << s.federal_region << '\n';
  }
}

}  // namespace geoinfer
