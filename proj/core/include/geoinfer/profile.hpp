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

#ifndef GEOINFER_PROFILE_HPP_
#define GEOINFER_PROFILE_HPP_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "geoinfer/corpus.hpp"
#include "geoinfer/features.hpp"
#include "geoinfer/gazetteer.hpp"
#include "geoinfer/taxonomy.hpp"

namespace geoinfer {

// Maps a message to the check-in venue it references, if any.
class VenueResolver {
 public:
  virtual ~VenueResolver() = default;
  virtual std::optional<Venue> resolve(const Message& message) const = 0;
};

// Reads the venue already attached to the message.
class PreResolvedVenues final : public VenueResolver {
 public:
  std::optional<Venue> resolve(const Message& message) const override {
    return message.venue;
  }
};

// Everything the classifiers need from one user, extracted once.
struct UserProfile {
  std::string user_id;
  std::optional<std::string> home_label;
  std::array<TermBag, 3> terms;  // indexed by TermFamily
  // One resolved taxonomy city id per check-in.
  std::vector<std::string> venue_cities;
  // Venues whose (city, state) is not in the taxonomy.
  std::size_t unknown_venues = 0;
  std::vector<Timestamp> times;  // most recent first
  std::vector<GeoPoint> geotags;

  const TermBag& terms_of(TermFamily family) const {
    return terms[static_cast<std::size_t>(family)];
  }
};

// Turns UserRecords into UserProfiles. Holds references; every argument
// must outlive the featurizer.
class Featurizer {
 public:
  Featurizer(const LocationTaxonomy& taxonomy, const Gazetteer* gazetteer,
             const StopWords& stopwords, const VenueResolver& resolver,
             TokenFilter word_filter = {});

  UserProfile operator()(const UserRecord& user) const;

  const LocationTaxonomy& taxonomy() const { return taxonomy_; }
  const Gazetteer* gazetteer() const { return gazetteer_; }

 private:
  const LocationTaxonomy& taxonomy_;
  const Gazetteer* gazetteer_;
  const StopWords& stopwords_;
  const VenueResolver& resolver_;
  TokenFilter word_filter_;
};

}  // namespace geoinfer

#endif  // GEOINFER_PROFILE_HPP_
