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

#include "geoinfer/profile.hpp"

namespace geoinfer {

Featurizer::Featurizer(const LocationTaxonomy& taxonomy,
                       const Gazetteer* gazetteer, const StopWords& stopwords,
                       const VenueResolver& resolver, TokenFilter word_filter)
    : taxonomy_(taxonomy),
      gazetteer_(gazetteer),
      stopwords_(stopwords),
      resolver_(resolver),
      word_filter_(std::move(word_filter)) {}

UserProfile Featurizer::operator()(const UserRecord& user) const {
  UserProfile p;
  p.user_id = user.user_id;
  p.home_label = user.home_label;
  p.times.reserve(user.messages.size());
  for (const Message& m : user.messages) {
    const TokenStream tokens = tokenize(m.text);
    merge_into(p.terms[static_cast<std::size_t>(TermFamily::kWords)],
               extract_terms(tokens, TermFamily::kWords, stopwords_, nullptr,
                             word_filter_));
    merge_into(p.terms[static_cast<std::size_t>(TermFamily::kHashtags)],
               extract_terms(tokens, TermFamily::kHashtags, stopwords_, nullptr));
    if (gazetteer_ != nullptr) {
      merge_into(p.terms[static_cast<std::size_t>(TermFamily::kPlaceNames)],
                 extract_terms(tokens, TermFamily::kPlaceNames, stopwords_,
                               gazetteer_));
    }
    if (const auto venue = resolver_.resolve(m)) {
      if (auto city = taxonomy_.find_city(venue->city, venue->state)) {
        p.venue_cities.push_back(std::move(*city));
      } else {
        ++p.unknown_venues;
      }
    }
    p.times.push_back(m.created_at);
    if (m.geotag) p.geotags.push_back(*m.geotag);
  }
  return p;
}

}  // namespace geoinfer
