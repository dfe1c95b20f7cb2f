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

// Shared fixtures for the unit and acceptance tests.

#ifndef GEOINFER_TESTS_SUPPORT_HPP_
#define GEOINFER_TESTS_SUPPORT_HPP_

#include <string>
#include <vector>

#include "geoinfer/corpus.hpp"
#include "geoinfer/ensemble.hpp"
#include "geoinfer/features.hpp"
#include "geoinfer/gazetteer.hpp"
#include "geoinfer/profile.hpp"
#include "geoinfer/taxonomy.hpp"

namespace geoinfer::testing {

inline std::string data_path(const std::string& name) {
  return std::string(GEOINFER_DATA_DIR) + "/" + name;
}

// The bundled US knowledge files, loaded once per process.
struct UsData {
  LocationTaxonomy taxonomy = load_taxonomy(data_path("us_taxonomy.tsv"));
  Gazetteer gazetteer = load_gazetteer(data_path("us_gazetteer.tsv"), taxonomy);
  StopWords stopwords = load_stopwords(data_path("stopwords_en.txt"));
  PreResolvedVenues resolver;
  Featurizer featurizer{taxonomy, &gazetteer, stopwords, resolver};

  Knowledge knowledge() const { return Knowledge{&taxonomy, &gazetteer}; }

  std::vector<UserProfile> profiles(const std::vector<UserRecord>& users) const {
    std::vector<UserProfile> out;
    out.reserve(users.size());
    for (const UserRecord& u : users) out.push_back(featurizer(u));
    return out;
  }
};

inline const UsData& us() {
  static const UsData data;
  return data;
}

inline std::vector<const UserProfile*> pointers(const std::vector<UserProfile>& ps) {
  std::vector<const UserProfile*> out;
  for (const UserProfile& p : ps) out.push_back(&p);
  return out;
}

inline Timestamp at(const char* text) { return parse_timestamp(text); }

inline Message msg(std::string text, const char* when = "2013-01-01T12:00:00Z") {
  Message m;
  m.text = std::move(text);
  m.created_at = at(when);
  return m;
}

}  // namespace geoinfer::testing

#endif  // GEOINFER_TESTS_SUPPORT_HPP_
