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

#ifndef GEOINFER_GAZETTEER_HPP_
#define GEOINFER_GAZETTEER_HPP_

#include <compare>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "geoinfer/taxonomy.hpp"

namespace geoinfer {

enum class PlaceKind { kCity, kState };

struct PlaceRef {
  PlaceKind kind = PlaceKind::kCity;
  std::string id;

  auto operator<=>(const PlaceRef&) const = default;
};

// Surface form -> candidate places. Forms are stored tokenized, case-folded
// and space-joined, 1 to 3 tokens long. Ambiguous forms keep every target.
class Gazetteer {
 public:
  static constexpr std::size_t kMaxTokens = 3;

  // Normalizes `surface_form` with the message tokenizer. Throws DataError
  // when the target is unknown to `taxonomy` or the form has 0 or >3 tokens.
  void add(std::string_view surface_form, PlaceRef target,
           const LocationTaxonomy& taxonomy);

  // `normalized` must already be in stored form. Empty span when absent.
  std::span<const PlaceRef> lookup(std::string_view normalized) const;

  const std::map<std::string, std::vector<PlaceRef>, std::less<>>& entries()
      const {
    return entries_;
  }
  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::string, std::vector<PlaceRef>, std::less<>> entries_;
};

// Tab-separated rows: surface_form, kind (city|state), target_id. An
// optional header row starting with "surface_form" is skipped.
Gazetteer read_gazetteer(std::istream& in, const LocationTaxonomy& taxonomy);
Gazetteer load_gazetteer(const std::filesystem::path& path,
                         const LocationTaxonomy& taxonomy);
void write_gazetteer(std::ostream& out, const Gazetteer& gazetteer);

}  // namespace geoinfer

#endif  // GEOINFER_GAZETTEER_HPP_
