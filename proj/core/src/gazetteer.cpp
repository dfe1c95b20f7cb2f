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

#include "geoinfer/gazetteer.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "geoinfer/error.hpp"
#include "geoinfer/features.hpp"
#include "strings.hpp"

namespace geoinfer {

void Gazetteer::add(std::string_view surface_form, PlaceRef target,
                    const LocationTaxonomy& taxonomy) {
  const bool known = target.kind == PlaceKind::kCity
                         ? taxonomy.has_city(target.id)
                         : taxonomy.has_state(target.id);
  if (!known) {
    throw DataError(DataErrc::kDanglingReference,
                    "gazetteer entry '" + std::string(surface_form) +
                        "' references unknown " +
                        (target.kind == PlaceKind::kCity ? "city" : "state") +
                        " '" + target.id + "'");
  }
  const TokenStream tokens = tokenize(surface_form);
  if (tokens.empty() || tokens.size() > kMaxTokens) {
    throw DataError(DataErrc::kParse,
                    "gazetteer surface form '" + std::string(surface_form) +
                        "' must be 1 to 3 tokens");
  }
  auto& targets = entries_[join_tokens(tokens)];
  const auto pos = std::lower_bound(targets.begin(), targets.end(), target);
  if (pos == targets.end() || *pos != target) targets.insert(pos, std::move(target));
}

std::span<const PlaceRef> Gazetteer::lookup(std::string_view normalized) const {
  const auto it = entries_.find(normalized);
  if (it == entries_.end()) return {};
  return it->second;
}

Gazetteer read_gazetteer(std::istream& in, const LocationTaxonomy& taxonomy) {
  Gazetteer g;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const std::string_view line = internal::chomp(raw);
    if (internal::is_comment_or_blank(line)) continue;
    if (line.starts_with("surface_form\t")) continue;
    const auto cols = internal::split(line, '\t');
    const auto where = "gazetteer line " + std::to_string(line_no) + ": ";
    if (cols.size() != 3) {
      throw DataError(DataErrc::kParse, where + "expected 3 columns");
    }
    const std::string_view kind = internal::trim(cols[1]);
    PlaceRef ref;
    if (kind == "city") {
      ref.kind = PlaceKind::kCity;
    } else if (kind == "state") {
      ref.kind = PlaceKind::kState;
    } else {
      throw DataError(DataErrc::kParse,
                      where + "kind must be 'city' or 'state'");
    }
    ref.id = std::string(internal::trim(cols[2]));
    try {
      g.add(internal::trim(cols[0]), std::move(ref), taxonomy);
    } catch (const DataError& e) {
      throw DataError(e.code(), where + e.what());
    }
  }
  return g;
}

Gazetteer load_gazetteer(const std::filesystem::path& path,
                         const LocationTaxonomy& taxonomy) {
  std::ifstream in(path);
  if (!in) {
    throw DataError(DataErrc::kParse,
                    "cannot open gazetteer file '" + path.string() + "'");
  }
  return read_gazetteer(in, taxonomy);
}

void write_gazetteer(std::ostream& out, const Gazetteer& gazetteer) {
  out << "surface_form\tkind\ttarget_id\n";
  for (const auto& [form, targets] : gazetteer.entries()) {
    for (const PlaceRef& t : targets) {
      out << form << '\t' << (t.kind == PlaceKind::kCity ? "city" : "state")
          << '\t' << t.id << '\n';
    }
  }
}

}  // namespace geoinfer
