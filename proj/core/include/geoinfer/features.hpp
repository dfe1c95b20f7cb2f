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

// Tokenization, term extraction and local-term selection.

#ifndef GEOINFER_FEATURES_HPP_
#define GEOINFER_FEATURES_HPP_

#include <array>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "geoinfer/gazetteer.hpp"

namespace geoinfer {

struct Token {
  std::string surface;
  bool is_hashtag = false;

  bool operator==(const Token&) const = default;
};

using TokenStream = std::vector<Token>;

// Full Unicode lowercase of UTF-8 text. Invalid sequences become U+FFFD.
std::string casefold(std::string_view text);

// Splits on Unicode whitespace, strips edge punctuation, drops URLs
// (http:// and https://) and tokens carrying characters other than letters,
// digits, '\'', '-' or '_'. Tokens beginning with '#' are kept as hashtags
// as long as something alphanumeric follows the '#'. Output is case-folded.
TokenStream tokenize(std::string_view text);

// Space-joins surfaces; tokenize(join_tokens(s)) == s for tokenizer output.
std::string join_tokens(std::span<const Token> tokens);

enum class TermFamily { kWords, kHashtags, kPlaceNames };

inline constexpr std::array<TermFamily, 3> kAllTermFamilies = {
    TermFamily::kWords, TermFamily::kHashtags, TermFamily::kPlaceNames};

std::string_view to_string(TermFamily family);

// Multiset of terms.
using TermBag = std::map<std::string, int, std::less<>>;

void merge_into(TermBag& into, const TermBag& from);

using StopWords = std::set<std::string, std::less<>>;

// One token per line, UTF-8, case-folded on load. Blank lines and lines
// starting with '#' are ignored.
StopWords read_stopwords(std::istream& in);
StopWords load_stopwords(const std::filesystem::path& path);

// Optional extra filter for the Words family (e.g. a part-of-speech tagger).
// Returning false drops the token.
using TokenFilter = std::function<bool(const Token&)>;

struct PlaceMatch {
  std::size_t begin = 0;   // token offset
  std::size_t length = 0;  // 1..3 tokens
  std::string surface;
};

// Every 1-, 2- and 3-gram of `stream` present in the gazetteer, in order of
// start offset then length. Overlapping matches are all reported.
std::vector<PlaceMatch> match_places(const TokenStream& stream,
                                     const Gazetteer& gazetteer);

// Words: non-hashtag tokens not in `stopwords` that pass `filter`.
// Hashtags: tokens starting with '#'.
// PlaceNames: surfaces from match_places; needs a gazetteer.
TermBag extract_terms(const TokenStream& stream, TermFamily family,
                      const StopWords& stopwords, const Gazetteer* gazetteer,
                      const TokenFilter& filter = {});

struct LocalTermConfig {
  double k_percent = 0.05;  // support floor, as a fraction of location users
  double t_diff = 0.1;      // max - mean conditional probability
  double t_max = 0.5;       // max conditional probability

  // Throws ConfigError when a value is outside its range.
  void validate() const;
};

struct TermLocationStats {
  std::string term;
  TermFamily family = TermFamily::kWords;
  // Distinct users per location label that used the term.
  std::map<std::string, int> user_counts;
  // P(location | term) from user_counts; locations absent here have 0 mass.
  std::map<std::string, double> distribution;
};

// One training user's terms at its label.
struct TermDocument {
  std::string label;
  const TermBag* terms = nullptr;
};

struct TermStatsTable {
  TermFamily family = TermFamily::kWords;
  std::map<std::string, int> users_per_location;
  std::vector<TermLocationStats> stats;  // sorted by term
};

// Throws DataError(kEmptyInput) when `documents` is empty.
TermStatsTable compute_term_stats(std::span<const TermDocument> documents,
                                  TermFamily family);

// Keeps a term iff (a) some location has at least k_percent of its users
// using it, (b) max - mean of the distribution over all locations of
// `users_per_location` is >= t_diff, and (c) max >= t_max. Comparisons allow
// 1e-9 of floating-point slack.
std::set<std::string> select_local_terms(
    std::span<const TermLocationStats> stats,
    const std::map<std::string, int>& users_per_location,
    const LocalTermConfig& config);

// Diagnostic dump: term, family, max_prob, mean_prob, location.
void write_local_term_dump(std::ostream& out, const TermStatsTable& table,
                           const std::set<std::string>& selected);

}  // namespace geoinfer

#endif  // GEOINFER_FEATURES_HPP_
