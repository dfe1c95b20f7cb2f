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

#include "geoinfer/features.hpp"

#include <unicode/locid.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>

#include "geoinfer/error.hpp"
#include "strings.hpp"

namespace geoinfer {
namespace {

struct CodePoint {
  UChar32 value;
  std::size_t begin;  // byte offsets into the source
  std::size_t end;
};

std::vector<CodePoint> decode(std::string_view s) {
  std::vector<CodePoint> out;
  out.reserve(s.size());
  const auto* bytes = reinterpret_cast<const uint8_t*>(s.data());
  const auto length = static_cast<int32_t>(s.size());
  int32_t i = 0;
  while (i < length) {
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(bytes, i, length, c);
    if (c < 0) c = 0xFFFD;
    out.push_back({c, static_cast<std::size_t>(start), static_cast<std::size_t>(i)});
  }
  return out;
}

bool is_mark(UChar32 c) {
  const auto type = u_charType(c);
  return type == U_NON_SPACING_MARK || type == U_COMBINING_SPACING_MARK ||
         type == U_ENCLOSING_MARK;
}

bool is_word_char(UChar32 c) { return u_isalnum(c) || is_mark(c); }

bool is_joiner(UChar32 c) {
  return c == '\'' || c == 0x2019 || c == '-' || c == '_';
}

bool is_url(std::string_view token) {
  return token.starts_with("http://") || token.starts_with("https://");
}

// Applies the per-token rules to one whitespace-delimited chunk of
// case-folded text. Returns false when the chunk yields no token.
bool clean_chunk(std::string_view chunk, Token& out) {
  if (is_url(chunk)) return false;
  const std::vector<CodePoint> cps = decode(chunk);
  std::size_t first = 0;
  std::size_t last = cps.size();
  while (first < last && !is_word_char(cps[first].value) &&
         cps[first].value != '#' && cps[first].value != '@') {
    ++first;
  }
  while (last > first && !is_word_char(cps[last - 1].value)) --last;
  if (first == last) return false;

  const std::string_view body =
      chunk.substr(cps[first].begin, cps[last - 1].end - cps[first].begin);
  if (is_url(body)) return false;

  if (cps[first].value == '#') {
    // The trailing strip guarantees a word character after the '#'.
    out.surface = std::string(body);
    out.is_hashtag = true;
    return true;
  }
  for (std::size_t i = first; i < last; ++i) {
    if (!is_word_char(cps[i].value) && !is_joiner(cps[i].value)) return false;
  }
  out.surface = std::string(body);
  out.is_hashtag = false;
  return true;
}

}  // namespace

std::string casefold(std::string_view text) {
  const bool ascii = std::all_of(text.begin(), text.end(), [](char c) {
    return static_cast<unsigned char>(c) < 0x80;
  });
  if (ascii) {
    std::string out(text);
    for (char& c : out) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    }
    return out;
  }
  icu::UnicodeString u = icu::UnicodeString::fromUTF8(
      icu::StringPiece(text.data(), static_cast<int32_t>(text.size())));
  u.toLower(icu::Locale::getRoot());
  std::string out;
  u.toUTF8String(out);
  return out;
}

TokenStream tokenize(std::string_view text) {
  const std::string folded = casefold(text);
  const std::vector<CodePoint> cps = decode(folded);
  TokenStream tokens;
  std::size_t i = 0;
  while (i < cps.size()) {
    while (i < cps.size() && u_isUWhiteSpace(cps[i].value)) ++i;
    if (i == cps.size()) break;
    const std::size_t start = i;
    while (i < cps.size() && !u_isUWhiteSpace(cps[i].value)) ++i;
    const std::string_view chunk = std::string_view(folded).substr(
        cps[start].begin, cps[i - 1].end - cps[start].begin);
    Token token;
    if (clean_chunk(chunk, token)) tokens.push_back(std::move(token));
  }
  return tokens;
}

std::string join_tokens(std::span<const Token> tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0) out += ' ';
    out += tokens[i].surface;
  }
  return out;
}

std::string_view to_string(TermFamily family) {
  switch (family) {
    case TermFamily::kWords: return "words";
    case TermFamily::kHashtags: return "hashtags";
    case TermFamily::kPlaceNames: return "placenames";
  }
  return "?";
}

void merge_into(TermBag& into, const TermBag& from) {
  for (const auto& [term, count] : from) into[term] += count;
}

StopWords read_stopwords(std::istream& in) {
  StopWords out;
  std::string line;
  while (std::getline(in, line)) {
    const std::string_view word = internal::trim(line);
    // Hashtags never reach the words family, so '#' can mark comments.
    if (word.empty() || word.front() == '#') continue;
    out.insert(casefold(word));
  }
  return out;
}

StopWords load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw DataError(DataErrc::kParse,
                    "cannot open stop-word file '" + path.string() + "'");
  }
  return read_stopwords(in);
}

std::vector<PlaceMatch> match_places(const TokenStream& stream,
                                     const Gazetteer& gazetteer) {
  std::vector<PlaceMatch> matches;
  std::string gram;
  for (std::size_t begin = 0; begin < stream.size(); ++begin) {
    gram.clear();
    for (std::size_t len = 1;
         len <= Gazetteer::kMaxTokens && begin + len <= stream.size(); ++len) {
      if (len > 1) gram += ' ';
      gram += stream[begin + len - 1].surface;
      if (!gazetteer.lookup(gram).empty()) {
        matches.push_back({begin, len, gram});
      }
    }
  }
  return matches;
}

TermBag extract_terms(const TokenStream& stream, TermFamily family,
                      const StopWords& stopwords, const Gazetteer* gazetteer,
                      const TokenFilter& filter) {
  TermBag bag;
  switch (family) {
    case TermFamily::kWords:
      for (const Token& t : stream) {
        if (t.is_hashtag || stopwords.contains(t.surface)) continue;
        if (filter && !filter(t)) continue;
        ++bag[t.surface];
      }
      break;
    case TermFamily::kHashtags:
      for (const Token& t : stream) {
        if (t.is_hashtag) ++bag[t.surface];
      }
      break;
    case TermFamily::kPlaceNames:
      if (gazetteer == nullptr) {
        throw ConfigError("place-name extraction needs a gazetteer");
      }
      for (PlaceMatch& m : match_places(stream, *gazetteer)) {
        ++bag[std::move(m.surface)];
      }
      break;
  }
  return bag;
}

void LocalTermConfig::validate() const {
  if (!(k_percent > 0.0 && k_percent <= 1.0)) {
    throw ConfigError("k_percent must be in (0, 1]");
  }
  if (!(t_diff >= 0.0 && t_diff <= 1.0)) {
    throw ConfigError("t_diff must be in [0, 1]");
  }
  if (!(t_max >= 0.0 && t_max <= 1.0)) {
    throw ConfigError("t_max must be in [0, 1]");
  }
}

TermStatsTable compute_term_stats(std::span<const TermDocument> documents,
                                  TermFamily family) {
  if (documents.empty()) {
    throw DataError(DataErrc::kEmptyInput, "no training documents");
  }
  TermStatsTable table;
  table.family = family;
  std::map<std::string, std::map<std::string, int>, std::less<>> counts;
  for (const TermDocument& doc : documents) {
    ++table.users_per_location[doc.label];
    if (doc.terms == nullptr) continue;
    for (const auto& [term, n] : *doc.terms) {
      if (n > 0) ++counts[term][doc.label];
    }
  }
  table.stats.reserve(counts.size());
  for (auto& [term, per_location] : counts) {
    TermLocationStats s;
    s.term = term;
    s.family = family;
    int total = 0;
    for (const auto& [loc, n] : per_location) total += n;
    for (const auto& [loc, n] : per_location) {
      s.distribution[loc] = static_cast<double>(n) / total;
    }
    s.user_counts = std::move(per_location);
    table.stats.push_back(std::move(s));
  }
  return table;
}

namespace {

struct Concentration {
  double max = 0.0;
  double mean = 0.0;
  std::string location;
};

Concentration concentration(const TermLocationStats& s,
                            std::size_t n_locations) {
  Concentration c;
  double sum = 0.0;
  for (const auto& [loc, p] : s.distribution) {
    sum += p;
    if (p > c.max) {
      c.max = p;
      c.location = loc;
    }
  }
  c.mean = n_locations == 0 ? 0.0 : sum / static_cast<double>(n_locations);
  return c;
}

}  // namespace

std::set<std::string> select_local_terms(
    std::span<const TermLocationStats> stats,
    const std::map<std::string, int>& users_per_location,
    const LocalTermConfig& config) {
  std::set<std::string> selected;
  const std::size_t n_locations = users_per_location.size();
  for (const TermLocationStats& s : stats) {
    bool supported = false;
    for (const auto& [loc, n] : s.user_counts) {
      const auto it = users_per_location.find(loc);
      if (it == users_per_location.end()) continue;
      // Absorbs representation error so that e.g. 3 of 60 users meets 5%.
      if (n >= config.k_percent * it->second - 1e-9) {
        supported = true;
        break;
      }
    }
    if (!supported) continue;
    const Concentration c = concentration(s, n_locations);
    // Same slack as above: 0.6 - 0.5 must meet a 0.1 threshold.
    if (c.max - c.mean < config.t_diff - 1e-9) continue;
    if (c.max < config.t_max - 1e-9) continue;
    selected.insert(s.term);
  }
  return selected;
}

void write_local_term_dump(std::ostream& out, const TermStatsTable& table,
                           const std::set<std::string>& selected) {
  out << "term\tfamily\tmax_prob\tmean_prob\tlocation\tlocal\n";
  for (const TermLocationStats& s : table.stats) {
    const Concentration c = concentration(s, table.users_per_location.size());
    out << s.term << '\t' << to_string(s.family) << '\t' << c.max << '\t'
        << c.mean << '\t' << c.location << '\t'
        << (selected.contains(s.term) ? "yes" : "no") << '\n';
  }
}

}  // namespace geoinfer
