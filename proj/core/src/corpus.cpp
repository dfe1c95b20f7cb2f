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

#include "geoinfer/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <set>

#include <json.hpp>

#include "geoinfer/random.hpp"

namespace geoinfer {
namespace {

using json = nlohmann::json;
using namespace std::chrono;

bool parse_fixed(std::string_view s, std::size_t pos, std::size_t len,
                 int& out) {
  if (pos + len > s.size()) return false;
  int v = 0;
  for (std::size_t i = pos; i < pos + len; ++i) {
    if (s[i] < '0' || s[i] > '9') return false;
    v = v * 10 + (s[i] - '0');
  }
  out = v;
  return true;
}

DataError record_error(DataErrc code, const std::string& what) {
  return DataError(code, what);
}

Message parse_message(const json& j) {
  if (!j.is_object()) throw record_error(DataErrc::kParse, "message is not an object");
  Message m;
  const auto text = j.find("text");
  if (text == j.end() || !text->is_string()) {
    throw record_error(DataErrc::kParse, "message lacks a text string");
  }
  m.text = text->get<std::string>();
  const auto created = j.find("created_at");
  if (created == j.end() || !created->is_string()) {
    throw record_error(DataErrc::kTimestamp, "message lacks created_at");
  }
  m.created_at = parse_timestamp(created->get<std::string>());

  const auto lat = j.find("lat");
  const auto lon = j.find("lon");
  const bool has_lat = lat != j.end() && !lat->is_null();
  const bool has_lon = lon != j.end() && !lon->is_null();
  if (has_lat != has_lon) {
    throw record_error(DataErrc::kParse, "geotag needs both lat and lon");
  }
  if (has_lat) {
    if (!lat->is_number() || !lon->is_number()) {
      throw record_error(DataErrc::kParse, "geotag coordinates must be numbers");
    }
    GeoPoint p{lat->get<double>(), lon->get<double>()};
    if (!is_valid(p)) {
      throw record_error(DataErrc::kRange, "geotag out of range");
    }
    m.geotag = p;
  }

  const auto vc = j.find("venue_city");
  const auto vs = j.find("venue_state");
  const bool has_vc = vc != j.end() && !vc->is_null();
  const bool has_vs = vs != j.end() && !vs->is_null();
  if (has_vc || has_vs) {
    if (!has_vc || !has_vs || !vc->is_string() || !vs->is_string() ||
        vc->get<std::string>().empty() || vs->get<std::string>().empty()) {
      throw record_error(DataErrc::kParse,
                         "venue needs non-empty venue_city and venue_state");
    }
    m.venue = Venue{vc->get<std::string>(), vs->get<std::string>()};
  }
  return m;
}

UserRecord parse_record(std::string_view line,
                        const LocationTaxonomy& taxonomy,
                        const CorpusOptions& options) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw record_error(DataErrc::kParse, std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw record_error(DataErrc::kParse, "record is not an object");
  UserRecord user;
  const auto id = j.find("user_id");
  if (id == j.end() || !id->is_string() || id->get<std::string>().empty()) {
    throw record_error(DataErrc::kParse, "record lacks a user_id string");
  }
  user.user_id = id->get<std::string>();

  const auto label = j.find("home_label");
  if (label != j.end() && !label->is_null()) {
    if (!label->is_string()) {
      throw record_error(DataErrc::kParse, "home_label must be a string");
    }
    std::string l = label->get<std::string>();
    if (!taxonomy.has_city(l)) {
      throw record_error(DataErrc::kUnknownLabel,
                         "home_label '" + l + "' is not a taxonomy city");
    }
    user.home_label = std::move(l);
  } else if (options.require_labels) {
    throw record_error(DataErrc::kUnknownLabel, "record lacks a home_label");
  }

  const auto messages = j.find("messages");
  if (messages == j.end() || !messages->is_array()) {
    throw record_error(DataErrc::kParse, "record lacks a messages array");
  }
  if (messages->empty()) {
    throw record_error(DataErrc::kEmptyInput, "record has no messages");
  }
  user.messages.reserve(messages->size());
  for (const json& m : *messages) user.messages.push_back(parse_message(m));
  normalize_message_order(user);
  return user;
}

json to_json(const Message& m) {
  json j;
  j["text"] = m.text;
  j["created_at"] = format_timestamp(m.created_at);
  if (m.geotag) {
    j["lat"] = m.geotag->lat;
    j["lon"] = m.geotag->lon;
  }
  if (m.venue) {
    j["venue_city"] = m.venue->city;
    j["venue_state"] = m.venue->state;
  }
  return j;
}

}  // namespace

Timestamp parse_timestamp(std::string_view text) {
  // YYYY-MM-DDTHH:MM:SS followed by Z or +00:00.
  int y = 0, mo = 0, d = 0, h = 0, mi = 0, s = 0;
  const bool shape_ok = text.size() >= 20 && parse_fixed(text, 0, 4, y) &&
                        text[4] == '-' && parse_fixed(text, 5, 2, mo) &&
                        text[7] == '-' && parse_fixed(text, 8, 2, d) &&
                        (text[10] == 'T' || text[10] == ' ') &&
                        parse_fixed(text, 11, 2, h) && text[13] == ':' &&
                        parse_fixed(text, 14, 2, mi) && text[16] == ':' &&
                        parse_fixed(text, 17, 2, s);
  const std::string_view zone = shape_ok ? text.substr(19) : std::string_view{};
  if (!shape_ok || (zone != "Z" && zone != "+00:00")) {
    throw DataError(DataErrc::kTimestamp,
                    "unparseable timestamp '" + std::string(text) + "'");
  }
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok() || h > 23 || mi > 59 || s > 59) {
    throw DataError(DataErrc::kTimestamp,
                    "invalid timestamp '" + std::string(text) + "'");
  }
  return sys_days{ymd} + hours{h} + minutes{mi} + seconds{s};
}

std::string format_timestamp(Timestamp t) {
  const sys_days day_point = floor<days>(t);
  const year_month_day ymd{day_point};
  const hh_mm_ss hms{t - day_point};
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%04d-%02u-%02uT%02d:%02d:%02dZ",
                static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()),
                static_cast<int>(hms.hours().count()),
                static_cast<int>(hms.minutes().count()),
                static_cast<int>(hms.seconds().count()));
  return buf;
}

int minute_of_day(Timestamp t) {
  const auto since_midnight = t - floor<days>(t);
  return static_cast<int>(duration_cast<minutes>(since_midnight).count());
}

std::int64_t day_number(Timestamp t) {
  return floor<days>(t).time_since_epoch().count();
}

void normalize_message_order(UserRecord& user) {
  std::stable_sort(user.messages.begin(), user.messages.end(),
                   [](const Message& a, const Message& b) {
                     return a.created_at > b.created_at;
                   });
}

UserRecord cap_messages(const UserRecord& user, std::size_t cap) {
  UserRecord out;
  out.user_id = user.user_id;
  out.home_label = user.home_label;
  const std::size_t n = std::min(cap, user.messages.size());
  out.messages.assign(user.messages.begin(), user.messages.begin() + n);
  return out;
}

CorpusLoad read_corpus(std::istream& in, const LocationTaxonomy& taxonomy,
                       const CorpusOptions& options) {
  CorpusLoad result;
  std::set<std::string, std::less<>> seen;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      UserRecord user = parse_record(line, taxonomy, options);
      if (!seen.insert(user.user_id).second) {
        throw record_error(DataErrc::kDuplicate,
                           "duplicate user_id '" + user.user_id + "'");
      }
      result.users.push_back(std::move(user));
    } catch (const DataError& e) {
      if (options.strict) {
        throw DataError(e.code(), "corpus line " + std::to_string(line_no) +
                                      ": " + e.what());
      }
      result.issues.push_back({line_no, e.code(), e.what()});
    }
  }
  return result;
}

CorpusLoad load_corpus(const std::filesystem::path& path,
                       const LocationTaxonomy& taxonomy,
                       const CorpusOptions& options) {
  std::ifstream in(path);
  if (!in) {
    throw DataError(DataErrc::kParse,
                    "cannot open corpus file '" + path.string() + "'");
  }
  return read_corpus(in, taxonomy, options);
}

void write_corpus(std::ostream& out, std::span<const UserRecord> users) {
  for (const UserRecord& u : users) {
    json j;
    j["user_id"] = u.user_id;
    if (u.home_label) j["home_label"] = *u.home_label;
    json messages = json::array();
    for (const Message& m : u.messages) messages.push_back(to_json(m));
    j["messages"] = std::move(messages);
    out << j.dump() << '\n';
  }
}

void save_corpus(const std::filesystem::path& path,
                 std::span<const UserRecord> users) {
  std::ofstream out(path);
  if (!out) {
    throw DataError(DataErrc::kParse,
                    "cannot write corpus file '" + path.string() + "'");
  }
  write_corpus(out, users);
}

std::vector<Fold> split_folds(std::size_t n_users, int k, std::uint64_t seed) {
  if (k < 2) throw ConfigError("fold count must be at least 2");
  if (static_cast<std::size_t>(k) > n_users) {
    throw ConfigError("fold count " + std::to_string(k) + " exceeds the " +
                      std::to_string(n_users) + " available users");
  }
  std::vector<std::size_t> order(n_users);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));

  std::vector<Fold> folds(static_cast<std::size_t>(k));
  for (std::size_t i = 0; i < n_users; ++i) {
    folds[i % folds.size()].test.push_back(order[i]);
  }
  for (Fold& f : folds) {
    std::sort(f.test.begin(), f.test.end());
    f.train.reserve(n_users - f.test.size());
    std::size_t t = 0;
    for (std::size_t i = 0; i < n_users; ++i) {
      if (t < f.test.size() && f.test[t] == i) {
        ++t;
      } else {
        f.train.push_back(i);
      }
    }
  }
  return folds;
}

std::vector<Fold> split_folds(std::span<const UserRecord> users, int k,
                              std::uint64_t seed) {
  return split_folds(users.size(), k, seed);
}

}  // namespace geoinfer
