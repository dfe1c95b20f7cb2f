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

// Corpus data model: messages, users, ingestion and fold splitting.

#ifndef GEOINFER_CORPUS_HPP_
#define GEOINFER_CORPUS_HPP_

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "geoinfer/error.hpp"
#include "geoinfer/taxonomy.hpp"

namespace geoinfer {

using Timestamp = std::chrono::sys_seconds;

// Parses "YYYY-MM-DDTHH:MM:SSZ". Throws DataError(kTimestamp).
Timestamp parse_timestamp(std::string_view text);
std::string format_timestamp(Timestamp t);

// Minutes since UTC midnight, in [0, 1440).
int minute_of_day(Timestamp t);
// Whole days since the Unix epoch (floor).
std::int64_t day_number(Timestamp t);

// A check-in venue already resolved to a city/state pair.
struct Venue {
  std::string city;
  std::string state;

  bool operator==(const Venue&) const = default;
};

struct Message {
  std::string text;
  Timestamp created_at{};
  std::optional<GeoPoint> geotag;
  std::optional<Venue> venue;

  bool operator==(const Message&) const = default;
};

struct UserRecord {
  std::string user_id;
  // Most recent first.
  std::vector<Message> messages;
  std::optional<std::string> home_label;

  bool operator==(const UserRecord&) const = default;
};

// Sorts messages by descending created_at; ties keep their input order.
void normalize_message_order(UserRecord& user);

// Keeps only the `cap` most recent messages.
UserRecord cap_messages(const UserRecord& user, std::size_t cap);

struct LoadIssue {
  std::size_t line = 0;
  DataErrc code = DataErrc::kParse;
  std::string message;
};

struct CorpusLoad {
  std::vector<UserRecord> users;
  std::vector<LoadIssue> issues;
};

struct CorpusOptions {
  // Abort on the first bad record instead of skipping it.
  bool strict = false;
  // Reject records without a home_label (training/evaluation input).
  bool require_labels = false;
};

CorpusLoad read_corpus(std::istream& in, const LocationTaxonomy& taxonomy,
                       const CorpusOptions& options = {});
CorpusLoad load_corpus(const std::filesystem::path& path,
                       const LocationTaxonomy& taxonomy,
                       const CorpusOptions& options = {});

void write_corpus(std::ostream& out, std::span<const UserRecord> users);
void save_corpus(const std::filesystem::path& path,
                 std::span<const UserRecord> users);

// One cross-validation partition, as indices into the input user list.
struct Fold {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

// Deterministic k-fold split. Test folds are disjoint, cover every user and
// differ in size by at most one. Throws ConfigError when k < 2 or k > n.
std::vector<Fold> split_folds(std::size_t n_users, int k, std::uint64_t seed);
std::vector<Fold> split_folds(std::span<const UserRecord> users, int k,
                              std::uint64_t seed);

}  // namespace geoinfer

#endif  // GEOINFER_CORPUS_HPP_
