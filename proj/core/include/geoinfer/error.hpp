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

#ifndef GEOINFER_ERROR_HPP_
#define GEOINFER_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace geoinfer {

// Classifies data problems so callers (and the CLI exit code) can react
// without parsing messages.
enum class DataErrc {
  kParse,
  kUnknownLabel,
  kRange,
  kTimestamp,
  kDuplicate,
  kDanglingReference,
  kMissingRegion,
  kEmptyInput,
  kEmptyVocabulary,
  kSingleClass,
  kInsufficientData,
  kTaxonomyMismatch,
  kBundleFormat,
};

std::string_view to_string(DataErrc code);

// Invalid configuration or argument combination.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or inconsistent input data.
class DataError : public std::runtime_error {
 public:
  DataError(DataErrc code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  DataErrc code() const noexcept { return code_; }

 private:
  DataErrc code_;
};

}  // namespace geoinfer

#endif  // GEOINFER_ERROR_HPP_
