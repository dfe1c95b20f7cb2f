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

#include "geoinfer/error.hpp"

namespace geoinfer {

std::string_view to_string(DataErrc code) {
  switch (code) {
    case DataErrc::kParse: return "ParseError";
    case DataErrc::kUnknownLabel: return "UnknownLabel";
    case DataErrc::kRange: return "RangeError";
    case DataErrc::kTimestamp: return "TimestampError";
    case DataErrc::kDuplicate: return "Duplicate";
    case DataErrc::kDanglingReference: return "DanglingReference";
    case DataErrc::kMissingRegion: return "MissingRegion";
    case DataErrc::kEmptyInput: return "EmptyInput";
    case DataErrc::kEmptyVocabulary: return "EmptyVocabulary";
    case DataErrc::kSingleClass: return "SingleClass";
    case DataErrc::kInsufficientData: return "InsufficientData";
    case DataErrc::kTaxonomyMismatch: return "TaxonomyMismatch";
    case DataErrc::kBundleFormat: return "BundleFormat";
  }
  return "Unknown";
}

}  // namespace geoinfer
