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

// Model bundle persistence (JSON, version-tagged, bound to a taxonomy).

#ifndef GEOINFER_BUNDLE_HPP_
#define GEOINFER_BUNDLE_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>

#include "geoinfer/ensemble.hpp"
#include "geoinfer/movement.hpp"
#include "geoinfer/taxonomy.hpp"

namespace geoinfer {

inline constexpr int kBundleVersion = 1;

struct ModelBundle {
  std::string created_at;  // the only field allowed to differ between runs
  std::uint64_t taxonomy_fingerprint = 0;
  TrainingOptions training;
  LocationPredictor predictor;
  std::optional<TravelModel> travel;
};

void write_bundle(std::ostream& out, const ModelBundle& bundle);
void save_bundle(const std::filesystem::path& path, const ModelBundle& bundle);

// Throws DataError(kBundleFormat) for unreadable or wrong-version bundles
// and DataError(kTaxonomyMismatch) when `taxonomy` is not the one the bundle
// was trained against.
ModelBundle read_bundle(std::istream& in, const LocationTaxonomy& taxonomy);
ModelBundle load_bundle(const std::filesystem::path& path,
                        const LocationTaxonomy& taxonomy);

}  // namespace geoinfer

#endif  // GEOINFER_BUNDLE_HPP_
