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

// Geotag movement statistics and the traveling-user filter.

#ifndef GEOINFER_MOVEMENT_HPP_
#define GEOINFER_MOVEMENT_HPP_

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "geoinfer/corpus.hpp"
#include "geoinfer/profile.hpp"
#include "geoinfer/taxonomy.hpp"

namespace geoinfer {

inline constexpr double kEarthRadiusMiles = 3958.8;
inline constexpr double kDefaultTravelThresholdMiles = 100.0;

// Great-circle distance.
double haversine_miles(const GeoPoint& a, const GeoPoint& b);

// [0, 10], (10, 100], (100, 500], (500, inf).
enum class DistanceBucket { k0To10, k11To100, k101To500, kOver500 };

// "0-10", "11-100", "101-500", "500+".
std::string_view to_string(DistanceBucket bucket);
DistanceBucket bucket_for(double miles);

struct MovementStats {
  std::string user_id;
  std::size_t n_geotagged = 0;
  double avg_pairwise_miles = 0.0;
  double max_pairwise_miles = 0.0;
  DistanceBucket bucket_avg = DistanceBucket::k0To10;
  DistanceBucket bucket_max = DistanceBucket::k0To10;
};

// Mean and max over all unordered pairs; zeros below two geotags.
MovementStats movement_stats(std::string_view user_id,
                             std::span<const GeoPoint> geotags);
MovementStats movement_stats(const UserRecord& user);

// Strictly above the threshold.
bool label_traveling(const MovementStats& stats,
                     double threshold_miles = kDefaultTravelThresholdMiles);

// Tabular report: user_id, n_geotagged, avg_miles, max_miles, bucket_avg,
// bucket_max.
void write_movement_report(std::ostream& out,
                           std::span<const MovementStats> rows);

inline constexpr std::size_t kTimeSpreadSlots = 24;

// Per UTC hour, the standard deviation across days of that hour's share of
// the day's messages.
std::array<double, kTimeSpreadSlots> time_spread(
    std::span<const Timestamp> times);

struct TravelTrainingOptions {
  double threshold_miles = kDefaultTravelThresholdMiles;
  // Terms used by fewer training users are left out of the feature set.
  int min_term_users = 2;
  double learning_rate = 0.5;
  double l2 = 1e-4;
  int max_epochs = 500;
  double tolerance = 1e-6;
  std::uint64_t seed = 0;
};

// Logistic regression over normalized term proportions (words, hashtags and
// place names, family-prefixed) and the 24 time-spread features.
struct TravelModel {
  std::vector<std::string> vocabulary;  // sorted, family-prefixed
  std::vector<double> feature_means;    // vocabulary then time spread
  std::vector<double> feature_scales;
  std::vector<double> weights;
  double bias = 0.0;
  double threshold_miles = kDefaultTravelThresholdMiles;
  int epochs_run = 0;

  std::vector<double> features(const UserProfile& user) const;
  double probability(const UserProfile& user) const;
  bool is_traveling(const UserProfile& user) const {
    return probability(user) >= 0.5;
  }
};

// Labels come from label_traveling on each user's geotags. Throws
// DataError(kSingleClass) when only one label occurs.
TravelModel train_travel_model(std::span<const UserProfile* const> users,
                               const TravelTrainingOptions& options = {});

struct TravelSplit {
  std::vector<std::size_t> kept;
  std::vector<std::size_t> removed;
};

TravelSplit filter_travelers(std::span<const UserProfile* const> users,
                             const TravelModel& model);

}  // namespace geoinfer

#endif  // GEOINFER_MOVEMENT_HPP_
