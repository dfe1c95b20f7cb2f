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

// Accuracy metrics and the cross-validated experiment runner.

#ifndef GEOINFER_EVAL_HPP_
#define GEOINFER_EVAL_HPP_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "geoinfer/classifiers.hpp"
#include "geoinfer/corpus.hpp"
#include "geoinfer/ensemble.hpp"
#include "geoinfer/movement.hpp"
#include "geoinfer/profile.hpp"

namespace geoinfer {

using LabelMap = std::map<std::string, std::string>;  // user_id -> label

// Fraction of `truth` users whose prediction matches. A missing prediction
// counts as wrong. Throws DataError(kEmptyInput) on an empty truth map.
double exact_accuracy(const LabelMap& predictions, const LabelMap& truth);

// A city prediction is correct when its centroid lies within
// `radius_miles` of the true city's centroid.
double relaxed_accuracy(const LabelMap& predictions, const LabelMap& truth,
                        const LocationTaxonomy& taxonomy, double radius_miles);

inline const std::vector<double> kDefaultRadiiMiles = {0, 10, 50, 100, 1000};

struct ExperimentConfig {
  std::string name = "experiment";
  PredictorSpec predictor = EnsembleSpec{};
  int folds = 10;
  std::uint64_t seed = 0;
  std::optional<std::size_t> message_cap;
  bool travel_filter = false;
  TravelTrainingOptions travel;
  TrainingOptions training;
  std::vector<double> radii = kDefaultRadiiMiles;

  void validate() const;
};

struct MemberRow {
  Member member = Member::kWords;
  std::size_t n_voted = 0;  // users the member did not abstain on
  std::size_t n_correct = 0;
  double accuracy = 0.0;    // n_correct / evaluated users
};

struct EvalReport {
  std::string config;
  Granularity granularity = Granularity::kCity;
  std::size_t n = 0;
  std::size_t n_correct = 0;
  double accuracy = 0.0;
  std::vector<std::pair<double, double>> relaxed;  // (radius, accuracy)
  std::vector<MemberRow> members;                  // flat predictors only
  std::vector<std::size_t> fold_n;
  std::size_t travelers_removed = 0;
  std::size_t fallbacks = 0;
  std::optional<double> first_level_accuracy;
  std::size_t hierarchy_violations = 0;
  double median_latency_ms = 0.0;  // wall clock; excluded from metric files
  LabelMap predictions;
};

// Featurizes `users` (after the message cap) and runs k-fold
// cross-validation. Every user needs a home_label.
EvalReport run_experiment(const ExperimentConfig& config,
                          std::span<const UserRecord> users,
                          const Featurizer& featurizer,
                          const Knowledge& knowledge);

// Same on already featurized users; `config.message_cap` is ignored.
EvalReport run_experiment(const ExperimentConfig& config,
                          std::span<const UserProfile> profiles,
                          const Knowledge& knowledge);

void print_report(std::ostream& out, const EvalReport& report);

// Tab-separated rows: metric, granularity, config, value. Deterministic
// for a fixed corpus and config.
void write_metrics(std::ostream& out, std::span<const EvalReport> reports);

}  // namespace geoinfer

#endif  // GEOINFER_EVAL_HPP_
