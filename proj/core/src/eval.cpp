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

#include "geoinfer/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ostream>

#include "geoinfer/error.hpp"

namespace geoinfer {
namespace {

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void metric_row(std::ostream& out, std::string_view metric,
                const EvalReport& r, const std::string& value) {
  out << metric << '\t' << to_string(r.granularity) << '\t' << r.config << '\t'
      << value << '\n';
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t mid = v.size() / 2;
  return v.size() % 2 == 1 ? v[mid] : 0.5 * (v[mid - 1] + v[mid]);
}

}  // namespace

double exact_accuracy(const LabelMap& predictions, const LabelMap& truth) {
  if (truth.empty()) throw DataError(DataErrc::kEmptyInput, "empty test set");
  std::size_t correct = 0;
  for (const auto& [user, label] : truth) {
    const auto it = predictions.find(user);
    if (it != predictions.end() && it->second == label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(truth.size());
}

double relaxed_accuracy(const LabelMap& predictions, const LabelMap& truth,
                        const LocationTaxonomy& taxonomy, double radius_miles) {
  if (truth.empty()) throw DataError(DataErrc::kEmptyInput, "empty test set");
  if (!(radius_miles >= 0.0)) throw ConfigError("radius must be non-negative");
  std::size_t correct = 0;
  for (const auto& [user, label] : truth) {
    const auto it = predictions.find(user);
    if (it == predictions.end()) continue;
    const double d = haversine_miles(taxonomy.city(it->second).location,
                                     taxonomy.city(label).location);
    if (d <= radius_miles) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(truth.size());
}

void ExperimentConfig::validate() const {
  if (folds < 2) throw ConfigError("fold count must be at least 2");
  if (message_cap && *message_cap == 0) {
    throw ConfigError("message cap must be positive");
  }
  for (double r : radii) {
    if (!(r >= 0.0)) throw ConfigError("relaxed-accuracy radii must be >= 0");
  }
  training.local_terms.validate();
  std::visit([](const auto& s) { s.validate(); }, predictor);
  if (travel_filter && !(travel.threshold_miles > 0.0)) {
    throw ConfigError("travel threshold must be positive");
  }
}

EvalReport run_experiment(const ExperimentConfig& config,
                          std::span<const UserRecord> users,
                          const Featurizer& featurizer,
                          const Knowledge& knowledge) {
  config.validate();
  std::vector<UserProfile> profiles;
  profiles.reserve(users.size());
  for (const UserRecord& u : users) {
    profiles.push_back(config.message_cap
                           ? featurizer(cap_messages(u, *config.message_cap))
                           : featurizer(u));
  }
  return run_experiment(config, std::span<const UserProfile>(profiles), knowledge);
}

EvalReport run_experiment(const ExperimentConfig& config,
                          std::span<const UserProfile> profiles,
                          const Knowledge& knowledge) {
  config.validate();
  if (knowledge.taxonomy == nullptr) throw ConfigError("evaluation needs a taxonomy");
  if (profiles.empty()) throw DataError(DataErrc::kEmptyInput, "no users to evaluate");
  for (const UserProfile& p : profiles) {
    if (!p.home_label) {
      throw DataError(DataErrc::kUnknownLabel,
                      "user '" + p.user_id + "' has no home_label");
    }
  }
  const LocationTaxonomy& taxonomy = *knowledge.taxonomy;

  EvalReport report;
  report.config = config.name;
  report.granularity = output_granularity(config.predictor);
  const auto* flat_spec = std::get_if<EnsembleSpec>(&config.predictor);
  const auto* hier_spec = std::get_if<HierarchySpec>(&config.predictor);
  if (flat_spec != nullptr) {
    for (Member m : flat_spec->members) report.members.push_back({m});
  }

  LabelMap truth;
  LabelMap first_truth;
  LabelMap first_predictions;
  std::vector<double> latencies;

  for (const Fold& fold : split_folds(profiles.size(), config.folds, config.seed)) {
    std::vector<const UserProfile*> train;
    train.reserve(fold.train.size());
    for (std::size_t i : fold.train) train.push_back(&profiles[i]);
    std::vector<const UserProfile*> test;
    test.reserve(fold.test.size());
    for (std::size_t i : fold.test) test.push_back(&profiles[i]);

    if (config.travel_filter) {
      const TravelModel travel = train_travel_model(train, config.travel);
      const TravelSplit split = filter_travelers(test, travel);
      report.travelers_removed += split.removed.size();
      std::vector<const UserProfile*> kept;
      kept.reserve(split.kept.size());
      for (std::size_t i : split.kept) kept.push_back(test[i]);
      test = std::move(kept);
    }

    const LocationPredictor predictor =
        LocationPredictor::train(config.predictor, train, knowledge, config.training);
    const auto* flat = std::get_if<FlatPredictor>(&predictor.impl());

    for (const UserProfile* u : test) {
      const auto start = std::chrono::steady_clock::now();
      const PredictorOutput out = predictor.predict(*u, knowledge);
      const auto stop = std::chrono::steady_clock::now();
      latencies.push_back(
          std::chrono::duration<double, std::milli>(stop - start).count());

      const std::string expected = taxonomy.project(*u->home_label, report.granularity);
      truth[u->user_id] = expected;
      report.predictions[u->user_id] = out.prediction.label;
      if (out.fallback) ++report.fallbacks;

      if (hier_spec != nullptr && out.first_level) {
        first_truth[u->user_id] = taxonomy.project(*u->home_label, hier_spec->first_level);
        first_predictions[u->user_id] = out.first_level->label;
        if (taxonomy.project(out.prediction.label, hier_spec->first_level) !=
            out.first_level->label) {
          ++report.hierarchy_violations;
        }
      }
      if (flat != nullptr) {
        for (MemberRow& row : report.members) {
          const Classification c = flat->classify_member(row.member, *u, knowledge);
          if (!c.prediction) continue;
          ++row.n_voted;
          if (c.prediction->label == expected) ++row.n_correct;
        }
      }
    }
    report.fold_n.push_back(test.size());
  }

  report.n = truth.size();
  if (report.n == 0) {
    throw DataError(DataErrc::kEmptyInput, "every test user was filtered out");
  }
  report.accuracy = exact_accuracy(report.predictions, truth);
  for (const auto& [user, label] : truth) {
    if (report.predictions.at(user) == label) ++report.n_correct;
  }
  for (MemberRow& row : report.members) {
    row.accuracy = static_cast<double>(row.n_correct) / static_cast<double>(report.n);
  }
  if (report.granularity == Granularity::kCity) {
    for (double r : config.radii) {
      report.relaxed.emplace_back(
          r, relaxed_accuracy(report.predictions, truth, taxonomy, r));
    }
  }
  if (!first_truth.empty()) {
    report.first_level_accuracy = exact_accuracy(first_predictions, first_truth);
  }
  report.median_latency_ms = median(std::move(latencies));
  return report;
}

void print_report(std::ostream& out, const EvalReport& r) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%s [%s]: accuracy %.4f (%zu/%zu)\n",
                r.config.c_str(), std::string(to_string(r.granularity)).c_str(),
                r.accuracy, r.n_correct, r.n);
  out << buf;
  if (r.first_level_accuracy) {
    std::snprintf(buf, sizeof(buf), "  first level accuracy %.4f, violations %zu\n",
                  *r.first_level_accuracy, r.hierarchy_violations);
    out << buf;
  }
  for (const auto& [radius, acc] : r.relaxed) {
    std::snprintf(buf, sizeof(buf), "  within %g miles: %.4f\n", radius, acc);
    out << buf;
  }
  for (const MemberRow& m : r.members) {
    std::snprintf(buf, sizeof(buf), "  %-14s accuracy %.4f voted %zu\n",
                  std::string(to_string(m.member)).c_str(), m.accuracy, m.n_voted);
    out << buf;
  }
  std::snprintf(buf, sizeof(buf),
                "  fallbacks %zu, travelers removed %zu, median latency %.3f ms\n",
                r.fallbacks, r.travelers_removed, r.median_latency_ms);
  out << buf;
}

void write_metrics(std::ostream& out, std::span<const EvalReport> reports) {
  out << "metric\tgranularity\tconfig\tvalue\n";
  for (const EvalReport& r : reports) {
    metric_row(out, "accuracy", r, format_value(r.accuracy));
    metric_row(out, "n", r, std::to_string(r.n));
    metric_row(out, "n_correct", r, std::to_string(r.n_correct));
    metric_row(out, "fallbacks", r, std::to_string(r.fallbacks));
    metric_row(out, "travelers_removed", r, std::to_string(r.travelers_removed));
    for (std::size_t i = 0; i < r.fold_n.size(); ++i) {
      metric_row(out, "fold_" + std::to_string(i) + "_n", r,
                 std::to_string(r.fold_n[i]));
    }
    for (const auto& [radius, acc] : r.relaxed) {
      char name[48];
      std::snprintf(name, sizeof(name), "relaxed_%g", radius);
      metric_row(out, name, r, format_value(acc));
    }
    if (r.first_level_accuracy) {
      metric_row(out, "first_level_accuracy", r, format_value(*r.first_level_accuracy));
      metric_row(out, "hierarchy_violations", r,
                 std::to_string(r.hierarchy_violations));
    }
    for (const MemberRow& m : r.members) {
      metric_row(out, "member_" + std::string(to_string(m.member)) + "_accuracy",
                 r, format_value(m.accuracy));
    }
  }
}

}  // namespace geoinfer
