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

// Base location classifiers.
//
// Three statistical classifiers (multinomial naive Bayes over words,
// hashtags and place names, plus a single model over their union), two
// frequency heuristics (place mentions and check-in history) and a Gaussian
// naive Bayes time-zone classifier over time-of-day activity.
//
// Every classifier may abstain. When it does not, the emitted weight is its
// classification strength: 1 / |matching location set| for the content
// classifiers, the normalized posterior of the winning class for the
// behavior classifier.

#ifndef GEOINFER_CLASSIFIERS_HPP_
#define GEOINFER_CLASSIFIERS_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "geoinfer/corpus.hpp"
#include "geoinfer/features.hpp"
#include "geoinfer/gazetteer.hpp"
#include "geoinfer/profile.hpp"
#include "geoinfer/taxonomy.hpp"

namespace geoinfer {

enum class Member {
  kWords,
  kHashtags,
  kPlaceNames,
  kSingle,  // one model over the namespaced union of the three families
  kLocalPlace,
  kVisitHistory,
  kBehavior,
};

// "words", "hashtags", "placenames", "single", "local_place",
// "visit_history", "behavior".
std::string_view to_string(Member member);
Member parse_member(std::string_view name);
std::optional<TermFamily> family_of(Member member);
bool is_statistical(Member member);

struct Prediction {
  std::string label;
  double weight = 0.0;
  Member source = Member::kWords;

  bool operator==(const Prediction&) const = default;
};

struct Classification {
  std::optional<Prediction> prediction;  // empty when abstaining
  std::size_t matching_set_size = 0;
  // Normalized posterior over the model's labels; empty for heuristics and
  // abstentions.
  std::vector<double> posterior;

  bool abstained() const { return !prediction.has_value(); }
};

// --- Multinomial naive Bayes -------------------------------------------------

struct TermModel {
  Member source = Member::kWords;
  Granularity granularity = Granularity::kCity;
  double alpha = 1.0;
  std::vector<std::string> labels;      // sorted
  std::vector<std::string> vocabulary;  // sorted
  std::vector<double> log_priors;       // per label
  std::vector<std::vector<double>> log_likelihoods;  // [label][term]
  // Labels whose training documents contain the term at least once.
  std::vector<std::vector<std::uint32_t>> supporting_labels;  // [term]

  std::optional<std::size_t> term_index(std::string_view term) const;
  std::optional<std::size_t> label_index(std::string_view label) const;
};

// One document per user, restricted to `vocabulary`, additive smoothing
// `alpha`. Labels are those present in `documents`. Throws
// DataError(kEmptyVocabulary) for an empty vocabulary and
// DataError(kEmptyInput) for no documents.
TermModel train_term_model(std::span<const TermDocument> documents,
                           const std::set<std::string>& vocabulary,
                           Granularity granularity, Member source,
                           double alpha = 1.0);

// Log-domain posterior argmax with lexicographic tie-break. Abstains when no
// term of `terms` is in the vocabulary.
Classification classify_term_model(const TermModel& model,
                                   const TermBag& terms);

// Family-prefixed union ("w:", "h:", "p:") used by the single classifier.
TermBag namespaced_union(const UserProfile& profile);

// --- Heuristics --------------------------------------------------------------

// Per-location mention counts. City counts city targets; State counts state
// targets and the states of city targets, once per mention. Ambiguous forms
// credit every candidate. `candidates` restricts the labels when non-null.
std::map<std::string, int> local_place_counts(
    const TermBag& place_terms, Granularity granularity,
    const Gazetteer& gazetteer, const LocationTaxonomy& taxonomy,
    const std::set<std::string>* candidates = nullptr);

// Granularity must be City or State (ConfigError otherwise).
Classification classify_local_place(
    const TermBag& place_terms, Granularity granularity,
    const Gazetteer& gazetteer, const LocationTaxonomy& taxonomy,
    const std::set<std::string>* candidates = nullptr);
Classification classify_local_place(const UserRecord& user,
                                    Granularity granularity,
                                    const Gazetteer& gazetteer,
                                    const LocationTaxonomy& taxonomy);

std::map<std::string, int> visit_counts(
    std::span<const std::string> venue_cities, Granularity granularity,
    const LocationTaxonomy& taxonomy,
    const std::set<std::string>* candidates = nullptr);

Classification classify_visit_history(
    std::span<const std::string> venue_cities, Granularity granularity,
    const LocationTaxonomy& taxonomy,
    const std::set<std::string>* candidates = nullptr);
// Venues missing from the taxonomy are skipped and tallied in
// `unknown_venues` when given.
Classification classify_visit_history(const UserRecord& user,
                                      Granularity granularity,
                                      const VenueResolver& resolver,
                                      const LocationTaxonomy& taxonomy,
                                      std::size_t* unknown_venues = nullptr);

// --- Behavior ----------------------------------------------------------------

inline constexpr double kDefaultVarianceFloor = 1e-9;

struct BehaviorModel {
  int slot_minutes = 1;
  // Relative: the floor actually added is variance_floor times the widest
  // pooled slot variance, kept in min_variance.
  double variance_floor = kDefaultVarianceFloor;
  double min_variance = kDefaultVarianceFloor;
  std::vector<std::string> classes;  // sorted
  std::vector<double> log_priors;
  std::vector<double> slot_weights;
  // Gaussian parameters of the weighted features, [class][slot].
  std::vector<std::vector<double>> means;
  std::vector<std::vector<double>> variances;

  std::size_t slot_count() const { return slot_weights.size(); }
};

// Fraction of messages per UTC time-of-day slot. Sums to 1 for non-empty
// input. `slot_minutes` must divide 1440.
std::vector<double> slot_profile(std::span<const Timestamp> times,
                                 int slot_minutes);

// Per-slot population standard deviation across the class mean profiles.
std::vector<double> slot_weights(
    std::span<const std::vector<double>> class_mean_profiles);

struct BehaviorDocument {
  std::string label;
  std::span<const Timestamp> times;
};

// `classes` fixes the label set; each must have at least one document
// (DataError(kInsufficientData) otherwise).
BehaviorModel train_behavior_model(std::span<const BehaviorDocument> documents,
                                   std::vector<std::string> classes,
                                   int slot_minutes,
                                   double variance_floor = kDefaultVarianceFloor);
// Classes are the taxonomy's time zones.
BehaviorModel train_behavior_model(std::span<const UserRecord> users,
                                   const LocationTaxonomy& taxonomy,
                                   int slot_minutes);

// Abstains on an empty message list.
Classification classify_behavior(const BehaviorModel& model,
                                 std::span<const Timestamp> times);
Classification classify_behavior(const BehaviorModel& model,
                                 const UserRecord& user);

}  // namespace geoinfer

#endif  // GEOINFER_CLASSIFIERS_HPP_
