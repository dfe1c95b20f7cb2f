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

// Flat and two-level hierarchical ensembles of the base classifiers.

#ifndef GEOINFER_ENSEMBLE_HPP_
#define GEOINFER_ENSEMBLE_HPP_

#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "geoinfer/classifiers.hpp"
#include "geoinfer/features.hpp"
#include "geoinfer/profile.hpp"
#include "geoinfer/taxonomy.hpp"

namespace geoinfer {

enum class Combiner { kDynamicWeighted, kMajorityVote };

// "dynamic", "majority".
std::string_view to_string(Combiner combiner);
Combiner parse_combiner(std::string_view name);

struct EnsembleSpec {
  std::vector<Member> members;
  Combiner combiner = Combiner::kDynamicWeighted;
  Granularity granularity = Granularity::kCity;

  // Throws ConfigError on an empty or duplicated member list, behavior away
  // from TimeZone, or local_place away from City/State.
  void validate() const;
};

// Words, hashtags, place names and visit history, plus local place at City
// and State, plus behavior at TimeZone when `with_behavior`.
std::vector<Member> default_members(Granularity granularity,
                                    bool with_behavior = true);

// Sum of weights per label; highest wins, ties go to the lexicographically
// smallest label, an empty list yields `fallback`.
Prediction combine_dynamic(std::span<const Prediction> votes,
                           std::string_view fallback);
// combine_dynamic with every weight set to 1.
Prediction combine_majority(std::span<const Prediction> votes,
                            std::string_view fallback);
Prediction combine(Combiner combiner, std::span<const Prediction> votes,
                   std::string_view fallback);

// External knowledge shared by training and prediction.
struct Knowledge {
  const LocationTaxonomy* taxonomy = nullptr;
  const Gazetteer* gazetteer = nullptr;
};

struct TrainingOptions {
  LocalTermConfig local_terms;
  double alpha = 1.0;
  int slot_minutes = 1;
  double variance_floor = kDefaultVarianceFloor;
};

struct EnsembleOutput {
  Prediction prediction;
  bool fallback = false;  // every member abstained
  std::vector<Prediction> votes;
};

// A trained flat ensemble at one granularity.
class FlatPredictor {
 public:
  EnsembleSpec spec;
  // Statistical members that found no local terms have no entry and always
  // abstain.
  std::map<Member, TermModel> term_models;
  std::optional<BehaviorModel> behavior;
  std::set<std::string> labels;  // labels seen in training
  std::string fallback_label;    // most frequent training label
  std::vector<std::string> notes;

  Classification classify_member(Member member, const UserProfile& user,
                                 const Knowledge& knowledge) const;
  EnsembleOutput predict(const UserProfile& user,
                         const Knowledge& knowledge) const;
};

// Throws DataError(kEmptyInput) without users and ConfigError when a member
// needs a gazetteer that `knowledge` lacks.
FlatPredictor train_flat(const EnsembleSpec& spec,
                         std::span<const UserProfile* const> users,
                         const Knowledge& knowledge,
                         const TrainingOptions& options = {});

// Term documents of `users` for one member at `granularity`. Bags built for
// the single classifier are kept in `storage`.
std::vector<TermDocument> term_documents(
    std::span<const UserProfile* const> users, Member member,
    Granularity granularity, const LocationTaxonomy& taxonomy,
    std::vector<TermBag>& storage);

struct HierarchySpec {
  Granularity first_level = Granularity::kTimeZone;
  EnsembleSpec first;  // granularity == first_level
  EnsembleSpec city;   // granularity == City

  void validate() const;
};

// First level gets `content_members` (minus local_place where inadmissible)
// plus behavior when it is TimeZone; every branch gets `content_members`.
HierarchySpec make_hierarchy_spec(Granularity first_level,
                                  const std::vector<Member>& content_members,
                                  Combiner combiner);

struct HierarchyOutput {
  Prediction first_level;
  Prediction city;
  bool fallback = false;
};

class HierarchicalPredictor {
 public:
  struct Branch {
    enum class Kind { kEmpty, kDirect, kModel };
    Kind kind = Kind::kEmpty;
    // kDirect: the only training city. kEmpty: smallest taxonomy city.
    std::string city;
    std::optional<FlatPredictor> model;
  };

  HierarchySpec spec;
  FlatPredictor first;
  std::map<std::string, Branch> branches;  // every first-level label with cities

  HierarchyOutput predict(const UserProfile& user,
                          const Knowledge& knowledge) const;
};

HierarchicalPredictor train_hierarchy(const HierarchySpec& spec,
                                      std::span<const UserProfile* const> users,
                                      const Knowledge& knowledge,
                                      const TrainingOptions& options = {});

using PredictorSpec = std::variant<EnsembleSpec, HierarchySpec>;

Granularity output_granularity(const PredictorSpec& spec);
std::string describe(const PredictorSpec& spec);

struct PredictorOutput {
  Prediction prediction;
  bool fallback = false;
  std::optional<Prediction> first_level;  // hierarchical predictors only
};

// Either kind of trained predictor behind one interface.
class LocationPredictor {
 public:
  LocationPredictor() = default;
  explicit LocationPredictor(FlatPredictor flat) : impl_(std::move(flat)) {}
  explicit LocationPredictor(HierarchicalPredictor h) : impl_(std::move(h)) {}

  static LocationPredictor train(const PredictorSpec& spec,
                                 std::span<const UserProfile* const> users,
                                 const Knowledge& knowledge,
                                 const TrainingOptions& options = {});

  PredictorOutput predict(const UserProfile& user,
                          const Knowledge& knowledge) const;
  Granularity granularity() const;
  PredictorSpec spec() const;

  const std::variant<FlatPredictor, HierarchicalPredictor>& impl() const {
    return impl_;
  }

 private:
  std::variant<FlatPredictor, HierarchicalPredictor> impl_;
};

}  // namespace geoinfer

#endif  // GEOINFER_ENSEMBLE_HPP_
