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

#include "geoinfer/ensemble.hpp"

#include <algorithm>
#include <stdexcept>

#include "geoinfer/error.hpp"

namespace geoinfer {
namespace {

bool admits_local_place(Granularity g) {
  return g == Granularity::kCity || g == Granularity::kState;
}

std::string join_members(const std::vector<Member>& members) {
  std::string out;
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (i > 0) out += '+';
    out += to_string(members[i]);
  }
  return out;
}

std::string home_label_at(const UserProfile& user, Granularity g,
                          const LocationTaxonomy& taxonomy) {
  if (!user.home_label) {
    throw DataError(DataErrc::kUnknownLabel,
                    "training user '" + user.user_id + "' has no home_label");
  }
  return taxonomy.project(*user.home_label, g);
}

std::set<std::string> select_for_family(
    std::span<const UserProfile* const> users, TermFamily family,
    Granularity g, const LocationTaxonomy& taxonomy,
    const LocalTermConfig& config) {
  std::vector<TermDocument> docs;
  docs.reserve(users.size());
  for (const UserProfile* u : users) {
    docs.push_back({home_label_at(*u, g, taxonomy), &u->terms_of(family)});
  }
  const TermStatsTable table = compute_term_stats(docs, family);
  return select_local_terms(table.stats, table.users_per_location, config);
}

}  // namespace

std::string_view to_string(Combiner combiner) {
  return combiner == Combiner::kDynamicWeighted ? "dynamic" : "majority";
}

Combiner parse_combiner(std::string_view name) {
  if (name == "dynamic") return Combiner::kDynamicWeighted;
  if (name == "majority") return Combiner::kMajorityVote;
  throw ConfigError("unknown combiner '" + std::string(name) +
                    "' (expected dynamic or majority)");
}

void EnsembleSpec::validate() const {
  if (members.empty()) throw ConfigError("ensemble needs at least one member");
  std::set<Member> seen;
  for (Member m : members) {
    if (!seen.insert(m).second) {
      throw ConfigError("duplicate ensemble member '" +
                        std::string(to_string(m)) + "'");
    }
    if (m == Member::kBehavior && granularity != Granularity::kTimeZone) {
      throw ConfigError("the behavior classifier only predicts time zones; it "
                        "cannot be a member at " +
                        std::string(to_string(granularity)) + " granularity");
    }
    if (m == Member::kLocalPlace && !admits_local_place(granularity)) {
      throw ConfigError("the local-place classifier works at city or state "
                        "granularity only");
    }
  }
}

std::vector<Member> default_members(Granularity granularity,
                                    bool with_behavior) {
  std::vector<Member> out = {Member::kWords, Member::kHashtags,
                             Member::kPlaceNames};
  if (admits_local_place(granularity)) out.push_back(Member::kLocalPlace);
  out.push_back(Member::kVisitHistory);
  if (with_behavior && granularity == Granularity::kTimeZone) {
    out.push_back(Member::kBehavior);
  }
  return out;
}

Prediction combine_dynamic(std::span<const Prediction> votes,
                           std::string_view fallback) {
  if (votes.empty()) return Prediction{std::string(fallback), 0.0, Member::kWords};
  std::map<std::string, std::vector<const Prediction*>> by_label;
  for (const Prediction& v : votes) by_label[v.label].push_back(&v);

  const Prediction* best_source = nullptr;
  const std::string* best_label = nullptr;
  double best_score = -1.0;
  for (auto& [label, group] : by_label) {
    // Summing in sorted order makes the score independent of vote order.
    std::sort(group.begin(), group.end(),
              [](const Prediction* a, const Prediction* b) {
                if (a->weight != b->weight) return a->weight < b->weight;
                return a->source < b->source;
              });
    double score = 0.0;
    for (const Prediction* p : group) score += p->weight;
    if (score > best_score) {
      best_score = score;
      best_label = &label;
      best_source = group.back();
    }
  }
  return Prediction{*best_label, best_score, best_source->source};
}

Prediction combine_majority(std::span<const Prediction> votes,
                            std::string_view fallback) {
  std::vector<Prediction> unit(votes.begin(), votes.end());
  for (Prediction& p : unit) p.weight = 1.0;
  return combine_dynamic(unit, fallback);
}

Prediction combine(Combiner combiner, std::span<const Prediction> votes,
                   std::string_view fallback) {
  return combiner == Combiner::kDynamicWeighted
             ? combine_dynamic(votes, fallback)
             : combine_majority(votes, fallback);
}

std::vector<TermDocument> term_documents(
    std::span<const UserProfile* const> users, Member member,
    Granularity granularity, const LocationTaxonomy& taxonomy,
    std::vector<TermBag>& storage) {
  std::vector<TermDocument> docs;
  docs.reserve(users.size());
  if (member == Member::kSingle) {
    storage.clear();
    storage.reserve(users.size());
    for (const UserProfile* u : users) storage.push_back(namespaced_union(*u));
    for (std::size_t i = 0; i < users.size(); ++i) {
      docs.push_back({home_label_at(*users[i], granularity, taxonomy), &storage[i]});
    }
    return docs;
  }
  const auto family = family_of(member);
  if (!family) {
    throw ConfigError("'" + std::string(to_string(member)) +
                      "' is not a statistical classifier");
  }
  for (const UserProfile* u : users) {
    docs.push_back({home_label_at(*u, granularity, taxonomy), &u->terms_of(*family)});
  }
  return docs;
}

FlatPredictor train_flat(const EnsembleSpec& spec,
                         std::span<const UserProfile* const> users,
                         const Knowledge& knowledge,
                         const TrainingOptions& options) {
  spec.validate();
  options.local_terms.validate();
  if (knowledge.taxonomy == nullptr) throw ConfigError("training needs a taxonomy");
  if (users.empty()) throw DataError(DataErrc::kEmptyInput, "no training users");
  const LocationTaxonomy& taxonomy = *knowledge.taxonomy;
  const Granularity g = spec.granularity;

  FlatPredictor fp;
  fp.spec = spec;
  std::map<std::string, int> label_counts;
  for (const UserProfile* u : users) ++label_counts[home_label_at(*u, g, taxonomy)];
  for (const auto& [label, n] : label_counts) fp.labels.insert(label);
  fp.fallback_label = label_counts.begin()->first;
  for (const auto& [label, n] : label_counts) {
    if (n > label_counts[fp.fallback_label]) fp.fallback_label = label;
  }

  for (Member m : spec.members) {
    if ((m == Member::kPlaceNames || m == Member::kLocalPlace) &&
        knowledge.gazetteer == nullptr) {
      throw ConfigError("classifier '" + std::string(to_string(m)) +
                        "' needs a gazetteer");
    }
    if (is_statistical(m)) {
      std::set<std::string> vocabulary;
      if (m == Member::kSingle) {
        static constexpr std::array<std::string_view, 3> kPrefix = {"w:", "h:", "p:"};
        for (TermFamily f : kAllTermFamilies) {
          for (const std::string& t :
               select_for_family(users, f, g, taxonomy, options.local_terms)) {
            vocabulary.insert(std::string(kPrefix[static_cast<std::size_t>(f)]) + t);
          }
        }
      } else {
        vocabulary = select_for_family(users, *family_of(m), g, taxonomy,
                                       options.local_terms);
      }
      if (vocabulary.empty()) {
        fp.notes.push_back(std::string(to_string(m)) +
                           ": no local terms selected; member abstains");
        continue;
      }
      std::vector<TermBag> storage;
      const auto docs = term_documents(users, m, g, taxonomy, storage);
      fp.term_models.emplace(m, train_term_model(docs, vocabulary, g, m, options.alpha));
    } else if (m == Member::kBehavior) {
      std::vector<BehaviorDocument> docs;
      docs.reserve(users.size());
      for (const UserProfile* u : users) {
        docs.push_back({home_label_at(*u, Granularity::kTimeZone, taxonomy), u->times});
      }
      fp.behavior = train_behavior_model(docs, taxonomy.labels(Granularity::kTimeZone),
                                         options.slot_minutes, options.variance_floor);
    }
  }
  return fp;
}

Classification FlatPredictor::classify_member(Member member,
                                              const UserProfile& user,
                                              const Knowledge& knowledge) const {
  const Granularity g = spec.granularity;
  switch (member) {
    case Member::kWords:
    case Member::kHashtags:
    case Member::kPlaceNames:
    case Member::kSingle: {
      const auto it = term_models.find(member);
      if (it == term_models.end()) return {};
      if (member == Member::kSingle) {
        return classify_term_model(it->second, namespaced_union(user));
      }
      return classify_term_model(it->second, user.terms_of(*family_of(member)));
    }
    case Member::kLocalPlace:
      return classify_local_place(user.terms_of(TermFamily::kPlaceNames), g,
                                  *knowledge.gazetteer, *knowledge.taxonomy,
                                  &labels);
    case Member::kVisitHistory:
      return classify_visit_history(user.venue_cities, g, *knowledge.taxonomy,
                                    &labels);
    case Member::kBehavior:
      if (!behavior) return {};
      return classify_behavior(*behavior, user.times);
  }
  return {};
}

EnsembleOutput FlatPredictor::predict(const UserProfile& user,
                                      const Knowledge& knowledge) const {
  EnsembleOutput out;
  for (Member m : spec.members) {
    Classification c = classify_member(m, user, knowledge);
    if (c.prediction) out.votes.push_back(std::move(*c.prediction));
  }
  out.fallback = out.votes.empty();
  out.prediction = combine(spec.combiner, out.votes, fallback_label);
  return out;
}

void HierarchySpec::validate() const {
  if (first_level == Granularity::kCity) {
    throw ConfigError("the first hierarchy level must be coarser than city");
  }
  if (first.granularity != first_level) {
    throw ConfigError("first-level ensemble granularity must match the "
                      "hierarchy's first level");
  }
  if (city.granularity != Granularity::kCity) {
    throw ConfigError("second-level ensembles must predict cities");
  }
  first.validate();
  city.validate();
}

HierarchySpec make_hierarchy_spec(Granularity first_level,
                                  const std::vector<Member>& content_members,
                                  Combiner combiner) {
  HierarchySpec spec;
  spec.first_level = first_level;
  spec.first.granularity = first_level;
  spec.first.combiner = combiner;
  spec.city.granularity = Granularity::kCity;
  spec.city.combiner = combiner;
  for (Member m : content_members) {
    if (m == Member::kBehavior) continue;
    spec.city.members.push_back(m);
    if (m == Member::kLocalPlace && !admits_local_place(first_level)) continue;
    spec.first.members.push_back(m);
  }
  if (first_level == Granularity::kTimeZone) {
    spec.first.members.push_back(Member::kBehavior);
  }
  return spec;
}

HierarchyOutput HierarchicalPredictor::predict(const UserProfile& user,
                                               const Knowledge& knowledge) const {
  HierarchyOutput out;
  const EnsembleOutput top = first.predict(user, knowledge);
  out.first_level = top.prediction;
  out.fallback = top.fallback;
  const auto it = branches.find(top.prediction.label);
  if (it == branches.end()) {
    throw std::logic_error("hierarchy has no branch for '" +
                           top.prediction.label + "'");
  }
  const Branch& branch = it->second;
  switch (branch.kind) {
    case Branch::Kind::kEmpty:
      out.city = Prediction{branch.city, 0.0, top.prediction.source};
      out.fallback = true;
      break;
    case Branch::Kind::kDirect:
      out.city = Prediction{branch.city, 1.0, top.prediction.source};
      break;
    case Branch::Kind::kModel: {
      const EnsembleOutput low = branch.model->predict(user, knowledge);
      out.city = low.prediction;
      out.fallback = out.fallback || low.fallback;
      break;
    }
  }
  return out;
}

HierarchicalPredictor train_hierarchy(const HierarchySpec& spec,
                                      std::span<const UserProfile* const> users,
                                      const Knowledge& knowledge,
                                      const TrainingOptions& options) {
  spec.validate();
  if (knowledge.taxonomy == nullptr) throw ConfigError("training needs a taxonomy");
  const LocationTaxonomy& taxonomy = *knowledge.taxonomy;

  HierarchicalPredictor h;
  h.spec = spec;
  h.first = train_flat(spec.first, users, knowledge, options);

  std::map<std::string, std::vector<const UserProfile*>> by_branch;
  for (const UserProfile* u : users) {
    by_branch[home_label_at(*u, spec.first_level, taxonomy)].push_back(u);
  }
  for (const std::string& label : taxonomy.labels(spec.first_level)) {
    const std::vector<std::string> cities = taxonomy.cities_in(spec.first_level, label);
    if (cities.empty()) continue;
    HierarchicalPredictor::Branch branch;
    const auto it = by_branch.find(label);
    if (it == by_branch.end()) {
      branch.kind = HierarchicalPredictor::Branch::Kind::kEmpty;
      branch.city = cities.front();
    } else {
      std::set<std::string> seen;
      for (const UserProfile* u : it->second) seen.insert(*u->home_label);
      if (seen.size() == 1) {
        branch.kind = HierarchicalPredictor::Branch::Kind::kDirect;
        branch.city = *seen.begin();
      } else {
        branch.kind = HierarchicalPredictor::Branch::Kind::kModel;
        branch.model = train_flat(spec.city, it->second, knowledge, options);
      }
    }
    h.branches.emplace(label, std::move(branch));
  }
  return h;
}

Granularity output_granularity(const PredictorSpec& spec) {
  if (const auto* flat = std::get_if<EnsembleSpec>(&spec)) return flat->granularity;
  return Granularity::kCity;
}

std::string describe(const PredictorSpec& spec) {
  if (const auto* flat = std::get_if<EnsembleSpec>(&spec)) {
    return "flat:" + std::string(to_string(flat->granularity)) + ":" +
           std::string(to_string(flat->combiner)) + ":" +
           join_members(flat->members);
  }
  const auto& h = std::get<HierarchySpec>(spec);
  return "hierarchy:" + std::string(to_string(h.first_level)) + ":" +
         std::string(to_string(h.first.combiner)) + ":" +
         join_members(h.first.members) + "/" + join_members(h.city.members);
}

LocationPredictor LocationPredictor::train(
    const PredictorSpec& spec, std::span<const UserProfile* const> users,
    const Knowledge& knowledge, const TrainingOptions& options) {
  if (const auto* flat = std::get_if<EnsembleSpec>(&spec)) {
    return LocationPredictor(train_flat(*flat, users, knowledge, options));
  }
  return LocationPredictor(
      train_hierarchy(std::get<HierarchySpec>(spec), users, knowledge, options));
}

PredictorOutput LocationPredictor::predict(const UserProfile& user,
                                           const Knowledge& knowledge) const {
  PredictorOutput out;
  if (const auto* flat = std::get_if<FlatPredictor>(&impl_)) {
    EnsembleOutput e = flat->predict(user, knowledge);
    out.prediction = std::move(e.prediction);
    out.fallback = e.fallback;
    return out;
  }
  HierarchyOutput h = std::get<HierarchicalPredictor>(impl_).predict(user, knowledge);
  out.prediction = std::move(h.city);
  out.first_level = std::move(h.first_level);
  out.fallback = h.fallback;
  return out;
}

Granularity LocationPredictor::granularity() const {
  if (const auto* flat = std::get_if<FlatPredictor>(&impl_)) {
    return flat->spec.granularity;
  }
  return Granularity::kCity;
}

PredictorSpec LocationPredictor::spec() const {
  if (const auto* flat = std::get_if<FlatPredictor>(&impl_)) return flat->spec;
  return std::get<HierarchicalPredictor>(impl_).spec;
}

}  // namespace geoinfer
