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

#include "geoinfer/classifiers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "geoinfer/error.hpp"

namespace geoinfer {
namespace {

constexpr std::array<std::string_view, 7> kMemberNames = {
    "words",      "hashtags",      "placenames", "single",
    "local_place", "visit_history", "behavior"};

// Normalized probabilities from log scores.
std::vector<double> softmax(const std::vector<double>& scores) {
  std::vector<double> p(scores.size());
  if (scores.empty()) return p;
  const double top = *std::max_element(scores.begin(), scores.end());
  double z = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    p[i] = std::exp(scores[i] - top);
    z += p[i];
  }
  for (double& v : p) v /= z;
  return p;
}

// First index of the maximum; labels are sorted, so this is the
// lexicographic tie-break.
std::size_t argmax(const std::vector<double>& v) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

Classification from_counts(const std::map<std::string, int>& counts,
                           Member source) {
  Classification out;
  if (counts.empty()) return out;
  auto best = counts.begin();
  for (auto it = counts.begin(); it != counts.end(); ++it) {
    if (it->second > best->second) best = it;
  }
  out.matching_set_size = counts.size();
  out.prediction = Prediction{best->first,
                              1.0 / static_cast<double>(counts.size()), source};
  return out;
}

void check_slot_minutes(int slot_minutes) {
  if (slot_minutes <= 0 || 1440 % slot_minutes != 0) {
    throw ConfigError("slot_minutes must be a positive divisor of 1440, got " +
                      std::to_string(slot_minutes));
  }
}

}  // namespace

std::string_view to_string(Member member) {
  return kMemberNames[static_cast<std::size_t>(member)];
}

Member parse_member(std::string_view name) {
  for (std::size_t i = 0; i < kMemberNames.size(); ++i) {
    if (kMemberNames[i] == name) return static_cast<Member>(i);
  }
  throw ConfigError("unknown classifier '" + std::string(name) + "'");
}

std::optional<TermFamily> family_of(Member member) {
  switch (member) {
    case Member::kWords: return TermFamily::kWords;
    case Member::kHashtags: return TermFamily::kHashtags;
    case Member::kPlaceNames: return TermFamily::kPlaceNames;
    default: return std::nullopt;
  }
}

bool is_statistical(Member member) {
  return family_of(member).has_value() || member == Member::kSingle;
}

std::optional<std::size_t> TermModel::term_index(std::string_view term) const {
  const auto it = std::lower_bound(vocabulary.begin(), vocabulary.end(), term);
  if (it == vocabulary.end() || *it != term) return std::nullopt;
  return static_cast<std::size_t>(it - vocabulary.begin());
}

std::optional<std::size_t> TermModel::label_index(std::string_view label) const {
  const auto it = std::lower_bound(labels.begin(), labels.end(), label);
  if (it == labels.end() || *it != label) return std::nullopt;
  return static_cast<std::size_t>(it - labels.begin());
}

TermModel train_term_model(std::span<const TermDocument> documents,
                           const std::set<std::string>& vocabulary,
                           Granularity granularity, Member source,
                           double alpha) {
  if (!(alpha > 0.0)) throw ConfigError("smoothing alpha must be positive");
  if (documents.empty()) {
    throw DataError(DataErrc::kEmptyInput, "no training documents");
  }
  if (vocabulary.empty()) {
    throw DataError(DataErrc::kEmptyVocabulary,
                    std::string(to_string(source)) + ": empty vocabulary");
  }
  TermModel m;
  m.source = source;
  m.granularity = granularity;
  m.alpha = alpha;
  m.vocabulary.assign(vocabulary.begin(), vocabulary.end());
  {
    std::set<std::string> labels;
    for (const TermDocument& d : documents) labels.insert(d.label);
    m.labels.assign(labels.begin(), labels.end());
  }
  const std::size_t n_labels = m.labels.size();
  const std::size_t n_terms = m.vocabulary.size();

  std::vector<double> docs_per_label(n_labels, 0.0);
  std::vector<std::vector<double>> counts(n_labels,
                                          std::vector<double>(n_terms, 0.0));
  for (const TermDocument& d : documents) {
    const std::size_t c = *m.label_index(d.label);
    docs_per_label[c] += 1.0;
    if (d.terms == nullptr) continue;
    for (const auto& [term, n] : *d.terms) {
      if (const auto t = m.term_index(term)) counts[c][*t] += n;
    }
  }

  const double n_docs = static_cast<double>(documents.size());
  m.log_priors.resize(n_labels);
  m.log_likelihoods.assign(n_labels, std::vector<double>(n_terms));
  m.supporting_labels.assign(n_terms, {});
  for (std::size_t c = 0; c < n_labels; ++c) {
    m.log_priors[c] = std::log(docs_per_label[c] / n_docs);
    double total = 0.0;
    for (double v : counts[c]) total += v;
    const double denom = total + alpha * static_cast<double>(n_terms);
    for (std::size_t t = 0; t < n_terms; ++t) {
      m.log_likelihoods[c][t] = std::log((counts[c][t] + alpha) / denom);
      if (counts[c][t] > 0.0) {
        m.supporting_labels[t].push_back(static_cast<std::uint32_t>(c));
      }
    }
  }
  return m;
}

Classification classify_term_model(const TermModel& model,
                                   const TermBag& terms) {
  Classification out;
  std::vector<double> scores = model.log_priors;
  std::vector<bool> matching(model.labels.size(), false);
  bool any = false;
  for (const auto& [term, n] : terms) {
    if (n <= 0) continue;
    const auto t = model.term_index(term);
    if (!t) continue;
    any = true;
    for (std::size_t c = 0; c < scores.size(); ++c) {
      scores[c] += n * model.log_likelihoods[c][*t];
    }
    for (std::uint32_t c : model.supporting_labels[*t]) matching[c] = true;
  }
  const auto set_size =
      static_cast<std::size_t>(std::count(matching.begin(), matching.end(), true));
  if (!any || set_size == 0) return out;

  out.posterior = softmax(scores);
  const std::size_t best = argmax(scores);
  out.matching_set_size = set_size;
  out.prediction = Prediction{model.labels[best],
                              1.0 / static_cast<double>(set_size), model.source};
  return out;
}

TermBag namespaced_union(const UserProfile& profile) {
  static constexpr std::array<std::string_view, 3> kPrefix = {"w:", "h:", "p:"};
  TermBag out;
  for (TermFamily f : kAllTermFamilies) {
    const std::string_view prefix = kPrefix[static_cast<std::size_t>(f)];
    for (const auto& [term, n] : profile.terms_of(f)) {
      std::string key(prefix);
      key += term;
      out.emplace_hint(out.end(), std::move(key), n);
    }
  }
  return out;
}

std::map<std::string, int> local_place_counts(
    const TermBag& place_terms, Granularity granularity,
    const Gazetteer& gazetteer, const LocationTaxonomy& taxonomy,
    const std::set<std::string>* candidates) {
  if (granularity != Granularity::kCity && granularity != Granularity::kState) {
    throw ConfigError("the local-place classifier works at city or state "
                      "granularity only");
  }
  std::map<std::string, int> counts;
  std::set<std::string> targets;
  for (const auto& [surface, n] : place_terms) {
    if (n <= 0) continue;
    targets.clear();
    for (const PlaceRef& ref : gazetteer.lookup(surface)) {
      if (granularity == Granularity::kCity) {
        if (ref.kind == PlaceKind::kCity) targets.insert(ref.id);
      } else if (ref.kind == PlaceKind::kState) {
        targets.insert(ref.id);
      } else {
        targets.insert(taxonomy.city(ref.id).state_id);
      }
    }
    for (const std::string& t : targets) {
      if (candidates != nullptr && !candidates->contains(t)) continue;
      counts[t] += n;
    }
  }
  return counts;
}

Classification classify_local_place(const TermBag& place_terms,
                                    Granularity granularity,
                                    const Gazetteer& gazetteer,
                                    const LocationTaxonomy& taxonomy,
                                    const std::set<std::string>* candidates) {
  return from_counts(local_place_counts(place_terms, granularity, gazetteer,
                                        taxonomy, candidates),
                     Member::kLocalPlace);
}

Classification classify_local_place(const UserRecord& user,
                                    Granularity granularity,
                                    const Gazetteer& gazetteer,
                                    const LocationTaxonomy& taxonomy) {
  TermBag places;
  const StopWords none;
  for (const Message& m : user.messages) {
    merge_into(places, extract_terms(tokenize(m.text), TermFamily::kPlaceNames,
                                     none, &gazetteer));
  }
  return classify_local_place(places, granularity, gazetteer, taxonomy);
}

std::map<std::string, int> visit_counts(
    std::span<const std::string> venue_cities, Granularity granularity,
    const LocationTaxonomy& taxonomy,
    const std::set<std::string>* candidates) {
  std::map<std::string, int> counts;
  for (const std::string& city : venue_cities) {
    const std::string& label = taxonomy.project(city, granularity);
    if (candidates != nullptr && !candidates->contains(label)) continue;
    ++counts[label];
  }
  return counts;
}

Classification classify_visit_history(std::span<const std::string> venue_cities,
                                      Granularity granularity,
                                      const LocationTaxonomy& taxonomy,
                                      const std::set<std::string>* candidates) {
  return from_counts(visit_counts(venue_cities, granularity, taxonomy, candidates),
                     Member::kVisitHistory);
}

Classification classify_visit_history(const UserRecord& user,
                                      Granularity granularity,
                                      const VenueResolver& resolver,
                                      const LocationTaxonomy& taxonomy,
                                      std::size_t* unknown_venues) {
  std::vector<std::string> cities;
  std::size_t unknown = 0;
  for (const Message& m : user.messages) {
    const auto venue = resolver.resolve(m);
    if (!venue) continue;
    if (auto id = taxonomy.find_city(venue->city, venue->state)) {
      cities.push_back(std::move(*id));
    } else {
      ++unknown;
    }
  }
  if (unknown_venues != nullptr) *unknown_venues = unknown;
  return classify_visit_history(cities, granularity, taxonomy);
}

std::vector<double> slot_profile(std::span<const Timestamp> times,
                                 int slot_minutes) {
  check_slot_minutes(slot_minutes);
  std::vector<double> profile(static_cast<std::size_t>(1440 / slot_minutes), 0.0);
  if (times.empty()) return profile;
  for (const Timestamp& t : times) {
    profile[static_cast<std::size_t>(minute_of_day(t) / slot_minutes)] += 1.0;
  }
  const double n = static_cast<double>(times.size());
  for (double& v : profile) v /= n;
  return profile;
}

std::vector<double> slot_weights(
    std::span<const std::vector<double>> class_mean_profiles) {
  if (class_mean_profiles.empty()) return {};
  const std::size_t slots = class_mean_profiles.front().size();
  const double k = static_cast<double>(class_mean_profiles.size());
  std::vector<double> weights(slots, 0.0);
  for (std::size_t s = 0; s < slots; ++s) {
    double mean = 0.0;
    for (const auto& p : class_mean_profiles) mean += p[s];
    mean /= k;
    double var = 0.0;
    for (const auto& p : class_mean_profiles) var += (p[s] - mean) * (p[s] - mean);
    weights[s] = std::sqrt(var / k);
  }
  return weights;
}

BehaviorModel train_behavior_model(std::span<const BehaviorDocument> documents,
                                   std::vector<std::string> classes,
                                   int slot_minutes, double variance_floor) {
  check_slot_minutes(slot_minutes);
  if (!(variance_floor > 0.0)) throw ConfigError("variance floor must be positive");
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  if (classes.empty()) throw ConfigError("behavior model needs classes");

  BehaviorModel m;
  m.slot_minutes = slot_minutes;
  m.variance_floor = variance_floor;
  m.classes = std::move(classes);
  const std::size_t n_classes = m.classes.size();
  const std::size_t slots = static_cast<std::size_t>(1440 / slot_minutes);

  const auto class_of = [&](const std::string& label) {
    const auto it = std::lower_bound(m.classes.begin(), m.classes.end(), label);
    if (it == m.classes.end() || *it != label) {
      throw DataError(DataErrc::kUnknownLabel,
                      "behavior document label '" + label + "' is not a class");
    }
    return static_cast<std::size_t>(it - m.classes.begin());
  };

  std::vector<std::vector<double>> profiles;
  std::vector<std::size_t> labels;
  profiles.reserve(documents.size());
  std::vector<double> per_class(n_classes, 0.0);
  std::vector<std::vector<double>> raw_means(n_classes,
                                             std::vector<double>(slots, 0.0));
  for (const BehaviorDocument& d : documents) {
    const std::size_t c = class_of(d.label);
    if (d.times.empty()) continue;
    profiles.push_back(slot_profile(d.times, slot_minutes));
    labels.push_back(c);
    per_class[c] += 1.0;
    for (std::size_t s = 0; s < slots; ++s) raw_means[c][s] += profiles.back()[s];
  }
  for (std::size_t c = 0; c < n_classes; ++c) {
    if (per_class[c] == 0.0) {
      throw DataError(DataErrc::kInsufficientData,
                      "behavior class '" + m.classes[c] + "' has no training users");
    }
    for (double& v : raw_means[c]) v /= per_class[c];
  }
  m.slot_weights = slot_weights(raw_means);

  m.means.assign(n_classes, std::vector<double>(slots, 0.0));
  m.variances.assign(n_classes, std::vector<double>(slots, 0.0));
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    for (std::size_t s = 0; s < slots; ++s) {
      m.means[labels[i]][s] += profiles[i][s] * m.slot_weights[s];
    }
  }
  for (std::size_t c = 0; c < n_classes; ++c) {
    for (double& v : m.means[c]) v /= per_class[c];
  }
  for (std::size_t i = 0; i < profiles.size(); ++i) {
    const std::size_t c = labels[i];
    for (std::size_t s = 0; s < slots; ++s) {
      const double d = profiles[i][s] * m.slot_weights[s] - m.means[c][s];
      m.variances[c][s] += d * d;
    }
  }
  const double n_total = static_cast<double>(profiles.size());
  // The floor is relative to the widest slot, so rescaling every weight by a
  // constant leaves decisions unchanged.
  double widest = 0.0;
  for (std::size_t s = 0; s < slots; ++s) {
    double mean = 0.0;
    for (std::size_t c = 0; c < n_classes; ++c) mean += m.means[c][s] * per_class[c];
    mean /= n_total;
    double var = 0.0;
    for (const auto& p : profiles) {
      const double d = p[s] * m.slot_weights[s] - mean;
      var += d * d;
    }
    widest = std::max(widest, var / n_total);
  }
  const double epsilon = widest > 0.0 ? variance_floor * widest : variance_floor;
  m.min_variance = epsilon;
  // Per-slot minimum spread: a sixth of the mean gap between distinct
  // observed values.
  std::vector<double> min_var(slots, 0.0);
  for (std::size_t s = 0; s < slots; ++s) {
    std::vector<double> values;
    values.reserve(profiles.size());
    for (const auto& p : profiles) values.push_back(p[s] * m.slot_weights[s]);
    std::sort(values.begin(), values.end());
    const auto distinct = static_cast<double>(
        std::unique(values.begin(), values.end()) - values.begin());
    if (distinct > 1.0) {
      const double precision = (values[static_cast<std::size_t>(distinct) - 1] -
                                values.front()) / (distinct - 1.0);
      min_var[s] = (precision / 6.0) * (precision / 6.0);
    }
  }
  m.log_priors.resize(n_classes);
  for (std::size_t c = 0; c < n_classes; ++c) {
    for (std::size_t s = 0; s < slots; ++s) {
      double& v = m.variances[c][s];
      v = std::max(v / per_class[c], min_var[s]) + epsilon;
    }
    m.log_priors[c] = std::log(per_class[c] / n_total);
  }
  return m;
}

BehaviorModel train_behavior_model(std::span<const UserRecord> users,
                                   const LocationTaxonomy& taxonomy,
                                   int slot_minutes) {
  std::vector<std::vector<Timestamp>> times(users.size());
  std::vector<BehaviorDocument> docs;
  docs.reserve(users.size());
  for (std::size_t i = 0; i < users.size(); ++i) {
    if (!users[i].home_label) {
      throw DataError(DataErrc::kUnknownLabel,
                      "user '" + users[i].user_id + "' has no home_label");
    }
    for (const Message& m : users[i].messages) times[i].push_back(m.created_at);
    docs.push_back({taxonomy.project(*users[i].home_label, Granularity::kTimeZone),
                    times[i]});
  }
  return train_behavior_model(docs, taxonomy.labels(Granularity::kTimeZone),
                              slot_minutes);
}

Classification classify_behavior(const BehaviorModel& model,
                                 std::span<const Timestamp> times) {
  Classification out;
  if (times.empty()) return out;
  const std::vector<double> profile = slot_profile(times, model.slot_minutes);
  std::vector<double> scores = model.log_priors;
  constexpr double kLogTwoPi = 1.8378770664093454836;
  for (std::size_t c = 0; c < scores.size(); ++c) {
    double ll = 0.0;
    for (std::size_t s = 0; s < profile.size(); ++s) {
      const double x = profile[s] * model.slot_weights[s];
      const double var = model.variances[c][s];
      const double d = x - model.means[c][s];
      ll -= 0.5 * (kLogTwoPi + std::log(var)) + d * d / (2.0 * var);
    }
    scores[c] += ll;
  }
  out.posterior = softmax(scores);
  const std::size_t best = argmax(scores);
  out.matching_set_size = model.classes.size();
  out.prediction =
      Prediction{model.classes[best], out.posterior[best], Member::kBehavior};
  return out;
}

Classification classify_behavior(const BehaviorModel& model,
                                 const UserRecord& user) {
  std::vector<Timestamp> times;
  times.reserve(user.messages.size());
  for (const Message& m : user.messages) times.push_back(m.created_at);
  return classify_behavior(model, times);
}

}  // namespace geoinfer
