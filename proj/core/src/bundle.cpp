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

#include "geoinfer/bundle.hpp"

#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "geoinfer/error.hpp"

namespace geoinfer {
namespace {

using json = nlohmann::json;

constexpr std::string_view kFormat = "geoinfer-model";

std::string hex64(std::uint64_t v) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json members_to_json(const std::vector<Member>& members) {
  json out = json::array();
  for (Member m : members) out.push_back(std::string(to_string(m)));
  return out;
}

json spec_to_json(const EnsembleSpec& s) {
  return {{"members", members_to_json(s.members)},
          {"combiner", std::string(to_string(s.combiner))},
          {"granularity", std::string(to_string(s.granularity))}};
}

EnsembleSpec spec_from_json(const json& j) {
  EnsembleSpec s;
  for (const json& m : j.at("members")) s.members.push_back(parse_member(m.get<std::string>()));
  s.combiner = parse_combiner(j.at("combiner").get<std::string>());
  s.granularity = parse_granularity(j.at("granularity").get<std::string>());
  return s;
}

json term_model_to_json(const TermModel& m) {
  return {{"source", std::string(to_string(m.source))},
          {"granularity", std::string(to_string(m.granularity))},
          {"alpha", m.alpha},
          {"labels", m.labels},
          {"vocabulary", m.vocabulary},
          {"log_priors", m.log_priors},
          {"log_likelihoods", m.log_likelihoods},
          {"supporting_labels", m.supporting_labels}};
}

TermModel term_model_from_json(const json& j) {
  TermModel m;
  m.source = parse_member(j.at("source").get<std::string>());
  m.granularity = parse_granularity(j.at("granularity").get<std::string>());
  m.alpha = j.at("alpha").get<double>();
  j.at("labels").get_to(m.labels);
  j.at("vocabulary").get_to(m.vocabulary);
  j.at("log_priors").get_to(m.log_priors);
  j.at("log_likelihoods").get_to(m.log_likelihoods);
  j.at("supporting_labels").get_to(m.supporting_labels);
  const std::size_t nl = m.labels.size();
  const std::size_t nt = m.vocabulary.size();
  bool ok = m.log_priors.size() == nl && m.log_likelihoods.size() == nl &&
            m.supporting_labels.size() == nt;
  for (const auto& row : m.log_likelihoods) ok = ok && row.size() == nt;
  for (const auto& sup : m.supporting_labels) {
    for (std::uint32_t c : sup) ok = ok && c < nl;
  }
  if (!ok) throw DataError(DataErrc::kBundleFormat, "inconsistent term model shape");
  return m;
}

json behavior_to_json(const BehaviorModel& m) {
  return {{"slot_minutes", m.slot_minutes},
          {"variance_floor", m.variance_floor},
          {"min_variance", m.min_variance},
          {"classes", m.classes},
          {"log_priors", m.log_priors},
          {"slot_weights", m.slot_weights},
          {"means", m.means},
          {"variances", m.variances}};
}

BehaviorModel behavior_from_json(const json& j) {
  BehaviorModel m;
  m.slot_minutes = j.at("slot_minutes").get<int>();
  m.variance_floor = j.at("variance_floor").get<double>();
  m.min_variance = j.at("min_variance").get<double>();
  j.at("classes").get_to(m.classes);
  j.at("log_priors").get_to(m.log_priors);
  j.at("slot_weights").get_to(m.slot_weights);
  j.at("means").get_to(m.means);
  j.at("variances").get_to(m.variances);
  const std::size_t nc = m.classes.size();
  bool ok = m.slot_minutes > 0 && 1440 % m.slot_minutes == 0 &&
            m.slot_weights.size() == static_cast<std::size_t>(1440 / m.slot_minutes) &&
            m.log_priors.size() == nc && m.means.size() == nc && m.variances.size() == nc;
  for (std::size_t c = 0; ok && c < nc; ++c) {
    ok = m.means[c].size() == m.slot_count() && m.variances[c].size() == m.slot_count();
  }
  if (!ok) throw DataError(DataErrc::kBundleFormat, "inconsistent behavior model shape");
  return m;
}

json flat_to_json(const FlatPredictor& f) {
  json models = json::object();
  for (const auto& [member, model] : f.term_models) {
    models[std::string(to_string(member))] = term_model_to_json(model);
  }
  return {{"spec", spec_to_json(f.spec)},
          {"labels", f.labels},
          {"fallback", f.fallback_label},
          {"notes", f.notes},
          {"term_models", std::move(models)},
          {"behavior", f.behavior ? behavior_to_json(*f.behavior) : json(nullptr)}};
}

FlatPredictor flat_from_json(const json& j) {
  FlatPredictor f;
  f.spec = spec_from_json(j.at("spec"));
  f.spec.validate();
  j.at("labels").get_to(f.labels);
  f.fallback_label = j.at("fallback").get<std::string>();
  j.at("notes").get_to(f.notes);
  for (const auto& [name, model] : j.at("term_models").items()) {
    f.term_models.emplace(parse_member(name), term_model_from_json(model));
  }
  if (!j.at("behavior").is_null()) f.behavior = behavior_from_json(j.at("behavior"));
  return f;
}

std::string_view kind_name(HierarchicalPredictor::Branch::Kind k) {
  switch (k) {
    case HierarchicalPredictor::Branch::Kind::kEmpty: return "empty";
    case HierarchicalPredictor::Branch::Kind::kDirect: return "direct";
    case HierarchicalPredictor::Branch::Kind::kModel: return "model";
  }
  return "?";
}

json hierarchy_to_json(const HierarchicalPredictor& h) {
  json branches = json::object();
  for (const auto& [label, b] : h.branches) {
    branches[label] = {{"kind", std::string(kind_name(b.kind))},
                       {"city", b.city},
                       {"model", b.model ? flat_to_json(*b.model) : json(nullptr)}};
  }
  return {{"first_level", std::string(to_string(h.spec.first_level))},
          {"first_spec", spec_to_json(h.spec.first)},
          {"city_spec", spec_to_json(h.spec.city)},
          {"first", flat_to_json(h.first)},
          {"branches", std::move(branches)}};
}

HierarchicalPredictor hierarchy_from_json(const json& j) {
  HierarchicalPredictor h;
  h.spec.first_level = parse_granularity(j.at("first_level").get<std::string>());
  h.spec.first = spec_from_json(j.at("first_spec"));
  h.spec.city = spec_from_json(j.at("city_spec"));
  h.spec.validate();
  h.first = flat_from_json(j.at("first"));
  for (const auto& [label, b] : j.at("branches").items()) {
    HierarchicalPredictor::Branch branch;
    const std::string kind = b.at("kind").get<std::string>();
    if (kind == "empty") {
      branch.kind = HierarchicalPredictor::Branch::Kind::kEmpty;
    } else if (kind == "direct") {
      branch.kind = HierarchicalPredictor::Branch::Kind::kDirect;
    } else if (kind == "model") {
      branch.kind = HierarchicalPredictor::Branch::Kind::kModel;
      branch.model = flat_from_json(b.at("model"));
    } else {
      throw DataError(DataErrc::kBundleFormat, "unknown branch kind '" + kind + "'");
    }
    branch.city = b.at("city").get<std::string>();
    h.branches.emplace(label, std::move(branch));
  }
  return h;
}

json travel_to_json(const TravelModel& t) {
  return {{"vocabulary", t.vocabulary},
          {"feature_means", t.feature_means},
          {"feature_scales", t.feature_scales},
          {"weights", t.weights},
          {"bias", t.bias},
          {"threshold_miles", t.threshold_miles},
          {"epochs_run", t.epochs_run}};
}

TravelModel travel_from_json(const json& j) {
  TravelModel t;
  j.at("vocabulary").get_to(t.vocabulary);
  j.at("feature_means").get_to(t.feature_means);
  j.at("feature_scales").get_to(t.feature_scales);
  j.at("weights").get_to(t.weights);
  t.bias = j.at("bias").get<double>();
  t.threshold_miles = j.at("threshold_miles").get<double>();
  t.epochs_run = j.at("epochs_run").get<int>();
  const std::size_t dim = t.vocabulary.size() + kTimeSpreadSlots;
  if (t.feature_means.size() != dim || t.feature_scales.size() != dim ||
      t.weights.size() != dim || !(t.threshold_miles > 0.0)) {
    throw DataError(DataErrc::kBundleFormat, "inconsistent travel model shape");
  }
  return t;
}

json training_to_json(const TrainingOptions& o) {
  return {{"k", o.local_terms.k_percent},
          {"t_diff", o.local_terms.t_diff},
          {"t_max", o.local_terms.t_max},
          {"alpha", o.alpha},
          {"slot_minutes", o.slot_minutes},
          {"variance_floor", o.variance_floor}};
}

TrainingOptions training_from_json(const json& j) {
  TrainingOptions o;
  o.local_terms.k_percent = j.at("k").get<double>();
  o.local_terms.t_diff = j.at("t_diff").get<double>();
  o.local_terms.t_max = j.at("t_max").get<double>();
  o.alpha = j.at("alpha").get<double>();
  o.slot_minutes = j.at("slot_minutes").get<int>();
  o.variance_floor = j.at("variance_floor").get<double>();
  return o;
}

}  // namespace

void write_bundle(std::ostream& out, const ModelBundle& bundle) {
  json j;
  j["format"] = kFormat;
  j["version"] = kBundleVersion;
  j["created_at"] = bundle.created_at;
  j["taxonomy_fingerprint"] = hex64(bundle.taxonomy_fingerprint);
  j["training"] = training_to_json(bundle.training);
  if (const auto* flat = std::get_if<FlatPredictor>(&bundle.predictor.impl())) {
    j["predictor"] = {{"kind", "flat"}, {"flat", flat_to_json(*flat)}};
  } else {
    j["predictor"] = {
        {"kind", "hierarchy"},
        {"hierarchy",
         hierarchy_to_json(std::get<HierarchicalPredictor>(bundle.predictor.impl()))}};
  }
  j["travel"] = bundle.travel ? travel_to_json(*bundle.travel) : json(nullptr);
  out << j.dump(1) << '\n';
}

void save_bundle(const std::filesystem::path& path, const ModelBundle& bundle) {
  std::ofstream out(path);
  if (!out) {
    throw DataError(DataErrc::kBundleFormat,
                    "cannot write model bundle '" + path.string() + "'");
  }
  write_bundle(out, bundle);
}

ModelBundle read_bundle(std::istream& in, const LocationTaxonomy& taxonomy) {
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw DataError(DataErrc::kBundleFormat, std::string("malformed bundle: ") + e.what());
  }
  try {
    if (!j.is_object() || j.value("format", "") != kFormat) {
      throw DataError(DataErrc::kBundleFormat, "not a geoinfer model bundle");
    }
    if (j.at("version").get<int>() != kBundleVersion) {
      throw DataError(DataErrc::kBundleFormat,
                      "unsupported bundle version " + j.at("version").dump());
    }
    ModelBundle b;
    const std::string fp = j.at("taxonomy_fingerprint").get<std::string>();
    if (fp != hex64(taxonomy.fingerprint())) {
      throw DataError(DataErrc::kTaxonomyMismatch,
                      "bundle was trained against taxonomy " + fp +
                          ", not the loaded taxonomy " + hex64(taxonomy.fingerprint()));
    }
    b.taxonomy_fingerprint = taxonomy.fingerprint();
    b.created_at = j.at("created_at").get<std::string>();
    b.training = training_from_json(j.at("training"));
    const json& p = j.at("predictor");
    const std::string kind = p.at("kind").get<std::string>();
    if (kind == "flat") {
      b.predictor = LocationPredictor(flat_from_json(p.at("flat")));
    } else if (kind == "hierarchy") {
      b.predictor = LocationPredictor(hierarchy_from_json(p.at("hierarchy")));
    } else {
      throw DataError(DataErrc::kBundleFormat, "unknown predictor kind '" + kind + "'");
    }
    if (!j.at("travel").is_null()) b.travel = travel_from_json(j.at("travel"));
    return b;
  } catch (const json::exception& e) {
    throw DataError(DataErrc::kBundleFormat, std::string("bad bundle field: ") + e.what());
  } catch (const ConfigError& e) {
    throw DataError(DataErrc::kBundleFormat, std::string("bad bundle spec: ") + e.what());
  }
}

ModelBundle load_bundle(const std::filesystem::path& path,
                        const LocationTaxonomy& taxonomy) {
  std::ifstream in(path);
  if (!in) {
    throw DataError(DataErrc::kBundleFormat,
                    "cannot open model bundle '" + path.string() + "'");
  }
  return read_bundle(in, taxonomy);
}

}  // namespace geoinfer
