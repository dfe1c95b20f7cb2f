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

#include "cli.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geoinfer/bundle.hpp"
#include "geoinfer/corpus.hpp"
#include "geoinfer/ensemble.hpp"
#include "geoinfer/error.hpp"
#include "geoinfer/eval.hpp"
#include "geoinfer/features.hpp"
#include "geoinfer/gazetteer.hpp"
#include "geoinfer/movement.hpp"
#include "geoinfer/profile.hpp"
#include "geoinfer/synth.hpp"
#include "geoinfer/taxonomy.hpp"

namespace geoinfer::cli {
namespace {

struct RunConfig {
  std::string corpus;
  std::string taxonomy;
  std::string gazetteer;
  std::string stopwords;
  std::string model;
  std::string out;
  std::string granularity = "city";
  std::string hierarchy = "none";
  std::string members;  // comma separated; empty means the defaults
  std::string combiner = "dynamic";
  std::string local_terms_out;
  int folds = 10;
  std::uint64_t seed = 0;
  std::size_t cap_messages = 0;
  bool travel_filter = false;
  double travel_threshold_miles = kDefaultTravelThresholdMiles;
  bool strict = false;
  LocalTermConfig local_terms;
  int slot_minutes = 1;
  double alpha = 1.0;
  SynthSpec synth;
};

// Loaded knowledge files; the featurizer keeps references into this.
struct Resources {
  LocationTaxonomy taxonomy;
  std::optional<Gazetteer> gazetteer;
  StopWords stopwords;
  PreResolvedVenues resolver;
  std::unique_ptr<Featurizer> featurizer;

  Knowledge knowledge() const {
    return Knowledge{&taxonomy, gazetteer ? &*gazetteer : nullptr};
  }
};

std::unique_ptr<Resources> load_resources(const RunConfig& c) {
  auto r = std::make_unique<Resources>();
  r->taxonomy = load_taxonomy(c.taxonomy);
  if (!c.gazetteer.empty()) r->gazetteer = load_gazetteer(c.gazetteer, r->taxonomy);
  if (!c.stopwords.empty()) r->stopwords = load_stopwords(c.stopwords);
  r->featurizer = std::make_unique<Featurizer>(
      r->taxonomy, r->gazetteer ? &*r->gazetteer : nullptr, r->stopwords, r->resolver);
  return r;
}

std::vector<UserRecord> load_users(const RunConfig& c, const LocationTaxonomy& taxonomy,
                                   bool require_labels, std::ostream& err) {
  CorpusOptions options;
  options.strict = c.strict;
  options.require_labels = require_labels;
  CorpusLoad load = load_corpus(c.corpus, taxonomy, options);
  for (const LoadIssue& issue : load.issues) {
    err << "warning: corpus line " << issue.line << " skipped ("
        << to_string(issue.code) << "): " << issue.message << '\n';
  }
  if (load.users.empty()) {
    throw DataError(DataErrc::kEmptyInput, "corpus '" + c.corpus + "' has no usable users");
  }
  if (c.cap_messages > 0) {
    for (UserRecord& u : load.users) u = cap_messages(u, c.cap_messages);
  }
  return std::move(load.users);
}

std::vector<Member> parse_members(const std::string& list) {
  std::vector<Member> out;
  std::size_t start = 0;
  while (start <= list.size()) {
    const std::size_t comma = std::min(list.find(',', start), list.size());
    const std::string item = list.substr(start, comma - start);
    if (!item.empty()) out.push_back(parse_member(item));
    start = comma + 1;
  }
  if (out.empty()) throw ConfigError("--members lists no classifiers");
  return out;
}

PredictorSpec predictor_spec(const RunConfig& c) {
  const Combiner combiner = parse_combiner(c.combiner);
  const Granularity g = parse_granularity(c.granularity);
  if (c.hierarchy == "none") {
    EnsembleSpec spec;
    spec.granularity = g;
    spec.combiner = combiner;
    spec.members = c.members.empty() ? default_members(g) : parse_members(c.members);
    spec.validate();
    return spec;
  }
  if (g != Granularity::kCity) {
    throw ConfigError("hierarchies predict cities; drop --granularity or set it to city");
  }
  const std::vector<Member> content =
      c.members.empty() ? default_members(Granularity::kCity) : parse_members(c.members);
  HierarchySpec spec =
      make_hierarchy_spec(parse_granularity(c.hierarchy), content, combiner);
  spec.validate();
  return spec;
}

TrainingOptions training_options(const RunConfig& c) {
  TrainingOptions o;
  o.local_terms = c.local_terms;
  o.local_terms.validate();
  o.alpha = c.alpha;
  o.slot_minutes = c.slot_minutes;
  return o;
}

// Runs `body` with an output stream: the file at `path`, or `fallback` when
// `path` is empty or "-".
void with_output(const std::string& path, std::ostream& fallback,
                 const std::function<void(std::ostream&)>& body) {
  if (path.empty() || path == "-") {
    body(fallback);
    return;
  }
  std::ofstream file(path);
  if (!file) throw ConfigError("cannot write '" + path + "'");
  body(file);
  if (!file) throw DataError(DataErrc::kParse, "failed writing '" + path + "'");
}

std::string now_utc() {
  return format_timestamp(
      std::chrono::floor<std::chrono::seconds>(std::chrono::system_clock::now()));
}

std::vector<const UserProfile*> pointers(const std::vector<UserProfile>& profiles) {
  std::vector<const UserProfile*> out;
  out.reserve(profiles.size());
  for (const UserProfile& p : profiles) out.push_back(&p);
  return out;
}

void dump_local_terms(const RunConfig& c, const std::vector<const UserProfile*>& users,
                      const LocationTaxonomy& taxonomy, Granularity g,
                      const TrainingOptions& options) {
  with_output(c.local_terms_out, std::cout, [&](std::ostream& out) {
    for (TermFamily f : kAllTermFamilies) {
      std::vector<TermDocument> docs;
      for (const UserProfile* u : users) {
        docs.push_back({taxonomy.project(*u->home_label, g), &u->terms_of(f)});
      }
      const TermStatsTable table = compute_term_stats(docs, f);
      write_local_term_dump(
          out, table,
          select_local_terms(table.stats, table.users_per_location, options.local_terms));
    }
  });
}

int cmd_train(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const PredictorSpec spec = predictor_spec(c);
  const TrainingOptions options = training_options(c);
  auto res = load_resources(c);
  const std::vector<UserRecord> users = load_users(c, res->taxonomy, true, err);
  std::vector<UserProfile> profiles;
  profiles.reserve(users.size());
  for (const UserRecord& u : users) profiles.push_back((*res->featurizer)(u));
  const auto ptrs = pointers(profiles);

  ModelBundle bundle;
  bundle.created_at = now_utc();
  bundle.taxonomy_fingerprint = res->taxonomy.fingerprint();
  bundle.training = options;
  bundle.predictor = LocationPredictor::train(spec, ptrs, res->knowledge(), options);
  if (c.travel_filter) {
    TravelTrainingOptions travel;
    travel.threshold_miles = c.travel_threshold_miles;
    travel.seed = c.seed;
    bundle.travel = train_travel_model(ptrs, travel);
  }
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, FlatPredictor>) {
          for (const std::string& n : p.notes) err << "note: " << n << '\n';
        } else {
          for (const std::string& n : p.first.notes) err << "note: first level " << n << '\n';
        }
      },
      bundle.predictor.impl());
  if (!c.local_terms_out.empty()) {
    dump_local_terms(c, ptrs, res->taxonomy, output_granularity(spec), options);
  }
  save_bundle(c.model, bundle);
  out << "trained " << describe(spec) << " on " << profiles.size() << " users -> "
      << c.model << '\n';
  return kExitOk;
}

std::vector<Granularity> projection_levels(Granularity g) {
  std::vector<Granularity> out;
  bool on = false;
  for (Granularity level : kAllGranularities) {
    if (level == g) on = true;
    if (!on || level == g) continue;
    // Only the state table carries these; zones and regions do not nest.
    if (g == Granularity::kCity || g == Granularity::kState) out.push_back(level);
  }
  return out;
}

int cmd_predict(const RunConfig& c, std::ostream& out, std::ostream& err) {
  auto res = load_resources(c);
  const ModelBundle bundle = load_bundle(c.model, res->taxonomy);
  const std::vector<UserRecord> users = load_users(c, res->taxonomy, false, err);
  const Granularity g = bundle.predictor.granularity();
  const std::vector<Granularity> extra = projection_levels(g);
  const bool hierarchical =
      std::holds_alternative<HierarchicalPredictor>(bundle.predictor.impl());

  with_output(c.out, out, [&](std::ostream& os) {
    os << "user_id\t" << to_string(g) << "\tscore\tfallback\ttraveling";
    if (hierarchical) os << "\tfirst_level";
    for (Granularity level : extra) os << '\t' << to_string(level);
    os << '\n';
    char score[32];
    for (const UserRecord& u : users) {
      const UserProfile p = (*res->featurizer)(u);
      const PredictorOutput o = bundle.predictor.predict(p, res->knowledge());
      std::snprintf(score, sizeof(score), "%.6f", o.prediction.weight);
      os << u.user_id << '\t' << o.prediction.label << '\t' << score << '\t'
         << (o.fallback ? 1 : 0) << '\t';
      if (bundle.travel) {
        os << (bundle.travel->is_traveling(p) ? 1 : 0);
      } else {
        os << '-';
      }
      if (hierarchical) os << '\t' << (o.first_level ? o.first_level->label : "-");
      for (Granularity level : extra) {
        os << '\t'
           << (g == Granularity::kCity
                   ? res->taxonomy.project(o.prediction.label, level)
                   : res->taxonomy.project_state(o.prediction.label, level));
      }
      os << '\n';
    }
  });
  return kExitOk;
}

int cmd_eval(const RunConfig& c, std::ostream& out, std::ostream& err) {
  ExperimentConfig config;
  config.predictor = predictor_spec(c);
  config.name = describe(config.predictor);
  config.folds = c.folds;
  config.seed = c.seed;
  config.travel_filter = c.travel_filter;
  config.travel.threshold_miles = c.travel_threshold_miles;
  config.travel.seed = c.seed;
  config.training = training_options(c);
  if (c.cap_messages > 0) config.message_cap = c.cap_messages;
  config.validate();

  auto res = load_resources(c);
  const std::vector<UserRecord> users = load_users(c, res->taxonomy, true, err);
  const EvalReport report =
      run_experiment(config, users, *res->featurizer, res->knowledge());
  print_report(out, report);
  if (!c.out.empty()) {
    with_output(c.out, out, [&](std::ostream& os) {
      write_metrics(os, std::span<const EvalReport>(&report, 1));
    });
  }
  return kExitOk;
}

int cmd_synth(const RunConfig& c, std::ostream& out, std::ostream&) {
  SynthSpec spec = c.synth;
  spec.seed = c.seed;
  spec.travel_threshold_miles = c.travel_threshold_miles;
  spec.validate();
  const LocationTaxonomy taxonomy = load_taxonomy(c.taxonomy);
  const SyntheticCorpus corpus = synthesize_corpus(spec, taxonomy);
  if (corpus.users.empty()) throw DataError(DataErrc::kEmptyInput, "empty synthetic corpus");
  with_output(c.out, out, [&](std::ostream& os) { write_corpus(os, corpus.users); });
  return kExitOk;
}

int cmd_movement(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const LocationTaxonomy taxonomy = load_taxonomy(c.taxonomy);
  const std::vector<UserRecord> users = load_users(c, taxonomy, false, err);
  std::vector<MovementStats> rows;
  rows.reserve(users.size());
  for (const UserRecord& u : users) rows.push_back(movement_stats(u));
  with_output(c.out, out, [&](std::ostream& os) { write_movement_report(os, rows); });
  return kExitOk;
}

void add_knowledge_options(CLI::App* cmd, RunConfig& c, bool corpus_required) {
  cmd->add_option("--taxonomy", c.taxonomy, "Location taxonomy file")->required();
  cmd->add_option("--gazetteer", c.gazetteer, "Place-name gazetteer file");
  cmd->add_option("--stopwords", c.stopwords, "Stop-word list, one per line");
  auto* corpus = cmd->add_option("--corpus", c.corpus, "Corpus (JSON lines)");
  if (corpus_required) corpus->required();
  cmd->add_flag("--strict", c.strict, "Fail on the first malformed corpus record");
  cmd->add_option("--cap-messages", c.cap_messages,
                  "Keep only each user's N most recent messages (0 keeps all)");
}

void add_model_options(CLI::App* cmd, RunConfig& c) {
  cmd->add_option("--granularity", c.granularity,
                  "city, state, timezone, census_region or federal_region")
      ->capture_default_str();
  cmd->add_option("--hierarchy", c.hierarchy,
                  "First level of a two-level hierarchy, or none")
      ->capture_default_str();
  cmd->add_option("--members", c.members,
                  "Comma-separated classifiers: words, hashtags, placenames, single, "
                  "local_place, visit_history, behavior");
  cmd->add_option("--combiner", c.combiner, "dynamic or majority")->capture_default_str();
  cmd->add_option("--k-percent", c.local_terms.k_percent,
                  "Local-term support floor (fraction of a location's users)")
      ->capture_default_str();
  cmd->add_option("--t-diff", c.local_terms.t_diff, "Local-term max-minus-mean threshold")
      ->capture_default_str();
  cmd->add_option("--t-max", c.local_terms.t_max, "Local-term max probability threshold")
      ->capture_default_str();
  cmd->add_option("--slot-minutes", c.slot_minutes, "Behavior time-slot width")
      ->capture_default_str();
  cmd->add_option("--alpha", c.alpha, "Naive Bayes additive smoothing")->capture_default_str();
  cmd->add_flag("--travel-filter", c.travel_filter, "Train and apply the traveler filter");
  cmd->add_option("--travel-threshold-miles", c.travel_threshold_miles,
                  "Max pairwise geotag distance that marks a traveler")
      ->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig c;
  CLI::App app{"Home-location inference for social-media users", "geoinfer"};
  app.require_subcommand(1);
  app.set_config("--config", "", "INI/TOML config file; flags override it")
      ->envname("GEOINFER_CONFIG");

  CLI::App* train = app.add_subcommand("train", "Train a model bundle on a labeled corpus");
  add_knowledge_options(train, c, true);
  add_model_options(train, c);
  train->add_option("--model", c.model, "Model bundle to write")->required();
  train->add_option("--seed", c.seed, "Random seed")->capture_default_str();
  train->add_option("--local-terms-out", c.local_terms_out,
                    "Write the local-term selection table here");

  CLI::App* predict = app.add_subcommand("predict", "Predict home locations with a bundle");
  add_knowledge_options(predict, c, true);
  predict->add_option("--model", c.model, "Model bundle to read")->required();
  predict->add_option("--out", c.out, "Prediction table (default stdout)");

  CLI::App* eval = app.add_subcommand("eval", "Cross-validate a configuration");
  add_knowledge_options(eval, c, true);
  add_model_options(eval, c);
  eval->add_option("--folds", c.folds, "Cross-validation folds")->capture_default_str();
  eval->add_option("--seed", c.seed, "Fold-assignment seed")->required();
  eval->add_option("--out", c.out, "Metrics table to write");

  CLI::App* synth = app.add_subcommand("synth", "Write a synthetic labeled corpus");
  synth->add_option("--taxonomy", c.taxonomy, "Location taxonomy file")->required();
  synth->add_option("--out", c.out, "Corpus to write (default stdout)");
  synth->add_option("--seed", c.seed, "Generator seed")->required();
  synth->add_option("--users-per-city", c.synth.users_per_city)->capture_default_str();
  synth->add_option("--messages-per-user", c.synth.messages_per_user)->capture_default_str();
  synth->add_option("--days", c.synth.days)->capture_default_str();
  synth->add_option("--zone-offset-minutes", c.synth.zone_offset_minutes)
      ->capture_default_str();
  synth->add_option("--leakage", c.synth.leakage)->capture_default_str();
  synth->add_option("--traveler-fraction", c.synth.traveler_fraction)->capture_default_str();
  synth->add_option("--traveler-min-displacement-miles",
                    c.synth.traveler_min_displacement_miles)
      ->capture_default_str();
  synth->add_option("--travel-threshold-miles", c.travel_threshold_miles)
      ->capture_default_str();

  CLI::App* movement = app.add_subcommand("movement", "Report geotag movement statistics");
  movement->add_option("--taxonomy", c.taxonomy, "Location taxonomy file")->required();
  movement->add_option("--corpus", c.corpus, "Corpus (JSON lines)")->required();
  movement->add_option("--out", c.out, "Report to write (default stdout)");
  movement->add_flag("--strict", c.strict, "Fail on the first malformed corpus record");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*train) return cmd_train(c, out, err);
    if (*predict) return cmd_predict(c, out, err);
    if (*eval) return cmd_eval(c, out, err);
    if (*synth) return cmd_synth(c, out, err);
    if (*movement) return cmd_movement(c, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const DataError& e) {
    err << "data error (" << to_string(e.code()) << "): " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitConfig;
}

}  // namespace geoinfer::cli
