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

#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "geoinfer/ensemble.hpp"
#include "geoinfer/features.hpp"
#include "geoinfer/movement.hpp"
#include "geoinfer/random.hpp"
#include "geoinfer/synth.hpp"

namespace geoinfer {
namespace {

struct World {
  LocationTaxonomy taxonomy = load_taxonomy(std::string(GEOINFER_DATA_DIR) + "/us_taxonomy.tsv");
  Gazetteer gazetteer =
      load_gazetteer(std::string(GEOINFER_DATA_DIR) + "/us_gazetteer.tsv", taxonomy);
  StopWords stopwords = load_stopwords(std::string(GEOINFER_DATA_DIR) + "/stopwords_en.txt");
  PreResolvedVenues resolver;
  Featurizer featurizer{taxonomy, &gazetteer, stopwords, resolver};
  std::vector<UserProfile> profiles;
  std::vector<const UserProfile*> pointers;

  World() {
    SynthSpec s;
    s.users_per_city = 20;
    s.messages_per_user = 100;
    for (const UserRecord& u : synthesize_corpus(s, taxonomy).users) {
      profiles.push_back(featurizer(u));
    }
    for (const UserProfile& p : profiles) pointers.push_back(&p);
  }
  Knowledge knowledge() const { return {&taxonomy, &gazetteer}; }
};

const World& world() {
  static const World w;
  return w;
}

void BM_Tokenize(benchmark::State& state) {
  const std::string text =
      "Heading back in Salt Lake City tonight!! #utah it's cold http://t.co/abc Déjà vu";
  for (auto _ : state) benchmark::DoNotOptimize(tokenize(text));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations() * text.size()));
}
BENCHMARK(BM_Tokenize);

void BM_Featurize(benchmark::State& state) {
  SynthSpec s;
  s.users_per_city = 1;
  s.messages_per_user = static_cast<int>(state.range(0));
  const auto users = synthesize_corpus(s, world().taxonomy).users;
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(world().featurizer(users[i++ % users.size()]));
}
BENCHMARK(BM_Featurize)->Arg(50)->Arg(200);

void BM_NaiveBayesClassify(benchmark::State& state) {
  const FlatPredictor p = train_flat({{Member::kWords}, Combiner::kDynamicWeighted,
                                      Granularity::kCity},
                                     world().pointers, world().knowledge());
  const TermModel& m = p.term_models.at(Member::kWords);
  std::size_t i = 0;
  for (auto _ : state) {
    const UserProfile& u = world().profiles[i++ % world().profiles.size()];
    benchmark::DoNotOptimize(classify_term_model(m, u.terms_of(TermFamily::kWords)));
  }
}
BENCHMARK(BM_NaiveBayesClassify);

void BM_Haversine(benchmark::State& state) {
  Rng rng(1);
  std::vector<GeoPoint> pts;
  for (int i = 0; i < 1024; ++i) pts.push_back({rng.uniform(25, 49), rng.uniform(-124, -67)});
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(haversine_miles(pts[i & 1023], pts[(i + 7) & 1023]));
    ++i;
  }
}
BENCHMARK(BM_Haversine);

void BM_EnsemblePredict(benchmark::State& state) {
  const bool hierarchy = state.range(0) != 0;
  const PredictorSpec spec =
      hierarchy ? PredictorSpec{make_hierarchy_spec(Granularity::kTimeZone,
                                                    default_members(Granularity::kCity),
                                                    Combiner::kDynamicWeighted)}
                : PredictorSpec{EnsembleSpec{default_members(Granularity::kCity),
                                             Combiner::kDynamicWeighted, Granularity::kCity}};
  const LocationPredictor p = LocationPredictor::train(spec, world().pointers, world().knowledge());
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        p.predict(world().profiles[i++ % world().profiles.size()], world().knowledge()));
  }
  state.SetLabel(hierarchy ? "timezone hierarchy" : "flat city");
}
BENCHMARK(BM_EnsemblePredict)->Arg(0)->Arg(1);

void BM_TrainFlat(benchmark::State& state) {
  const EnsembleSpec spec{default_members(Granularity::kCity), Combiner::kDynamicWeighted,
                          Granularity::kCity};
  for (auto _ : state) {
    benchmark::DoNotOptimize(train_flat(spec, world().pointers, world().knowledge()));
  }
}
BENCHMARK(BM_TrainFlat)->Unit(benchmark::kMillisecond);

}  // namespace
}  // namespace geoinfer

BENCHMARK_MAIN();
