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

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <doctest.h>

#include "cli.hpp"
#include "support.hpp"

namespace geoinfer {
namespace {

namespace fs = std::filesystem;
using testing::data_path;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result geoinfer(std::initializer_list<std::string> args) {
  std::vector<std::string> storage = {"geoinfer"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<const char*> argv;
  for (const std::string& s : storage) argv.push_back(s.c_str());
  std::ostringstream out, err;
  Result r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("geoinfer-cli-test-" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

const std::string kTax = data_path("us_taxonomy.tsv");
const std::string kGaz = data_path("us_gazetteer.tsv");
const std::string kStop = data_path("stopwords_en.txt");

TEST_CASE("synth, train, predict, movement end to end") {
  TempDir dir;
  const std::string corpus = dir / "corpus.jsonl";
  Result r = geoinfer({"synth", "--taxonomy", kTax, "--seed", "5", "--users-per-city", "6",
                       "--messages-per-user", "60", "--traveler-fraction", "0.25", "--out",
                       corpus});
  REQUIRE(r.code == 0);

  for (const char* hierarchy : {"none", "timezone", "state"}) {
    const std::string model = dir / (std::string("model-") + hierarchy + ".json");
    r = geoinfer({"train", "--taxonomy", kTax, "--gazetteer", kGaz, "--stopwords", kStop,
                  "--corpus", corpus, "--model", model, "--hierarchy", hierarchy,
                  "--travel-filter"});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    CHECK(fs::exists(model));

    const std::string pred = dir / "pred.tsv";
    r = geoinfer({"predict", "--taxonomy", kTax, "--gazetteer", kGaz, "--stopwords", kStop,
                  "--corpus", corpus, "--model", model, "--out", pred});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    std::istringstream rows(slurp(pred));
    std::string header;
    std::getline(rows, header);
    CHECK(header.rfind("user_id\tcity\tscore\tfallback\ttraveling", 0) == 0);
    int n = 0;
    for (std::string line; std::getline(rows, line);) ++n;
    CHECK(n == 120);
  }

  r = geoinfer({"movement", "--taxonomy", kTax, "--corpus", corpus});
  REQUIRE(r.code == 0);
  CHECK(r.out.rfind("user_id\tn_geotagged\tavg_miles\tmax_miles\tbucket_avg\tbucket_max\n", 0) ==
        0);
}

TEST_CASE("identical runs write identical files") {
  TempDir dir;
  const std::string corpus = dir / "c.jsonl";
  const std::string corpus2 = dir / "c2.jsonl";
  REQUIRE(geoinfer({"synth", "--taxonomy", kTax, "--seed", "9", "--users-per-city", "4",
                    "--messages-per-user", "50", "--out", corpus})
              .code == 0);
  REQUIRE(geoinfer({"synth", "--taxonomy", kTax, "--seed", "9", "--users-per-city", "4",
                    "--messages-per-user", "50", "--out", corpus2})
              .code == 0);
  CHECK(slurp(corpus) == slurp(corpus2));

  std::vector<std::string> metrics;
  for (int i = 0; i < 2; ++i) {
    const std::string out = dir / ("m" + std::to_string(i) + ".tsv");
    const Result r = geoinfer({"eval", "--taxonomy", kTax, "--gazetteer", kGaz, "--stopwords",
                               kStop, "--corpus", corpus, "--seed", "3", "--folds", "4",
                               "--hierarchy", "timezone", "--out", out});
    REQUIRE_MESSAGE(r.code == 0, r.err);
    metrics.push_back(slurp(out));
  }
  CHECK(metrics[0] == metrics[1]);
  CHECK(metrics[0].find("hierarchy_violations\tcity\t") != std::string::npos);

  std::vector<std::string> preds;
  for (int i = 0; i < 2; ++i) {
    const std::string model = dir / ("b" + std::to_string(i) + ".json");
    REQUIRE(geoinfer({"train", "--taxonomy", kTax, "--gazetteer", kGaz, "--corpus", corpus,
                      "--model", model, "--granularity", "timezone"})
                .code == 0);
    const Result r = geoinfer({"predict", "--taxonomy", kTax, "--gazetteer", kGaz, "--corpus",
                               corpus, "--model", model});
    REQUIRE(r.code == 0);
    preds.push_back(r.out);
  }
  CHECK(preds[0] == preds[1]);
}

TEST_CASE("exit codes") {
  TempDir dir;
  // Parse errors and bad configurations are configuration errors.
  CHECK(geoinfer({}).code == cli::kExitConfig);
  CHECK(geoinfer({"train", "--taxonomy", kTax}).code == cli::kExitConfig);
  CHECK(geoinfer({"--help"}).code == cli::kExitOk);

  const std::string corpus = dir / "c.jsonl";
  REQUIRE(geoinfer({"synth", "--taxonomy", kTax, "--seed", "1", "--users-per-city", "2",
                    "--messages-per-user", "20", "--out", corpus})
              .code == 0);
  Result r = geoinfer({"eval", "--taxonomy", kTax, "--corpus", corpus, "--seed", "1",
                       "--members", "behavior"});
  CHECK(r.code == cli::kExitConfig);
  CHECK(r.err.find("config error") != std::string::npos);
  r = geoinfer({"eval", "--taxonomy", kTax, "--corpus", corpus, "--seed", "1", "--t-max", "2"});
  CHECK(r.code == cli::kExitConfig);
  r = geoinfer({"synth", "--taxonomy", kTax, "--seed", "1", "--traveler-fraction", "0.2",
                "--traveler-min-displacement-miles", "50"});
  CHECK(r.code == cli::kExitConfig);

  // Data problems.
  r = geoinfer({"eval", "--taxonomy", kTax, "--corpus", dir / "missing.jsonl", "--seed", "1"});
  CHECK(r.code == cli::kExitData);
  {
    std::ofstream bad(dir / "bad.jsonl");
    bad << "{not json\n";
  }
  r = geoinfer({"eval", "--taxonomy", kTax, "--corpus", dir / "bad.jsonl", "--seed", "1"});
  CHECK(r.code == cli::kExitData);
  CHECK(r.err.find("EmptyInput") != std::string::npos);
  r = geoinfer({"eval", "--taxonomy", kTax, "--corpus", dir / "bad.jsonl", "--seed", "1",
                "--strict"});
  CHECK(r.code == cli::kExitData);

  // A bundle trained against another taxonomy.
  const std::string model = dir / "m.json";
  REQUIRE(geoinfer({"train", "--taxonomy", kTax, "--corpus", corpus, "--model", model,
                    "--members", "words"})
              .code == 0);
  {
    std::ofstream tax(dir / "other.tsv");
    tax << "[cities]\nx_tx\tX\tTX\t30\t-97\n[states]\nTX\tcentral\tsouth\tregion_06\n";
  }
  r = geoinfer({"predict", "--taxonomy", dir / "other.tsv", "--corpus", corpus, "--model",
                model});
  CHECK(r.code == cli::kExitData);
}

TEST_CASE("config file supplies options and flags override it") {
  TempDir dir;
  const std::string corpus = dir / "c.jsonl";
  REQUIRE(geoinfer({"synth", "--taxonomy", kTax, "--seed", "2", "--users-per-city", "3",
                    "--messages-per-user", "40", "--out", corpus})
              .code == 0);
  {
    std::ofstream ini(dir / "run.ini");
    ini << "[eval]\ntaxonomy=" << kTax << "\ngazetteer=" << kGaz << "\ncorpus=" << corpus
        << "\nseed=4\nfolds=3\ngranularity=state\n";
  }
  Result r = geoinfer({"--config", dir / "run.ini", "eval"});
  REQUIRE_MESSAGE(r.code == 0, r.err);
  CHECK(r.out.find("[state]") != std::string::npos);
  r = geoinfer({"--config", dir / "run.ini", "eval", "--granularity", "timezone"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("[timezone]") != std::string::npos);
}

}  // namespace
}  // namespace geoinfer
