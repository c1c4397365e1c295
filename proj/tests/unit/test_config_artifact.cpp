/*
 * Copyright 2026 The emoseq Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <cmath>
#include <cstring>
#include <filesystem>
#include <string>

#include "doctest.h"
#include "emoseq/artifact.hpp"
#include "emoseq/config.hpp"
#include "emoseq/errors.hpp"
#include "emoseq/rng.hpp"
#include "test_util.hpp"

using namespace emoseq;

namespace {

ModelArtifact small_artifact(std::uint64_t seed) {
  ModelArtifact a;
  std::vector<Document> docs{{"i feel calm today", 0}, {"i feel so afraid", 1}, {"calm calm", 0}};
  a.vocab = build_vocab(docs, 100, 1);
  a.tfidf = fit_idf(docs, a.vocab);
  a.config.model = emoseq::testing::small_config(a.vocab.size());
  a.config.model.num_classes = 2;
  a.config.class_names = {"calm", "afraid"};
  a.params = init_params(a.config.model, seed);
  Rng rng(seed);
  emoseq::testing::randomize(a.params, rng, 1.0);
  return a;
}

bool bit_equal(double a, double b) { return std::memcmp(&a, &b, sizeof a) == 0; }

}  // namespace

TEST_CASE("default config text round-trips") {
  const RunConfig def;
  const std::string text = to_config_text(def);
  CHECK(text.rfind("[run]\nseed = 42\n", 0) == 0);
  CHECK(to_config_text(parse_config(text)) == text);
}

TEST_CASE("parse_config reads every section") {
  const RunConfig c = parse_config(R"(
# comment
[run]
seed = 9
class_names = anger, fear, joy, sadness, surprise
[data]
path = data/x.csv   # trailing comment
train_fraction = 0.8
[vocab]
max_size = 500
min_freq = 1
[model]
embed_dim = 32
num_heads = 2
enable_attention = false
[train]
epochs = 30
decay_milestones = 0.25, 0.5, 0.9
lr0 = 3e-3
)");
  CHECK(c.seed == 9);
  CHECK(c.class_names.size() == 5);
  CHECK(c.class_names[4] == "surprise");
  CHECK(c.data_path == "data/x.csv");
  CHECK(c.train_fraction == 0.8);
  CHECK(c.vocab_max_size == 500);
  CHECK(c.model.embed_dim == 32);
  CHECK(c.model.hidden_dim == 64);
  CHECK_FALSE(c.model.enable_attention);
  CHECK(c.model.enable_tfidf_gate);
  CHECK(c.train.epochs == 30);
  CHECK(c.train.decay_milestones == std::vector<double>{0.25, 0.5, 0.9});
  CHECK(c.train.lr0 == 3e-3);
  CHECK(to_config_text(parse_config(to_config_text(c))) == to_config_text(c));
}

TEST_CASE("config errors name every bad line") {
  try {
    parse_config("[model]\nembed_dimm = 3\n[train]\nepochs = -1\n[bogus]\nx = 1\nnot a pair\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("line 2") != std::string::npos);
    CHECK(msg.find("embed_dimm") != std::string::npos);
    CHECK(msg.find("line 4") != std::string::npos);
    CHECK(msg.find("line 6") != std::string::npos);
    CHECK(msg.find("line 7") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config("[model]\nenable_attention = maybe\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[model]\nvocab_size = 10\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/emoseq.cfg"), ConfigError);
}

TEST_CASE("overrides") {
  RunConfig c;
  apply_override(c, "train.epochs", "7");
  apply_override(c, "model.enable_tfidf_gate", "0");
  apply_override(c, "run.seed", "18446744073709551615");
  CHECK(c.train.epochs == 7);
  CHECK_FALSE(c.model.enable_tfidf_gate);
  CHECK(c.seed == 18446744073709551615ull);
  CHECK_THROWS_AS(apply_override(c, "train.nope", "1"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "train.epochs", "3.5"), ConfigError);
  CHECK_THROWS_AS(apply_override(c, "train.lr0", "fast"), ConfigError);
}

TEST_CASE("RunConfig validation") {
  RunConfig c;
  CHECK_NOTHROW(c.validate());
  c.train_fraction = 1.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = RunConfig{};
  c.class_names = {"a", "b"};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = RunConfig{};
  c.model.hidden_dim = 10;
  c.model.num_heads = 4;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("format_double is shortest round-trip") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1e-8) == "1e-08");
  CHECK(format_double(3.0) == "3");
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const double v = (rng.next_double() - 0.5) * std::pow(10.0, static_cast<double>(rng.next_below(40)) - 20);
    CHECK(bit_equal(parse_double(format_double(v)), v));
  }
  CHECK_THROWS_AS(parse_double("1.0x"), ConfigError);
}

TEST_CASE("artifact round-trips bit for bit") {
  const ModelArtifact a = small_artifact(3);
  const std::string text = serialize_model(a);
  CHECK(text.rfind("EMOSEQ-ARTIFACT\nformat_version 1\n", 0) == 0);
  const ModelArtifact b = deserialize_model(text);
  CHECK(serialize_model(b) == text);
  CHECK(b.vocab.tokens() == a.vocab.tokens());
  CHECK(b.tfidf.doc_freq == a.tfidf.doc_freq);
  CHECK(b.config.class_names == a.config.class_names);
  const auto pa = a.params.all(), pb = b.params.all();
  REQUIRE(pa.size() == pb.size());
  for (std::size_t i = 0; i < pa.size(); ++i) {
    CHECK(pa[i]->name == pb[i]->name);
    for (std::size_t k = 0; k < pa[i]->value.size(); ++k)
      CHECK(bit_equal(pa[i]->value.data()[k], pb[i]->value.data()[k]));
  }

  const auto path = std::filesystem::temp_directory_path() / "emoseq_artifact_test.art";
  save_model(path, a);
  CHECK(serialize_model(load_model(path)) == text);
  std::filesystem::remove(path);
}

TEST_CASE("corrupt or incompatible artifacts are rejected") {
  const std::string text = serialize_model(small_artifact(4));
  CHECK_THROWS_AS(deserialize_model("NOT-AN-ARTIFACT\n"), DataError);
  CHECK_THROWS_AS(deserialize_model(text.substr(0, text.size() / 2)), DataError);

  std::string future = text;
  future.replace(future.find("format_version 1"), 16, "format_version 2");
  CHECK_THROWS_AS(deserialize_model(future), IncompatibleArtifactError);

  std::string bad_value = text;
  const auto pos = bad_value.find("param embedding");
  const auto line = bad_value.find('\n', pos) + 1;
  bad_value.replace(line, 1, "x");
  CHECK_THROWS_WITH_AS(deserialize_model(bad_value), doctest::Contains("byte"), DataError);

  CHECK_THROWS_AS(load_model("/nonexistent/model.art"), DataError);
}
