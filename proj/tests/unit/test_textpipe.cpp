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

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include "doctest.h"
#include "emoseq/errors.hpp"
#include "emoseq/rng.hpp"
#include "emoseq/textpipe.hpp"
#include "oracles.hpp"

using namespace emoseq;

namespace {

std::vector<Document> docs(std::initializer_list<const char*> texts) {
  std::vector<Document> out;
  for (const char* t : texts) out.push_back({t, 0});
  return out;
}

}  // namespace

TEST_CASE("tokenize") {
  CHECK(tokenize("i just feel really helpless") ==
        std::vector<std::string>{"i", "just", "feel", "really", "helpless"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("Don't STOP!") == std::vector<std::string>{"don", "t", "stop"});
  CHECK(tokenize("  --a1,,B2  ") == std::vector<std::string>{"a1", "b2"});
}

TEST_CASE("build_vocab ranks by frequency then token") {
  const auto corpus = docs({"a b", "a"});
  const Vocabulary v = build_vocab(corpus, 100, 1);
  REQUIRE(v.size() == 4);
  CHECK(v.token(kPadId) == kPadToken);
  CHECK(v.token(kUnkId) == kUnkToken);
  CHECK(v.id_of("a") == 2);
  CHECK(v.id_of("b") == 3);
  CHECK(v.id_of("zzz") == kUnkId);

  CHECK(build_vocab(corpus, 100, 3).size() == 2);

  const Vocabulary tie = build_vocab(docs({"y y x x"}), 100, 1);
  CHECK(tie.id_of("x") == 2);
  CHECK(tie.id_of("y") == 3);

  const Vocabulary capped = build_vocab(docs({"a a a b b c"}), 3, 1);
  CHECK(capped.size() == 3);
  CHECK(capped.contains("a"));
  CHECK_FALSE(capped.contains("b"));

  CHECK_THROWS_AS(build_vocab(std::vector<Document>{}, 10, 1), ConfigError);
  CHECK_THROWS_AS(build_vocab(corpus, 1, 1), ConfigError);
}

TEST_CASE("vocabulary ids and tokens are a bijection") {
  Rng rng(4);
  std::vector<Document> corpus;
  for (int d = 0; d < 30; ++d) {
    std::string text;
    for (int t = 0; t < 12; ++t) text += "w" + std::to_string(rng.next_below(40)) + " ";
    corpus.push_back({text, 0});
  }
  const Vocabulary v = build_vocab(corpus, 1000, 1);
  for (TokenId id = 0; id < v.size(); ++id) CHECK(v.id_of(v.token(id)) == id);
  std::set<std::string> unique(v.tokens().begin(), v.tokens().end());
  CHECK(unique.size() == v.size());
  CHECK_THROWS_AS(v.token(static_cast<TokenId>(v.size())), IndexError);
}

TEST_CASE("fit_idf") {
  const auto corpus = docs({"common rare", "common", "common", "common"});
  const Vocabulary v = build_vocab(corpus, 10, 1);
  const TfidfModel m = fit_idf(corpus, v);
  CHECK(m.corpus_size == 4);
  CHECK(m.doc_freq[v.id_of("common")] == 4);
  CHECK(m.idf[v.id_of("common")] == 1.0);
  CHECK(m.doc_freq[v.id_of("rare")] == 1);
  CHECK(m.idf[v.id_of("rare")] == doctest::Approx(1.916290731874155).epsilon(1e-15));
  CHECK(m.doc_freq[kPadId] == 0);
  CHECK(m.doc_freq[kUnkId] == 0);
  for (double idf : m.idf) CHECK(idf > 0.0);
  CHECK_THROWS_AS(fit_idf(std::vector<Document>{}, v), ConfigError);
}

TEST_CASE("tfidf_weight") {
  TfidfModel m;
  m.corpus_size = 4;
  m.doc_freq = {0, 0, 2, 1};
  m.idf = {1.0, 1.0, 1.0, 2.5};
  const std::vector<TokenId> doc{2, 3, 2};
  CHECK(tfidf_weight(2, doc, m) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  const std::vector<TokenId> other{3};
  CHECK(tfidf_weight(2, other, m) == 0.0);
  CHECK(tfidf_weight(3, other, m) == 2.5);
  CHECK(tfidf_weight(kUnkId, std::vector<TokenId>{kUnkId}, m) == 0.0);
}

TEST_CASE("tfidf_weight matches a definitional oracle on small corpora") {
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const auto n_docs = 1 + rng.next_below(10);
    std::vector<Document> corpus;
    std::vector<std::vector<std::string>> tokens;
    for (std::uint64_t d = 0; d < n_docs; ++d) {
      std::string text;
      const auto len = 1 + rng.next_below(8);
      for (std::uint64_t t = 0; t < len; ++t) text += std::string(1, char('a' + rng.next_below(6))) + " ";
      corpus.push_back({text, 0});
      tokens.push_back(tokenize(text));
    }
    const Vocabulary v = build_vocab(corpus, 100, 1);
    const TfidfModel m = fit_idf(corpus, v);
    for (std::size_t d = 0; d < corpus.size(); ++d) {
      const auto ids = to_ids(corpus[d].text, v);
      for (const auto& tok : tokens[d]) {
        const double got = tfidf_weight(v.id_of(tok), ids, m);
        CHECK(std::abs(got - oracle::tfidf_weight(tok, tokens[d], tokens)) <= 1e-12);
      }
    }
  }
}

TEST_CASE("encode pads, truncates and aligns weights") {
  const auto corpus = docs({"a b c d e f g h i j", "a b"});
  const Vocabulary v = build_vocab(corpus, 100, 1);
  const TfidfModel m = fit_idf(corpus, v);

  const EncodedExample shortex = encode({"a b", 3}, v, m, 6);
  CHECK(shortex.token_ids ==
        std::vector<TokenId>{v.id_of("a"), v.id_of("b"), kPadId, kPadId, kPadId, kPadId});
  CHECK(shortex.valid_len == 2);
  CHECK(shortex.label == 3);

  const EncodedExample longex = encode(corpus[0], v, m, 4);
  CHECK(longex.valid_len == 4);
  CHECK(longex.token_ids[3] == v.id_of("d"));
  // tf uses the untruncated length of 10.
  CHECK(longex.tfidf_weights[0] == doctest::Approx(0.1 * m.idf[v.id_of("a")]).epsilon(1e-15));

  const EncodedExample empty = encode({"", 0}, v, m, 5);
  CHECK(empty.valid_len == 0);
  CHECK(empty.degenerate());
  CHECK(std::all_of(empty.token_ids.begin(), empty.token_ids.end(),
                    [](TokenId id) { return id == kPadId; }));
  CHECK_THROWS_AS(encode({"a", 0}, v, m, 0), ConfigError);
}

TEST_CASE("weights are zero exactly at PAD and zero-df UNK positions") {
  Rng rng(8);
  std::vector<Document> corpus;
  for (int d = 0; d < 10; ++d) {
    std::string text;
    for (int t = 0; t < 6; ++t) text += "t" + std::to_string(rng.next_below(15)) + " ";
    corpus.push_back({text, 0});
  }
  const Vocabulary v = build_vocab(corpus, 8, 1);  // forces OOV tokens
  const TfidfModel m = fit_idf(corpus, v);
  for (int trial = 0; trial < 100; ++trial) {
    std::string text;
    const auto len = rng.next_below(12);
    for (std::uint64_t t = 0; t < len; ++t) text += "t" + std::to_string(rng.next_below(20)) + " ";
    const EncodedExample ex = encode({text, 0}, v, m, 8);
    for (std::size_t i = 0; i < ex.max_len(); ++i) {
      const bool pad = i >= ex.valid_len;
      CHECK(pad == (ex.token_ids[i] == kPadId));
      const bool zero_df = m.doc_freq[ex.token_ids[i]] == 0;
      CHECK(ex.tfidf_weights[i] >= 0.0);
      CHECK((ex.tfidf_weights[i] == 0.0) == (pad || zero_df));
    }
  }
}

TEST_CASE("split_shuffle") {
  std::vector<Document> data;
  for (int i = 0; i < 10; ++i) data.push_back({"doc" + std::to_string(i), 0});
  const auto [train, test] = split_shuffle(data, 0.7, 1);
  CHECK(train.size() == 7);
  CHECK(test.size() == 3);

  std::vector<Document> big(20000);
  const auto [bt, bs] = split_shuffle(big, 0.7, 3);
  CHECK(bt.size() == 14000);
  CHECK(bs.size() == 6000);

  const auto again = split_shuffle(data, 0.7, 1);
  for (std::size_t i = 0; i < train.size(); ++i) CHECK(again.first[i].text == train[i].text);

  CHECK_THROWS_AS(split_shuffle(std::vector<Document>(1), 0.7, 1), ConfigError);
  CHECK_THROWS_AS(split_shuffle(data, 1.0, 1), ConfigError);
  CHECK_THROWS_AS(split_shuffle(data, 0.0, 1), ConfigError);
}

TEST_CASE("split_shuffle partitions the dataset") {
  Rng rng(12);
  for (int trial = 0; trial < 30; ++trial) {
    const auto n = 2 + rng.next_below(200);
    const double frac = rng.uniform(0.05, 0.95);
    std::vector<Document> data;
    for (std::uint64_t i = 0; i < n; ++i) data.push_back({std::to_string(i), 0});
    const auto [train, test] = split_shuffle(data, frac, rng.next_u64());
    CHECK(train.size() == static_cast<std::size_t>(std::floor(static_cast<double>(n) * frac)));
    CHECK(train.size() + test.size() == n);
    std::set<std::string> seen;
    for (const auto& d : train) seen.insert(d.text);
    for (const auto& d : test) CHECK(seen.insert(d.text).second);
    CHECK(seen.size() == n);
  }
}

TEST_CASE("parse_csv") {
  const auto parsed = parse_csv(
      "text,label\n"
      "i just feel really helpless and heavy hearted,4\n"
      "\"quoted, with comma\",0\r\n"
      "\"has \"\"quotes\"\"\",1\n"
      "\"multi\nline\",2\n",
      5);
  REQUIRE(parsed.size() == 4);
  CHECK(parsed[0].label == 4);
  CHECK(parsed[1].text == "quoted, with comma");
  CHECK(parsed[2].text == "has \"quotes\"");
  CHECK(parsed[3].text == "multi\nline");

  const auto bad_label = [](const char* body) {
    try {
      parse_csv(body, 5);
    } catch (const DataError& e) {
      return std::string(e.what());
    }
    return std::string();
  };
  CHECK(bad_label("text,label\nok,1\nbad,7\n").find("line 3") != std::string::npos);
  CHECK(bad_label("text,label\nok,1\nbad,x\n").find("line 3") != std::string::npos);
  CHECK(bad_label("text,label\na,b,1\n").find("line 2") != std::string::npos);
  CHECK(bad_label("text,label\n\"open,1\n").find("line 2") != std::string::npos);
  CHECK(bad_label("txt,lbl\na,1\n").find("line 1") != std::string::npos);
  CHECK(bad_label("text,label\n\"a\"b,1\n").find("line 2") != std::string::npos);
  CHECK_THROWS_AS(parse_csv("", 5), DataError);
}

TEST_CASE("csv round trip through files") {
  const auto dir = std::filesystem::temp_directory_path() / "emoseq_textpipe_test";
  std::filesystem::create_directories(dir);
  const std::vector<Document> data{{"plain", 0}, {"with \"quote\", comma", 3}, {"", 1}};
  write_csv(dir / "d.csv", data);
  const auto back = load_csv(dir / "d.csv", 5);
  REQUIRE(back.size() == data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    CHECK(back[i].text == data[i].text);
    CHECK(back[i].label == data[i].label);
  }
  CHECK_THROWS_AS(load_csv(dir / "missing.csv", 5), DataError);
  std::filesystem::remove_all(dir);
}
