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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

namespace emoseq {

using TokenId = std::uint32_t;
inline constexpr TokenId kPadId = 0;
inline constexpr TokenId kUnkId = 1;

struct Document {
  std::string text;
  std::size_t label = 0;
};

// Lowercases and splits on every non-alphanumeric byte; empty pieces dropped.
std::vector<std::string> tokenize(std::string_view text);

class Vocabulary {
 public:
  Vocabulary();
  // Rebuilds from an id-ordered token list whose first two entries are the
  // reserved PAD and UNK markers.
  static Vocabulary from_tokens(std::vector<std::string> id_to_token);

  std::size_t size() const { return id_to_token_.size(); }
  TokenId id_of(std::string_view token) const;  // kUnkId when absent
  bool contains(std::string_view token) const;
  const std::string& token(TokenId id) const;
  const std::vector<std::string>& tokens() const { return id_to_token_; }

  bool operator==(const Vocabulary& other) const { return id_to_token_ == other.id_to_token_; }

 private:
  TokenId add(std::string token);

  std::unordered_map<std::string, TokenId> token_to_id_;
  std::vector<std::string> id_to_token_;

  friend Vocabulary build_vocab(std::span<const Document>, std::size_t, std::size_t);
};

inline constexpr std::string_view kPadToken = "<pad>";
inline constexpr std::string_view kUnkToken = "<unk>";

// Tokens with corpus frequency >= min_freq ranked by (frequency desc,
// token asc), keeping max_size - 2 of them after PAD and UNK.
Vocabulary build_vocab(std::span<const Document> corpus, std::size_t max_size,
                       std::size_t min_freq);

struct TfidfModel {
  std::size_t corpus_size = 0;
  std::vector<std::size_t> doc_freq;  // indexed by token id
  std::vector<double> idf;            // ln((1 + N) / (1 + df)) + 1

  bool operator==(const TfidfModel&) const = default;
};

TfidfModel fit_idf(std::span<const Document> corpus, const Vocabulary& vocab);

// Weight contributed by UNK or PAD with zero document frequency is 0 by
// convention, every other token gets tf * idf.
double tfidf_weight(TokenId token, std::span<const TokenId> doc_tokens, const TfidfModel& model);

struct EncodedExample {
  std::vector<TokenId> token_ids;      // length max_len, PAD-filled
  std::vector<double> tfidf_weights;   // aligned with token_ids, 0 at PAD
  std::size_t valid_len = 0;
  std::size_t label = 0;

  std::size_t max_len() const { return token_ids.size(); }
  // Nothing survived tokenization; pooled to the zero vector by the model.
  bool degenerate() const { return valid_len == 0; }
};

std::vector<TokenId> to_ids(std::string_view text, const Vocabulary& vocab);

EncodedExample encode(const Document& doc, const Vocabulary& vocab, const TfidfModel& tfidf,
                      std::size_t max_len);
std::vector<EncodedExample> encode_all(std::span<const Document> docs, const Vocabulary& vocab,
                                       const TfidfModel& tfidf, std::size_t max_len);

// Seeded Fisher-Yates shuffle, then the first floor(n * train_fraction)
// documents go to train.
std::pair<std::vector<Document>, std::vector<Document>> split_shuffle(
    std::span<const Document> dataset, double train_fraction, std::uint64_t seed);

// Same permutation as split_shuffle, exposed for partition tests.
std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed);

// Reads a `text,label` CSV (RFC 4180 quoting). Labels must be < num_classes.
std::vector<Document> load_csv(const std::filesystem::path& path, std::size_t num_classes);
std::vector<Document> parse_csv(std::string_view content, std::size_t num_classes);
void write_csv(const std::filesystem::path& path, std::span<const Document> docs);

}  // namespace emoseq
