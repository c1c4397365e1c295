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

#include "emoseq/textpipe.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "emoseq/errors.hpp"
#include "emoseq/rng.hpp"

namespace emoseq {

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char ch : text) {
    const auto uc = static_cast<unsigned char>(ch);
    if (std::isalnum(uc)) {
      current.push_back(static_cast<char>(std::tolower(uc)));
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

Vocabulary::Vocabulary() {
  add(std::string(kPadToken));
  add(std::string(kUnkToken));
}

TokenId Vocabulary::add(std::string token) {
  const auto id = static_cast<TokenId>(id_to_token_.size());
  token_to_id_.emplace(token, id);
  id_to_token_.push_back(std::move(token));
  return id;
}

Vocabulary Vocabulary::from_tokens(std::vector<std::string> id_to_token) {
  if (id_to_token.size() < 2 || id_to_token[0] != kPadToken || id_to_token[1] != kUnkToken) {
    throw DataError("vocabulary must start with the reserved PAD and UNK entries");
  }
  Vocabulary v;
  for (std::size_t i = 2; i < id_to_token.size(); ++i) {
    if (v.token_to_id_.contains(id_to_token[i])) {
      throw DataError("duplicate vocabulary token '" + id_to_token[i] + "'");
    }
    v.add(std::move(id_to_token[i]));
  }
  return v;
}

TokenId Vocabulary::id_of(std::string_view token) const {
  auto it = token_to_id_.find(std::string(token));
  return it == token_to_id_.end() ? kUnkId : it->second;
}

bool Vocabulary::contains(std::string_view token) const {
  return token_to_id_.contains(std::string(token));
}

const std::string& Vocabulary::token(TokenId id) const {
  if (id >= id_to_token_.size()) {
    throw IndexError("token id " + std::to_string(id) + " out of range for vocabulary of size " +
                     std::to_string(id_to_token_.size()));
  }
  return id_to_token_[id];
}

Vocabulary build_vocab(std::span<const Document> corpus, std::size_t max_size,
                       std::size_t min_freq) {
  if (corpus.empty()) throw ConfigError("build_vocab: empty corpus");
  if (max_size < 2) throw ConfigError("build_vocab: max_size must be at least 2");

  std::map<std::string, std::size_t> freq;
  for (const auto& doc : corpus) {
    for (auto& tok : tokenize(doc.text)) ++freq[std::move(tok)];
  }
  std::vector<std::pair<std::string, std::size_t>> ranked;
  for (auto& [tok, count] : freq) {
    if (count >= min_freq) ranked.emplace_back(tok, count);
  }
  // std::map iteration is already lexicographic, so a stable sort on
  // frequency alone yields the (freq desc, token asc) order.
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  if (ranked.size() > max_size - 2) ranked.resize(max_size - 2);

  Vocabulary vocab;
  for (auto& [tok, count] : ranked) vocab.add(std::move(tok));
  return vocab;
}

TfidfModel fit_idf(std::span<const Document> corpus, const Vocabulary& vocab) {
  if (corpus.empty()) throw ConfigError("fit_idf: empty corpus");
  TfidfModel model;
  model.corpus_size = corpus.size();
  model.doc_freq.assign(vocab.size(), 0);
  std::vector<std::size_t> last_seen(vocab.size(), SIZE_MAX);
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    for (TokenId id : to_ids(corpus[d].text, vocab)) {
      if (last_seen[id] != d) {
        last_seen[id] = d;
        ++model.doc_freq[id];
      }
    }
  }
  const double n = static_cast<double>(model.corpus_size);
  model.idf.resize(vocab.size());
  for (std::size_t t = 0; t < vocab.size(); ++t) {
    model.idf[t] = std::log((1.0 + n) / (1.0 + static_cast<double>(model.doc_freq[t]))) + 1.0;
  }
  return model;
}

double tfidf_weight(TokenId token, std::span<const TokenId> doc_tokens, const TfidfModel& model) {
  if (token >= model.idf.size()) {
    throw IndexError("tfidf_weight: token id " + std::to_string(token) + " outside the model");
  }
  if (doc_tokens.empty() || model.doc_freq[token] == 0) return 0.0;
  const auto count = std::count(doc_tokens.begin(), doc_tokens.end(), token);
  const double tf = static_cast<double>(count) / static_cast<double>(doc_tokens.size());
  return tf * model.idf[token];
}

std::vector<TokenId> to_ids(std::string_view text, const Vocabulary& vocab) {
  std::vector<TokenId> ids;
  for (const auto& tok : tokenize(text)) ids.push_back(vocab.id_of(tok));
  return ids;
}

EncodedExample encode(const Document& doc, const Vocabulary& vocab, const TfidfModel& tfidf,
                      std::size_t max_len) {
  if (max_len == 0) throw ConfigError("encode: max_len must be at least 1");
  const std::vector<TokenId> ids = to_ids(doc.text, vocab);
  EncodedExample ex;
  ex.label = doc.label;
  ex.token_ids.assign(max_len, kPadId);
  ex.tfidf_weights.assign(max_len, 0.0);
  ex.valid_len = std::min(ids.size(), max_len);
  for (std::size_t i = 0; i < ex.valid_len; ++i) {
    ex.token_ids[i] = ids[i];
    ex.tfidf_weights[i] = tfidf_weight(ids[i], ids, tfidf);
  }
  return ex;
}

std::vector<EncodedExample> encode_all(std::span<const Document> docs, const Vocabulary& vocab,
                                       const TfidfModel& tfidf, std::size_t max_len) {
  std::vector<EncodedExample> out;
  out.reserve(docs.size());
  for (const auto& doc : docs) out.push_back(encode(doc, vocab, tfidf, max_len));
  return out;
}

std::vector<std::size_t> shuffled_indices(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> idx(n);
  for (std::size_t i = 0; i < n; ++i) idx[i] = i;
  Rng rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.next_below(i));
    std::swap(idx[i - 1], idx[j]);
  }
  return idx;
}

std::pair<std::vector<Document>, std::vector<Document>> split_shuffle(
    std::span<const Document> dataset, double train_fraction, std::uint64_t seed) {
  if (dataset.size() < 2) throw ConfigError("split_shuffle: need at least 2 documents");
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("split_shuffle: train_fraction must lie in (0, 1)");
  }
  const auto order = shuffled_indices(dataset.size(), seed);
  const auto n_train =
      static_cast<std::size_t>(std::floor(static_cast<double>(dataset.size()) * train_fraction));
  std::pair<std::vector<Document>, std::vector<Document>> out;
  out.first.reserve(n_train);
  out.second.reserve(dataset.size() - n_train);
  for (std::size_t i = 0; i < order.size(); ++i) {
    (i < n_train ? out.first : out.second).push_back(dataset[order[i]]);
  }
  return out;
}

namespace {

std::size_t parse_label(std::string_view field, std::size_t line, std::size_t num_classes) {
  std::size_t value = 0;
  const char* end = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw DataError("line " + std::to_string(line) + ": label '" + std::string(field) +
                    "' is not a non-negative integer");
  }
  if (value >= num_classes) {
    throw DataError("line " + std::to_string(line) + ": label " + std::to_string(value) +
                    " out of range for " + std::to_string(num_classes) + " classes");
  }
  return value;
}

}  // namespace

std::vector<Document> parse_csv(std::string_view content, std::size_t num_classes) {
  std::vector<Document> docs;
  std::size_t pos = 0;
  std::size_t line = 1;
  bool header_done = false;

  while (pos < content.size()) {
    const std::size_t record_line = line;
    std::vector<std::string> fields(1);
    bool in_quotes = false;
    bool was_quoted = false;
    bool field_closed = false;
    bool record_done = false;
    while (pos < content.size() && !record_done) {
      const char ch = content[pos];
      if (in_quotes) {
        if (ch == '"') {
          if (pos + 1 < content.size() && content[pos + 1] == '"') {
            fields.back().push_back('"');
            ++pos;
          } else {
            in_quotes = false;
            field_closed = true;
          }
        } else {
          if (ch == '\n') ++line;
          fields.back().push_back(ch);
        }
      } else if (ch == ',') {
        fields.emplace_back();
        was_quoted = false;
        field_closed = false;
      } else if (ch == '\n' || ch == '\r') {
        if (ch == '\r' && pos + 1 < content.size() && content[pos + 1] == '\n') ++pos;
        ++line;
        record_done = true;
      } else if (ch == '"') {
        if (!fields.back().empty() || was_quoted) {
          throw DataError("line " + std::to_string(record_line) +
                          ": stray quote inside unquoted field");
        }
        in_quotes = true;
        was_quoted = true;
      } else {
        if (field_closed) {
          throw DataError("line " + std::to_string(record_line) +
                          ": characters after closing quote");
        }
        fields.back().push_back(ch);
      }
      ++pos;
    }
    if (in_quotes) {
      throw DataError("line " + std::to_string(record_line) + ": unterminated quoted field");
    }
    if (fields.size() == 1 && fields[0].empty() && !was_quoted) continue;  // blank line

    if (!header_done) {
      if (fields.size() != 2 || fields[0] != "text" || fields[1] != "label") {
        throw DataError("line " + std::to_string(record_line) +
                        ": expected header 'text,label'");
      }
      header_done = true;
      continue;
    }
    if (fields.size() != 2) {
      throw DataError("line " + std::to_string(record_line) + ": expected 2 fields, found " +
                      std::to_string(fields.size()));
    }
    docs.push_back({std::move(fields[0]), parse_label(fields[1], record_line, num_classes)});
  }
  if (!header_done) throw DataError("line 1: missing header 'text,label'");
  return docs;
}

std::vector<Document> load_csv(const std::filesystem::path& path, std::size_t num_classes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open dataset '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), num_classes);
}

void write_csv(const std::filesystem::path& path, std::span<const Document> docs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << "text,label\n";
  for (const auto& doc : docs) {
    out << '"';
    for (char ch : doc.text) {
      if (ch == '"') out << '"';
      out << ch;
    }
    out << "\"," << doc.label << '\n';
  }
}

}  // namespace emoseq
