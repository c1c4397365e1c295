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

#include "emoseq/artifact.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "emoseq/errors.hpp"

namespace emoseq {

std::string serialize_model(const ModelArtifact& artifact) {
  std::string out;
  out += kArtifactMagic;
  out += "\nformat_version " + std::to_string(artifact.format_version) + "\n";
  const std::string cfg = to_config_text(artifact.config);
  out += "config " + std::to_string(cfg.size()) + "\n" + cfg;
  out += "vocab " + std::to_string(artifact.vocab.size()) + "\n";
  for (const auto& tok : artifact.vocab.tokens()) out += tok + "\n";
  const TfidfModel& tf = artifact.tfidf;
  out += "tfidf " + std::to_string(tf.corpus_size) + " " + std::to_string(tf.idf.size()) + "\n";
  for (std::size_t i = 0; i < tf.idf.size(); ++i) {
    out += std::to_string(tf.doc_freq[i]) + " " + format_double(tf.idf[i]) + "\n";
  }
  for (const Parameter* p : artifact.params.all()) {
    out += "param " + p->name + " " + std::to_string(p->value.rows()) + " " +
           std::to_string(p->value.cols()) + "\n";
    for (std::size_t r = 0; r < p->value.rows(); ++r) {
      auto row = p->value.row(r);
      for (std::size_t c = 0; c < row.size(); ++c) {
        if (c) out += ' ';
        out += format_double(row[c]);
      }
      out += '\n';
    }
  }
  out += "end\n";
  return out;
}

namespace {

class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  std::size_t offset() const { return pos_; }
  bool at_end() const { return pos_ >= text_.size(); }

  [[noreturn]] void fail(const std::string& what) const {
    throw DataError("corrupt model artifact at byte " + std::to_string(pos_) + ": " + what);
  }

  std::string_view word() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\n')) ++pos_;
    const std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] != ' ' && text_[pos_] != '\n') ++pos_;
    if (start == pos_) fail("unexpected end of file");
    return text_.substr(start, pos_ - start);
  }

  void expect(std::string_view keyword) {
    const std::size_t at = pos_;
    if (word() != keyword) {
      pos_ = at;
      fail("expected '" + std::string(keyword) + "'");
    }
  }

  std::size_t count() {
    const std::size_t at = pos_;
    const auto w = word();
    std::size_t v = 0;
    auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc() || ptr != w.data() + w.size()) {
      pos_ = at;
      fail("expected an integer, found '" + std::string(w) + "'");
    }
    return v;
  }

  double real() {
    const std::size_t at = pos_;
    const auto w = word();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc() || ptr != w.data() + w.size()) {
      pos_ = at;
      fail("expected a number, found '" + std::string(w) + "'");
    }
    return v;
  }

  // Consumes the newline ending the current line, then n raw bytes.
  std::string_view raw(std::size_t n) {
    if (pos_ < text_.size() && text_[pos_] == '\n') ++pos_;
    if (text_.size() - pos_ < n) fail("truncated block");
    const auto out = text_.substr(pos_, n);
    pos_ += n;
    return out;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

ModelArtifact deserialize_model(std::string_view text) {
  Reader in(text);
  if (text.substr(0, kArtifactMagic.size()) != kArtifactMagic) in.fail("missing magic header");
  in.expect(kArtifactMagic);
  in.expect("format_version");
  const std::size_t version = in.count();
  if (version != static_cast<std::size_t>(kArtifactVersion)) {
    throw IncompatibleArtifactError("model artifact has format version " +
                                    std::to_string(version) + ", this build reads version " +
                                    std::to_string(kArtifactVersion));
  }

  ModelArtifact art;
  in.expect("config");
  const std::size_t cfg_len = in.count();
  const std::size_t cfg_at = in.offset();
  try {
    art.config = parse_config(in.raw(cfg_len));
  } catch (const ConfigError& e) {
    throw DataError("corrupt model artifact at byte " + std::to_string(cfg_at) +
                    ": embedded config rejected: " + e.what());
  }

  in.expect("vocab");
  const std::size_t vocab_size = in.count();
  std::vector<std::string> tokens;
  tokens.reserve(vocab_size);
  for (std::size_t i = 0; i < vocab_size; ++i) tokens.emplace_back(in.word());
  try {
    art.vocab = Vocabulary::from_tokens(std::move(tokens));
  } catch (const DataError& e) {
    in.fail(e.what());
  }

  in.expect("tfidf");
  art.tfidf.corpus_size = in.count();
  const std::size_t idf_size = in.count();
  if (idf_size != vocab_size) in.fail("IDF table size differs from vocabulary size");
  art.tfidf.doc_freq.resize(idf_size);
  art.tfidf.idf.resize(idf_size);
  for (std::size_t i = 0; i < idf_size; ++i) {
    art.tfidf.doc_freq[i] = in.count();
    art.tfidf.idf[i] = in.real();
  }

  art.config.model.vocab_size = vocab_size;
  try {
    art.params = make_params(art.config.model);
  } catch (const ConfigError& e) {
    in.fail(std::string("embedded model config rejected: ") + e.what());
  }
  for (Parameter* p : art.params.all()) {
    in.expect("param");
    const std::size_t at = in.offset();
    const auto name = in.word();
    if (name != p->name) {
      throw DataError("corrupt model artifact at byte " + std::to_string(at) + ": expected " +
                      "parameter '" + p->name + "', found '" + std::string(name) + "'");
    }
    const std::size_t rows = in.count();
    const std::size_t cols = in.count();
    if (rows != p->value.rows() || cols != p->value.cols()) {
      in.fail("parameter " + p->name + " has shape " + std::to_string(rows) + "x" +
              std::to_string(cols) + ", expected " + p->value.shape_string());
    }
    for (double& v : p->value.data()) v = in.real();
  }
  in.expect("end");
  return art;
}

void save_model(const std::filesystem::path& path, const ModelArtifact& artifact) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write model '" + path.string() + "'");
  out << serialize_model(artifact);
  if (!out) throw DataError("failed writing model '" + path.string() + "'");
}

ModelArtifact load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open model '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return deserialize_model(buf.str());
}

}  // namespace emoseq
