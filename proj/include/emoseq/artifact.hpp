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

#include <filesystem>
#include <string>
#include <string_view>

#include "emoseq/config.hpp"
#include "emoseq/model.hpp"
#include "emoseq/textpipe.hpp"

namespace emoseq {

inline constexpr std::string_view kArtifactMagic = "EMOSEQ-ARTIFACT";
inline constexpr int kArtifactVersion = 1;

// A trained model plus everything needed to encode new text for it.
struct ModelArtifact {
  int format_version = kArtifactVersion;
  RunConfig config;  // config.model.vocab_size matches vocab.size()
  Vocabulary vocab;
  TfidfModel tfidf;
  ModelParams params;
};

// Text format, one item per line:
//
//   EMOSEQ-ARTIFACT
//   format_version 1
//   config <byte count>        followed by the config text
//   vocab <n>                  followed by n tokens in id order
//   tfidf <corpus size> <n>    followed by n "<doc freq> <idf>" lines
//   param <name> <rows> <cols> followed by rows lines of cols values
//   end
//
// Doubles are written in shortest round-trip decimal form, so a save/load
// cycle reproduces every value bit for bit.
std::string serialize_model(const ModelArtifact& artifact);
// Throws DataError (with byte offset) on corrupt input and
// IncompatibleArtifactError on a different format version.
ModelArtifact deserialize_model(std::string_view text);

void save_model(const std::filesystem::path& path, const ModelArtifact& artifact);
ModelArtifact load_model(const std::filesystem::path& path);

}  // namespace emoseq
