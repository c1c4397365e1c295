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

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "emoseq/model.hpp"
#include "emoseq/train.hpp"

namespace emoseq {

// Everything needed to reproduce a run. Serialised as an INI-style text:
//
//   [section]
//   key = value      # comments start with '#' or ';'
//
// Sections: run, data, vocab, model, train. Unknown sections or keys are
// rejected. model.vocab_size is derived from the fitted vocabulary and is
// not a configurable key.
struct RunConfig {
  std::uint64_t seed = 42;
  std::string output_dir = "out";
  std::vector<std::string> class_names;

  std::string data_path;
  double train_fraction = 0.7;

  std::size_t vocab_max_size = 10000;
  std::size_t vocab_min_freq = 2;

  ModelConfig model;
  TrainConfig train;

  void validate() const;
};

RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::filesystem::path& path);

// Sets one "section.key" to a textual value, with the same validation as
// the file parser.
void apply_override(RunConfig& config, std::string_view dotted_key, std::string_view value);

// Canonical text form; parse_config(to_config_text(c)) reproduces c exactly.
std::string to_config_text(const RunConfig& config);

// Doubles in shortest round-trip decimal form.
std::string format_double(double v);
double parse_double(std::string_view text);

}  // namespace emoseq
