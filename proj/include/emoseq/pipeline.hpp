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
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "emoseq/artifact.hpp"
#include "emoseq/config.hpp"
#include "emoseq/eval.hpp"
#include "emoseq/textpipe.hpp"
#include "emoseq/train.hpp"

namespace emoseq {

// Split, vocabulary and IDF fitted on the training portion, both splits
// encoded.
struct PreparedData {
  Vocabulary vocab;
  TfidfModel tfidf;
  std::vector<Document> train_docs;
  std::vector<Document> test_docs;
  std::vector<EncodedExample> train;
  std::vector<EncodedExample> test;
};

PreparedData prepare_data(const RunConfig& config, std::span<const Document> dataset);

struct TrainOutcome {
  ModelArtifact artifact;
  TrainLog log;
  MetricsReport train_report;
  MetricsReport test_report;
};

// load -> split -> vocab + IDF -> init -> train -> evaluate both splits.
TrainOutcome run_training(const RunConfig& config, std::span<const Document> dataset,
                          const EpochCallback& on_epoch = {});
TrainOutcome run_training(const RunConfig& config, const PreparedData& data,
                          const EpochCallback& on_epoch = {});

// model.art, trainlog.csv (no timing), timing.csv, train/ and test/ report
// files.
void write_outcome(const std::filesystem::path& dir, const TrainOutcome& outcome);

MetricsReport evaluate_artifact(const ModelArtifact& artifact, std::span<const Document> docs);

// (class, probability) sorted by probability, ties to the lower class.
std::vector<std::pair<std::size_t, double>> predict_text(const ModelArtifact& artifact,
                                                         std::string_view text);

struct AblationVariant {
  std::string name;
  bool enable_attention;
  bool enable_tfidf_gate;
};

// full, no_attention, no_tfidf_gate, plain_lstm.
const std::vector<AblationVariant>& ablation_variants();

struct AblationRow {
  std::string variant;
  std::vector<double> test_ca;  // one per seed
  std::vector<double> test_macro_fm;
  double mean_ca = 0.0;
  double mean_macro_fm = 0.0;
  double delta_ca = 0.0;  // relative to full
  double delta_fm = 0.0;
};

using AblationProgress = std::function<void(const std::string& variant, std::uint64_t seed,
                                            const TrainOutcome& outcome)>;

// Trains every variant on the same split for each seed (the run seed is
// replaced by each entry of seeds in turn).
std::vector<AblationRow> run_ablation(const RunConfig& config, std::span<const Document> dataset,
                                      std::span<const std::uint64_t> seeds,
                                      const AblationProgress& progress = {});
std::string ablation_csv(const std::vector<AblationRow>& rows);

}  // namespace emoseq
