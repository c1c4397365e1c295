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

#include "emoseq/pipeline.hpp"

#include <algorithm>
#include <fstream>

#include "emoseq/errors.hpp"
#include "emoseq/rng.hpp"

namespace emoseq {

PreparedData prepare_data(const RunConfig& config, std::span<const Document> dataset) {
  config.validate();
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    if (dataset[i].label >= config.model.num_classes) {
      throw DataError("document " + std::to_string(i) + ": label " +
                      std::to_string(dataset[i].label) + " out of range");
    }
  }
  PreparedData data;
  auto [train_docs, test_docs] =
      split_shuffle(dataset, config.train_fraction, derive_seed(config.seed, Stream::kSplit));
  data.train_docs = std::move(train_docs);
  data.test_docs = std::move(test_docs);
  data.vocab = build_vocab(data.train_docs, config.vocab_max_size, config.vocab_min_freq);
  data.tfidf = fit_idf(data.train_docs, data.vocab);
  data.train = encode_all(data.train_docs, data.vocab, data.tfidf, config.model.max_len);
  data.test = encode_all(data.test_docs, data.vocab, data.tfidf, config.model.max_len);
  return data;
}

TrainOutcome run_training(const RunConfig& config, const PreparedData& data,
                          const EpochCallback& on_epoch) {
  TrainOutcome out;
  out.artifact.config = config;
  out.artifact.config.model.vocab_size = data.vocab.size();
  out.artifact.config.model.seed = config.seed;
  out.artifact.config.train.seed = config.seed;
  out.artifact.vocab = data.vocab;
  out.artifact.tfidf = data.tfidf;

  const ModelConfig& mc = out.artifact.config.model;
  out.artifact.params = init_params(mc, derive_seed(config.seed, Stream::kInit));
  TrainConfig tc = config.train;
  tc.seed = derive_seed(config.seed, Stream::kShuffle);
  out.log = train(out.artifact.params, mc, data.train, tc, on_epoch);

  out.train_report = report(out.artifact.params, mc, data.train, config.class_names);
  if (!data.test.empty()) {
    out.test_report = report(out.artifact.params, mc, data.test, config.class_names);
  }
  return out;
}

TrainOutcome run_training(const RunConfig& config, std::span<const Document> dataset,
                          const EpochCallback& on_epoch) {
  return run_training(config, prepare_data(config, dataset), on_epoch);
}

void write_outcome(const std::filesystem::path& dir, const TrainOutcome& outcome) {
  std::filesystem::create_directories(dir);
  save_model(dir / "model.art", outcome.artifact);
  // Wall-clock time lives in its own file so trainlog.csv is reproducible.
  write_trainlog_csv(dir / "trainlog.csv", outcome.log, false);
  std::ofstream timing(dir / "timing.csv", std::ios::binary);
  timing << "epoch,seconds\n";
  for (const auto& rec : outcome.log.epochs) timing << rec.epoch << ',' << rec.seconds << '\n';
  write_report_files(dir / "train", outcome.train_report);
  if (outcome.test_report.num_examples > 0) write_report_files(dir / "test", outcome.test_report);
}

MetricsReport evaluate_artifact(const ModelArtifact& artifact, std::span<const Document> docs) {
  const auto examples =
      encode_all(docs, artifact.vocab, artifact.tfidf, artifact.config.model.max_len);
  return report(artifact.params, artifact.config.model, examples, artifact.config.class_names);
}

std::vector<std::pair<std::size_t, double>> predict_text(const ModelArtifact& artifact,
                                                         std::string_view text) {
  const Document doc{std::string(text), 0};
  const EncodedExample ex =
      encode(doc, artifact.vocab, artifact.tfidf, artifact.config.model.max_len);
  const auto probs = forward(ex, artifact.params, artifact.config.model);
  std::vector<std::pair<std::size_t, double>> ranked;
  for (std::size_t k = 0; k < probs.size(); ++k) ranked.emplace_back(k, probs[k]);
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return ranked;
}

const std::vector<AblationVariant>& ablation_variants() {
  static const std::vector<AblationVariant> variants{
      {"full", true, true},
      {"no_attention", false, true},
      {"no_tfidf_gate", true, false},
      {"plain_lstm", false, false},
  };
  return variants;
}

std::vector<AblationRow> run_ablation(const RunConfig& config, std::span<const Document> dataset,
                                      std::span<const std::uint64_t> seeds,
                                      const AblationProgress& progress) {
  if (seeds.empty()) throw ConfigError("ablation: at least one seed required");
  std::vector<AblationRow> rows;
  for (const auto& v : ablation_variants()) rows.push_back({v.name, {}, {}});

  for (std::uint64_t seed : seeds) {
    RunConfig base = config;
    base.seed = seed;
    const PreparedData data = prepare_data(base, dataset);
    if (data.test.empty()) throw ConfigError("ablation: test split is empty");
    for (std::size_t i = 0; i < ablation_variants().size(); ++i) {
      const auto& variant = ablation_variants()[i];
      RunConfig cfg = base;
      cfg.model.enable_attention = variant.enable_attention;
      cfg.model.enable_tfidf_gate = variant.enable_tfidf_gate;
      const TrainOutcome outcome = run_training(cfg, data);
      rows[i].test_ca.push_back(outcome.test_report.ca);
      rows[i].test_macro_fm.push_back(outcome.test_report.macro_fm.value);
      if (progress) progress(variant.name, seed, outcome);
    }
  }
  const auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  for (auto& row : rows) {
    row.mean_ca = mean(row.test_ca);
    row.mean_macro_fm = mean(row.test_macro_fm);
  }
  for (auto& row : rows) {
    row.delta_ca = row.mean_ca - rows.front().mean_ca;
    row.delta_fm = row.mean_macro_fm - rows.front().mean_macro_fm;
  }
  return rows;
}

std::string ablation_csv(const std::vector<AblationRow>& rows) {
  std::string out = "variant,seeds,test_ca,test_macro_fm,delta_ca_vs_full,delta_fm_vs_full\n";
  for (const auto& row : rows) {
    out += row.variant + "," + std::to_string(row.test_ca.size()) + "," +
           format_double(row.mean_ca) + "," + format_double(row.mean_macro_fm) + "," +
           format_double(row.delta_ca) + "," + format_double(row.delta_fm) + "\n";
  }
  return out;
}

}  // namespace emoseq
