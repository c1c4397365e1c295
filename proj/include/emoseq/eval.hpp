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
#include <vector>

#include "emoseq/model.hpp"
#include "emoseq/numerics.hpp"
#include "emoseq/textpipe.hpp"

namespace emoseq {

// counts[true * C + predicted].
class ConfusionMatrix {
 public:
  explicit ConfusionMatrix(std::size_t num_classes);

  std::size_t num_classes() const { return classes_; }
  std::uint64_t& at(std::size_t truth, std::size_t predicted);
  std::uint64_t at(std::size_t truth, std::size_t predicted) const;
  std::uint64_t total() const;
  std::uint64_t trace() const;

  bool operator==(const ConfusionMatrix&) const = default;

 private:
  std::size_t classes_;
  std::vector<std::uint64_t> counts_;
};

ConfusionMatrix confusion(std::span<const std::size_t> truth,
                          std::span<const std::size_t> predicted, std::size_t num_classes);

struct ClassMetrics {
  double se = 0.0;
  double sp = 0.0;
  double fm = 0.0;
  double j = 0.0;
  // Set when the corresponding denominator was zero (value reported as 0).
  bool se_degenerate = false;
  bool sp_degenerate = false;
  bool fm_degenerate = false;

  bool j_degenerate() const { return se_degenerate || sp_degenerate; }
};

// One-vs-rest reduction of class c.
ClassMetrics per_class_metrics(const ConfusionMatrix& cm, std::size_t c);

struct AucResult {
  double value = 0.0;
  bool degenerate = false;  // no positives or no negatives
};

// Mann-Whitney statistic: P(score_pos > score_neg) with ties counted half.
AucResult auc_ovr(std::span<const double> scores, std::span<const std::uint8_t> is_positive);

// trace / total; throws DataError on an empty matrix.
double accuracy(const ConfusionMatrix& cm);

struct Predictions {
  std::vector<std::size_t> labels;
  Matrix scores;  // examples x classes, softmax probabilities
};

// argmax with ties going to the lowest class index.
std::size_t argmax_lowest(std::span<const double> values);

Predictions predict_labels(const ModelParams& params, const ModelConfig& config,
                           std::span<const EncodedExample> examples);

struct MacroMetric {
  double value = 0.0;
  std::size_t classes_used = 0;
};

struct MetricsReport {
  std::size_t num_classes = 0;
  std::size_t num_examples = 0;
  double ca = 0.0;
  std::vector<ClassMetrics> per_class;
  std::vector<AucResult> auc;
  MacroMetric macro_se, macro_sp, macro_fm, macro_j, macro_auc;
  ConfusionMatrix cm{2};
  std::vector<std::string> class_names;
};

MetricsReport build_report(std::span<const std::size_t> truth, const Predictions& predictions,
                           std::size_t num_classes, std::vector<std::string> class_names = {});

MetricsReport report(const ModelParams& params, const ModelConfig& config,
                     std::span<const EncodedExample> examples,
                     std::vector<std::string> class_names = {});

std::string report_json(const MetricsReport& rep);
std::string confusion_csv(const ConfusionMatrix& cm);
std::string metrics_fig5_csv(const MetricsReport& rep);

// Writes report.json, confusion.csv and metrics_fig5.csv into dir.
void write_report_files(const std::filesystem::path& dir, const MetricsReport& rep);

}  // namespace emoseq
