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

#include "emoseq/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numeric>

#include "emoseq/errors.hpp"
#include "json.hpp"

namespace emoseq {

ConfusionMatrix::ConfusionMatrix(std::size_t num_classes)
    : classes_(num_classes), counts_(num_classes * num_classes, 0) {
  if (num_classes < 2) throw ConfigError("confusion matrix needs at least 2 classes");
}

std::uint64_t& ConfusionMatrix::at(std::size_t truth, std::size_t predicted) {
  if (truth >= classes_ || predicted >= classes_) {
    throw IndexError("confusion matrix cell (" + std::to_string(truth) + "," +
                     std::to_string(predicted) + ") out of range");
  }
  return counts_[truth * classes_ + predicted];
}

std::uint64_t ConfusionMatrix::at(std::size_t truth, std::size_t predicted) const {
  return const_cast<ConfusionMatrix*>(this)->at(truth, predicted);
}

std::uint64_t ConfusionMatrix::total() const {
  return std::accumulate(counts_.begin(), counts_.end(), std::uint64_t{0});
}

std::uint64_t ConfusionMatrix::trace() const {
  std::uint64_t t = 0;
  for (std::size_t c = 0; c < classes_; ++c) t += counts_[c * classes_ + c];
  return t;
}

ConfusionMatrix confusion(std::span<const std::size_t> truth,
                          std::span<const std::size_t> predicted, std::size_t num_classes) {
  if (truth.size() != predicted.size()) {
    throw DimensionError("confusion: " + std::to_string(truth.size()) + " labels vs " +
                         std::to_string(predicted.size()) + " predictions");
  }
  ConfusionMatrix cm(num_classes);
  for (std::size_t i = 0; i < truth.size(); ++i) ++cm.at(truth[i], predicted[i]);
  return cm;
}

ClassMetrics per_class_metrics(const ConfusionMatrix& cm, std::size_t c) {
  if (c >= cm.num_classes()) throw IndexError("per_class_metrics: class out of range");
  std::uint64_t row = 0, col = 0;
  for (std::size_t k = 0; k < cm.num_classes(); ++k) {
    row += cm.at(c, k);
    col += cm.at(k, c);
  }
  const std::uint64_t tp = cm.at(c, c);
  const std::uint64_t fn = row - tp;
  const std::uint64_t fp = col - tp;
  const std::uint64_t tn = cm.total() - tp - fn - fp;

  ClassMetrics m;
  const auto ratio = [](std::uint64_t num, std::uint64_t den, bool& degenerate) {
    degenerate = den == 0;
    return degenerate ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  m.se = ratio(tp, tp + fn, m.se_degenerate);
  m.sp = ratio(tn, tn + fp, m.sp_degenerate);
  m.fm = ratio(2 * tp, 2 * tp + fp + fn, m.fm_degenerate);
  m.j = m.se + m.sp - 1.0;
  return m;
}

AucResult auc_ovr(std::span<const double> scores, std::span<const std::uint8_t> is_positive) {
  if (scores.size() != is_positive.size()) {
    throw DimensionError("auc_ovr: scores and flags differ in length");
  }
  const std::size_t n = scores.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  // Sum of 1-based ranks of the positives, tied groups sharing the average
  // rank; U = R_pos - P(P+1)/2 and AUC = U / (P N).
  double rank_sum = 0.0;
  std::size_t positives = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    std::size_t group_pos = 0;
    while (j < n && scores[order[j]] == scores[order[i]]) {
      group_pos += is_positive[order[j]] ? 1 : 0;
      ++j;
    }
    const double avg_rank = 0.5 * static_cast<double>(i + 1 + j);
    rank_sum += avg_rank * static_cast<double>(group_pos);
    positives += group_pos;
    i = j;
  }
  const std::size_t negatives = n - positives;
  AucResult r;
  if (positives == 0 || negatives == 0) {
    r.degenerate = true;
    return r;
  }
  const double p = static_cast<double>(positives);
  r.value = (rank_sum - p * (p + 1.0) / 2.0) / (p * static_cast<double>(negatives));
  return r;
}

double accuracy(const ConfusionMatrix& cm) {
  const auto total = cm.total();
  if (total == 0) throw DataError("accuracy: empty evaluation set");
  return static_cast<double>(cm.trace()) / static_cast<double>(total);
}

std::size_t argmax_lowest(std::span<const double> values) {
  std::size_t best = 0;
  for (std::size_t k = 1; k < values.size(); ++k)
    if (values[k] > values[best]) best = k;
  return best;
}

Predictions predict_labels(const ModelParams& params, const ModelConfig& config,
                           std::span<const EncodedExample> examples) {
  if (examples.empty()) throw DataError("predict_labels: no examples");
  Predictions out;
  out.scores = Matrix(examples.size(), config.num_classes);
  out.labels.reserve(examples.size());
  for (std::size_t i = 0; i < examples.size(); ++i) {
    const auto probs = forward(examples[i], params, config);
    std::copy(probs.begin(), probs.end(), out.scores.row(i).begin());
    out.labels.push_back(argmax_lowest(probs));
  }
  return out;
}

MetricsReport build_report(std::span<const std::size_t> truth, const Predictions& predictions,
                           std::size_t num_classes, std::vector<std::string> class_names) {
  MetricsReport rep;
  rep.num_classes = num_classes;
  rep.num_examples = truth.size();
  rep.cm = confusion(truth, predictions.labels, num_classes);
  rep.ca = accuracy(rep.cm);
  rep.class_names = std::move(class_names);
  if (!rep.class_names.empty() && rep.class_names.size() != num_classes) {
    throw ConfigError("report: " + std::to_string(rep.class_names.size()) +
                      " class names for " + std::to_string(num_classes) + " classes");
  }

  struct Acc {
    double sum = 0.0;
    std::size_t n = 0;
    void add(double v, bool degenerate) {
      if (!degenerate) {
        sum += v;
        ++n;
      }
    }
    MacroMetric done() const { return {n ? sum / static_cast<double>(n) : 0.0, n}; }
  } se, sp, fm, j, auc;

  std::vector<double> column(truth.size());
  std::vector<std::uint8_t> flags(truth.size());
  for (std::size_t c = 0; c < num_classes; ++c) {
    const ClassMetrics m = per_class_metrics(rep.cm, c);
    for (std::size_t i = 0; i < truth.size(); ++i) {
      column[i] = predictions.scores(i, c);
      flags[i] = truth[i] == c ? 1 : 0;
    }
    const AucResult a = auc_ovr(column, flags);
    se.add(m.se, m.se_degenerate);
    sp.add(m.sp, m.sp_degenerate);
    fm.add(m.fm, m.fm_degenerate);
    j.add(m.j, m.j_degenerate());
    auc.add(a.value, a.degenerate);
    rep.per_class.push_back(m);
    rep.auc.push_back(a);
  }
  rep.macro_se = se.done();
  rep.macro_sp = sp.done();
  rep.macro_fm = fm.done();
  rep.macro_j = j.done();
  rep.macro_auc = auc.done();
  return rep;
}

MetricsReport report(const ModelParams& params, const ModelConfig& config,
                     std::span<const EncodedExample> examples,
                     std::vector<std::string> class_names) {
  const Predictions pred = predict_labels(params, config, examples);
  std::vector<std::size_t> truth;
  truth.reserve(examples.size());
  for (const auto& ex : examples) truth.push_back(ex.label);
  return build_report(truth, pred, config.num_classes, std::move(class_names));
}

std::string report_json(const MetricsReport& rep) {
  using nlohmann::ordered_json;
  ordered_json root;
  root["global"] = {{"CA", rep.ca}, {"examples", rep.num_examples}};
  ordered_json per_class = ordered_json::array();
  for (std::size_t c = 0; c < rep.num_classes; ++c) {
    const auto& m = rep.per_class[c];
    ordered_json entry;
    entry["class"] = c;
    if (!rep.class_names.empty()) entry["name"] = rep.class_names[c];
    entry["SE"] = m.se;
    entry["SP"] = m.sp;
    entry["FM"] = m.fm;
    entry["J"] = m.j;
    entry["AUC"] = rep.auc[c].value;
    entry["degenerate_flags"] = {{"SE", m.se_degenerate},
                                 {"SP", m.sp_degenerate},
                                 {"FM", m.fm_degenerate},
                                 {"J", m.j_degenerate()},
                                 {"AUC", rep.auc[c].degenerate}};
    per_class.push_back(std::move(entry));
  }
  root["per_class"] = std::move(per_class);
  const auto macro = [](const MacroMetric& m) {
    return ordered_json{{"value", m.value}, {"classes", m.classes_used}};
  };
  root["macro"] = {{"averaging", "unweighted mean of one-vs-rest values over non-degenerate classes"},
                   {"SE", macro(rep.macro_se)},
                   {"SP", macro(rep.macro_sp)},
                   {"FM", macro(rep.macro_fm)},
                   {"J", macro(rep.macro_j)},
                   {"AUC", macro(rep.macro_auc)}};
  ordered_json rows = ordered_json::array();
  for (std::size_t t = 0; t < rep.num_classes; ++t) {
    ordered_json row = ordered_json::array();
    for (std::size_t p = 0; p < rep.num_classes; ++p) row.push_back(rep.cm.at(t, p));
    rows.push_back(std::move(row));
  }
  root["confusion"] = std::move(rows);
  return root.dump(2) + "\n";
}

std::string confusion_csv(const ConfusionMatrix& cm) {
  std::string out;
  for (std::size_t t = 0; t < cm.num_classes(); ++t) {
    for (std::size_t p = 0; p < cm.num_classes(); ++p) {
      if (p) out += ',';
      out += std::to_string(cm.at(t, p));
    }
    out += '\n';
  }
  return out;
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string metrics_fig5_csv(const MetricsReport& rep) {
  std::string out = "metric,class,value\n";
  const auto label = [&](std::size_t c) {
    return rep.class_names.empty() ? std::to_string(c) : rep.class_names[c];
  };
  out += "CA,all," + num(rep.ca) + "\n";
  for (std::size_t c = 0; c < rep.num_classes; ++c) {
    const auto& m = rep.per_class[c];
    out += "SE," + label(c) + "," + num(m.se) + "\n";
    out += "SP," + label(c) + "," + num(m.sp) + "\n";
    out += "FM," + label(c) + "," + num(m.fm) + "\n";
    out += "J," + label(c) + "," + num(m.j) + "\n";
    out += "AUC," + label(c) + "," + num(rep.auc[c].value) + "\n";
  }
  out += "SE,macro," + num(rep.macro_se.value) + "\n";
  out += "SP,macro," + num(rep.macro_sp.value) + "\n";
  out += "FM,macro," + num(rep.macro_fm.value) + "\n";
  out += "J,macro," + num(rep.macro_j.value) + "\n";
  out += "AUC,macro," + num(rep.macro_auc.value) + "\n";
  return out;
}

void write_report_files(const std::filesystem::path& dir, const MetricsReport& rep) {
  std::filesystem::create_directories(dir);
  const auto write = [&](const char* name, const std::string& body) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw DataError("cannot write '" + (dir / name).string() + "'");
    out << body;
  };
  write("report.json", report_json(rep));
  write("confusion.csv", confusion_csv(rep.cm));
  write("metrics_fig5.csv", metrics_fig5_csv(rep));
}

}  // namespace emoseq
