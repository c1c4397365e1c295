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

// Independent reference implementations. They deliberately avoid the
// library's own helpers (no confusion matrix, no ranking) so agreement is
// meaningful.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace emoseq::oracle {

// tf from a raw count over the whole document, idf from a raw document count.
inline double tfidf_weight(const std::string& token, const std::vector<std::string>& doc,
                           const std::vector<std::vector<std::string>>& corpus) {
  std::size_t count = 0;
  for (const auto& t : doc) count += t == token;
  std::size_t df = 0;
  for (const auto& d : corpus) df += std::find(d.begin(), d.end(), token) != d.end();
  if (df == 0 || doc.empty()) return 0.0;
  const double n = static_cast<double>(corpus.size());
  const double idf = std::log((1.0 + n) / (1.0 + static_cast<double>(df))) + 1.0;
  return static_cast<double>(count) / static_cast<double>(doc.size()) * idf;
}

struct Metrics {
  double se = 0, sp = 0, fm = 0, j = 0;
  bool se_deg = false, sp_deg = false, fm_deg = false;
};

// One-vs-rest counts taken straight from the label lists.
inline Metrics class_metrics(const std::vector<std::size_t>& truth,
                             const std::vector<std::size_t>& pred, std::size_t c) {
  double tp = 0, fp = 0, fn = 0, tn = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool t = truth[i] == c, p = pred[i] == c;
    if (t && p) tp += 1;
    else if (!t && p) fp += 1;
    else if (t && !p) fn += 1;
    else tn += 1;
  }
  Metrics m;
  m.se_deg = tp + fn == 0;
  m.sp_deg = tn + fp == 0;
  m.fm_deg = 2 * tp + fp + fn == 0;
  m.se = m.se_deg ? 0.0 : tp / (tp + fn);
  m.sp = m.sp_deg ? 0.0 : tn / (tn + fp);
  m.fm = m.fm_deg ? 0.0 : 2 * tp / (2 * tp + fp + fn);
  m.j = m.se + m.sp - 1.0;
  return m;
}

// Fraction of (positive, negative) pairs ordered correctly, ties count half.
// Returns -1 when either side is empty.
inline double pairwise_auc(const std::vector<double>& scores, const std::vector<std::uint8_t>& pos) {
  double wins = 0, pairs = 0;
  for (std::size_t a = 0; a < scores.size(); ++a) {
    if (!pos[a]) continue;
    for (std::size_t b = 0; b < scores.size(); ++b) {
      if (pos[b]) continue;
      pairs += 1;
      if (scores[a] > scores[b]) wins += 1;
      else if (scores[a] == scores[b]) wins += 0.5;
    }
  }
  return pairs == 0 ? -1.0 : wins / pairs;
}

}  // namespace emoseq::oracle
