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
#include <string>
#include <vector>

#include "emoseq/textpipe.hpp"

namespace emoseq {

// Deterministic generator of short first-person emotion texts in the same
// two-column layout as public emotion corpora: lowercase, no apostrophes,
// labels 0..4 = anger, fear, joy, sadness, surprise.
//
// Each text carries one decisive emotion word, usually buried in neutral
// filler. Some texts also contain emotion words of other classes that do
// not count: negated ("im not feeling furious"), or superseded ("i used to
// feel scared but now i feel calm and glad"). A small fraction of labels is
// flipped to a random class.
struct CorpusOptions {
  std::size_t size = 2000;
  std::uint64_t seed = 7;
  double label_noise = 0.05;
  double negated_distractor_rate = 0.2;
  double contrast_rate = 0.1;
};

const std::vector<std::string>& corpus_class_names();
std::vector<Document> synthetic_emotion_corpus(const CorpusOptions& options);

}  // namespace emoseq
