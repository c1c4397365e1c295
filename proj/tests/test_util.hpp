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

// Shared generators for the unit tests.

#include <cstdint>
#include <vector>

#include "emoseq/model.hpp"
#include "emoseq/rng.hpp"
#include "emoseq/textpipe.hpp"

namespace emoseq::testing {

// Deliberately uneven dims so transposition mistakes change shapes.
inline ModelConfig small_config(std::size_t vocab = 20) {
  ModelConfig c;
  c.vocab_size = vocab;
  c.embed_dim = 5;
  c.hidden_dim = 6;
  c.num_heads = 2;
  c.num_classes = 5;
  c.max_len = 10;
  return c;
}

// Random token ids in [2, vocab) over the first len positions, PAD after,
// with positive TF-IDF-like weights on the valid positions.
inline EncodedExample random_example(Rng& rng, std::size_t vocab, std::size_t len,
                                     std::size_t max_len, std::size_t classes) {
  EncodedExample ex;
  ex.token_ids.assign(max_len, kPadId);
  ex.tfidf_weights.assign(max_len, 0.0);
  ex.valid_len = len;
  for (std::size_t t = 0; t < len; ++t) {
    ex.token_ids[t] = static_cast<TokenId>(2 + rng.next_below(vocab - 2));
    ex.tfidf_weights[t] = rng.uniform(0.05, 1.5);
  }
  ex.label = static_cast<std::size_t>(rng.next_below(classes));
  return ex;
}

// Moves every parameter away from its structured initial value so the
// gradient check sees generic activations.
inline void randomize(ModelParams& params, Rng& rng, double scale = 1.0) {
  for (Parameter* p : params.all())
    for (double& v : p->value.data()) v = rng.uniform(-scale, scale);
}

}  // namespace emoseq::testing
