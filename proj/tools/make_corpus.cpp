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

// Writes a synthetic emotion corpus in text,label CSV form.

#include <cstdint>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "emoseq/corpus.hpp"
#include "emoseq/errors.hpp"
#include "emoseq/textpipe.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Generate a synthetic five-class emotion corpus"};
  emoseq::CorpusOptions opts;
  std::string out;
  app.add_option("--size", opts.size, "Number of texts")->capture_default_str();
  app.add_option("--seed", opts.seed, "Generator seed")->capture_default_str();
  app.add_option("--label-noise", opts.label_noise, "Fraction of random labels")
      ->capture_default_str();
  app.add_option("--negation-rate", opts.negated_distractor_rate,
                 "Share of texts with a negated cue word of another class")
      ->capture_default_str();
  app.add_option("--contrast-rate", opts.contrast_rate,
                 "Share of texts opening with a superseded cue word")
      ->capture_default_str();
  app.add_option("--out", out, "Output CSV path")->required();
  CLI11_PARSE(app, argc, argv);
  try {
    emoseq::write_csv(out, emoseq::synthetic_emotion_corpus(opts));
  } catch (const emoseq::Error& e) {
    std::cerr << e.what() << "\n";
    return 3;
  }
  std::cout << "wrote " << opts.size << " texts to " << out << "\n";
  return 0;
}
