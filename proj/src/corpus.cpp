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

#include "emoseq/corpus.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "emoseq/rng.hpp"

namespace emoseq {

namespace {

using Words = std::vector<std::string>;

const std::array<Words, 5>& cue_words() {
  static const std::array<Words, 5> cues{{
      {"furious", "irritated", "annoyed", "outraged", "resentful", "bitter", "hostile", "enraged",
       "agitated", "frustrated", "mad", "cranky", "grumpy", "offended", "spiteful", "livid",
       "irate", "fuming", "vengeful", "insulted"},
      {"scared", "afraid", "terrified", "anxious", "nervous", "frightened", "panicky", "uneasy",
       "worried", "fearful", "shaky", "paranoid", "tense", "alarmed", "threatened", "insecure",
       "timid", "restless", "helpless", "petrified"},
      {"happy", "glad", "cheerful", "delighted", "joyful", "content", "thrilled", "ecstatic",
       "pleased", "grateful", "excited", "hopeful", "proud", "relaxed", "calm", "playful",
       "satisfied", "blessed", "carefree", "energetic"},
      {"sad", "lonely", "miserable", "heartbroken", "gloomy", "hopeless", "depressed", "unhappy",
       "empty", "defeated", "homesick", "regretful", "devastated", "discouraged", "hurt", "lost",
       "melancholy", "numb", "crushed", "tearful"},
      {"amazed", "astonished", "shocked", "stunned", "surprised", "startled", "speechless",
       "dazed", "curious", "bewildered", "impressed", "overwhelmed", "awestruck", "puzzled",
       "dumbfounded", "flabbergasted", "taken", "mindblown", "baffled", "intrigued"},
  }};
  return cues;
}

// Neutral words, roughly ordered from most to least common; sampled with a
// Zipf-like bias so the head of the list gets low IDF.
const Words& filler_words() {
  static const Words words{
      "the", "and", "a", "to", "that", "of", "it", "in", "my", "is", "was", "with", "this", "for",
      "about", "me", "at", "so", "just", "all", "when", "like", "some", "on", "be", "have", "but",
      "what", "because", "people", "things", "time", "day", "today", "work", "home", "life",
      "little", "really", "still", "again", "after", "week", "friends", "family", "school",
      "morning", "night", "house", "job", "class", "weekend", "phone", "car", "city", "dinner",
      "book", "music", "movie", "trip", "meeting", "project", "team", "office", "boss", "sister",
      "brother", "mom", "dad", "husband", "wife", "kids", "dog", "cat", "garden", "kitchen",
      "coffee", "rain", "summer", "winter", "road", "train", "store", "money", "rent", "exam",
      "paper", "blog", "post", "letter", "news", "doctor", "hospital", "church", "party",
      "wedding", "birthday", "game", "team", "library", "students", "language", "scrabble",
      "tree", "roots", "choice", "group", "native", "english", "plans", "bed", "window",
      "street", "neighbors", "town", "bus", "lunch", "shoes", "clothes", "photos", "computer",
      "email", "message", "call", "visit", "story", "season", "holiday", "course", "lesson",
      "teacher", "manager", "colleague", "client", "interview", "apartment", "flight", "beach",
      "mountain", "river", "park", "gym", "run", "walk", "drive", "ride", "song", "show",
      "series", "episode", "chapter", "recipe", "cake", "tea", "breakfast", "evening",
      "afternoon", "month", "year", "moment", "minute", "hour", "place", "room", "door",
      "table", "chair", "desk", "floor", "wall", "picture", "camera", "guitar", "piano",
      "painting", "drawing", "writing", "reading", "thinking", "talking", "waiting", "working",
      "cleaning", "cooking", "shopping", "packing", "moving", "studying", "sleeping", "eating"};
  return words;
}

const Words& openers() {
  static const Words o{"i feel", "im feeling", "i am feeling", "i have been feeling",
                       "i just feel", "i was feeling", "i feel so", "i still feel",
                       "i can feel myself getting", "i keep feeling"};
  return o;
}

const Words& intensifiers() {
  static const Words w{"really", "very", "a little", "so", "quite", "kind of", "totally",
                       "a bit", "incredibly", "somewhat"};
  return w;
}

const Words& negations() {
  static const Words w{"not", "never", "no longer", "hardly", "not at all"};
  return w;
}

const Words& links() {
  static const Words w{"and", "because", "when", "since", "while", "after", "so", "but"};
  return w;
}

const Words& subjects() {
  static const Words w{"i", "we", "my friend", "everyone", "she", "he", "they"};
  return w;
}

const Words& verbs() {
  static const Words w{"went", "talked", "thought", "waited", "worked", "walked", "looked",
                       "came", "left", "stayed", "called", "wrote", "read", "sat", "tried"};
  return w;
}

const std::string& pick(const Words& words, Rng& rng) {
  return words[static_cast<std::size_t>(rng.next_below(words.size()))];
}

const std::string& pick_filler(Rng& rng) {
  const Words& words = filler_words();
  // Inverse-power sampling gives a heavy head.
  const double u = rng.next_double();
  const auto idx = static_cast<std::size_t>(std::pow(u, 2.2) * static_cast<double>(words.size()));
  return words[std::min(idx, words.size() - 1)];
}

void append(std::string& text, const std::string& piece) {
  if (!text.empty()) text += ' ';
  text += piece;
}

// "and the morning at work was so little" style neutral clause.
void append_filler_clause(std::string& text, Rng& rng) {
  append(text, pick(links(), rng));
  append(text, pick(subjects(), rng));
  append(text, pick(verbs(), rng));
  const auto n = 2 + rng.next_below(6);
  for (std::uint64_t i = 0; i < n; ++i) append(text, pick_filler(rng));
}

std::size_t other_class(std::size_t label, Rng& rng) {
  return (label + 1 + static_cast<std::size_t>(rng.next_below(4))) % 5;
}

const std::string& cue(std::size_t cls, Rng& rng) { return pick(cue_words()[cls], rng); }

}  // namespace

const std::vector<std::string>& corpus_class_names() {
  static const std::vector<std::string> names{"anger", "fear", "joy", "sadness", "surprise"};
  return names;
}

std::vector<Document> synthetic_emotion_corpus(const CorpusOptions& options) {
  // Uneven class frequencies, joy and sadness most common.
  static constexpr std::array<double, 5> kPrior{0.14, 0.12, 0.34, 0.29, 0.11};
  Rng rng(derive_seed(options.seed, Stream::kCorpus));
  std::vector<Document> docs;
  docs.reserve(options.size);
  for (std::size_t d = 0; d < options.size; ++d) {
    double u = rng.next_double();
    std::size_t label = 0;
    while (label + 1 < kPrior.size() && u >= kPrior[label]) u -= kPrior[label++];

    std::string text;
    const auto lead = rng.next_below(3);
    for (std::uint64_t i = 0; i < lead; ++i) append_filler_clause(text, rng);

    const bool negated = rng.next_double() < options.negated_distractor_rate;
    const bool contrast = rng.next_double() < options.contrast_rate;
    if (negated && rng.next_double() < 0.5) {
      append(text, "im");
      append(text, pick(negations(), rng));
      append(text, "feeling");
      append(text, cue(other_class(label, rng), rng));
      append_filler_clause(text, rng);
    }
    if (contrast) {
      append(text, "i used to feel");
      append(text, cue(other_class(label, rng), rng));
      append(text, "but now");
    }
    append(text, pick(openers(), rng));
    if (rng.next_double() < 0.5) append(text, pick(intensifiers(), rng));
    append(text, cue(label, rng));
    const auto tail = rng.next_below(4);
    for (std::uint64_t i = 0; i < tail; ++i) append_filler_clause(text, rng);
    if (negated && rng.next_double() < 0.5) {
      append(text, "and i am");
      append(text, pick(negations(), rng));
      append(text, cue(other_class(label, rng), rng));
    }

    if (rng.next_double() < options.label_noise) label = static_cast<std::size_t>(rng.next_below(5));
    docs.push_back({std::move(text), label});
  }
  return docs;
}

}  // namespace emoseq
