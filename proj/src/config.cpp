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

#include "emoseq/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "emoseq/errors.hpp"

namespace emoseq {

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw NumericError("cannot format double");
  return std::string(buf, ptr);
}

double parse_double(std::string_view text) {
  double v = 0.0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ConfigError("'" + std::string(text) + "' is not a number");
  }
  return v;
}

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::uint64_t parse_uint(std::string_view text) {
  std::uint64_t v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw ConfigError("'" + std::string(text) + "' is not a non-negative integer");
  }
  return v;
}

bool parse_bool(std::string_view text) {
  if (text == "true" || text == "1" || text == "yes") return true;
  if (text == "false" || text == "0" || text == "no") return false;
  throw ConfigError("'" + std::string(text) + "' is not a boolean");
}

std::vector<std::string> split_list(std::string_view text) {
  std::vector<std::string> out;
  if (trim(text).empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto comma = text.find(',', start);
    out.emplace_back(trim(text.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ", ";
    out += items[i];
  }
  return out;
}

struct Field {
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename T>
Field uint_field(T RunConfig::*member) {
  return {[member](RunConfig& c, std::string_view v) { c.*member = static_cast<T>(parse_uint(v)); },
          [member](const RunConfig& c) { return std::to_string(c.*member); }};
}

// Ordered so that to_config_text emits sections in a stable, readable order.
const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = [] {
    std::vector<std::pair<std::string, Field>> t;
    t.emplace_back("run.seed", uint_field(&RunConfig::seed));
    t.emplace_back("run.output_dir",
                   Field{[](RunConfig& c, std::string_view v) { c.output_dir = v; },
                         [](const RunConfig& c) { return c.output_dir; }});
    t.emplace_back("run.class_names",
                   Field{[](RunConfig& c, std::string_view v) { c.class_names = split_list(v); },
                         [](const RunConfig& c) { return join(c.class_names); }});
    t.emplace_back("data.path", Field{[](RunConfig& c, std::string_view v) { c.data_path = v; },
                                      [](const RunConfig& c) { return c.data_path; }});
    t.emplace_back("data.train_fraction",
                   Field{[](RunConfig& c, std::string_view v) { c.train_fraction = parse_double(v); },
                         [](const RunConfig& c) { return format_double(c.train_fraction); }});
    t.emplace_back("data.num_classes",
                   Field{[](RunConfig& c, std::string_view v) { c.model.num_classes = parse_uint(v); },
                         [](const RunConfig& c) { return std::to_string(c.model.num_classes); }});
    t.emplace_back("vocab.max_size", uint_field(&RunConfig::vocab_max_size));
    t.emplace_back("vocab.min_freq", uint_field(&RunConfig::vocab_min_freq));

    const auto model_uint = [](std::size_t ModelConfig::*m) {
      return Field{[m](RunConfig& c, std::string_view v) { c.model.*m = parse_uint(v); },
                   [m](const RunConfig& c) { return std::to_string(c.model.*m); }};
    };
    const auto model_bool = [](bool ModelConfig::*m) {
      return Field{[m](RunConfig& c, std::string_view v) { c.model.*m = parse_bool(v); },
                   [m](const RunConfig& c) { return std::string(c.model.*m ? "true" : "false"); }};
    };
    t.emplace_back("model.embed_dim", model_uint(&ModelConfig::embed_dim));
    t.emplace_back("model.hidden_dim", model_uint(&ModelConfig::hidden_dim));
    t.emplace_back("model.num_heads", model_uint(&ModelConfig::num_heads));
    t.emplace_back("model.max_len", model_uint(&ModelConfig::max_len));
    t.emplace_back("model.enable_attention", model_bool(&ModelConfig::enable_attention));
    t.emplace_back("model.enable_tfidf_gate", model_bool(&ModelConfig::enable_tfidf_gate));

    const auto train_uint = [](std::size_t TrainConfig::*m) {
      return Field{[m](RunConfig& c, std::string_view v) { c.train.*m = parse_uint(v); },
                   [m](const RunConfig& c) { return std::to_string(c.train.*m); }};
    };
    const auto train_double = [](double TrainConfig::*m) {
      return Field{[m](RunConfig& c, std::string_view v) { c.train.*m = parse_double(v); },
                   [m](const RunConfig& c) { return format_double(c.train.*m); }};
    };
    t.emplace_back("train.epochs", train_uint(&TrainConfig::epochs));
    t.emplace_back("train.batch_size", train_uint(&TrainConfig::batch_size));
    t.emplace_back("train.lr0", train_double(&TrainConfig::lr0));
    t.emplace_back("train.decay_factor", train_double(&TrainConfig::decay_factor));
    t.emplace_back("train.decay_milestones",
                   Field{[](RunConfig& c, std::string_view v) {
                           c.train.decay_milestones.clear();
                           for (const auto& item : split_list(v))
                             c.train.decay_milestones.push_back(parse_double(item));
                         },
                         [](const RunConfig& c) {
                           std::vector<std::string> items;
                           for (double m : c.train.decay_milestones) items.push_back(format_double(m));
                           return join(items);
                         }});
    t.emplace_back("train.grad_clip_norm", train_double(&TrainConfig::grad_clip_norm));
    t.emplace_back("train.max_steps", train_uint(&TrainConfig::max_steps));
    t.emplace_back("train.beta1", train_double(&TrainConfig::beta1));
    t.emplace_back("train.beta2", train_double(&TrainConfig::beta2));
    t.emplace_back("train.epsilon", train_double(&TrainConfig::epsilon));
    return t;
  }();
  return table;
}

const Field* find_field(std::string_view key) {
  for (const auto& [name, field] : fields())
    if (name == key) return &field;
  return nullptr;
}

}  // namespace

void RunConfig::validate() const {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw ConfigError("data.train_fraction must lie in (0, 1)");
  }
  if (vocab_max_size < 2) throw ConfigError("vocab.max_size must be at least 2");
  if (!class_names.empty() && class_names.size() != model.num_classes) {
    throw ConfigError("run.class_names lists " + std::to_string(class_names.size()) +
                      " names for " + std::to_string(model.num_classes) + " classes");
  }
  ModelConfig probe = model;
  probe.vocab_size = std::max<std::size_t>(probe.vocab_size, 2);
  probe.validate();
  train.validate();
}

void apply_override(RunConfig& config, std::string_view dotted_key, std::string_view value) {
  const Field* field = find_field(dotted_key);
  if (!field) throw ConfigError("unknown config key: " + std::string(dotted_key));
  try {
    field->set(config, trim(value));
  } catch (const ConfigError& e) {
    throw ConfigError(std::string(dotted_key) + ": " + e.what());
  }
}

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  std::vector<std::string> problems;
  std::string section;
  std::size_t line_no = 0;
  std::istringstream in{std::string(text)};
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') {
        problems.push_back("line " + std::to_string(line_no) + ": malformed section header");
        continue;
      }
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      problems.push_back("line " + std::to_string(line_no) + ": expected key = value");
      continue;
    }
    const std::string key = section + "." + std::string(trim(line.substr(0, eq)));
    std::string_view value = trim(line.substr(eq + 1));
    if (const auto hash = value.find(" #"); hash != std::string_view::npos) {
      value = trim(value.substr(0, hash));
    }
    try {
      apply_override(config, key, value);
    } catch (const ConfigError& e) {
      problems.push_back("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!problems.empty()) {
    std::string msg = "invalid configuration:";
    for (const auto& p : problems) msg += "\n  " + p;
    throw ConfigError(msg);
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string to_config_text(const RunConfig& config) {
  std::string out;
  std::string current;
  for (const auto& [name, field] : fields()) {
    const auto dot = name.find('.');
    const std::string section = name.substr(0, dot);
    if (section != current) {
      if (!current.empty()) out += '\n';
      out += "[" + section + "]\n";
      current = section;
    }
    out += name.substr(dot + 1) + " = " + field.get(config) + "\n";
  }
  return out;
}

}  // namespace emoseq
