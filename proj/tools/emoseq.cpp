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

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "emoseq/artifact.hpp"
#include "emoseq/config.hpp"
#include "emoseq/errors.hpp"
#include "emoseq/eval.hpp"
#include "emoseq/pipeline.hpp"
#include "emoseq/textpipe.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitData = 3;
constexpr int kExitNumeric = 4;

struct RunFlags {
  std::string config_path;
  std::vector<std::string> sets;
  std::uint64_t seed = 0;
  std::size_t epochs = 0;
  std::string data;
  std::string out;
  CLI::Option* seed_opt = nullptr;
  CLI::Option* epochs_opt = nullptr;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
  cmd->add_option("--config", f.config_path, "Run configuration file")->required();
  f.seed_opt = cmd->add_option("--seed", f.seed, "Override run.seed");
  f.epochs_opt = cmd->add_option("--epochs", f.epochs, "Override train.epochs");
  cmd->add_option("--data", f.data, "Override data.path");
  cmd->add_option("--out", f.out, "Override run.output_dir");
  cmd->add_option("--set", f.sets, "Override any key, e.g. --set model.hidden_dim=32");
}

// Defaults < file < flags.
emoseq::RunConfig resolve_config(const RunFlags& f) {
  emoseq::RunConfig cfg = emoseq::load_config(f.config_path);
  for (const auto& kv : f.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw emoseq::ConfigError("--set expects key=value, got " + kv);
    emoseq::apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (*f.seed_opt) cfg.seed = f.seed;
  if (*f.epochs_opt) cfg.train.epochs = f.epochs;
  if (!f.data.empty()) cfg.data_path = f.data;
  if (!f.out.empty()) cfg.output_dir = f.out;
  cfg.validate();
  if (cfg.data_path.empty()) throw emoseq::ConfigError("data.path is not set");
  return cfg;
}

void print_report(const char* title, const emoseq::MetricsReport& rep) {
  std::printf("%s: CA=%.4f macro SE=%.4f SP=%.4f FM=%.4f J=%.4f AUC=%.4f (n=%zu)\n", title,
              rep.ca, rep.macro_se.value, rep.macro_sp.value, rep.macro_fm.value,
              rep.macro_j.value, rep.macro_auc.value, rep.num_examples);
}

int cmd_train(const RunFlags& flags) {
  const auto cfg = resolve_config(flags);
  const auto docs = emoseq::load_csv(cfg.data_path, cfg.model.num_classes);
  std::printf("loaded %zu documents from %s\n", docs.size(), cfg.data_path.c_str());
  const auto outcome = emoseq::run_training(cfg, docs, [](const emoseq::EpochRecord& rec) {
    std::printf("%s\n", emoseq::format_epoch(rec).c_str());
    std::fflush(stdout);
  });
  emoseq::write_outcome(cfg.output_dir, outcome);
  print_report("train", outcome.train_report);
  if (outcome.test_report.num_examples > 0) print_report("test", outcome.test_report);
  std::printf("model written to %s\n", (std::filesystem::path(cfg.output_dir) / "model.art").c_str());
  return 0;
}

int cmd_eval(const std::string& model_path, const std::string& data_path, const std::string& out) {
  const auto artifact = emoseq::load_model(model_path);
  const auto docs = emoseq::load_csv(data_path, artifact.config.model.num_classes);
  const auto rep = emoseq::evaluate_artifact(artifact, docs);
  if (!out.empty()) emoseq::write_report_files(out, rep);
  std::cout << emoseq::report_json(rep);
  return 0;
}

int cmd_predict(const std::string& model_path, const std::string& text) {
  const auto artifact = emoseq::load_model(model_path);
  const auto& names = artifact.config.class_names;
  for (const auto& [cls, prob] : emoseq::predict_text(artifact, text)) {
    const std::string label = names.empty() ? std::to_string(cls) : names[cls];
    std::printf("%s\t%.17g\n", label.c_str(), prob);
  }
  return 0;
}

int cmd_ablate(const RunFlags& flags, const std::vector<std::uint64_t>& seeds_flag) {
  const auto cfg = resolve_config(flags);
  const auto docs = emoseq::load_csv(cfg.data_path, cfg.model.num_classes);
  std::vector<std::uint64_t> seeds = seeds_flag;
  if (seeds.empty()) seeds.push_back(cfg.seed);
  const auto rows = emoseq::run_ablation(
      cfg, docs, seeds,
      [](const std::string& variant, std::uint64_t seed, const emoseq::TrainOutcome& o) {
        std::printf("variant=%s seed=%llu test_ca=%.4f test_macro_fm=%.4f\n", variant.c_str(),
                    static_cast<unsigned long long>(seed), o.test_report.ca,
                    o.test_report.macro_fm.value);
        std::fflush(stdout);
      });
  const std::string table = emoseq::ablation_csv(rows);
  std::filesystem::create_directories(cfg.output_dir);
  const auto path = std::filesystem::path(cfg.output_dir) / "ablation.csv";
  std::ofstream(path, std::ios::binary) << table;
  std::cout << table;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"emoseq: TF-IDF gated LSTM with multi-head attention for emotion classification"};
  app.require_subcommand(1);

  RunFlags train_flags;
  auto* train = app.add_subcommand("train", "Split, fit, train and evaluate from a config");
  add_run_flags(train, train_flags);

  std::string eval_model, eval_data, eval_out;
  auto* eval = app.add_subcommand("eval", "Evaluate a saved model on a dataset");
  eval->add_option("--model", eval_model, "Model artifact")->required();
  eval->add_option("--data", eval_data, "Dataset CSV (text,label)")->required();
  eval->add_option("--out", eval_out, "Directory for report.json / confusion.csv / metrics_fig5.csv");

  std::string predict_model, predict_text;
  auto* predict = app.add_subcommand("predict", "Rank classes for one text");
  predict->add_option("--model", predict_model, "Model artifact")->required();
  predict->add_option("--text", predict_text, "Input text")->required();

  RunFlags ablate_flags;
  std::vector<std::uint64_t> ablate_seeds;
  auto* ablate = app.add_subcommand("ablate", "Train full / no_attention / no_tfidf_gate / plain_lstm");
  add_run_flags(ablate, ablate_flags);
  ablate->add_option("--seeds", ablate_seeds, "Seeds to average over (default: run.seed)")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version exit 0; any other usage mistake counts as a config error.
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*train) return cmd_train(train_flags);
    if (*eval) return cmd_eval(eval_model, eval_data, eval_out);
    if (*predict) return cmd_predict(predict_model, predict_text);
    if (*ablate) return cmd_ablate(ablate_flags, ablate_seeds);
  } catch (const emoseq::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const emoseq::IncompatibleArtifactError& e) {
    std::cerr << "incompatible model: " << e.what() << "\n";
    return kExitData;
  } catch (const emoseq::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const emoseq::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
