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
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "emoseq/model.hpp"
#include "emoseq/numerics.hpp"
#include "emoseq/textpipe.hpp"

namespace emoseq {

struct TrainConfig {
  std::size_t epochs = 150;
  std::size_t batch_size = 128;
  double lr0 = 0.001;
  double decay_factor = 0.1;
  std::vector<double> decay_milestones{0.5, 0.75};  // fractions of epochs
  double grad_clip_norm = 5.0;                      // <= 0 disables clipping
  std::size_t max_steps = 0;                        // 0 means no cap
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  std::uint64_t seed = 0;

  void validate() const;
};

class AdamState {
 public:
  AdamState() = default;
  AdamState(std::span<const Parameter* const> params, double beta1 = 0.9, double beta2 = 0.999,
            double epsilon = 1e-8);

  std::uint64_t step() const { return step_; }
  const std::vector<Matrix>& first_moments() const { return m_; }
  const std::vector<Matrix>& second_moments() const { return v_; }

 private:
  friend void adam_step(std::span<Parameter* const>, AdamState&, double);

  std::vector<Matrix> m_;
  std::vector<Matrix> v_;
  std::uint64_t step_ = 0;
  double beta1_ = 0.9;
  double beta2_ = 0.999;
  double epsilon_ = 1e-8;
};

// One bias-corrected Adam update from each Parameter::grad. Throws
// NumericError naming the parameter if any gradient is non-finite; in that
// case nothing is modified.
void adam_step(std::span<Parameter* const> params, AdamState& state, double lr);

// lr0 * decay_factor^(milestones passed); milestone m triggers at epoch
// ceil(m * epochs).
double lr_schedule(std::size_t epoch, const TrainConfig& config);

// Scales every gradient so the global L2 norm is at most max_norm; returns
// the pre-clip norm.
double clip_global_norm(std::span<Parameter* const> params, double max_norm);

struct EpochRecord {
  std::size_t epoch = 0;
  double loss = 0.0;
  double train_acc = 0.0;
  double lr = 0.0;
  double seconds = 0.0;
};

struct TrainLog {
  std::vector<EpochRecord> epochs;
  std::uint64_t steps = 0;

  // Every field except wall-clock time.
  bool same_trajectory(const TrainLog& other) const;
};

void write_trainlog_csv(const std::filesystem::path& path, const TrainLog& log,
                        bool include_seconds = true);
std::string format_epoch(const EpochRecord& rec);

using EpochCallback = std::function<void(const EpochRecord&)>;

// Mini-batch training with Adam. Examples are reshuffled every epoch from a
// generator seeded with config.seed; per-example gradients are summed in
// batch order, averaged, clipped and applied.
TrainLog train(ModelParams& params, const ModelConfig& model_config,
               std::span<const EncodedExample> data, const TrainConfig& config,
               const EpochCallback& on_epoch = {});

}  // namespace emoseq
