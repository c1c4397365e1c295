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

#include "emoseq/train.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "emoseq/errors.hpp"
#include "emoseq/rng.hpp"

namespace emoseq {

void TrainConfig::validate() const {
  if (epochs == 0) throw ConfigError("train: epochs must be at least 1");
  if (batch_size == 0) throw ConfigError("train: batch_size must be at least 1");
  if (!(lr0 > 0.0)) throw ConfigError("train: lr0 must be positive");
  if (!(decay_factor > 0.0 && decay_factor <= 1.0)) {
    throw ConfigError("train: decay_factor must lie in (0, 1]");
  }
  double prev = 0.0;
  for (double m : decay_milestones) {
    if (!(m > prev && m < 1.0)) {
      throw ConfigError("train: decay_milestones must be strictly increasing in (0, 1)");
    }
    prev = m;
  }
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0) || !(epsilon > 0.0)) {
    throw ConfigError("train: Adam constants out of range");
  }
}

AdamState::AdamState(std::span<const Parameter* const> params, double beta1, double beta2,
                     double epsilon)
    : beta1_(beta1), beta2_(beta2), epsilon_(epsilon) {
  for (const Parameter* p : params) {
    m_.emplace_back(p->value.rows(), p->value.cols());
    v_.emplace_back(p->value.rows(), p->value.cols());
  }
}

void adam_step(std::span<Parameter* const> params, AdamState& state, double lr) {
  if (params.size() != state.m_.size()) {
    throw DimensionError("adam_step: optimiser state tracks " + std::to_string(state.m_.size()) +
                         " parameters, got " + std::to_string(params.size()));
  }
  for (std::size_t p = 0; p < params.size(); ++p) {
    if (params[p]->grad.size() != state.m_[p].size()) {
      throw DimensionError("adam_step: shape mismatch for " + params[p]->name);
    }
    if (!params[p]->grad.all_finite()) {
      throw NumericError("non-finite gradient in parameter " + params[p]->name);
    }
  }
  ++state.step_;
  const double t = static_cast<double>(state.step_);
  const double bc1 = 1.0 - std::pow(state.beta1_, t);
  const double bc2 = 1.0 - std::pow(state.beta2_, t);
  for (std::size_t p = 0; p < params.size(); ++p) {
    auto theta = params[p]->value.data();
    auto g = params[p]->grad.data();
    auto m = state.m_[p].data();
    auto v = state.v_[p].data();
    for (std::size_t i = 0; i < theta.size(); ++i) {
      m[i] = state.beta1_ * m[i] + (1.0 - state.beta1_) * g[i];
      v[i] = state.beta2_ * v[i] + (1.0 - state.beta2_) * g[i] * g[i];
      const double m_hat = m[i] / bc1;
      const double v_hat = v[i] / bc2;
      theta[i] -= lr * m_hat / (std::sqrt(v_hat) + state.epsilon_);
    }
  }
}

double lr_schedule(std::size_t epoch, const TrainConfig& config) {
  double lr = config.lr0;
  for (double m : config.decay_milestones) {
    const auto boundary =
        static_cast<std::size_t>(std::ceil(m * static_cast<double>(config.epochs)));
    if (epoch >= boundary) lr *= config.decay_factor;
  }
  return lr;
}

double clip_global_norm(std::span<Parameter* const> params, double max_norm) {
  double sq = 0.0;
  for (const Parameter* p : params)
    for (double g : p->grad.data()) sq += g * g;
  const double norm = std::sqrt(sq);
  if (max_norm > 0.0 && norm > max_norm) {
    const double scale = max_norm / norm;
    for (Parameter* p : params)
      for (double& g : p->grad.data()) g *= scale;
  }
  return norm;
}

bool TrainLog::same_trajectory(const TrainLog& other) const {
  if (steps != other.steps || epochs.size() != other.epochs.size()) return false;
  for (std::size_t i = 0; i < epochs.size(); ++i) {
    const auto& a = epochs[i];
    const auto& b = other.epochs[i];
    if (a.epoch != b.epoch || a.loss != b.loss || a.train_acc != b.train_acc || a.lr != b.lr) {
      return false;
    }
  }
  return true;
}

namespace {

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string format_epoch(const EpochRecord& rec) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "epoch=%zu loss=%.6f train_acc=%.4f lr=%.6g seconds=%.2f",
                rec.epoch, rec.loss, rec.train_acc, rec.lr, rec.seconds);
  return buf;
}

void write_trainlog_csv(const std::filesystem::path& path, const TrainLog& log,
                        bool include_seconds) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write '" + path.string() + "'");
  out << (include_seconds ? "epoch,loss,train_acc,lr,seconds\n" : "epoch,loss,train_acc,lr\n");
  for (const auto& rec : log.epochs) {
    out << rec.epoch << ',' << fmt_double(rec.loss) << ',' << fmt_double(rec.train_acc) << ','
        << fmt_double(rec.lr);
    if (include_seconds) out << ',' << fmt_double(rec.seconds);
    out << '\n';
  }
}

TrainLog train(ModelParams& params, const ModelConfig& model_config,
               std::span<const EncodedExample> data, const TrainConfig& config,
               const EpochCallback& on_epoch) {
  config.validate();
  model_config.validate();
  if (data.empty()) throw ConfigError("train: empty training set");

  const std::vector<Parameter*> plist = params.all();
  const std::vector<const Parameter*> cplist(plist.begin(), plist.end());
  AdamState adam(cplist, config.beta1, config.beta2, config.epsilon);
  Rng shuffle_rng(config.seed);
  std::vector<std::size_t> order(data.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  TrainLog log;
  ForwardCache cache;
  bool stop = false;
  for (std::size_t epoch = 0; epoch < config.epochs && !stop; ++epoch) {
    const auto started = std::chrono::steady_clock::now();
    const double lr = lr_schedule(epoch, config);
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[static_cast<std::size_t>(shuffle_rng.next_below(i))]);
    }

    double loss_sum = 0.0;
    std::size_t correct = 0, seen = 0;
    std::size_t batch_index = 0;
    for (std::size_t begin = 0; begin < order.size(); begin += config.batch_size, ++batch_index) {
      const std::size_t end = std::min(order.size(), begin + config.batch_size);
      params.zero_grad();
      double batch_loss = 0.0;
      for (std::size_t b = begin; b < end; ++b) {
        const EncodedExample& ex = data[order[b]];
        const auto& probs = forward(ex, params, model_config, &cache);
        const double l = backward(ex, ex.label, params, model_config, cache);
        batch_loss += l;
        const auto argmax =
            static_cast<std::size_t>(std::max_element(probs.begin(), probs.end()) - probs.begin());
        if (argmax == ex.label) ++correct;
      }
      const double count = static_cast<double>(end - begin);
      if (!std::isfinite(batch_loss)) {
        throw NumericError("non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                           std::to_string(batch_index));
      }
      loss_sum += batch_loss;
      seen += end - begin;
      const double inv = 1.0 / count;
      for (Parameter* p : plist)
        for (double& g : p->grad.data()) g *= inv;
      clip_global_norm(plist, config.grad_clip_norm);
      adam_step(plist, adam, lr);
      ++log.steps;
      if (config.max_steps > 0 && log.steps >= config.max_steps) {
        stop = true;
        break;
      }
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.loss = loss_sum / static_cast<double>(seen);
    rec.train_acc = static_cast<double>(correct) / static_cast<double>(seen);
    rec.lr = lr;
    rec.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    log.epochs.push_back(rec);
    if (on_epoch) on_epoch(rec);
  }
  return log;
}

}  // namespace emoseq
