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
#include <span>
#include <vector>

#include "emoseq/numerics.hpp"
#include "emoseq/textpipe.hpp"

namespace emoseq {

struct ModelConfig {
  std::size_t vocab_size = 2;
  std::size_t embed_dim = 64;
  std::size_t hidden_dim = 64;
  std::size_t num_heads = 4;
  std::size_t num_classes = 5;
  std::size_t max_len = 64;
  bool enable_attention = true;
  bool enable_tfidf_gate = true;
  std::uint64_t seed = 0;

  std::size_t head_dim() const { return hidden_dim / num_heads; }
  // Throws ConfigError on zero dims, fewer than two classes or a hidden size
  // not divisible by the head count.
  void validate() const;
};

// One LSTM gate: pre-activation W x_t + U h_{t-1} + b.
struct GateParams {
  Parameter w;  // hidden x embed
  Parameter u;  // hidden x hidden
  Parameter b;  // hidden x 1
};

struct LstmParams {
  GateParams input;
  GateParams forget;
  GateParams output;
  GateParams candidate;
};

struct HeadParams {
  Parameter w_q;  // head_dim x hidden
  Parameter w_k;
  Parameter w_v;
};

struct AttentionParams {
  std::vector<HeadParams> heads;
  Parameter w_o;  // hidden x hidden
};

// Scalars of the TF-IDF gate sigma(w_gate * s + b_gate) and the attention
// blend weight sigma(alpha).
struct FusionParams {
  Parameter w_gate;
  Parameter b_gate;
  Parameter alpha;
};

struct ModelParams {
  Parameter embedding;  // vocab x embed
  LstmParams lstm;
  AttentionParams attn;
  FusionParams fusion;
  Parameter cls_weight;  // classes x hidden
  Parameter cls_bias;    // classes x 1

  // Parameters in their canonical order (initialisation, optimiser state and
  // serialisation all follow it).
  std::vector<Parameter*> all();
  std::vector<const Parameter*> all() const;
  std::size_t count() const;
  void zero_grad();
};

// Allocates zero-valued parameters with the shapes implied by config.
ModelParams make_params(const ModelConfig& config);
// Xavier-uniform weights from the seeded generator; biases zero except the
// forget-gate bias (1.0); w_gate = 1, b_gate = 0, alpha = 0.
ModelParams init_params(const ModelConfig& config, std::uint64_t seed);

// ---- Layer operations. Inputs carry max_len rows; only the first valid_len
// rows are computed, the rest of every output is zero.

Matrix embed(const EncodedExample& example, const Matrix& table);

Matrix tfidf_gate(const Matrix& x, std::span<const double> weights, const FusionParams& fusion,
                  bool enabled);

struct LstmCache {
  std::size_t valid_len = 0;
  Matrix x;                                 // gated embeddings (valid rows)
  Matrix i, f, o, g, c, tanh_c, h;          // valid_len x hidden activations
};

Matrix lstm_forward(const Matrix& x, std::size_t valid_len, const LstmParams& params,
                    LstmCache* cache = nullptr);
// Accumulates parameter gradients into params and returns dL/dx (max_len rows).
Matrix lstm_backward(const LstmCache& cache, const Matrix& d_hidden, LstmParams& params,
                     std::size_t max_len);

struct AttentionCache {
  std::size_t valid_len = 0;
  Matrix hs;                       // valid rows of the input states
  std::vector<Matrix> q, k, v, a;  // per head; a is valid_len x valid_len
  Matrix concat;
};

Matrix multi_head_attention(const Matrix& hs, std::size_t valid_len, const AttentionParams& params,
                            AttentionCache* cache = nullptr);
// Per-head attention weights over the valid positions (for inspection).
std::vector<Matrix> attention_weights(const Matrix& hs, std::size_t valid_len,
                                      const AttentionParams& params);
Matrix attention_backward(const AttentionCache& cache, const Matrix& d_context,
                          AttentionParams& params, std::size_t max_len);

Matrix fuse(const Matrix& hs, const Matrix& context, const FusionParams& fusion, bool enabled);

struct Readout {
  std::vector<double> pooled;
  std::vector<double> logits;
  std::vector<double> probs;
};

Readout pool_and_classify(const Matrix& features, std::size_t valid_len, const Matrix& weight,
                          const Matrix& bias);

struct ForwardCache {
  std::size_t valid_len = 0;
  std::size_t max_len = 0;
  Matrix x;        // embeddings
  Matrix gated;    // after the TF-IDF gate
  std::vector<double> gate;
  LstmCache lstm;
  Matrix hs;
  AttentionCache attn;
  Matrix context;
  double beta = 0.0;
  Matrix fused;
  Readout readout;
};

// Class probabilities for one example; fills cache when given.
std::vector<double> forward(const EncodedExample& example, const ModelParams& params,
                            const ModelConfig& config, ForwardCache* cache = nullptr);

// Adds the gradient of cross_entropy(forward(example), label) to every
// Parameter::grad and returns the loss.
double backward(const EncodedExample& example, std::size_t label, ModelParams& params,
                const ModelConfig& config, const ForwardCache& cache);

// Convenience: forward + backward, returns the loss.
double loss_and_grad(const EncodedExample& example, ModelParams& params,
                     const ModelConfig& config);
double loss(const EncodedExample& example, const ModelParams& params, const ModelConfig& config);

}  // namespace emoseq
