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

#include "emoseq/model.hpp"

#include <cmath>
#include <string>

#include "emoseq/errors.hpp"
#include "emoseq/rng.hpp"

namespace emoseq {

void ModelConfig::validate() const {
  if (vocab_size < 2 || embed_dim == 0 || hidden_dim == 0 || num_heads == 0 || max_len == 0) {
    throw ConfigError("model: vocab_size >= 2 and all dimensions >= 1 required");
  }
  if (num_classes < 2) throw ConfigError("model: num_classes must be at least 2");
  if (hidden_dim % num_heads != 0) {
    throw ConfigError("model: hidden_dim " + std::to_string(hidden_dim) +
                      " is not divisible by num_heads " + std::to_string(num_heads));
  }
}

std::vector<Parameter*> ModelParams::all() {
  std::vector<Parameter*> out{&embedding};
  for (GateParams* gate : {&lstm.input, &lstm.forget, &lstm.output, &lstm.candidate}) {
    out.insert(out.end(), {&gate->w, &gate->u, &gate->b});
  }
  for (auto& head : attn.heads) out.insert(out.end(), {&head.w_q, &head.w_k, &head.w_v});
  out.insert(out.end(), {&attn.w_o, &fusion.w_gate, &fusion.b_gate, &fusion.alpha, &cls_weight,
                         &cls_bias});
  return out;
}

std::vector<const Parameter*> ModelParams::all() const {
  auto mutable_ptrs = const_cast<ModelParams*>(this)->all();
  return {mutable_ptrs.begin(), mutable_ptrs.end()};
}

std::size_t ModelParams::count() const {
  std::size_t n = 0;
  for (const Parameter* p : all()) n += p->value.size();
  return n;
}

void ModelParams::zero_grad() {
  for (Parameter* p : all()) p->zero_grad();
}

namespace {

GateParams make_gate(const std::string& prefix, const ModelConfig& c) {
  return {Parameter(prefix + ".W", c.hidden_dim, c.embed_dim),
          Parameter(prefix + ".U", c.hidden_dim, c.hidden_dim),
          Parameter(prefix + ".b", c.hidden_dim, 1)};
}

void xavier(Parameter& p, Rng& rng) {
  const double bound =
      std::sqrt(6.0 / static_cast<double>(p.value.rows() + p.value.cols()));
  for (double& v : p.value.data()) v = rng.uniform(-bound, bound);
}

}  // namespace

ModelParams make_params(const ModelConfig& config) {
  config.validate();
  const std::size_t h = config.hidden_dim;
  const std::size_t dk = config.head_dim();
  ModelParams p;
  p.embedding = Parameter("embedding", config.vocab_size, config.embed_dim);
  p.lstm.input = make_gate("lstm.input", config);
  p.lstm.forget = make_gate("lstm.forget", config);
  p.lstm.output = make_gate("lstm.output", config);
  p.lstm.candidate = make_gate("lstm.candidate", config);
  for (std::size_t j = 0; j < config.num_heads; ++j) {
    const std::string prefix = "attn.head" + std::to_string(j);
    p.attn.heads.push_back({Parameter(prefix + ".W_q", dk, h), Parameter(prefix + ".W_k", dk, h),
                            Parameter(prefix + ".W_v", dk, h)});
  }
  p.attn.w_o = Parameter("attn.W_o", h, h);
  p.fusion.w_gate = Parameter("fusion.w_gate", 1, 1);
  p.fusion.b_gate = Parameter("fusion.b_gate", 1, 1);
  p.fusion.alpha = Parameter("fusion.alpha", 1, 1);
  p.cls_weight = Parameter("classifier.W", config.num_classes, h);
  p.cls_bias = Parameter("classifier.b", config.num_classes, 1);
  return p;
}

ModelParams init_params(const ModelConfig& config, std::uint64_t seed) {
  ModelParams p = make_params(config);
  Rng rng(seed);
  xavier(p.embedding, rng);
  for (GateParams* gate : {&p.lstm.input, &p.lstm.forget, &p.lstm.output, &p.lstm.candidate}) {
    xavier(gate->w, rng);
    xavier(gate->u, rng);
  }
  for (auto& head : p.attn.heads) {
    xavier(head.w_q, rng);
    xavier(head.w_k, rng);
    xavier(head.w_v, rng);
  }
  xavier(p.attn.w_o, rng);
  xavier(p.cls_weight, rng);
  p.lstm.forget.b.value.fill(1.0);
  p.fusion.w_gate.value(0, 0) = 1.0;
  return p;
}

namespace {

Matrix leading_rows(const Matrix& m, std::size_t n) {
  Matrix out(n, m.cols());
  for (std::size_t r = 0; r < n; ++r) {
    auto src = m.row(r);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

Matrix pad_rows(const Matrix& m, std::size_t max_len) {
  Matrix out(max_len, m.cols());
  for (std::size_t r = 0; r < m.rows() && r < max_len; ++r) {
    auto src = m.row(r);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

void add_bias_rows(Matrix& z, const Matrix& bias) {
  for (std::size_t r = 0; r < z.rows(); ++r) {
    auto row = z.row(r);
    for (std::size_t j = 0; j < row.size(); ++j) row[j] += bias(j, 0);
  }
}

// out += m^T * v, four rows of m per pass over out.
void add_matvec_t(std::span<double> out, const Matrix& m, std::span<const double> v) {
  const std::size_t n = m.cols();
  const double* md = m.data().data();
  double* o = out.data();
  std::size_t r = 0;
  for (; r + 4 <= m.rows(); r += 4) {
    const double* r0 = md + r * n;
    const double* r1 = r0 + n;
    const double* r2 = r1 + n;
    const double* r3 = r2 + n;
    const double c0 = v[r], c1 = v[r + 1], c2 = v[r + 2], c3 = v[r + 3];
    for (std::size_t k = 0; k < n; ++k) o[k] += c0 * r0[k] + c1 * r1[k] + c2 * r2[k] + c3 * r3[k];
  }
  for (; r < m.rows(); ++r) {
    const double* r0 = md + r * n;
    const double c0 = v[r];
    for (std::size_t k = 0; k < n; ++k) o[k] += c0 * r0[k];
  }
}

void add_into(Matrix& dst, const Matrix& src) {
  auto d = dst.data();
  auto s = src.data();
  for (std::size_t i = 0; i < d.size(); ++i) d[i] += s[i];
}

void add_column_sums(Matrix& bias_grad, const Matrix& dz) {
  for (std::size_t r = 0; r < dz.rows(); ++r) {
    auto row = dz.row(r);
    for (std::size_t j = 0; j < row.size(); ++j) bias_grad(j, 0) += row[j];
  }
}

}  // namespace

Matrix embed(const EncodedExample& example, const Matrix& table) {
  const std::size_t len = example.token_ids.size();
  if (len == 0) throw DimensionError("embed: example has no positions");
  Matrix x(len, table.cols());
  for (std::size_t t = 0; t < len; ++t) {
    const TokenId id = example.token_ids[t];
    if (id >= table.rows()) {
      throw IndexError("embed: token id " + std::to_string(id) + " at position " +
                       std::to_string(t) + " exceeds vocabulary size " +
                       std::to_string(table.rows()));
    }
    auto src = table.row(id);
    std::copy(src.begin(), src.end(), x.row(t).begin());
  }
  return x;
}

Matrix tfidf_gate(const Matrix& x, std::span<const double> weights, const FusionParams& fusion,
                  bool enabled) {
  if (weights.size() != x.rows()) {
    throw DimensionError("tfidf_gate: " + std::to_string(weights.size()) + " weights for " +
                         x.shape_string() + " input");
  }
  if (!enabled) return x;
  Matrix out = x;
  const double w = fusion.w_gate.value(0, 0);
  const double b = fusion.b_gate.value(0, 0);
  for (std::size_t t = 0; t < out.rows(); ++t) {
    const double gate = sigmoid(w * weights[t] + b);
    for (double& v : out.row(t)) v *= gate;
  }
  return out;
}

Matrix lstm_forward(const Matrix& x, std::size_t valid_len, const LstmParams& params,
                    LstmCache* cache) {
  const std::size_t hidden = params.input.u.value.rows();
  if (x.cols() != params.input.w.value.cols()) {
    throw DimensionError("lstm_forward: input " + x.shape_string() + " vs W " +
                         params.input.w.value.shape_string());
  }
  if (valid_len > x.rows()) throw DimensionError("lstm_forward: valid_len exceeds sequence length");
  if (cache) *cache = LstmCache{};
  if (valid_len == 0) return Matrix(x.rows(), hidden);

  const std::size_t n = valid_len;
  Matrix xn = leading_rows(x, n);
  // Input contributions for every step at once; the recurrent part is added
  // step by step below.
  Matrix zi = matmul_nt(xn, params.input.w.value);
  Matrix zf = matmul_nt(xn, params.forget.w.value);
  Matrix zo = matmul_nt(xn, params.output.w.value);
  Matrix zg = matmul_nt(xn, params.candidate.w.value);
  add_bias_rows(zi, params.input.b.value);
  add_bias_rows(zf, params.forget.b.value);
  add_bias_rows(zo, params.output.b.value);
  add_bias_rows(zg, params.candidate.b.value);

  // U h = (U^T)^T h, accumulated row by row of U^T.
  const Matrix ui_t = transpose(params.input.u.value);
  const Matrix uf_t = transpose(params.forget.u.value);
  const Matrix uo_t = transpose(params.output.u.value);
  const Matrix ug_t = transpose(params.candidate.u.value);
  Matrix c(n, hidden), tanh_c(n, hidden), h(n, hidden);
  for (std::size_t t = 0; t < n; ++t) {
    if (t > 0) {
      auto h_prev = h.row(t - 1);
      add_matvec_t(zi.row(t), ui_t, h_prev);
      add_matvec_t(zf.row(t), uf_t, h_prev);
      add_matvec_t(zo.row(t), uo_t, h_prev);
      add_matvec_t(zg.row(t), ug_t, h_prev);
    }
    for (std::size_t j = 0; j < hidden; ++j) {
      const double ig = sigmoid(zi(t, j));
      const double fg = sigmoid(zf(t, j));
      const double og = sigmoid(zo(t, j));
      const double cand = std::tanh(zg(t, j));
      const double c_prev = t > 0 ? c(t - 1, j) : 0.0;
      zi(t, j) = ig;
      zf(t, j) = fg;
      zo(t, j) = og;
      zg(t, j) = cand;
      c(t, j) = fg * c_prev + ig * cand;
      tanh_c(t, j) = std::tanh(c(t, j));
      h(t, j) = og * tanh_c(t, j);
    }
  }
  Matrix out = pad_rows(h, x.rows());
  if (cache) {
    cache->valid_len = n;
    cache->x = std::move(xn);
    cache->i = std::move(zi);
    cache->f = std::move(zf);
    cache->o = std::move(zo);
    cache->g = std::move(zg);
    cache->c = std::move(c);
    cache->tanh_c = std::move(tanh_c);
    cache->h = std::move(h);
  }
  return out;
}

Matrix lstm_backward(const LstmCache& cache, const Matrix& d_hidden, LstmParams& params,
                     std::size_t max_len) {
  const std::size_t embed_dim = params.input.w.value.cols();
  const std::size_t n = cache.valid_len;
  if (n == 0) return Matrix(max_len, embed_dim);
  const std::size_t hidden = cache.h.cols();

  Matrix dzi(n, hidden), dzf(n, hidden), dzo(n, hidden), dzg(n, hidden);
  std::vector<double> dh_next(hidden, 0.0), dc_next(hidden, 0.0);
  for (std::size_t step = n; step-- > 0;) {
    for (std::size_t j = 0; j < hidden; ++j) {
      const double dh = d_hidden(step, j) + dh_next[j];
      const double ig = cache.i(step, j), fg = cache.f(step, j), og = cache.o(step, j);
      const double cand = cache.g(step, j), tc = cache.tanh_c(step, j);
      const double c_prev = step > 0 ? cache.c(step - 1, j) : 0.0;
      const double dc = dh * og * (1.0 - tc * tc) + dc_next[j];
      dzo(step, j) = dh * tc * og * (1.0 - og);
      dzi(step, j) = dc * cand * ig * (1.0 - ig);
      dzf(step, j) = dc * c_prev * fg * (1.0 - fg);
      dzg(step, j) = dc * ig * (1.0 - cand * cand);
      dc_next[j] = dc * fg;
    }
    std::fill(dh_next.begin(), dh_next.end(), 0.0);
    if (step > 0) {
      add_matvec_t(dh_next, params.input.u.value, dzi.row(step));
      add_matvec_t(dh_next, params.forget.u.value, dzf.row(step));
      add_matvec_t(dh_next, params.output.u.value, dzo.row(step));
      add_matvec_t(dh_next, params.candidate.u.value, dzg.row(step));
    }
  }

  // Row t holds h_{t-1}; row 0 is the zero initial state.
  Matrix h_prev(n, hidden);
  for (std::size_t t = 1; t < n; ++t) {
    auto src = cache.h.row(t - 1);
    std::copy(src.begin(), src.end(), h_prev.row(t).begin());
  }
  const auto accumulate_gate = [&](GateParams& gate, const Matrix& dz) {
    add_into(gate.w.grad, matmul_tn(dz, cache.x));
    add_into(gate.u.grad, matmul_tn(dz, h_prev));
    add_column_sums(gate.b.grad, dz);
  };
  accumulate_gate(params.input, dzi);
  accumulate_gate(params.forget, dzf);
  accumulate_gate(params.output, dzo);
  accumulate_gate(params.candidate, dzg);

  Matrix dx = matmul(dzi, params.input.w.value);
  add_into(dx, matmul(dzf, params.forget.w.value));
  add_into(dx, matmul(dzo, params.output.w.value));
  add_into(dx, matmul(dzg, params.candidate.w.value));
  return pad_rows(dx, max_len);
}

namespace {

void check_attention_shapes(const Matrix& hs, std::size_t valid_len,
                            const AttentionParams& params) {
  if (params.heads.empty()) throw DimensionError("attention: no heads");
  if (hs.cols() != params.w_o.value.rows()) {
    throw DimensionError("attention: states " + hs.shape_string() + " vs W_o " +
                         params.w_o.value.shape_string());
  }
  if (valid_len > hs.rows()) throw DimensionError("attention: valid_len exceeds sequence length");
}

}  // namespace

Matrix multi_head_attention(const Matrix& hs, std::size_t valid_len, const AttentionParams& params,
                            AttentionCache* cache) {
  check_attention_shapes(hs, valid_len, params);
  if (cache) *cache = AttentionCache{};
  const std::size_t hidden = hs.cols();
  if (valid_len == 0) return Matrix(hs.rows(), hidden);

  const std::size_t n = valid_len;
  const std::size_t dk = params.heads.front().w_q.value.rows();
  const double scale = 1.0 / std::sqrt(static_cast<double>(dk));
  Matrix hn = leading_rows(hs, n);
  Matrix concat(n, hidden);
  for (std::size_t j = 0; j < params.heads.size(); ++j) {
    const HeadParams& head = params.heads[j];
    Matrix q = matmul_nt(hn, head.w_q.value);
    Matrix k = matmul_nt(hn, head.w_k.value);
    Matrix v = matmul_nt(hn, head.w_v.value);
    Matrix scores = matmul_nt(q, k);
    for (double& s : scores.data()) s *= scale;
    // Padded keys are never formed, which is the -inf mask in closed form.
    Matrix a = softmax_rows(scores);
    Matrix o = matmul(a, v);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < dk; ++c) concat(r, j * dk + c) = o(r, c);
    if (cache) {
      cache->q.push_back(std::move(q));
      cache->k.push_back(std::move(k));
      cache->v.push_back(std::move(v));
      cache->a.push_back(std::move(a));
    }
  }
  Matrix context = matmul_nt(concat, params.w_o.value);
  if (cache) {
    cache->valid_len = n;
    cache->hs = std::move(hn);
    cache->concat = std::move(concat);
  }
  return pad_rows(context, hs.rows());
}

std::vector<Matrix> attention_weights(const Matrix& hs, std::size_t valid_len,
                                      const AttentionParams& params) {
  AttentionCache cache;
  multi_head_attention(hs, valid_len, params, &cache);
  return cache.a;
}

Matrix attention_backward(const AttentionCache& cache, const Matrix& d_context,
                          AttentionParams& params, std::size_t max_len) {
  const std::size_t hidden = params.w_o.value.rows();
  const std::size_t n = cache.valid_len;
  if (n == 0) return Matrix(max_len, hidden);
  const std::size_t dk = params.heads.front().w_q.value.rows();
  const double scale = 1.0 / std::sqrt(static_cast<double>(dk));

  Matrix dc = leading_rows(d_context, n);
  add_into(params.w_o.grad, matmul_tn(dc, cache.concat));
  Matrix d_concat = matmul(dc, params.w_o.value);

  Matrix d_hs(n, hidden);
  for (std::size_t j = 0; j < params.heads.size(); ++j) {
    HeadParams& head = params.heads[j];
    const Matrix& a = cache.a[j];
    Matrix d_o(n, dk);
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < dk; ++c) d_o(r, c) = d_concat(r, j * dk + c);

    Matrix d_a = matmul_nt(d_o, cache.v[j]);
    Matrix d_v = matmul_tn(a, d_o);
    Matrix d_s(n, n);
    for (std::size_t r = 0; r < n; ++r) {
      double dot = 0.0;
      for (std::size_t c = 0; c < n; ++c) dot += a(r, c) * d_a(r, c);
      for (std::size_t c = 0; c < n; ++c) d_s(r, c) = a(r, c) * (d_a(r, c) - dot) * scale;
    }
    Matrix d_q = matmul(d_s, cache.k[j]);
    Matrix d_k = matmul_tn(d_s, cache.q[j]);

    add_into(head.w_q.grad, matmul_tn(d_q, cache.hs));
    add_into(head.w_k.grad, matmul_tn(d_k, cache.hs));
    add_into(head.w_v.grad, matmul_tn(d_v, cache.hs));
    add_into(d_hs, matmul(d_q, head.w_q.value));
    add_into(d_hs, matmul(d_k, head.w_k.value));
    add_into(d_hs, matmul(d_v, head.w_v.value));
  }
  return pad_rows(d_hs, max_len);
}

Matrix fuse(const Matrix& hs, const Matrix& context, const FusionParams& fusion, bool enabled) {
  if (hs.rows() != context.rows() || hs.cols() != context.cols()) {
    throw DimensionError("fuse: " + hs.shape_string() + " vs " + context.shape_string());
  }
  if (!enabled) return hs;
  const double beta = sigmoid(fusion.alpha.value(0, 0));
  Matrix out(hs.rows(), hs.cols());
  auto o = out.data();
  auto h = hs.data();
  auto c = context.data();
  for (std::size_t i = 0; i < o.size(); ++i) o[i] = beta * c[i] + (1.0 - beta) * h[i];
  return out;
}

Readout pool_and_classify(const Matrix& features, std::size_t valid_len, const Matrix& weight,
                          const Matrix& bias) {
  if (weight.cols() != features.cols() || bias.rows() != weight.rows()) {
    throw DimensionError("pool_and_classify: features " + features.shape_string() + ", W " +
                         weight.shape_string() + ", b " + bias.shape_string());
  }
  if (valid_len > features.rows()) {
    throw DimensionError("pool_and_classify: valid_len exceeds sequence length");
  }
  Readout out;
  out.pooled.assign(features.cols(), 0.0);
  if (valid_len > 0) {
    for (std::size_t t = 0; t < valid_len; ++t) {
      auto row = features.row(t);
      for (std::size_t j = 0; j < row.size(); ++j) out.pooled[j] += row[j];
    }
    for (double& v : out.pooled) v /= static_cast<double>(valid_len);
  }
  out.logits.resize(weight.rows());
  for (std::size_t k = 0; k < weight.rows(); ++k) {
    auto w = weight.row(k);
    double acc = bias(k, 0);
    for (std::size_t j = 0; j < w.size(); ++j) acc += w[j] * out.pooled[j];
    out.logits[k] = acc;
  }
  out.probs = out.logits;
  softmax_inplace(out.probs);
  return out;
}

std::vector<double> forward(const EncodedExample& example, const ModelParams& params,
                            const ModelConfig& config, ForwardCache* cache) {
  if (example.tfidf_weights.size() != example.token_ids.size()) {
    throw DimensionError("forward: token ids and TF-IDF weights differ in length");
  }
  const std::size_t len = example.token_ids.size();
  const std::size_t n = example.valid_len;
  if (n > len) throw DimensionError("forward: valid_len exceeds sequence length");

  Matrix x = embed(example, params.embedding.value);
  Matrix gated = tfidf_gate(x, example.tfidf_weights, params.fusion, config.enable_tfidf_gate);

  LstmCache lstm_cache;
  Matrix hs = lstm_forward(gated, n, params.lstm, cache ? &lstm_cache : nullptr);

  Matrix fused;
  AttentionCache attn_cache;
  Matrix context;
  if (config.enable_attention) {
    context = multi_head_attention(hs, n, params.attn, cache ? &attn_cache : nullptr);
    fused = fuse(hs, context, params.fusion, true);
  } else {
    fused = hs;
  }
  Readout readout =
      pool_and_classify(fused, n, params.cls_weight.value, params.cls_bias.value);
  std::vector<double> probs = readout.probs;

  if (cache) {
    cache->valid_len = n;
    cache->max_len = len;
    cache->gate.assign(len, 1.0);
    if (config.enable_tfidf_gate) {
      const double w = params.fusion.w_gate.value(0, 0);
      const double b = params.fusion.b_gate.value(0, 0);
      for (std::size_t t = 0; t < len; ++t) cache->gate[t] = sigmoid(w * example.tfidf_weights[t] + b);
    }
    cache->x = std::move(x);
    cache->gated = std::move(gated);
    cache->lstm = std::move(lstm_cache);
    cache->hs = std::move(hs);
    cache->attn = std::move(attn_cache);
    cache->context = std::move(context);
    cache->beta = config.enable_attention ? sigmoid(params.fusion.alpha.value(0, 0)) : 0.0;
    cache->fused = std::move(fused);
    cache->readout = std::move(readout);
  }
  return probs;
}

double backward(const EncodedExample& example, std::size_t label, ModelParams& params,
                const ModelConfig& config, const ForwardCache& cache) {
  const auto& probs = cache.readout.probs;
  const double loss_value = cross_entropy(probs, label);
  const std::size_t classes = probs.size();
  const std::size_t hidden = params.cls_weight.value.cols();
  const std::size_t n = cache.valid_len;
  const std::size_t len = cache.max_len;

  // d/dlogit_k of -ln(p_y + eps) = -(p_y / (p_y + eps)) * (delta_ky - p_k).
  const double py = probs[label];
  const double coeff = -py / (py + kLogEpsilon);
  std::vector<double> d_logits(classes);
  for (std::size_t k = 0; k < classes; ++k) {
    d_logits[k] = coeff * ((k == label ? 1.0 : 0.0) - probs[k]);
  }

  const auto& pooled = cache.readout.pooled;
  std::vector<double> d_pooled(hidden, 0.0);
  for (std::size_t k = 0; k < classes; ++k) {
    params.cls_bias.grad(k, 0) += d_logits[k];
    auto w_row = params.cls_weight.value.row(k);
    auto g_row = params.cls_weight.grad.row(k);
    for (std::size_t j = 0; j < hidden; ++j) {
      g_row[j] += d_logits[k] * pooled[j];
      d_pooled[j] += w_row[j] * d_logits[k];
    }
  }
  if (n == 0) return loss_value;

  Matrix d_fused(len, hidden);
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t t = 0; t < n; ++t)
    for (std::size_t j = 0; j < hidden; ++j) d_fused(t, j) = d_pooled[j] * inv_n;

  Matrix d_hs(len, hidden);
  if (config.enable_attention) {
    const double beta = cache.beta;
    Matrix d_context(len, hidden);
    double d_beta = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      for (std::size_t j = 0; j < hidden; ++j) {
        const double g = d_fused(t, j);
        d_context(t, j) = beta * g;
        d_hs(t, j) = (1.0 - beta) * g;
        d_beta += g * (cache.context(t, j) - cache.hs(t, j));
      }
    }
    params.fusion.alpha.grad(0, 0) += d_beta * beta * (1.0 - beta);
    add_into(d_hs, attention_backward(cache.attn, d_context, params.attn, len));
  } else {
    d_hs = std::move(d_fused);
  }

  Matrix d_gated = lstm_backward(cache.lstm, d_hs, params.lstm, len);

  const std::size_t embed_dim = params.embedding.value.cols();
  double d_w_gate = 0.0, d_b_gate = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    auto dg_row = d_gated.row(t);
    auto e_grad = params.embedding.grad.row(example.token_ids[t]);
    if (config.enable_tfidf_gate) {
      const double gate = cache.gate[t];
      auto x_row = cache.x.row(t);
      double d_gate = 0.0;
      for (std::size_t j = 0; j < embed_dim; ++j) {
        d_gate += dg_row[j] * x_row[j];
        e_grad[j] += gate * dg_row[j];
      }
      const double d_pre = d_gate * gate * (1.0 - gate);
      d_w_gate += d_pre * example.tfidf_weights[t];
      d_b_gate += d_pre;
    } else {
      for (std::size_t j = 0; j < embed_dim; ++j) e_grad[j] += dg_row[j];
    }
  }
  params.fusion.w_gate.grad(0, 0) += d_w_gate;
  params.fusion.b_gate.grad(0, 0) += d_b_gate;
  return loss_value;
}

double loss_and_grad(const EncodedExample& example, ModelParams& params,
                     const ModelConfig& config) {
  ForwardCache cache;
  forward(example, params, config, &cache);
  return backward(example, example.label, params, config, cache);
}

double loss(const EncodedExample& example, const ModelParams& params, const ModelConfig& config) {
  return cross_entropy(forward(example, params, config), example.label);
}

}  // namespace emoseq
