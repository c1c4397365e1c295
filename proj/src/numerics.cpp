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

#include "emoseq/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "emoseq/errors.hpp"

namespace emoseq {

Matrix::Matrix(std::size_t rows, std::size_t cols, double fill)
    : rows_(rows), cols_(cols) {
  if (rows == 0 || cols == 0) {
    throw DimensionError("matrix dimensions must be positive, got " + std::to_string(rows) +
                         "x" + std::to_string(cols));
  }
  data_.assign(rows * cols, fill);
}

Matrix Matrix::from_rows(std::initializer_list<std::initializer_list<double>> rows) {
  if (rows.size() == 0 || rows.begin()->size() == 0) {
    throw DimensionError("from_rows: empty literal");
  }
  Matrix m(rows.size(), rows.begin()->size());
  std::size_t r = 0;
  for (const auto& row : rows) {
    if (row.size() != m.cols_) {
      throw DimensionError("from_rows: ragged row " + std::to_string(r));
    }
    std::copy(row.begin(), row.end(), m.row(r).begin());
    ++r;
  }
  return m;
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

void Matrix::fill(double v) { std::fill(data_.begin(), data_.end(), v); }

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(), [](double x) { return std::isfinite(x); });
}

std::string Matrix::shape_string() const {
  return "(" + std::to_string(rows_) + "x" + std::to_string(cols_) + ")";
}

namespace {

[[noreturn]] void shape_mismatch(const char* op, const Matrix& a, const Matrix& b) {
  throw DimensionError(std::string(op) + ": incompatible shapes " + a.shape_string() +
                       " and " + b.shape_string());
}

}  // namespace

namespace {

// out[0..n) += sum_r coeffs[r] * rows[r][0..n) for four rows at once, which
// quarters the load/store traffic on out.
inline void axpy4(double* out, const double* r0, const double* r1, const double* r2,
                  const double* r3, double c0, double c1, double c2, double c3, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) out[j] += c0 * r0[j] + c1 * r1[j] + c2 * r2[j] + c3 * r3[j];
}

inline void axpy1(double* out, const double* r0, double c0, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) out[j] += c0 * r0[j];
}

}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) shape_mismatch("matmul", a, b);
  Matrix out(a.rows(), b.cols());
  const std::size_t inner = a.cols();
  const std::size_t n = b.cols();
  const double* bd = b.data().data();
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* o = out.row(i).data();
    const double* ai = a.row(i).data();
    std::size_t k = 0;
    for (; k + 4 <= inner; k += 4) {
      axpy4(o, bd + k * n, bd + (k + 1) * n, bd + (k + 2) * n, bd + (k + 3) * n, ai[k], ai[k + 1],
            ai[k + 2], ai[k + 3], n);
    }
    for (; k < inner; ++k) axpy1(o, bd + k * n, ai[k], n);
  }
  return out;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.cols()) shape_mismatch("matmul_nt", a, b);
  // Strict IEEE ordering keeps dot-product loops scalar; the row-update form
  // of matmul vectorises, and the transpose is cheap next to the product.
  return matmul(a, transpose(b));
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) shape_mismatch("matmul_tn", a, b);
  Matrix out(a.cols(), b.cols());
  const std::size_t inner = a.rows();
  const std::size_t n = b.cols();
  const std::size_t m = a.cols();
  const double* ad = a.data().data();
  const double* bd = b.data().data();
  for (std::size_t i = 0; i < m; ++i) {
    double* o = out.row(i).data();
    std::size_t k = 0;
    for (; k + 4 <= inner; k += 4) {
      axpy4(o, bd + k * n, bd + (k + 1) * n, bd + (k + 2) * n, bd + (k + 3) * n, ad[k * m + i],
            ad[(k + 1) * m + i], ad[(k + 2) * m + i], ad[(k + 3) * m + i], n);
    }
    for (; k < inner; ++k) axpy1(o, bd + k * n, ad[k * m + i], n);
  }
  return out;
}

Matrix transpose(const Matrix& a) {
  Matrix out(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

Matrix sigmoid(const Matrix& x) {
  Matrix out = x;
  for (double& v : out.data()) v = sigmoid(v);
  return out;
}

Matrix tanh_op(const Matrix& x) {
  Matrix out = x;
  for (double& v : out.data()) v = std::tanh(v);
  return out;
}

void softmax_inplace(std::span<double> row) {
  const double mx = *std::max_element(row.begin(), row.end());
  double sum = 0.0;
  for (double& v : row) {
    v = std::exp(v - mx);
    sum += v;
  }
  for (double& v : row) v /= sum;
}

Matrix softmax_rows(const Matrix& x) {
  Matrix out = x;
  for (std::size_t r = 0; r < out.rows(); ++r) softmax_inplace(out.row(r));
  return out;
}

double cross_entropy(std::span<const double> probs, std::size_t label) {
  if (label >= probs.size()) {
    throw IndexError("cross_entropy: label " + std::to_string(label) + " out of range for " +
                     std::to_string(probs.size()) + " classes");
  }
  // p + eps can exceed 1 by rounding at a saturated prediction. The
  // comparison is written so a NaN probability still yields NaN.
  const double l = -std::log(probs[label] + kLogEpsilon);
  return l < 0.0 ? 0.0 : l;
}

double cross_entropy(const Matrix& probs, std::size_t label) {
  if (probs.rows() != 1) {
    throw DimensionError("cross_entropy: expected a single row, got " + probs.shape_string());
  }
  return cross_entropy(probs.row(0), label);
}

GradCheckResult gradient_check(const std::function<double()>& loss_fn,
                               std::span<Parameter* const> params, double step) {
  if (!(step >= 1e-6 && step <= 1e-4)) {
    throw ConfigError("gradient_check: step must lie in [1e-6, 1e-4]");
  }
  GradCheckResult result;
  for (Parameter* p : params) {
    auto values = p->value.data();
    auto grads = p->grad.data();
    for (std::size_t i = 0; i < values.size(); ++i) {
      const double saved = values[i];
      values[i] = saved + step;
      const double plus = loss_fn();
      values[i] = saved - step;
      const double minus = loss_fn();
      values[i] = saved;
      if (!std::isfinite(plus) || !std::isfinite(minus)) {
        throw NumericError("gradient_check: non-finite loss while perturbing " + p->name + "[" +
                           std::to_string(i) + "]");
      }
      const double numeric = (plus - minus) / (2.0 * step);
      const double analytic = grads[i];
      const double err = std::abs(analytic - numeric) /
                         std::max(1e-8, std::abs(analytic) + std::abs(numeric));
      if (result.worst_parameter.empty() || err > result.max_rel_error) {
        result.max_rel_error = err;
        result.worst_parameter = p->name;
        result.worst_index = i;
        result.analytic = analytic;
        result.numeric = numeric;
      }
    }
  }
  return result;
}

}  // namespace emoseq
