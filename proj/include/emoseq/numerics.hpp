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
#include <functional>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace emoseq {

// Dense row-major matrix of 64-bit floats.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);

  // Builds a matrix from nested row literals; all rows must have equal length.
  static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  void fill(double v);
  bool all_finite() const;
  std::string shape_string() const;

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// A named trainable tensor and its gradient accumulator.
struct Parameter {
  Parameter() = default;
  Parameter(std::string n, std::size_t rows, std::size_t cols)
      : name(std::move(n)), value(rows, cols), grad(rows, cols) {}

  std::string name;
  Matrix value;
  Matrix grad;

  void zero_grad() { grad.fill(0.0); }
};

Matrix matmul(const Matrix& a, const Matrix& b);
// a * b^T without materialising the transpose.
Matrix matmul_nt(const Matrix& a, const Matrix& b);
// a^T * b without materialising the transpose.
Matrix matmul_tn(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

double sigmoid(double x);
Matrix sigmoid(const Matrix& x);
Matrix tanh_op(const Matrix& x);

// Row-wise softmax with max subtraction.
Matrix softmax_rows(const Matrix& x);
void softmax_inplace(std::span<double> row);

inline constexpr double kLogEpsilon = 1e-12;

// max(0, -ln(probs[label] + kLogEpsilon)). Throws IndexError for an out-of-range label.
double cross_entropy(std::span<const double> probs, std::size_t label);
double cross_entropy(const Matrix& probs, std::size_t label);

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst_parameter;
  std::size_t worst_index = 0;
  double analytic = 0.0;
  double numeric = 0.0;
};

// Compares the analytic gradients already stored in each Parameter::grad with
// central differences of loss_fn. loss_fn must read the parameter values in
// place. Per element the error is |a - n| / max(1e-8, |a| + |n|).
GradCheckResult gradient_check(const std::function<double()>& loss_fn,
                               std::span<Parameter* const> params, double step);

}  // namespace emoseq
