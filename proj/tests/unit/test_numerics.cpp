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

#include <cmath>
#include <vector>

#include "doctest.h"
#include "emoseq/errors.hpp"
#include "emoseq/numerics.hpp"
#include "emoseq/rng.hpp"

using namespace emoseq;

namespace {

Matrix random_matrix(Rng& rng, std::size_t r, std::size_t c, double lo, double hi) {
  Matrix m(r, c);
  for (double& v : m.data()) v = rng.uniform(lo, hi);
  return m;
}

}  // namespace

TEST_CASE("matmul") {
  const Matrix m = Matrix::from_rows({{1, 2}, {3, 4}});
  CHECK(matmul(Matrix::identity(2), m) == m);
  const Matrix p = matmul(Matrix::from_rows({{1, 2}}), Matrix::from_rows({{3}, {4}}));
  CHECK(p.rows() == 1);
  CHECK(p.cols() == 1);
  CHECK(p(0, 0) == 11.0);
  CHECK_THROWS_AS(matmul(Matrix(2, 3), Matrix(2, 2)), DimensionError);
  try {
    matmul(Matrix(2, 3), Matrix(2, 2));
  } catch (const DimensionError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("(2x3)") != std::string::npos);
    CHECK(msg.find("(2x2)") != std::string::npos);
  }
}

TEST_CASE("matmul_nt agrees with an explicit transpose") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto r = 1 + rng.next_below(7), k = 1 + rng.next_below(9), c = 1 + rng.next_below(6);
    const Matrix a = random_matrix(rng, r, k, -2, 2);
    const Matrix b = random_matrix(rng, c, k, -2, 2);
    const Matrix nt = matmul_nt(a, b);
    const Matrix ref = matmul(a, transpose(b));
    const Matrix at = random_matrix(rng, k, r, -2, 2);
    for (std::size_t i = 0; i < nt.size(); ++i) {
      CHECK(nt.data()[i] == doctest::Approx(ref.data()[i]).epsilon(1e-12));
    }
    const Matrix tn2 = matmul_tn(at, random_matrix(rng, k, c, -1, 1));
    CHECK(tn2.rows() == r);
    CHECK(tn2.cols() == c);
  }
  CHECK_THROWS_AS(matmul_nt(Matrix(2, 3), Matrix(2, 2)), DimensionError);
  CHECK_THROWS_AS(matmul_tn(Matrix(2, 3), Matrix(3, 2)), DimensionError);
}

TEST_CASE("matmul_tn matches the definition") {
  Rng rng(11);
  const Matrix a = random_matrix(rng, 7, 3, -1, 1);
  const Matrix b = random_matrix(rng, 7, 5, -1, 1);
  const Matrix got = matmul_tn(a, b);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < 7; ++k) acc += a(k, i) * b(k, j);
      CHECK(got(i, j) == doctest::Approx(acc).epsilon(1e-12));
    }
  }
}

TEST_CASE("matrices need positive dimensions") {
  CHECK_THROWS_AS(Matrix(0, 3), DimensionError);
  CHECK_THROWS_AS(Matrix(3, 0), DimensionError);
}

TEST_CASE("sigmoid and tanh") {
  CHECK(sigmoid(0.0) == 0.5);
  CHECK(tanh_op(Matrix(1, 1))(0, 0) == 0.0);
  CHECK(std::abs(sigmoid(40.0) - 1.0) < 1e-12);
  CHECK(std::abs(sigmoid(-40.0)) < 1e-12);
  CHECK(std::isfinite(sigmoid(-1000.0)));
  CHECK(std::isfinite(sigmoid(1000.0)));
  const Matrix s = sigmoid(Matrix::from_rows({{-3, 0, 3}}));
  for (double v : s.data()) {
    CHECK(v > 0.0);
    CHECK(v < 1.0);
  }
}

TEST_CASE("sigmoid and tanh are monotone") {
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.uniform(-50, 50);
    const double y = x + rng.uniform(0, 5);
    CHECK(sigmoid(x) <= sigmoid(y));
    CHECK(std::tanh(x) <= std::tanh(y));
  }
}

TEST_CASE("softmax_rows") {
  const Matrix u = softmax_rows(Matrix::from_rows({{0, 0, 0}}));
  for (double v : u.data()) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  const Matrix big = softmax_rows(Matrix::from_rows({{1000, 1000}}));
  CHECK(big(0, 0) == 0.5);
  CHECK(big(0, 1) == 0.5);
  const Matrix l3 = softmax_rows(Matrix::from_rows({{0, std::log(3.0)}}));
  CHECK(std::abs(l3(0, 0) - 0.25) < 1e-15);
  CHECK(std::abs(l3(0, 1) - 0.75) < 1e-15);
}

TEST_CASE("softmax rows sum to one for extreme inputs") {
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const Matrix x = random_matrix(rng, 1 + rng.next_below(5), 1 + rng.next_below(12), -1000, 1000);
    const Matrix s = softmax_rows(x);
    CHECK(s.all_finite());
    for (std::size_t r = 0; r < s.rows(); ++r) {
      double sum = 0.0;
      for (double v : s.row(r)) sum += v;
      CHECK(std::abs(sum - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("matmul is associative within rounding") {
  Rng rng(21);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_matrix(rng, 1 + rng.next_below(6), 1 + rng.next_below(6), -1, 1);
    const auto b = random_matrix(rng, a.cols(), 1 + rng.next_below(6), -1, 1);
    const auto c = random_matrix(rng, b.cols(), 1 + rng.next_below(6), -1, 1);
    const Matrix left = matmul(matmul(a, b), c);
    const Matrix right = matmul(a, matmul(b, c));
    double max_abs = 0.0, max_diff = 0.0;
    for (std::size_t i = 0; i < left.size(); ++i) {
      max_abs = std::max(max_abs, std::abs(left.data()[i]));
      max_diff = std::max(max_diff, std::abs(left.data()[i] - right.data()[i]));
    }
    CHECK(max_diff <= 1e-9 * std::max(1.0, max_abs));
  }
}

TEST_CASE("cross_entropy") {
  CHECK(cross_entropy(std::vector<double>{1, 0, 0}, 0) == doctest::Approx(0.0).epsilon(1e-11));
  CHECK(cross_entropy(std::vector<double>{1, 0, 0}, 0) >= 0.0);
  CHECK(cross_entropy(std::vector<double>{0.5, 0.5}, 1) == doctest::Approx(std::log(2.0)));
  const std::vector<double> uniform(5, 0.2);
  for (std::size_t k = 0; k < 5; ++k) {
    CHECK(cross_entropy(uniform, k) == doctest::Approx(1.6094379124341003).epsilon(1e-10));
  }
  CHECK_THROWS_AS(cross_entropy(uniform, 5), IndexError);
  CHECK(std::isfinite(cross_entropy(std::vector<double>{1, 0}, 1)));
  CHECK(std::isnan(cross_entropy(std::vector<double>{std::nan(""), 0.5}, 0)));
}

TEST_CASE("gradient_check on a quadratic") {
  Parameter theta("theta", 1, 1);
  theta.value(0, 0) = 3.0;
  theta.grad(0, 0) = 3.0;
  auto loss = [&] { return 0.5 * theta.value(0, 0) * theta.value(0, 0); };
  std::vector<Parameter*> params{&theta};
  const auto r = gradient_check(loss, params, 1e-5);
  CHECK(r.max_rel_error < 1e-9);
  CHECK(theta.value(0, 0) == 3.0);
}

TEST_CASE("gradient_check with zero gradient uses the absolute floor") {
  Parameter theta("theta", 1, 1);
  auto loss = [&] { return 0.5 * theta.value(0, 0) * theta.value(0, 0); };
  std::vector<Parameter*> params{&theta};
  const auto r = gradient_check(loss, params, 1e-5);
  CHECK(std::isfinite(r.max_rel_error));
  CHECK(r.max_rel_error < 1e-9);
}

TEST_CASE("gradient_check flags a wrong gradient and bad inputs") {
  Parameter theta("theta", 1, 2);
  theta.value(0, 0) = 1.0;
  theta.value(0, 1) = -2.0;
  theta.grad(0, 0) = 1.0;
  theta.grad(0, 1) = 0.0;  // true value -2
  auto loss = [&] {
    return 0.5 * (theta.value(0, 0) * theta.value(0, 0) + theta.value(0, 1) * theta.value(0, 1));
  };
  std::vector<Parameter*> params{&theta};
  const auto r = gradient_check(loss, params, 1e-5);
  CHECK(r.max_rel_error == doctest::Approx(1.0));
  CHECK(r.worst_index == 1);
  CHECK_THROWS_AS(gradient_check(loss, params, 1e-2), ConfigError);
  auto bad = [&] { return std::log(theta.value(0, 0) - 1.0); };
  CHECK_THROWS_AS(gradient_check(bad, params, 1e-5), NumericError);
}

TEST_CASE("rng is deterministic and bounded") {
  Rng a(123), b(123), c(124);
  bool differs = false;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    CHECK(x == b.next_u64());
    differs |= x != c.next_u64();
  }
  CHECK(differs);
  Rng r(0);
  for (int i = 0; i < 1000; ++i) {
    const double u = r.next_double();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
    CHECK(r.next_below(7) < 7);
  }
  CHECK_THROWS_AS(r.next_below(0), ConfigError);
}
