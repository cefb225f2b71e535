// Copyright 2026 The dsgdlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Small dense linear algebra: a row-major matrix, a handful of vector
// kernels and a cyclic Jacobi eigensolver for symmetric matrices.

#ifndef DSGDLAB_LINALG_HPP_
#define DSGDLAB_LINALG_HPP_

#include <cstddef>
#include <span>
#include <vector>

namespace dsgdlab {

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  double& operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<double> row(std::size_t i) {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }

  std::span<double> flat() noexcept { return data_; }
  std::span<const double> flat() const noexcept { return data_; }

  bool all_finite() const noexcept;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix multiply(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);
std::vector<double> multiply(const Matrix& a, std::span<const double> v);

double dot(std::span<const double> a, std::span<const double> b);
double squared_norm(std::span<const double> a);
double norm(std::span<const double> a);
double squared_distance(std::span<const double> a, std::span<const double> b);
/// y += alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

/// Row average x̄ = (1/n) Σ_i x_i.
std::vector<double> row_mean(const Matrix& x);

double frobenius_squared(const Matrix& a);

struct SymmetricEigen {
  std::vector<double> values;  // sorted descending
  Matrix vectors;              // column j is the eigenvector of values[j]
  int sweeps = 0;
};

/// Cyclic Jacobi rotations.  Converges once the off-diagonal Frobenius norm
/// drops below `off_tol`; throws a numeric Error after `max_sweeps` sweeps.
SymmetricEigen jacobi_eigen(const Matrix& symmetric, double off_tol = 1e-12,
                            int max_sweeps = 100);

}  // namespace dsgdlab

#endif  // DSGDLAB_LINALG_HPP_
