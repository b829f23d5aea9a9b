/*
 * Copyright (c) 2026, The seqmix Authors. All rights reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "seqmix/error.hpp"

namespace seqmix {

using Complex = std::complex<double>;

// Dense row-major matrix. Element storage is a plain vector so that copies
// and comparisons are value semantics all the way down.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
      : rows_(rows), cols_(cols), data_(std::move(data)) {
    if (data_.size() != rows_ * cols_) {
      throw ShapeError("matrix " + std::to_string(rows_) + "x" + std::to_string(cols_) +
                       " given " + std::to_string(data_.size()) + " elements");
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T{1};
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }

  T &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T &operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<T> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const T> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  std::vector<T> column(std::size_t c) const {
    std::vector<T> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
    return out;
  }
  void set_column(std::size_t c, std::span<const T> values) {
    for (std::size_t r = 0; r < rows_; ++r) (*this)(r, c) = values[r];
  }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  std::string shape_string() const { return std::to_string(rows_) + "x" + std::to_string(cols_); }

  bool operator==(const Matrix &) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RealMat = Matrix<double>;
using ComplexMat = Matrix<Complex>;

// Product with the shared index summed left to right, so every output entry
// is bit-reproducible and independent of the other rows in `a`.
RealMat matmul(const RealMat &a, const RealMat &b);
ComplexMat matmul(const ComplexMat &a, const ComplexMat &b);

RealMat add(const RealMat &a, const RealMat &b);
RealMat scaled(const RealMat &a, double factor);
RealMat slice_rows(const RealMat &a, std::size_t begin, std::size_t end);
RealMat slice_cols(const RealMat &a, std::size_t begin, std::size_t end);

bool all_finite(const RealMat &a) noexcept;
double max_abs(const RealMat &a) noexcept;
double max_abs_diff(const RealMat &a, const RealMat &b);
// max|a-b| / max|b|, falling back to the absolute difference when b is zero.
double relative_error(const RealMat &actual, const RealMat &reference);

ComplexMat to_complex(const RealMat &a);
RealMat real_part(const ComplexMat &a);

// Solves a * x = b by Gaussian elimination with partial pivoting.
// Throws NumericError (with a pivot-ratio condition estimate) when a is
// numerically singular.
RealMat solve(const RealMat &a, const RealMat &b);

// ---------------------------------------------------------------------------
// Fourier transforms

bool is_power_of_two(std::size_t n) noexcept;
std::size_t next_power_of_two(std::size_t n) noexcept;

// Iterative radix-2 Cooley-Tukey plan for one power-of-two length.
class FftPlan {
 public:
  explicit FftPlan(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  // Unnormalized transforms: forward uses exp(-2*pi*i*jk/n).
  void forward(std::span<Complex> v) const { run(v, false); }
  void inverse_unscaled(std::span<Complex> v) const { run(v, true); }

 private:
  void run(std::span<Complex> v, bool inverse) const;

  std::size_t n_;
  std::vector<Complex> twiddles_;
  std::vector<std::size_t> bit_reverse_;
};

// O(n^2) transform for any length, same sign convention as FftPlan.
std::vector<Complex> dft_direct(std::span<const Complex> v, bool inverse);

enum class Axis {
  kRows,  // transform along the row index (each column is one signal)
  kCols,  // transform along the column index (each row is one signal)
};

// Unnormalized forward DFT. Power-of-two lengths take the FFT path, other
// lengths the direct path.
ComplexMat dft(const ComplexMat &v, Axis axis);
// Inverse DFT including the 1/n factor.
ComplexMat idft(const ComplexMat &v, Axis axis);

// Circular convolution of equal-length real vectors via the transform,
// pointwise product and inverse transform.
std::vector<double> circular_convolve(std::span<const double> f, std::span<const double> g);

// y_t = sum_{j<=t} kernel_j * signal_{t-j} for t < |signal|, computed with a
// zero-padded FFT. Kernel entries past |signal| cannot reach the output.
std::vector<double> causal_convolve(std::span<const double> kernel, std::span<const double> signal);

// Column-wise causal convolution. `kernel` has either one column (shared by
// every column of x) or exactly x.cols() columns.
RealMat causal_convolve_columns(const RealMat &kernel, const RealMat &x);

}  // namespace seqmix
