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
#include "seqmix/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace seqmix {

const char *error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::kShape: return "shape error";
    case ErrorCode::kParam: return "parameter error";
    case ErrorCode::kNumeric: return "numeric error";
    case ErrorCode::kProtocol: return "protocol error";
    case ErrorCode::kLayout: return "layout error";
    case ErrorCode::kIo: return "I/O error";
    case ErrorCode::kUsage: return "usage error";
  }
  return "error";
}

namespace {

template <typename T>
Matrix<T> matmul_impl(const Matrix<T> &a, const Matrix<T> &b) {
  if (a.cols() != b.rows()) {
    throw ShapeError("matmul: cannot multiply " + a.shape_string() + " by " + b.shape_string());
  }
  const std::size_t n = a.rows(), inner = a.cols(), m = b.cols();
  Matrix<T> c(n, m);
  // i-k-j order: each c(i,j) still accumulates k = 0, 1, ... in sequence.
  for (std::size_t i = 0; i < n; ++i) {
    T *out = c.row(i).data();
    const T *arow = a.row(i).data();
    for (std::size_t k = 0; k < inner; ++k) {
      const T aik = arow[k];
      const T *brow = b.row(k).data();
      for (std::size_t j = 0; j < m; ++j) out[j] += aik * brow[j];
    }
  }
  return c;
}

void require_same_shape(const RealMat &a, const RealMat &b, const char *what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw ShapeError(std::string(what) + ": shapes " + a.shape_string() + " and " + b.shape_string() +
                     " differ");
  }
}

}  // namespace

RealMat matmul(const RealMat &a, const RealMat &b) { return matmul_impl(a, b); }
ComplexMat matmul(const ComplexMat &a, const ComplexMat &b) { return matmul_impl(a, b); }

RealMat add(const RealMat &a, const RealMat &b) {
  require_same_shape(a, b, "add");
  RealMat c = a;
  auto out = c.data();
  auto rhs = b.data();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += rhs[i];
  return c;
}

RealMat scaled(const RealMat &a, double factor) {
  RealMat c = a;
  for (double &v : c.data()) v *= factor;
  return c;
}

RealMat slice_rows(const RealMat &a, std::size_t begin, std::size_t end) {
  if (begin > end || end > a.rows()) {
    throw ShapeError("slice_rows: range [" + std::to_string(begin) + "," + std::to_string(end) +
                     ") outside " + a.shape_string());
  }
  std::vector<double> data(a.data().begin() + static_cast<std::ptrdiff_t>(begin * a.cols()),
                           a.data().begin() + static_cast<std::ptrdiff_t>(end * a.cols()));
  return RealMat(end - begin, a.cols(), std::move(data));
}

RealMat slice_cols(const RealMat &a, std::size_t begin, std::size_t end) {
  if (begin > end || end > a.cols()) {
    throw ShapeError("slice_cols: range [" + std::to_string(begin) + "," + std::to_string(end) +
                     ") outside " + a.shape_string());
  }
  RealMat out(a.rows(), end - begin);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto src = a.row(r).subspan(begin, end - begin);
    std::copy(src.begin(), src.end(), out.row(r).begin());
  }
  return out;
}

bool all_finite(const RealMat &a) noexcept {
  return std::all_of(a.data().begin(), a.data().end(), [](double v) { return std::isfinite(v); });
}

double max_abs(const RealMat &a) noexcept {
  double m = 0.0;
  for (double v : a.data()) m = std::max(m, std::abs(v));
  return m;
}

double max_abs_diff(const RealMat &a, const RealMat &b) {
  require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  auto x = a.data();
  auto y = b.data();
  for (std::size_t i = 0; i < x.size(); ++i) m = std::max(m, std::abs(x[i] - y[i]));
  return m;
}

double relative_error(const RealMat &actual, const RealMat &reference) {
  const double diff = max_abs_diff(actual, reference);
  const double scale = max_abs(reference);
  return scale > 0.0 ? diff / scale : diff;
}

ComplexMat to_complex(const RealMat &a) {
  ComplexMat c(a.rows(), a.cols());
  std::transform(a.data().begin(), a.data().end(), c.data().begin(),
                 [](double v) { return Complex(v, 0.0); });
  return c;
}

RealMat real_part(const ComplexMat &a) {
  RealMat r(a.rows(), a.cols());
  std::transform(a.data().begin(), a.data().end(), r.data().begin(),
                 [](const Complex &v) { return v.real(); });
  return r;
}

RealMat solve(const RealMat &a, const RealMat &b) {
  if (a.rows() != a.cols()) throw ShapeError("solve: system matrix " + a.shape_string() + " is not square");
  if (b.rows() != a.rows()) {
    throw ShapeError("solve: right-hand side " + b.shape_string() + " does not match " + a.shape_string());
  }
  const std::size_t n = a.rows(), m = b.cols();
  RealMat lu = a;
  RealMat x = b;
  const double scale = std::max(max_abs(a), std::numeric_limits<double>::min());
  const double tiny = scale * static_cast<double>(n) * std::numeric_limits<double>::epsilon();
  double max_pivot = 0.0, min_pivot = std::numeric_limits<double>::infinity();

  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (std::abs(lu(r, col)) > std::abs(lu(pivot, col))) pivot = r;
    }
    const double p = std::abs(lu(pivot, col));
    max_pivot = std::max(max_pivot, p);
    min_pivot = std::min(min_pivot, p);
    if (p <= tiny) {
      const double cond = p > 0.0 ? max_pivot / p : std::numeric_limits<double>::infinity();
      throw NumericError("solve: singular system matrix (pivot " + std::to_string(p) + " in column " +
                         std::to_string(col) + ", condition estimate " + std::to_string(cond) + ")");
    }
    if (pivot != col) {
      std::swap_ranges(lu.row(col).begin(), lu.row(col).end(), lu.row(pivot).begin());
      std::swap_ranges(x.row(col).begin(), x.row(col).end(), x.row(pivot).begin());
    }
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = lu(r, col) / lu(col, col);
      if (f == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) lu(r, c) -= f * lu(col, c);
      for (std::size_t c = 0; c < m; ++c) x(r, c) -= f * x(col, c);
    }
  }
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t c = 0; c < m; ++c) {
      double s = x(i, c);
      for (std::size_t k = i + 1; k < n; ++k) s -= lu(i, k) * x(k, c);
      x(i, c) = s / lu(i, i);
    }
  }
  return x;
}

// ---------------------------------------------------------------------------

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_power_of_two(std::size_t n) noexcept {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

FftPlan::FftPlan(std::size_t n) : n_(n) {
  if (!is_power_of_two(n)) throw ShapeError("FftPlan: length " + std::to_string(n) + " is not a power of two");
  twiddles_.resize(n / 2);
  for (std::size_t k = 0; k < n / 2; ++k) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    twiddles_[k] = Complex(std::cos(angle), std::sin(angle));
  }
  bit_reverse_.resize(n);
  std::size_t bits = 0;
  while ((std::size_t{1} << bits) < n) ++bits;
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t r = 0;
    for (std::size_t b = 0; b < bits; ++b) r |= ((i >> b) & 1u) << (bits - 1 - b);
    bit_reverse_[i] = r;
  }
}

void FftPlan::run(std::span<Complex> v, bool inverse) const {
  if (v.size() != n_) {
    throw ShapeError("FftPlan: plan for length " + std::to_string(n_) + " applied to length " +
                     std::to_string(v.size()));
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if (i < bit_reverse_[i]) std::swap(v[i], v[bit_reverse_[i]]);
  }
  for (std::size_t len = 2; len <= n_; len <<= 1) {
    const std::size_t half = len / 2;
    const std::size_t stride = n_ / len;
    for (std::size_t start = 0; start < n_; start += len) {
      for (std::size_t j = 0; j < half; ++j) {
        Complex w = twiddles_[j * stride];
        if (inverse) w = std::conj(w);
        const Complex u = v[start + j];
        const Complex t = w * v[start + j + half];
        v[start + j] = u + t;
        v[start + j + half] = u - t;
      }
    }
  }
}

std::vector<Complex> dft_direct(std::span<const Complex> v, bool inverse) {
  const std::size_t n = v.size();
  std::vector<Complex> roots(n);
  const double sign = inverse ? 2.0 : -2.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double angle = sign * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    roots[k] = Complex(std::cos(angle), std::sin(angle));
  }
  std::vector<Complex> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    Complex acc{};
    for (std::size_t k = 0; k < n; ++k) acc += roots[(j * k) % n] * v[k];
    out[j] = acc;
  }
  return out;
}

namespace {

ComplexMat transform(const ComplexMat &v, Axis axis, bool inverse) {
  if (v.empty()) throw ShapeError("dft: empty matrix " + v.shape_string());
  const std::size_t n = axis == Axis::kRows ? v.rows() : v.cols();
  const std::size_t count = axis == Axis::kRows ? v.cols() : v.rows();
  ComplexMat out = v;
  std::vector<Complex> buf(n);
  const bool fast = is_power_of_two(n);
  const FftPlan plan(fast ? n : 1);
  for (std::size_t s = 0; s < count; ++s) {
    for (std::size_t i = 0; i < n; ++i) buf[i] = axis == Axis::kRows ? out(i, s) : out(s, i);
    if (fast) {
      inverse ? plan.inverse_unscaled(buf) : plan.forward(buf);
    } else {
      buf = dft_direct(buf, inverse);
    }
    if (inverse) {
      for (auto &z : buf) z /= static_cast<double>(n);
    }
    for (std::size_t i = 0; i < n; ++i) (axis == Axis::kRows ? out(i, s) : out(s, i)) = buf[i];
  }
  return out;
}

}  // namespace

ComplexMat dft(const ComplexMat &v, Axis axis) { return transform(v, axis, false); }
ComplexMat idft(const ComplexMat &v, Axis axis) { return transform(v, axis, true); }

std::vector<double> circular_convolve(std::span<const double> f, std::span<const double> g) {
  if (f.size() != g.size()) {
    throw ShapeError("circular_convolve: lengths " + std::to_string(f.size()) + " and " +
                     std::to_string(g.size()) + " differ");
  }
  if (f.empty()) throw ShapeError("circular_convolve: empty input");
  ComplexMat ff(1, f.size()), gg(1, g.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    ff(0, i) = f[i];
    gg(0, i) = g[i];
  }
  ff = dft(ff, Axis::kCols);
  gg = dft(gg, Axis::kCols);
  for (std::size_t i = 0; i < f.size(); ++i) ff(0, i) *= gg(0, i);
  const ComplexMat y = idft(ff, Axis::kCols);
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = y(0, i).real();
  return out;
}

std::vector<double> causal_convolve(std::span<const double> kernel, std::span<const double> signal) {
  RealMat k(kernel.size(), 1, std::vector<double>(kernel.begin(), kernel.end()));
  RealMat x(signal.size(), 1, std::vector<double>(signal.begin(), signal.end()));
  return causal_convolve_columns(k, x).column(0);
}

RealMat causal_convolve_columns(const RealMat &kernel, const RealMat &x) {
  if (kernel.cols() != 1 && kernel.cols() != x.cols()) {
    throw ShapeError("causal_convolve: kernel " + kernel.shape_string() + " does not match signal " +
                     x.shape_string());
  }
  if (kernel.rows() == 0 || x.rows() == 0) throw ShapeError("causal_convolve: empty input");
  const std::size_t len = x.rows();
  const std::size_t taps = std::min(kernel.rows(), len);
  const std::size_t n = next_power_of_two(len + taps - 1);
  const FftPlan plan(n);
  const double inv_n = 1.0 / static_cast<double>(n);

  auto transformed_kernel = [&](std::size_t c) {
    std::vector<Complex> buf(n);
    for (std::size_t i = 0; i < taps; ++i) buf[i] = kernel(i, c);
    plan.forward(buf);
    return buf;
  };

  RealMat y(len, x.cols());
  std::vector<Complex> shared;
  if (kernel.cols() == 1) shared = transformed_kernel(0);
  std::vector<Complex> buf(n);
  for (std::size_t c = 0; c < x.cols(); ++c) {
    const std::vector<Complex> spectrum = kernel.cols() == 1 ? std::vector<Complex>{} : transformed_kernel(c);
    const std::vector<Complex> &kf = kernel.cols() == 1 ? shared : spectrum;
    std::fill(buf.begin(), buf.end(), Complex{});
    for (std::size_t i = 0; i < len; ++i) buf[i] = x(i, c);
    plan.forward(buf);
    for (std::size_t i = 0; i < n; ++i) buf[i] *= kf[i];
    plan.inverse_unscaled(buf);
    for (std::size_t i = 0; i < len; ++i) y(i, c) = buf[i].real() * inv_n;
  }
  return y;
}

}  // namespace seqmix
