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
#include "seqmix/mixers.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "seqmix/random.hpp"

namespace seqmix {

Seq::Seq(RealMat values) : values_(std::move(values)) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw ShapeError("sequence must have at least one token and one channel, got " + values_.shape_string());
  }
}

std::string to_string(const Taxonomy &t) {
  return std::string(t.weights == WeightKind::kLearned ? "learned" : "fixed") + ", input-" +
         (t.input == InputDependence::kIndependent ? "independent" : "dependent");
}

// ---------------------------------------------------------------------------

RealMat conv_matrix(const ConvParams &p, std::size_t len) {
  RealMat w(len, len);
  for (std::size_t t = 0; t < len; ++t) {
    for (std::size_t k = 0; k < p.window() && k <= t; ++k) w(t, t - k) = p.weights[k];
  }
  return w;
}

Seq conv_mix(const Seq &x, const ConvParams &p, ConvPath path) {
  if (p.window() == 0) throw ParamError("conv_mix: empty kernel");
  if (p.window() > x.len()) {
    throw ParamError("conv_mix: window " + std::to_string(p.window()) + " exceeds sequence length " +
                     std::to_string(x.len()));
  }
  if (path == ConvPath::kMatrix) return Seq(matmul(conv_matrix(p, x.len()), x.values()));
  const RealMat kernel(p.window(), 1, p.weights);
  return Seq(causal_convolve_columns(kernel, x.values()));
}

// ---------------------------------------------------------------------------

void AttnParams::validate(std::size_t dim) const {
  if (heads == 0) throw ParamError("attention: head count must be positive");
  for (const RealMat *w : {&w_query, &w_key, &w_value}) {
    if (w->rows() != dim || w->cols() != w_query.cols()) {
      throw ShapeError("attention: projection " + w->shape_string() + " does not fit input width " +
                       std::to_string(dim) + " and model width " + std::to_string(w_query.cols()));
    }
  }
  if (model_dim() == 0 || model_dim() % heads != 0) {
    throw ParamError("attention: model width " + std::to_string(model_dim()) + " not divisible into " +
                     std::to_string(heads) + " heads");
  }
  if (w_out && w_out->rows() != model_dim()) {
    throw ShapeError("attention: output projection " + w_out->shape_string() + " expects " +
                     std::to_string(model_dim()) + " rows");
  }
}

AttnParams AttnParams::random(std::size_t dim, std::size_t heads, std::size_t head_dim, bool with_output,
                              std::uint64_t seed) {
  auto engine = make_engine(seed, Stream::kAttention);
  const double s = 1.0 / std::sqrt(static_cast<double>(dim));
  const std::size_t m = heads * head_dim;
  AttnParams p;
  p.heads = heads;
  p.w_query = random_normal(dim, m, engine, s);
  p.w_key = random_normal(dim, m, engine, s);
  p.w_value = random_normal(dim, m, engine, s);
  if (with_output) p.w_out = random_normal(m, dim, engine, 1.0 / std::sqrt(static_cast<double>(m)));
  return p;
}

namespace detail {

RealMat head_columns(const RealMat &projected, std::size_t head, std::size_t head_dim) {
  return slice_cols(projected, head * head_dim, (head + 1) * head_dim);
}

void attend_row(std::span<const double> q, const RealMat &key_t, const RealMat &value, bool normalize,
                std::span<double> scores, std::span<double> out, std::size_t row, std::size_t head) {
  const std::size_t len = key_t.cols();
  const std::size_t dh = key_t.rows();
  std::fill(scores.begin(), scores.end(), 0.0);
  for (std::size_t k = 0; k < dh; ++k) {
    const double qk = q[k];
    const double *krow = key_t.row(k).data();
    for (std::size_t j = 0; j < len; ++j) scores[j] += qk * krow[j];
  }

  auto numeric_failure = [&] {
    return NumericError("attention: non-finite scores in row " + std::to_string(row) + " of head " +
                        std::to_string(head));
  };
  if (normalize) {
    const double peak = *std::max_element(scores.begin(), scores.end());
    if (!std::isfinite(peak)) throw numeric_failure();
    double sum = 0.0;
    for (std::size_t j = 0; j < len; ++j) {
      scores[j] = std::exp(scores[j] - peak);
      sum += scores[j];
    }
    if (!std::isfinite(sum)) throw numeric_failure();
    for (std::size_t j = 0; j < len; ++j) scores[j] /= sum;
  } else if (!std::all_of(scores.begin(), scores.end(), [](double v) { return std::isfinite(v); })) {
    throw numeric_failure();
  }

  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t j = 0; j < len; ++j) {
    const double a = scores[j];
    const double *vrow = value.row(j).data();
    for (std::size_t c = 0; c < dh; ++c) out[c] += a * vrow[c];
  }
}

}  // namespace detail

namespace {

detail::HeadProjection project_head(const RealMat &q, const RealMat &k, const RealMat &v, std::size_t head,
                                    std::size_t dh) {
  return {detail::head_columns(q, head, dh), detail::head_columns(k, head, dh).transposed(),
          detail::head_columns(v, head, dh)};
}

}  // namespace

Seq attention_mix(const Seq &x, const AttnParams &p, bool normalize) {
  p.validate(x.dim());
  const RealMat q = matmul(x.values(), p.w_query);
  const RealMat k = matmul(x.values(), p.w_key);
  const RealMat v = matmul(x.values(), p.w_value);
  const std::size_t len = x.len(), dh = p.head_dim();

  RealMat concat(len, p.model_dim());
  std::vector<double> scores(len), out(dh);
  for (std::size_t h = 0; h < p.heads; ++h) {
    const auto proj = project_head(q, k, v, h, dh);
    for (std::size_t t = 0; t < len; ++t) {
      detail::attend_row(proj.query.row(t), proj.key_t, proj.value, normalize, scores, out, t, h);
      std::copy(out.begin(), out.end(), concat.row(t).begin() + static_cast<std::ptrdiff_t>(h * dh));
    }
  }
  return Seq(p.w_out ? matmul(concat, *p.w_out) : std::move(concat));
}

RealMat attention_weights(const Seq &x, const AttnParams &p, std::size_t head, bool normalize) {
  p.validate(x.dim());
  if (head >= p.heads) {
    throw ParamError("attention_weights: head " + std::to_string(head) + " of " + std::to_string(p.heads));
  }
  const std::size_t dh = p.head_dim();
  const RealMat q = detail::head_columns(matmul(x.values(), p.w_query), head, dh);
  const RealMat kt = detail::head_columns(matmul(x.values(), p.w_key), head, dh).transposed();
  const RealMat v = detail::head_columns(matmul(x.values(), p.w_value), head, dh);
  RealMat weights(x.len(), x.len());
  std::vector<double> out(dh);
  for (std::size_t t = 0; t < x.len(); ++t) {
    detail::attend_row(q.row(t), kt, v, normalize, weights.row(t), out, t, head);
  }
  return weights;
}

Seq gram_form_attention(const Seq &x, const AttnParams &p) {
  p.validate(x.dim());
  if (p.heads != 1) throw ParamError("gram_form_attention: requires a single head");
  const RealMat gram = matmul(p.w_query, p.w_key.transposed());  // D x D
  const RealMat scores = matmul(matmul(x.values(), gram), x.values().transposed());
  if (!all_finite(scores)) throw NumericError("gram_form_attention: non-finite scores");
  RealMat z = matmul(matmul(scores, x.values()), p.w_value);
  return Seq(p.w_out ? matmul(z, *p.w_out) : std::move(z));
}

// ---------------------------------------------------------------------------

FeatureMap FeatureMap::random_features(std::size_t count, std::uint64_t seed) {
  if (count == 0) throw ParamError("random feature map needs at least one feature");
  return FeatureMap(Kind::kRandomFeatures, count, seed);
}

RealMat FeatureMap::apply(const RealMat &x) const {
  if (kind_ == Kind::kEluPlusOne) {
    RealMat phi = x;
    for (double &v : phi.data()) v = v > 0.0 ? v + 1.0 : std::exp(v);
    if (!all_finite(phi)) throw NumericError("feature map elu+1: non-finite features");
    return phi;
  }
  const RealMat w = random_normal(x.cols(), count_, seed_, Stream::kFeatureMap, x.cols());
  RealMat phi = matmul(x, w);
  const double norm = 1.0 / std::sqrt(static_cast<double>(count_));
  for (std::size_t t = 0; t < x.rows(); ++t) {
    double sq = 0.0;
    for (double v : x.row(t)) sq += v * v;
    for (double &v : phi.row(t)) v = std::exp(v - 0.5 * sq) * norm;
  }
  if (!all_finite(phi)) throw NumericError("random feature map: non-finite features");
  return phi;
}

namespace {

Seq normalize_rows(RealMat numer, std::span<const double> denom) {
  for (std::size_t t = 0; t < numer.rows(); ++t) {
    if (!(denom[t] > 0.0) || !std::isfinite(denom[t])) {
      throw NumericError("kernel attention: degenerate kernel row sum in row " + std::to_string(t));
    }
    for (double &v : numer.row(t)) v /= denom[t];
  }
  if (!all_finite(numer)) throw NumericError("kernel attention: non-finite output");
  return Seq(std::move(numer));
}

}  // namespace

Seq kernel_attention_mix(const Seq &x, const FeatureMap &fm, bool normalize) {
  const RealMat phi = fm.apply(x.values());
  const RealMat phi_t = phi.transposed();
  RealMat numer = matmul(phi, matmul(phi_t, x.values()));
  if (!normalize) {
    if (!all_finite(numer)) throw NumericError("kernel attention: non-finite output");
    return Seq(std::move(numer));
  }
  std::vector<double> z(phi.cols(), 0.0);
  for (std::size_t t = 0; t < phi.rows(); ++t)
    for (std::size_t r = 0; r < phi.cols(); ++r) z[r] += phi(t, r);
  std::vector<double> denom(phi.rows(), 0.0);
  for (std::size_t t = 0; t < phi.rows(); ++t)
    for (std::size_t r = 0; r < phi.cols(); ++r) denom[t] += phi(t, r) * z[r];
  return normalize_rows(std::move(numer), denom);
}

Seq kernel_attention_reference(const Seq &x, const FeatureMap &fm, bool normalize) {
  const RealMat phi = fm.apply(x.values());
  const RealMat kernel = matmul(phi, phi.transposed());
  RealMat numer = matmul(kernel, x.values());
  if (!normalize) {
    if (!all_finite(numer)) throw NumericError("kernel attention: non-finite output");
    return Seq(std::move(numer));
  }
  std::vector<double> denom(kernel.rows(), 0.0);
  for (std::size_t t = 0; t < kernel.rows(); ++t)
    for (double v : kernel.row(t)) denom[t] += v;
  return normalize_rows(std::move(numer), denom);
}

// ---------------------------------------------------------------------------

double gelu(double v) noexcept { return 0.5 * v * (1.0 + std::erf(v / std::numbers::sqrt2)); }

namespace {

void apply_nonlinearity(RealMat &m, Nonlinearity f) {
  if (f == Nonlinearity::kGelu) {
    for (double &v : m.data()) v = gelu(v);
  }
}

void expect_shape(const RealMat &m, std::size_t rows, std::size_t cols, const char *what) {
  if (m.rows() != rows || m.cols() != cols) {
    throw ShapeError(std::string("mlp_mix: ") + what + " is " + m.shape_string() + ", expected " +
                     std::to_string(rows) + "x" + std::to_string(cols));
  }
}

}  // namespace

MlpParams MlpParams::collapsed() const {
  if (const auto *dense = std::get_if<Dense>(&weights)) return MlpParams{*dense};
  const auto &f = std::get<Factored>(weights);
  if (f.nonlinearity != Nonlinearity::kNone) {
    throw ParamError("mlp: factors with a nonlinearity do not collapse to W_p X W_c");
  }
  return MlpParams{Dense{matmul(f.token_out, f.token_in), matmul(f.channel_in, f.channel_out)}};
}

MlpParams MlpParams::random_factored(std::size_t len, std::size_t dim, std::size_t token_hidden,
                                     std::size_t channel_hidden, Nonlinearity f, std::uint64_t seed) {
  auto engine = make_engine(seed, Stream::kMlp);
  auto fan = [](std::size_t n) { return 1.0 / std::sqrt(static_cast<double>(n)); };
  Factored w;
  w.token_in = random_normal(token_hidden, len, engine, fan(len));
  w.token_out = random_normal(len, token_hidden, engine, fan(token_hidden));
  w.channel_in = random_normal(dim, channel_hidden, engine, fan(dim));
  w.channel_out = random_normal(channel_hidden, dim, engine, fan(channel_hidden));
  w.nonlinearity = f;
  return MlpParams{std::move(w)};
}

Seq mlp_mix(const Seq &x, const MlpParams &p) {
  const std::size_t len = x.len(), dim = x.dim();
  if (const auto *dense = std::get_if<MlpParams::Dense>(&p.weights)) {
    expect_shape(dense->token, len, len, "token mixing matrix");
    expect_shape(dense->channel, dim, dim, "channel mixing matrix");
    return Seq(matmul(matmul(dense->token, x.values()), dense->channel));
  }
  const auto &f = std::get<MlpParams::Factored>(p.weights);
  expect_shape(f.token_in, f.token_in.rows(), len, "token input factor");
  expect_shape(f.token_out, len, f.token_in.rows(), "token output factor");
  expect_shape(f.channel_in, dim, f.channel_in.cols(), "channel input factor");
  expect_shape(f.channel_out, f.channel_in.cols(), dim, "channel output factor");

  RealMat hidden = matmul(f.token_in, x.values());
  apply_nonlinearity(hidden, f.nonlinearity);
  const RealMat token_mixed = matmul(f.token_out, hidden);
  RealMat channel_hidden = matmul(token_mixed, f.channel_in);
  apply_nonlinearity(channel_hidden, f.nonlinearity);
  return Seq(matmul(channel_hidden, f.channel_out));
}

// ---------------------------------------------------------------------------

namespace {

std::vector<Complex> roots_of_unity(std::size_t n) {
  std::vector<Complex> roots(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double angle = -2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
    roots[k] = Complex(std::cos(angle), std::sin(angle));
  }
  return roots;
}

// F m with F(t, k) = w^{tk} / sqrt(n), n = m.rows(). Entries are read from
// the root table instead of materializing the n x n matrix.
ComplexMat vandermonde_left(const ComplexMat &m) {
  const std::size_t n = m.rows(), cols = m.cols();
  const auto roots = roots_of_unity(n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  ComplexMat out(n, cols);
  for (std::size_t t = 0; t < n; ++t) {
    Complex *dst = out.row(t).data();
    for (std::size_t k = 0; k < n; ++k) {
      const Complex w = roots[(t * k) % n] * norm;
      const Complex *src = m.row(k).data();
      for (std::size_t j = 0; j < cols; ++j) dst[j] += w * src[j];
    }
  }
  return out;
}

// m F with F(d, j) = w^{dj} / sqrt(n), n = m.cols().
ComplexMat vandermonde_right(const ComplexMat &m) {
  const std::size_t n = m.cols();
  const auto roots = roots_of_unity(n);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  ComplexMat out(m.rows(), n);
  for (std::size_t t = 0; t < m.rows(); ++t) {
    for (std::size_t j = 0; j < n; ++j) {
      Complex acc{};
      for (std::size_t d = 0; d < n; ++d) acc += m(t, d) * roots[(d * j) % n];
      out(t, j) = acc * norm;
    }
  }
  return out;
}

}  // namespace

ComplexMat fourier_transform_2d(const RealMat &x, FourierPath path, DftOrder order) {
  if (x.empty()) throw ShapeError("fourier_transform_2d: empty input " + x.shape_string());
  ComplexMat z = to_complex(x);
  const bool embedding_first = order == DftOrder::kEmbeddingFirst;
  if (path == FourierPath::kVandermonde) {
    return embedding_first ? vandermonde_left(vandermonde_right(z)) : vandermonde_right(vandermonde_left(z));
  }
  z = embedding_first ? dft(dft(z, Axis::kCols), Axis::kRows) : dft(dft(z, Axis::kRows), Axis::kCols);
  const double norm = 1.0 / std::sqrt(static_cast<double>(x.rows() * x.cols()));
  for (auto &v : z.data()) v *= norm;
  return z;
}

Seq fnet_mix(const Seq &x, FourierPath path, DftOrder order) {
  return Seq(real_part(fourier_transform_2d(x.values(), path, order)));
}

}  // namespace seqmix
