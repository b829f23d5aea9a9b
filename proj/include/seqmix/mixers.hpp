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

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "seqmix/tensor.hpp"

namespace seqmix {

// A token sequence X of L tokens with D channels each. Every mixer maps a
// Seq to a Seq.
class Seq {
 public:
  explicit Seq(RealMat values);

  std::size_t len() const noexcept { return values_.rows(); }
  std::size_t dim() const noexcept { return values_.cols(); }
  const RealMat &values() const noexcept { return values_; }

  bool operator==(const Seq &) const = default;

 private:
  RealMat values_;
};

// Learned vs fixed mixing weights, and whether the input enters the weights.
enum class WeightKind { kLearned, kFixed };
enum class InputDependence { kIndependent, kDependent };

struct Taxonomy {
  WeightKind weights;
  InputDependence input;

  bool operator==(const Taxonomy &) const = default;
};

std::string to_string(const Taxonomy &t);

inline constexpr Taxonomy kLearnedIndependent{WeightKind::kLearned, InputDependence::kIndependent};
inline constexpr Taxonomy kLearnedDependent{WeightKind::kLearned, InputDependence::kDependent};
inline constexpr Taxonomy kFixedIndependent{WeightKind::kFixed, InputDependence::kIndependent};
inline constexpr Taxonomy kFixedDependent{WeightKind::kFixed, InputDependence::kDependent};

// The common token-mixing interface X -> X~. Implementations are immutable
// after construction, so `mix` may be called concurrently.
class Mixer {
 public:
  virtual ~Mixer() = default;
  virtual std::string_view name() const = 0;
  virtual Taxonomy taxonomy() const = 0;
  virtual Seq mix(const Seq &x) const = 0;
};

// ---------------------------------------------------------------------------
// Convolution

// Depthwise causal kernel w_0..w_{K-1}, shared by every channel.
struct ConvParams {
  std::vector<double> weights;

  std::size_t window() const noexcept { return weights.size(); }
};

enum class ConvPath { kMatrix, kFft };

// Lower-triangular banded L x L matrix W^C with W^C(t, t-k) = w_k.
RealMat conv_matrix(const ConvParams &p, std::size_t len);

// Y_t = sum_k w_k X_{t-k} with X_{<0} = 0, per channel.
Seq conv_mix(const Seq &x, const ConvParams &p, ConvPath path = ConvPath::kFft);

// ---------------------------------------------------------------------------
// Attention

struct AttnParams {
  RealMat w_query;  // D x M
  RealMat w_key;    // D x M
  RealMat w_value;  // D x M
  std::size_t heads = 1;
  std::optional<RealMat> w_out;  // M x D; without it heads are only concatenated

  std::size_t model_dim() const noexcept { return w_query.cols(); }
  std::size_t head_dim() const noexcept { return heads == 0 ? 0 : w_query.cols() / heads; }
  std::size_t out_dim() const noexcept { return w_out ? w_out->cols() : model_dim(); }

  // Throws ShapeError / ParamError unless the weights fit a D-channel input.
  void validate(std::size_t dim) const;

  // Gaussian weights scaled by 1/sqrt(D) so scores stay O(1).
  static AttnParams random(std::size_t dim, std::size_t heads, std::size_t head_dim, bool with_output,
                           std::uint64_t seed);
};

// Softmax-normalized (normalize = true) or raw A'XW^V attention. No masking
// and no 1/sqrt(d) scaling.
Seq attention_mix(const Seq &x, const AttnParams &p, bool normalize = true);

// The L x L weight matrix of one head (softmax rows, or raw scores).
RealMat attention_weights(const Seq &x, const AttnParams &p, std::size_t head, bool normalize = true);

// Single-head raw attention evaluated as [X G^W X^T] X W^V with
// G^W = W^Q W^K^T.
Seq gram_form_attention(const Seq &x, const AttnParams &p);

namespace detail {

// Q, K, V projections for one head, laid out for the row kernel below.
struct HeadProjection {
  RealMat query;   // rows x d_h
  RealMat key_t;   // d_h x L (transposed keys)
  RealMat value;   // L x d_h
};

// Columns [head*d_h, (head+1)*d_h) of a projected block.
RealMat head_columns(const RealMat &projected, std::size_t head, std::size_t head_dim);

// One output row of one head: scores = q K^T, optional stabilized softmax,
// out = scores V. `scores` receives the (normalized) weight row. Both the
// single-device and the distributed paths go through this function, which
// makes them bit-identical.
void attend_row(std::span<const double> q, const RealMat &key_t, const RealMat &value, bool normalize,
                std::span<double> scores, std::span<double> out, std::size_t row, std::size_t head);

}  // namespace detail

// ---------------------------------------------------------------------------
// Kernelized attention

class FeatureMap {
 public:
  enum class Kind { kEluPlusOne, kRandomFeatures };

  static FeatureMap elu_plus_one() { return FeatureMap(Kind::kEluPlusOne, 0, 0); }
  // phi(x)_r = exp(w_r . x - |x|^2 / 2) / sqrt(R), w_r ~ N(0, I) from seed.
  static FeatureMap random_features(std::size_t count, std::uint64_t seed);

  Kind kind() const noexcept { return kind_; }
  std::size_t features(std::size_t dim) const noexcept { return kind_ == Kind::kEluPlusOne ? dim : count_; }

  // L x R nonnegative feature matrix. Throws NumericError on overflow.
  RealMat apply(const RealMat &x) const;

 private:
  FeatureMap(Kind kind, std::size_t count, std::uint64_t seed) : kind_(kind), count_(count), seed_(seed) {}

  Kind kind_;
  std::size_t count_;
  std::uint64_t seed_;
};

// phi(X) (phi(X)^T X), right-associated, O(L R D). With normalize the row t
// is divided by sum_j k(x_t, x_j).
Seq kernel_attention_mix(const Seq &x, const FeatureMap &fm, bool normalize = true);

// Same quantity through the explicit L x L kernel matrix phi(X) phi(X)^T.
Seq kernel_attention_reference(const Seq &x, const FeatureMap &fm, bool normalize = true);

// ---------------------------------------------------------------------------
// MLP mixing

enum class Nonlinearity { kNone, kGelu };

double gelu(double v) noexcept;

struct MlpParams {
  // Z = W_p X W_c.
  struct Dense {
    RealMat token;    // L x L
    RealMat channel;  // D x D
  };
  // X' = W^{p2} f(W^{p1} X), Z = f(X' W^{c1}) W^{c2}.
  struct Factored {
    RealMat token_in;     // P x L
    RealMat token_out;    // L x P
    RealMat channel_in;   // D x C
    RealMat channel_out;  // C x D
    Nonlinearity nonlinearity = Nonlinearity::kNone;
  };

  std::variant<Dense, Factored> weights;

  // Dense W_p = W^{p2} W^{p1}, W_c = W^{c1} W^{c2}. Only valid without a
  // nonlinearity.
  MlpParams collapsed() const;

  static MlpParams random_factored(std::size_t len, std::size_t dim, std::size_t token_hidden,
                                   std::size_t channel_hidden, Nonlinearity f, std::uint64_t seed);
};

Seq mlp_mix(const Seq &x, const MlpParams &p);

// ---------------------------------------------------------------------------
// Fourier mixing

enum class FourierPath { kFft, kVandermonde };
enum class DftOrder { kEmbeddingFirst, kSequenceFirst };

// F^s X F^h with unitary (1/sqrt n) Vandermonde factors.
ComplexMat fourier_transform_2d(const RealMat &x, FourierPath path = FourierPath::kFft,
                                DftOrder order = DftOrder::kEmbeddingFirst);

// Re{F^s X F^h}. Parameterless.
Seq fnet_mix(const Seq &x, FourierPath path = FourierPath::kFft, DftOrder order = DftOrder::kEmbeddingFirst);

// ---------------------------------------------------------------------------
// Mixer adapters

class ConvMixer final : public Mixer {
 public:
  explicit ConvMixer(ConvParams p, ConvPath path = ConvPath::kFft) : p_(std::move(p)), path_(path) {}
  std::string_view name() const override { return "conv"; }
  Taxonomy taxonomy() const override { return kLearnedIndependent; }
  Seq mix(const Seq &x) const override { return conv_mix(x, p_, path_); }

 private:
  ConvParams p_;
  ConvPath path_;
};

class AttentionMixer final : public Mixer {
 public:
  explicit AttentionMixer(AttnParams p, bool normalize = true) : p_(std::move(p)), normalize_(normalize) {}
  std::string_view name() const override { return "attn"; }
  Taxonomy taxonomy() const override { return kLearnedDependent; }
  Seq mix(const Seq &x) const override { return attention_mix(x, p_, normalize_); }

 private:
  AttnParams p_;
  bool normalize_;
};

// A static kernel replaces the learned projections, so the weights are fixed
// but still computed from the input.
class KernelAttentionMixer final : public Mixer {
 public:
  explicit KernelAttentionMixer(FeatureMap fm, bool normalize = true) : fm_(fm), normalize_(normalize) {}
  std::string_view name() const override { return "kernel-attn"; }
  Taxonomy taxonomy() const override { return kFixedDependent; }
  Seq mix(const Seq &x) const override { return kernel_attention_mix(x, fm_, normalize_); }

 private:
  FeatureMap fm_;
  bool normalize_;
};

class MlpMixer final : public Mixer {
 public:
  explicit MlpMixer(MlpParams p) : p_(std::move(p)) {}
  std::string_view name() const override { return "mlp"; }
  Taxonomy taxonomy() const override { return kLearnedIndependent; }
  Seq mix(const Seq &x) const override { return mlp_mix(x, p_); }

 private:
  MlpParams p_;
};

class FourierMixer final : public Mixer {
 public:
  explicit FourierMixer(FourierPath path = FourierPath::kFft) : path_(path) {}
  std::string_view name() const override { return "fnet"; }
  Taxonomy taxonomy() const override { return kFixedIndependent; }
  Seq mix(const Seq &x) const override { return fnet_mix(x, path_); }

 private:
  FourierPath path_;
};

}  // namespace seqmix
