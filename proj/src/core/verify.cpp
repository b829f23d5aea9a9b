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
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>

#include "seqmix/harness.hpp"
#include "seqmix/random.hpp"
#include "seqmix/sgconv.hpp"
#include "seqmix/ssm.hpp"

namespace seqmix {

namespace {

struct Check {
  const char *name;
  double tolerance;
  double (*run)(std::uint64_t seed, const VerifyOptions &options);
};

RealMat input(std::size_t len, std::size_t dim, std::uint64_t seed, std::uint64_t salt) {
  return random_normal(len, dim, seed, Stream::kVerify, salt);
}

double fft_vs_naive(std::uint64_t seed, const VerifyOptions &) {
  const std::size_t n = 256;
  const RealMat parts = input(n, 2, seed, 1);
  std::vector<Complex> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = Complex(parts(i, 0), parts(i, 1));
  const auto naive = dft_direct(v, false);
  FftPlan(n).forward(v);
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    diff = std::max(diff, std::abs(v[i] - naive[i]));
    scale = std::max(scale, std::abs(naive[i]));
  }
  return diff / scale;
}

double convolution_theorem(std::uint64_t seed, const VerifyOptions &) {
  const std::size_t n = 64;
  const RealMat fg = input(n, 2, seed, 2);
  const auto f = fg.column(0), g = fg.column(1);
  const auto fast = circular_convolve(f, g);
  double diff = 0.0, scale = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    double direct = 0.0;
    for (std::size_t k = 0; k < n; ++k) direct += f[k] * g[(t + n - k) % n];
    diff = std::max(diff, std::abs(fast[t] - direct));
    scale = std::max(scale, std::abs(direct));
  }
  return diff / scale;
}

double conv_matrix_vs_fft(std::uint64_t seed, const VerifyOptions &) {
  const Seq x(input(64, 4, seed, 3));
  const RealMat w = input(8, 1, seed, 4);
  const ConvParams p{{w.data().begin(), w.data().end()}};
  return max_abs_diff(conv_mix(x, p, ConvPath::kMatrix).values(), conv_mix(x, p, ConvPath::kFft).values());
}

double attention_row_stochastic(std::uint64_t seed, const VerifyOptions &options) {
  const Seq x(input(32, 8, seed, 5));
  const auto p = AttnParams::random(8, 2, 4, true, seed);
  double worst = 0.0;
  for (std::size_t h = 0; h < p.heads; ++h) {
    RealMat a = attention_weights(x, p, h, true);
    if (options.inject_softmax_fault && h == 0) a(0, 0) *= 1.001;
    for (std::size_t t = 0; t < a.rows(); ++t) {
      const auto row = a.row(t);
      worst = std::max(worst, std::abs(std::accumulate(row.begin(), row.end(), 0.0) - 1.0));
    }
  }
  return worst;
}

double gram_vs_attention(std::uint64_t seed, const VerifyOptions &) {
  const Seq x(input(12, 6, seed, 6));
  const auto p = AttnParams::random(6, 1, 6, false, seed);
  return max_abs_diff(gram_form_attention(x, p).values(), attention_mix(x, p, false).values());
}

double permutation_equivariance(std::uint64_t seed, const VerifyOptions &) {
  const std::size_t len = 16;
  const RealMat x = input(len, 8, seed, 7);
  const auto p = AttnParams::random(8, 2, 4, true, seed);
  std::vector<std::size_t> perm(len);
  std::iota(perm.begin(), perm.end(), 0);
  auto engine = make_engine(seed, Stream::kVerify, 8);
  std::shuffle(perm.begin(), perm.end(), engine);
  RealMat px(len, x.cols());
  for (std::size_t t = 0; t < len; ++t) std::copy(x.row(perm[t]).begin(), x.row(perm[t]).end(), px.row(t).begin());
  const RealMat base = attention_mix(Seq(x), p).values();
  const RealMat mixed = attention_mix(Seq(px), p).values();
  double diff = 0.0;
  for (std::size_t t = 0; t < len; ++t)
    for (std::size_t c = 0; c < base.cols(); ++c) diff = std::max(diff, std::abs(mixed(t, c) - base(perm[t], c)));
  return diff;
}

double kernel_associativity(std::uint64_t seed, const VerifyOptions &) {
  const Seq x(input(32, 8, seed, 9));
  const auto fm = FeatureMap::elu_plus_one();
  return std::max(
      relative_error(kernel_attention_mix(x, fm, false).values(), kernel_attention_reference(x, fm, false).values()),
      relative_error(kernel_attention_mix(x, fm, true).values(), kernel_attention_reference(x, fm, true).values()));
}

double mlp_factorization(std::uint64_t seed, const VerifyOptions &) {
  const Seq x(input(64, 32, seed, 10));
  const auto p = MlpParams::random_factored(64, 32, 48, 24, Nonlinearity::kNone, seed);
  return max_abs_diff(mlp_mix(x, p).values(), mlp_mix(x, p.collapsed()).values());
}

double fnet_paths(std::uint64_t seed, const VerifyOptions &) {
  const Seq x(input(64, 16, seed, 11));
  return relative_error(fnet_mix(x, FourierPath::kFft).values(), fnet_mix(x, FourierPath::kVandermonde).values());
}

double fnet_order(std::uint64_t seed, const VerifyOptions &) {
  const Seq x(input(64, 16, seed, 12));
  return max_abs_diff(fnet_mix(x, FourierPath::kFft, DftOrder::kEmbeddingFirst).values(),
                      fnet_mix(x, FourierPath::kFft, DftOrder::kSequenceFirst).values());
}

double ssm_duality(std::uint64_t seed, const VerifyOptions &) {
  const Seq x(input(256, 4, seed, 13));
  const auto sys = SsmSystem::hippo_legs(64, 0.05);
  return max_abs_diff(ssm_mix_recurrent(x, sys).values(), ssm_mix_convolutional(x, sys).values());
}

double sgconv_direct(std::uint64_t seed, const VerifyOptions &) {
  const std::size_t len = 128, dim = 4;
  const Seq x(input(len, dim, seed, 14));
  const auto p = SgconvParams::random(len, 16, dim, 0.5, seed);
  const RealMat kernel = build_kernel(p, len).kernel;
  const RealMat fast = sgconv_mix(x, p).values();
  double diff = 0.0;
  for (std::size_t c = 0; c < dim; ++c) {
    for (std::size_t t = 0; t < len; ++t) {
      double direct = 0.0;
      for (std::size_t j = 0; j <= t; ++j) direct += kernel(j, c) * x.values()(t - j, c);
      diff = std::max(diff, std::abs(direct - fast(t, c)));
    }
  }
  return diff;
}

double distributed_vs_single(std::uint64_t seed, const VerifyOptions &) {
  const Seq x(input(128, 32, seed, 15));
  const auto p = AttnParams::random(32, 4, 8, true, seed);
  const auto dist = distributed_attention(x, p, plan_layout(128, 4, 4));
  return max_abs_diff(dist.output.values(), attention_mix(x, p).values());
}

constexpr Check kChecks[] = {
    {"fft vs naive dft", 1e-9, fft_vs_naive},
    {"convolution theorem", 1e-8, convolution_theorem},
    {"conv matrix vs fft", 1e-8, conv_matrix_vs_fft},
    {"attention row-stochastic", 1e-9, attention_row_stochastic},
    {"gram form vs attention", 1e-9, gram_vs_attention},
    {"attention permutation equivariance", 1e-9, permutation_equivariance},
    {"kernel attention associativity", 1e-8, kernel_associativity},
    {"mlp factored vs sequential", 1e-9, mlp_factorization},
    {"fnet fft vs vandermonde", 1e-9, fnet_paths},
    {"fnet dft order independence", 1e-9, fnet_order},
    {"ssm recurrent vs convolutional", 1e-5, ssm_duality},
    {"sgconv vs direct convolution", 1e-8, sgconv_direct},
    {"distributed vs single-device attention", 1e-5, distributed_vs_single},
};

}  // namespace

std::vector<std::string> verify_check_names() {
  std::vector<std::string> names;
  for (const auto &c : kChecks) names.emplace_back(c.name);
  return names;
}

bool VerifyReport::passed() const noexcept {
  return std::all_of(checks.begin(), checks.end(), [](const CheckResult &c) { return c.passed; });
}

std::string VerifyReport::text() const {
  std::string out;
  char line[160];
  std::size_t passed_count = 0;
  for (const auto &c : checks) {
    passed_count += c.passed ? 1 : 0;
    std::snprintf(line, sizeof(line), "%s  %-40s max_err=%.3e tol=%.0e seed=%llu\n", c.passed ? "PASS" : "FAIL",
                  c.name.c_str(), c.max_error, c.tolerance, static_cast<unsigned long long>(c.seed));
    out += line;
  }
  std::snprintf(line, sizeof(line), "%zu/%zu checks passed\n", passed_count, checks.size());
  out += line;
  return out;
}

VerifyReport run_verify(const VerifyOptions &options) {
  if (options.last_seed < options.first_seed) throw UsageError("verify: empty seed range");
  VerifyReport report;
  for (std::uint64_t seed = options.first_seed;; ++seed) {
    for (const auto &check : kChecks) {
      CheckResult r{check.name, 0.0, check.tolerance, seed, false};
      try {
        r.max_error = check.run(seed, options);
        r.passed = std::isfinite(r.max_error) && r.max_error <= check.tolerance;
      } catch (const Error &) {
        r.max_error = std::numeric_limits<double>::infinity();
      }
      report.checks.push_back(std::move(r));
    }
    if (seed == options.last_seed) break;
  }
  return report;
}

}  // namespace seqmix
