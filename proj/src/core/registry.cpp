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

#include "seqmix/harness.hpp"
#include "seqmix/random.hpp"
#include "seqmix/sgconv.hpp"
#include "seqmix/ssm.hpp"

namespace seqmix {

bool is_mixer_op(std::string_view op) noexcept {
  return std::find(std::begin(kMixerOps), std::end(kMixerOps), op) != std::end(kMixerOps);
}

std::string mixer_op_list() {
  std::string out;
  for (auto op : kMixerOps) {
    if (!out.empty()) out += ", ";
    out += op;
  }
  return out;
}

Seq generate_input(const RunConfig &cfg) {
  return Seq(random_normal(cfg.len, cfg.dim, cfg.seed, Stream::kInput));
}

AttnParams attention_params(const RunConfig &cfg, std::size_t dim) {
  if (cfg.heads == 0 || dim % cfg.heads != 0) {
    throw ParamError("attention: width " + std::to_string(dim) + " not divisible into " +
                     std::to_string(cfg.heads) + " heads");
  }
  return AttnParams::random(dim, cfg.heads, dim / cfg.heads, true, cfg.seed);
}

std::unique_ptr<Mixer> make_mixer(const RunConfig &cfg, std::size_t len, std::size_t dim) {
  const std::string &op = cfg.op;
  if (op == "conv") {
    ConvParams p{cfg.kernel};
    if (p.weights.empty()) {
      const RealMat w = random_normal(std::min<std::size_t>(4, len), 1, cfg.seed, Stream::kConv, 0, 0.5);
      p.weights.assign(w.data().begin(), w.data().end());
    }
    return std::make_unique<ConvMixer>(std::move(p));
  }
  if (op == "attn") return std::make_unique<AttentionMixer>(attention_params(cfg, dim));
  if (op == "kernel-attn") return std::make_unique<KernelAttentionMixer>(FeatureMap::elu_plus_one());
  if (op == "mlp") {
    return std::make_unique<MlpMixer>(MlpParams::random_factored(len, dim, len, dim, Nonlinearity::kNone, cfg.seed));
  }
  if (op == "fnet") return std::make_unique<FourierMixer>();
  if (op == "ssm") return std::make_unique<SsmMixer>(SsmSystem::hippo_legs(cfg.state_order, cfg.dt));
  if (op == "sgconv") {
    const std::size_t k = std::min(cfg.sub_kernel, len);
    return std::make_unique<SgconvMixer>(SgconvParams::random(len, k, dim, cfg.decay, cfg.seed));
  }
  if (op == "dist-attn") {
    return std::make_unique<DistAttentionMixer>(attention_params(cfg, dim), cfg.workers);
  }
  throw UsageError("unknown op '" + op + "'; valid ops: " + mixer_op_list());
}

}  // namespace seqmix
