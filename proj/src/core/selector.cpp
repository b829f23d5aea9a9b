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
#include "seqmix/selector.hpp"

#include <cmath>
#include <sstream>

#include "seqmix/random.hpp"

namespace seqmix {

SelectorConfig SelectorConfig::parse(const std::string &spec) {
  SelectorConfig cfg;
  bool have_tau = false;
  std::istringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw UsageError("selector: expected key=value, got '" + item + "'");
    const std::string key = item.substr(0, eq), value = item.substr(eq + 1);
    try {
      if (key == "tau") {
        cfg.tau = std::stod(value);
        have_tau = true;
      } else if (key == "scorer") {
        if (value == "l2_norm") {
          cfg.scorer = Scorer::kL2Norm;
        } else if (value == "projection") {
          cfg.scorer = Scorer::kProjection;
        } else {
          throw UsageError("selector: unknown scorer '" + value + "' (l2_norm, projection)");
        }
      } else if (key == "seed") {
        cfg.seed = std::stoull(value);
      } else {
        throw UsageError("selector: unknown key '" + key + "'");
      }
    } catch (const std::logic_error &) {
      throw UsageError("selector: bad value for '" + key + "': '" + value + "'");
    }
  }
  if (!have_tau) throw UsageError("selector: missing tau");
  if (std::isnan(cfg.tau)) throw UsageError("selector: tau must not be NaN");
  return cfg;
}

std::vector<double> selector_scores(const Seq &x, const SelectorConfig &cfg) {
  std::vector<double> scores(x.len(), 0.0);
  if (cfg.scorer == SelectorConfig::Scorer::kL2Norm) {
    for (std::size_t t = 0; t < x.len(); ++t) {
      double sq = 0.0;
      for (double v : x.values().row(t)) sq += v * v;
      scores[t] = std::sqrt(sq);
    }
    return scores;
  }
  const RealMat psi = random_normal(x.dim(), 1, cfg.seed, Stream::kSelector, x.dim());
  const RealMat proj = matmul(x.values(), psi);
  for (std::size_t t = 0; t < x.len(); ++t) scores[t] = std::abs(proj(t, 0));
  return scores;
}

Selection select_tokens(const Seq &x, const SelectorConfig &cfg) {
  const auto scores = selector_scores(x, cfg);
  std::vector<std::size_t> kept;
  for (std::size_t t = 0; t < scores.size(); ++t) {
    if (scores[t] >= cfg.tau) kept.push_back(t);
  }
  if (kept.empty()) {
    std::size_t best = 0;
    for (std::size_t t = 1; t < scores.size(); ++t) {
      if (scores[t] > scores[best]) best = t;
    }
    kept.push_back(best);
  }
  RealMat out(kept.size(), x.dim());
  for (std::size_t i = 0; i < kept.size(); ++i) {
    auto row = x.values().row(kept[i]);
    std::copy(row.begin(), row.end(), out.row(i).begin());
  }
  return {Seq(std::move(out)), std::move(kept)};
}

}  // namespace seqmix
