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
#include <chrono>
#include <cmath>
#include <map>
#include <sstream>

#include "seqmix/harness.hpp"
#include "seqmix/random.hpp"

namespace seqmix {

PowerFit fit_power_law(const std::vector<double> &xs, const std::vector<double> &ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw ParamError("fit_power_law: need at least two paired points");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw ParamError("fit_power_law: points must be positive");
    mx += std::log(xs[i]);
    my += std::log(ys[i]);
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = std::log(xs[i]) - mx, dy = std::log(ys[i]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  if (sxx == 0.0) throw ParamError("fit_power_law: all x values are equal");
  const double slope = sxy / sxx;
  const double r2 = syy == 0.0 ? 1.0 : (sxy * sxy) / (sxx * syy);
  return {slope, r2, xs.size()};
}

double quadratic_fit_r2(const std::vector<double> &xs, const std::vector<double> &ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw ParamError("quadratic_fit_r2: need at least two paired points");
  double num = 0.0, den = 0.0, mean = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double x2 = xs[i] * xs[i];
    num += ys[i] * x2;
    den += x2 * x2;
    mean += ys[i];
  }
  mean /= static_cast<double>(ys.size());
  const double c = num / den;
  double ss_res = 0.0, ss_tot = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - c * xs[i] * xs[i];
    ss_res += r * r;
    ss_tot += (ys[i] - mean) * (ys[i] - mean);
  }
  return ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
}

double time_median_ms(const std::function<void()> &fn, std::size_t repeats, double min_sample_ms) {
  using Clock = std::chrono::steady_clock;
  auto run = [&](std::size_t calls) {
    const auto start = Clock::now();
    for (std::size_t i = 0; i < calls; ++i) fn();
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
  };
  const double first = std::max(run(1), 1e-6);
  const auto calls = static_cast<std::size_t>(std::max(1.0, std::ceil(min_sample_ms / first)));
  std::vector<double> samples;
  for (std::size_t r = 0; r < std::max<std::size_t>(repeats, 1); ++r) {
    samples.push_back(run(calls) / static_cast<double>(calls));
  }
  std::sort(samples.begin(), samples.end());
  const std::size_t n = samples.size();
  return n % 2 == 1 ? samples[n / 2] : 0.5 * (samples[n / 2 - 1] + samples[n / 2]);
}

BenchResult run_bench(const BenchConfig &config) {
  BenchResult result;
  for (const auto &op : config.ops) {
    if (op == "dist-attn") {
      ScalingBenchConfig sc{config.lens, config.dim,   config.heads, config.workers,
                            config.repeats, config.budget, config.seed, Execution::kThreaded};
      auto records = scaling_bench(sc);
      std::move(records.begin(), records.end(), std::back_inserter(result.records));
      continue;
    }
    if (!is_mixer_op(op)) throw UsageError("bench: unknown op '" + op + "'; valid ops: " + mixer_op_list());
    for (std::size_t len : config.lens) {
      RunConfig rc;
      rc.op = op;
      rc.len = len;
      rc.dim = config.dim;
      rc.heads = config.heads;
      rc.seed = config.seed;
      rc.state_order = config.state_order;
      rc.sub_kernel = config.sub_kernel;
      const Seq x = generate_input(rc);
      const auto mixer = make_mixer(rc, len, config.dim);
      const double ms = time_median_ms([&] { (void)mixer->mix(x); }, config.repeats);
      const bool scored = op == "attn";
      result.records.push_back({op, 1, len, config.dim, scored ? config.heads : 0, ms, scored ? len : 0, 0, 0});
    }
  }

  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> series;
  std::vector<std::string> order;
  for (const auto &r : result.records) {
    const std::string key = r.op == "dist-attn" ? r.op + "@" + std::to_string(r.workers) : r.op;
    if (!series.count(key)) order.push_back(key);
    series[key].first.push_back(static_cast<double>(r.len));
    series[key].second.push_back(r.wall_ms);
  }
  for (const auto &key : order) {
    const auto &[xs, ys] = series[key];
    if (xs.size() >= 2) result.fits.emplace_back(key, fit_power_law(xs, ys));
  }
  return result;
}

std::string fits_csv(const std::vector<std::pair<std::string, PowerFit>> &fits) {
  std::ostringstream out;
  out << "op,exponent,r2,points\n";
  out.setf(std::ios::fixed);
  out.precision(4);
  for (const auto &[op, fit] : fits) out << op << ',' << fit.exponent << ',' << fit.r2 << ',' << fit.points << '\n';
  return out.str();
}

}  // namespace seqmix
