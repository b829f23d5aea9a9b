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
#include <gtest/gtest.h>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "oracles.hpp"
#include "seqmix/harness.hpp"

using namespace seqmix;

namespace {

std::string temp_path(const std::string &name) {
  return (std::filesystem::temp_directory_path() / ("seqmix_harness_" + name)).string();
}

}  // namespace

TEST(MatrixIo, RoundTripIsExact) {
  RealMat m = oracle::gaussian(5, 3, 1);
  m(0, 0) = 1e-300;
  m(1, 1) = -0.0;
  m(2, 2) = 123456789.123456789;
  std::stringstream s;
  write_matrix(s, m);
  EXPECT_EQ(read_matrix(s), m);
  const std::string path = temp_path("roundtrip.txt");
  save_matrix(path, m);
  EXPECT_EQ(load_matrix(path), m);
  std::filesystem::remove(path);
}

TEST(MatrixIo, FormatIsHeaderThenRows) {
  std::stringstream s;
  write_matrix(s, RealMat(2, 2, {1.0, 0.5, -2.0, 3.0}));
  EXPECT_EQ(s.str(), "2 2\n1 0.5\n-2 3\n");
}

TEST(MatrixIo, MalformedInputIsIoError) {
  for (const char *text : {"", "2", "x 2\n", "2 2\n1 2 3\n", "1 1\n1 2\n", "1 2\n1 abc\n", "-1 2\n"}) {
    std::stringstream s(text);
    EXPECT_THROW((void)read_matrix(s), IoError) << '"' << text << '"';
  }
  EXPECT_THROW((void)load_matrix(temp_path("does_not_exist.txt")), IoError);
  EXPECT_THROW(save_matrix("/nonexistent-dir/m.txt", RealMat(1, 1)), IoError);
}

TEST(Registry, OpsAndGeneratedInput) {
  EXPECT_TRUE(is_mixer_op("dist-attn"));
  EXPECT_FALSE(is_mixer_op("softmax"));
  EXPECT_EQ(mixer_op_list(), "conv, attn, kernel-attn, mlp, fnet, ssm, sgconv, dist-attn");
  RunConfig cfg;
  cfg.len = 7;
  cfg.dim = 3;
  cfg.seed = 5;
  const Seq a = generate_input(cfg);
  EXPECT_EQ(a.len(), 7u);
  EXPECT_EQ(a.values(), generate_input(cfg).values());
  cfg.seed = 6;
  EXPECT_NE(a.values(), generate_input(cfg).values());
}

TEST(Registry, EveryOpBuildsAndMixes) {
  for (auto op : kMixerOps) {
    RunConfig cfg;
    cfg.op = std::string(op);
    cfg.len = 32;
    cfg.dim = 8;
    cfg.heads = 2;
    cfg.workers = 2;
    cfg.sub_kernel = 8;
    const Seq x = generate_input(cfg);
    const auto m = make_mixer(cfg, cfg.len, cfg.dim);
    EXPECT_EQ(m->name(), op);
    const Seq y = m->mix(x);
    EXPECT_EQ(y.len(), 32u) << op;
    EXPECT_EQ(y.dim(), 8u) << op;
    EXPECT_TRUE(all_finite(y.values())) << op;
    EXPECT_EQ(y.values(), make_mixer(cfg, cfg.len, cfg.dim)->mix(x).values()) << op;
  }
}

TEST(Registry, AttnAndDistAttnShareWeights) {
  RunConfig cfg;
  cfg.len = 24;
  cfg.dim = 8;
  cfg.heads = 4;
  cfg.workers = 4;
  cfg.op = "attn";
  const Seq x = generate_input(cfg);
  const RealMat single = make_mixer(cfg, 24, 8)->mix(x).values();
  cfg.op = "dist-attn";
  EXPECT_EQ(make_mixer(cfg, 24, 8)->mix(x).values(), single);
}

TEST(Registry, ConvKernelFlagAndErrors) {
  RunConfig cfg;
  cfg.op = "conv";
  cfg.kernel = {1.0, 0.0};
  cfg.len = 4;
  cfg.dim = 1;
  const Seq x = generate_input(cfg);
  EXPECT_LE(max_abs_diff(make_mixer(cfg, 4, 1)->mix(x).values(), x.values()), 1e-12);
  cfg.op = "nope";
  try {
    (void)make_mixer(cfg, 4, 1);
    FAIL() << "expected UsageError";
  } catch (const UsageError &e) {
    EXPECT_NE(std::string(e.what()).find("kernel-attn"), std::string::npos);
  }
  cfg.op = "attn";
  cfg.heads = 3;
  EXPECT_THROW((void)make_mixer(cfg, 4, 4), ParamError);
}

TEST(Verify, AllChecksPassOverSeeds) {
  const auto report = run_verify({1, 3, false});
  EXPECT_EQ(report.checks.size(), 3 * verify_check_names().size());
  EXPECT_TRUE(report.passed()) << report.text();
  for (const auto &c : report.checks) EXPECT_LE(c.max_error, c.tolerance) << c.name;
}

TEST(Verify, CheckNamesCoverTheIdentities) {
  const auto names = verify_check_names();
  for (const char *expected :
       {"fft vs naive dft", "attention row-stochastic", "gram form vs attention", "mlp factored vs sequential",
        "fnet dft order independence", "ssm recurrent vs convolutional", "sgconv vs direct convolution",
        "distributed vs single-device attention"}) {
    EXPECT_NE(std::find(names.begin(), names.end(), expected), names.end()) << expected;
  }
}

TEST(Verify, InjectedFaultIsNamed) {
  const auto report = run_verify({0, 0, true});
  EXPECT_FALSE(report.passed());
  std::size_t failures = 0;
  for (const auto &c : report.checks) {
    if (!c.passed) {
      ++failures;
      EXPECT_EQ(c.name, "attention row-stochastic");
    }
  }
  EXPECT_EQ(failures, 1u);
  EXPECT_NE(report.text().find("FAIL  attention row-stochastic"), std::string::npos);
}

TEST(Verify, ReportTextAndDeterminism) {
  const std::string a = run_verify({0, 0, false}).text();
  EXPECT_EQ(a, run_verify({0, 0, false}).text());
  EXPECT_NE(a.find("13/13 checks passed"), std::string::npos);
  EXPECT_EQ(a.rfind("PASS  fft vs naive dft", 0), 0u);
  EXPECT_THROW((void)run_verify({3, 2, false}), UsageError);
}

TEST(Fits, PowerLawRecoversExponent) {
  const std::vector<double> xs{256, 512, 1024, 2048};
  std::vector<double> ys;
  for (double x : xs) ys.push_back(3e-4 * x * x);
  const auto f = fit_power_law(xs, ys);
  EXPECT_NEAR(f.exponent, 2.0, 1e-12);
  EXPECT_NEAR(f.r2, 1.0, 1e-12);
  EXPECT_EQ(f.points, 4u);
  EXPECT_THROW((void)fit_power_law({1.0}, {1.0}), ParamError);
  EXPECT_THROW((void)fit_power_law({1.0, 2.0}, {1.0, -1.0}), ParamError);
  EXPECT_THROW((void)fit_power_law({2.0, 2.0}, {1.0, 3.0}), ParamError);
}

TEST(Fits, QuadraticR2) {
  const std::vector<double> xs{1, 2, 3, 4};
  EXPECT_NEAR(quadratic_fit_r2(xs, {5, 20, 45, 80}), 1.0, 1e-12);
  EXPECT_LT(quadratic_fit_r2(xs, {1, 2, 3, 4}), 0.98);
  EXPECT_THROW((void)quadratic_fit_r2({1.0}, {1.0}), ParamError);
}

TEST(Timing, MedianIsPositiveAndBatched) {
  int calls = 0;
  const double ms = time_median_ms([&] { ++calls; }, 3, 1.0);
  EXPECT_GT(ms, 0.0);
  EXPECT_GT(calls, 3);
}

TEST(Bench, SmallSweep) {
  BenchConfig cfg;
  cfg.ops = {"fnet", "attn", "ssm", "sgconv", "dist-attn"};
  cfg.lens = {64, 128};
  cfg.dim = 8;
  cfg.heads = 2;
  cfg.workers = 2;
  cfg.repeats = 1;
  cfg.state_order = 8;
  cfg.sub_kernel = 8;
  const auto r = run_bench(cfg);
  // Two lengths per mixer, plus reference and distributed rows for dist-attn.
  EXPECT_EQ(r.records.size(), 4u * 2 + 4);
  std::vector<std::string> keys;
  for (const auto &[k, f] : r.fits) keys.push_back(k);
  EXPECT_EQ(keys, (std::vector<std::string>{"fnet", "attn", "ssm", "sgconv", "attn-ref", "dist-attn@2"}));
  const std::string csv = fits_csv(r.fits);
  EXPECT_EQ(csv.rfind("op,exponent,r2,points\n", 0), 0u);
  cfg.ops = {"bogus"};
  EXPECT_THROW((void)run_bench(cfg), UsageError);
}
