/*
 * Copyright 2026 The p2m-dse Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <random>

#include "doctest.h"
#include "p2m/error.hpp"
#include "p2m/latency_model.hpp"
#include "support/fixtures.hpp"

using namespace p2m;

namespace {

LayerSpec k3s3c32() { return LayerSpec{3, 3, 32, 0, 200, 200, 1, 1}; }

}  // namespace

TEST_CASE("read cycles and IO time") {
  const auto st = test_stack();
  CHECK(read_cycles(k3s3c32()) == 66u * 32u);
  CHECK(io_time(k3s3c32(), st.adc, st.io) == doctest::Approx(66.0 * 8.0 / 1e9));
  IoTech two_pads = st.io;
  two_pads.n_pads = 2;
  CHECK(io_time(k3s3c32(), st.adc, two_pads) == doctest::Approx(66.0 * 8.0 / 2e9));
}

TEST_CASE("P2M frontend latency") {
  const auto st = test_stack();
  const auto l = frontend_latency(k3s3c32(), st, ReadoutMode::P2M);
  const double per_cycle = 2 * 10e-6 + 2 * 2e-6 + 66.0 * 8.0 / 1e9;
  CHECK(l.n_c == 2112);
  CHECK(l.t_frontend == doctest::Approx(2112 * per_cycle).epsilon(1e-12));
  CHECK(l.frame_rate == doctest::Approx(1.0 / l.t_frontend).epsilon(1e-12));
  CHECK(l.t_exp_total + l.t_adc_total + l.t_io_total == doctest::Approx(l.t_frontend).epsilon(1e-12));

  LatencyOptions single;
  single.sign_phase_factor = 1;
  const auto l1 = frontend_latency(k3s3c32(), st, ReadoutMode::P2M, single);
  CHECK(l1.t_frontend == doctest::Approx(2112 * (10e-6 + 2e-6 + 66.0 * 8.0 / 1e9)).epsilon(1e-12));
}

TEST_CASE("conventional readout latency") {
  const auto st = test_stack();
  const auto b = test_baseline();
  const auto l = frontend_latency(k3s3c32(), st, ReadoutMode::Conventional, {}, &b);
  CHECK(l.n_c == 200);
  CHECK(l.t_frontend == doctest::Approx(200 * (10e-6 + 2e-6 + 200 * 12 / 1e9)).epsilon(1e-12));
  CHECK_THROWS_AS(frontend_latency(k3s3c32(), st, ReadoutMode::Conventional), ConfigError);
}

TEST_CASE("binning reduces read cycles") {
  const auto st = test_stack();
  LayerSpec l{5, 5, 8, 2, 200, 200, 1, 1};
  const auto full = frontend_latency(l, st, ReadoutMode::P2M);
  l.binning = 4;
  const auto binned = frontend_latency(l, st, ReadoutMode::P2M);
  CHECK(binned.n_c < full.n_c);
  CHECK(binned.frame_rate > full.frame_rate);
}

TEST_CASE("parallel ADCs divide latency exactly for non-overlapping strides") {
  const auto st = test_stack();
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<std::uint32_t> kd(1, 7), extra(0, 3), cd(1, 128), hd(8, 256);
  for (int i = 0; i < 500; ++i) {
    const std::uint32_t k = kd(rng);
    const LayerSpec l{k, k + extra(rng), cd(rng), 0, hd(rng), hd(rng), 1, 1};
    const auto base = frontend_latency(l, st, ReadoutMode::P2M);
    for (std::uint32_t m = 1; m <= k; ++m) {
      const auto par = frontend_latency(l, st, ReadoutMode::P2M, {m, 2});
      CHECK(par.t_frontend == base.t_frontend / m);
    }
  }
}

TEST_CASE("parallel ADCs are rejected for overlapping strides") {
  const auto st = test_stack();
  const LayerSpec l{5, 2, 8, 0, 64, 64, 1, 1};
  CHECK_NOTHROW(frontend_latency(l, st, ReadoutMode::P2M, {1, 2}));
  CHECK_THROWS_AS(frontend_latency(l, st, ReadoutMode::P2M, {2, 2}), ArgumentError);
  const LayerSpec nonoverlap{3, 3, 8, 0, 64, 64, 1, 1};
  CHECK_THROWS_AS(frontend_latency(nonoverlap, st, ReadoutMode::P2M, {4, 2}), ArgumentError);
}

TEST_CASE("links without bandwidth cannot be timed") {
  const auto st = test_stack("n28", "tsv", "wifi");
  CHECK_THROWS_AS(frontend_latency(k3s3c32(), st, ReadoutMode::P2M), ConfigError);
}
