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
#include "json.hpp"
#include "p2m/bandwidth_model.hpp"
#include "p2m/error.hpp"
#include "p2m/pixel_sim.hpp"
#include "p2m/transfer.hpp"
#include "support/sim_case.hpp"

using namespace p2m;

namespace {

const TransferFunction kIdentity = TransferFunction::identity();

WeightTensor uniform_weights(std::uint32_t c_o, std::uint32_t k, double v) {
  WeightTensor w{c_o, k, {}};
  w.values.assign(static_cast<std::size_t>(c_o) * k * k * 3, v);
  return w;
}

}  // namespace

TEST_CASE("rram level mapping") {
  RramMap m;
  CHECK(m.g_min() == doctest::Approx(1 / 23.4e6));
  CHECK(m.g_max() == doctest::Approx(1 / 8e6));
  CHECK(m.level_of(0.0) == 0);
  CHECK(m.level_of(1.0) == 15);
  CHECK(m.level_of(0.5) == 8);
  CHECK(m.conductance_of(0) == m.g_min());
  CHECK(m.conductance_of(15) == doctest::Approx(m.g_max()));
  CHECK(m.resistance_of(15) == doctest::Approx(8e6));
  RramMap bad;
  bad.r_max = 1e6;
  CHECK_THROWS_AS(validate(bad), ConfigError);
}

TEST_CASE("quantization error is bounded by half a level") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> d(-1, 1);
  WeightTensor w{4, 3, {}};
  for (int i = 0; i < 4 * 9 * 3; ++i) w.values.push_back(d(rng));
  for (std::uint32_t levels : {2u, 16u, 1u << 20}) {
    RramMap m;
    m.levels = levels;
    const auto b = quantize_weights(w, m);
    for (std::size_t i = 0; i < w.values.size(); ++i) {
      CHECK((b.positive[i] == 0.0 || b.negative[i] == 0.0));
      CHECK(std::fabs(b.positive[i] - b.negative[i] - w.values[i]) <= 0.5 / (levels - 1) + 1e-15);
    }
  }
}

TEST_CASE("quantization rejects out-of-range and NaN taps by index") {
  WeightTensor w = uniform_weights(1, 1, 0.1);
  w.values[2] = 1.5;
  try {
    quantize_weights(w, RramMap{});
    FAIL("expected NumericError");
  } catch (const NumericError& e) {
    CHECK(std::string(e.what()).find("2") != std::string::npos);
  }
  w.values[2] = std::nan("");
  CHECK_THROWS_AS(quantize_weights(w, RramMap{}), NumericError);
  BatchNormFold bn{{2.0}, {}};
  CHECK_THROWS_AS(quantize_weights(uniform_weights(1, 1, 0.6), RramMap{}, bn), NumericError);
}

TEST_CASE("zero image gives zero activations") {
  const auto banks = exact_weight_banks(uniform_weights(2, 3, 0.3));
  const LayerSpec l{3, 1, 2, 1, 8, 8, 1, 1};
  const auto out = forward(make_image(8, 8), banks, l, kIdentity, AdcModel{8, 8.0});
  CHECK(out.height == 8);
  for (auto c : out.counts) CHECK(c == 0);
}

TEST_CASE("negative pre-activation clamps to zero") {
  const auto banks = exact_weight_banks(uniform_weights(1, 3, -0.5));
  const LayerSpec l{3, 3, 1, 0, 6, 6, 1, 1};
  Image img = make_image(6, 6);
  for (auto& v : img.data) v = 1.0;
  const auto out = forward(img, banks, l, kIdentity, AdcModel{8, 8.0});
  for (auto c : out.counts) CHECK(c == 0);
}

TEST_CASE("counts saturate at full scale") {
  const auto banks = exact_weight_banks(uniform_weights(1, 3, 1.0));
  const LayerSpec l{3, 3, 1, 0, 6, 6, 1, 1};
  Image img = make_image(6, 6);
  for (auto& v : img.data) v = 1.0;
  const auto out = forward(img, banks, l, kIdentity, AdcModel{4, 1.0});
  for (auto c : out.counts) CHECK(c == 15);
}

TEST_CASE("forward matches the ideal convolution oracle") {
  std::mt19937_64 rng(77);
  for (std::uint32_t k : {1u, 3u, 5u}) {
    for (std::uint32_t s : {1u, 2u, k}) {
      for (std::uint32_t p : {0u, k / 2}) {
        const auto sc = random_sim_case(rng, k, s, 3, p);
        std::uint32_t oh = 0, ow = 0;
        const auto expect = oracle::conv_counts(sc.conv, &oh, &ow);
        const auto out = forward(sc.image, exact_weight_banks(sc.weights, sc.bn), sc.layer, kIdentity, sc.adc);
        REQUIRE(out.height == oh);
        REQUIRE(out.width == ow);
        CHECK(max_count_error(out, expect) <= 1);
      }
    }
  }
}

TEST_CASE("binning averages blocks before the convolution") {
  std::mt19937_64 rng(78);
  auto sc = random_sim_case(rng, 3, 1, 2, 1, 16, 16);
  const Image binned = bin_image(sc.image, 2);
  CHECK(binned.height == 8);
  CHECK(binned.at(1, 2, 0) == doctest::Approx((sc.image.at(2, 4, 0) + sc.image.at(2, 5, 0) +
                                                sc.image.at(3, 4, 0) + sc.image.at(3, 5, 0)) / 4));
  sc.layer.binning = 2;
  sc.conv.image = binned.data;
  sc.conv.h = sc.conv.w = 8;
  std::uint32_t oh = 0, ow = 0;
  const auto expect = oracle::conv_counts(sc.conv, &oh, &ow);
  const auto out = forward(sc.image, exact_weight_banks(sc.weights, sc.bn), sc.layer, kIdentity, sc.adc);
  CHECK(out.height == oh);
  CHECK(max_count_error(out, expect) <= 1);
}

TEST_CASE("peripheral pooling") {
  const auto banks = exact_weight_banks(uniform_weights(1, 1, 1.0));
  Image img = make_image(4, 4);
  for (std::uint32_t y = 0; y < 4; ++y)
    for (std::uint32_t x = 0; x < 4; ++x) img.at(y, x, 0) = (y * 4 + x) / 16.0;
  const LayerSpec l{1, 1, 1, 0, 4, 4, 1, 2};
  const AdcModel adc{8, 1.0};  // lsb = 1/256, so count = 16 * (y*4+x)
  const auto mx = forward(img, banks, l, kIdentity, adc, PoolMode::Max);
  REQUIRE(mx.height == 2);
  CHECK(mx.at(0, 0, 0) == 16 * 5);
  CHECK(mx.at(1, 1, 0) == 16 * 15);
  const auto avg = forward(img, banks, l, kIdentity, adc, PoolMode::Average);
  CHECK(avg.at(0, 0, 0) == 16 * (0 + 1 + 4 + 5) / 4);
}

TEST_CASE("outputs stay within the ADC range") {
  std::mt19937_64 rng(79);
  for (int i = 0; i < 10; ++i) {
    auto sc = random_sim_case(rng, 3, 1, 4, 1);
    sc.adc = AdcModel{6, 4.0};
    const auto out = forward(sc.image, exact_weight_banks(sc.weights, sc.bn), sc.layer, kIdentity, sc.adc);
    for (auto c : out.counts) CHECK(c <= 63u);
  }
}

TEST_CASE("channels are separable") {
  std::mt19937_64 rng(80);
  const auto sc = random_sim_case(rng, 3, 2, 4, 1);
  const auto all = forward(sc.image, exact_weight_banks(sc.weights, sc.bn), sc.layer, kIdentity, sc.adc);
  for (std::uint32_t c = 0; c < 4; ++c) {
    WeightTensor one{1, 3, {}};
    one.values.assign(sc.weights.values.begin() + c * 27, sc.weights.values.begin() + (c + 1) * 27);
    BatchNormFold bn{{sc.bn.scale[c]}, {sc.bn.offset[c]}};
    LayerSpec l = sc.layer;
    l.c_o = 1;
    const auto single = forward(sc.image, exact_weight_banks(one, bn), l, kIdentity, sc.adc);
    for (std::uint32_t y = 0; y < all.height; ++y)
      for (std::uint32_t x = 0; x < all.width; ++x) CHECK(single.at(y, x, 0) == all.at(y, x, c));
  }
}

TEST_CASE("dimming the image never raises a bank output") {
  std::mt19937_64 rng(81);
  const auto sc = random_sim_case(rng, 3, 1, 3, 1);
  const auto banks = exact_weight_banks(sc.weights, sc.bn);
  const auto tanh_tf = TransferFunction::tanh_saturation(0.8, 1.2, -10, 10);
  for (const TransferFunction* tf : {&kIdentity, &tanh_tf}) {
    const auto full = bank_response(sc.image, banks, sc.layer, *tf);
    for (double alpha : {1.0, 0.7, 0.2}) {
      Image dim = sc.image;
      for (auto& v : dim.data) v *= alpha;
      const auto r = bank_response(dim, banks, sc.layer, *tf);
      for (std::size_t i = 0; i < r.a_pos.size(); ++i) {
        CHECK(r.a_pos[i] <= full.a_pos[i]);
        CHECK(r.a_neg[i] <= full.a_neg[i]);
      }
    }
  }
}

TEST_CASE("emitted bits equal the bandwidth model") {
  std::mt19937_64 rng(82);
  for (std::uint32_t ps : {1u, 2u, 3u}) {
    auto sc = random_sim_case(rng, 5, 2, 3, 2, 20, 14);
    sc.layer.pool_stride = ps;
    const auto out = forward(sc.image, exact_weight_banks(sc.weights, sc.bn), sc.layer, kIdentity, sc.adc);
    AdcSpec spec;
    spec.bits = sc.adc.bits;
    CHECK(out.emitted_bits() == transmitted_bits(sc.layer, spec));
  }
}

TEST_CASE("shape mismatches report expected and actual") {
  const auto banks = exact_weight_banks(uniform_weights(2, 3, 0.1));
  try {
    forward(make_image(8, 8), banks, LayerSpec{5, 1, 2, 0, 8, 8, 1, 1}, kIdentity, AdcModel{});
    FAIL("expected ShapeError");
  } catch (const ShapeError& e) {
    CHECK(std::string(e.what()).find("[2,3,3,3]") != std::string::npos);
  }
  CHECK_THROWS_AS(forward(make_image(8, 9), banks, LayerSpec{3, 1, 2, 0, 8, 8, 1, 1}, kIdentity, AdcModel{}),
                  ShapeError);
  CHECK_THROWS_AS(exact_weight_banks(uniform_weights(2, 3, 0.1), BatchNormFold{{1.0}, {}}), ShapeError);
}

TEST_CASE("weight documents") {
  const auto j = nlohmann::json::parse(R"({"shape":[1,1,1,3],"weights":[0.5,-0.25,0],
                                           "bn_offset":[3],"rram":{"levels":5,"w_max":1}})");
  const auto b = weight_banks_from_json(j);
  CHECK(b.levels == 5);
  CHECK(b.positive[0] == 0.5);
  CHECK(b.negative[1] == 0.25);
  CHECK(b.bn_offset[0] == 3);
  const auto back = WeightBanks::from_json(b.to_json());
  CHECK(back.positive == b.positive);
  CHECK(back.negative_level == b.negative_level);
  CHECK_THROWS_AS(weight_banks_from_json(nlohmann::json::parse(R"({"shape":[1,1,1,3],"weights":[1,2]})")),
                  ShapeError);
  CHECK_THROWS(adc_model_from_json(nlohmann::json::parse(R"({"bits":0,"full_scale":1})")));
}
