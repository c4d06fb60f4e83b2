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

#include "p2m/pixel_sim.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

#include "p2m/bandwidth_model.hpp"
#include "p2m/error.hpp"
#include "p2m/units.hpp"

namespace p2m {
namespace {

using nlohmann::json;

std::string shape_str(std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t d) {
  return "[" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + "," +
         std::to_string(d) + "]";
}

void check_bn(const WeightTensor& w, const BatchNormFold& bn) {
  if (!bn.scale.empty() && bn.scale.size() != w.c_o) {
    throw ShapeError("bn_scale has " + std::to_string(bn.scale.size()) + " entries, expected c_o=" +
                     std::to_string(w.c_o));
  }
  if (!bn.offset.empty() && bn.offset.size() != w.c_o) {
    throw ShapeError("bn_offset has " + std::to_string(bn.offset.size()) + " entries, expected c_o=" +
                     std::to_string(w.c_o));
  }
  for (double s : bn.scale)
    if (!std::isfinite(s)) throw NumericError("bn_scale entry is not finite");
}

void check_tensor(const WeightTensor& w) {
  if (w.c_o == 0 || w.k == 0) throw ShapeError("weight tensor has an empty dimension");
  const std::size_t expected = static_cast<std::size_t>(w.c_o) * w.taps_per_channel();
  if (w.values.size() != expected) {
    throw ShapeError("weight tensor holds " + std::to_string(w.values.size()) + " values, shape " +
                     shape_str(w.c_o, w.k, w.k, 3) + " needs " + std::to_string(expected));
  }
}

// Shared skeleton of the quantized and exact splits.
template <typename Realize>
WeightBanks split(const WeightTensor& w, const BatchNormFold& bn, Realize&& realize) {
  check_tensor(w);
  check_bn(w, bn);
  WeightBanks banks;
  banks.c_o = w.c_o;
  banks.k = w.k;
  banks.positive.assign(w.values.size(), 0.0);
  banks.negative.assign(w.values.size(), 0.0);
  banks.bn_scale = bn.scale.empty() ? std::vector<double>(w.c_o, 1.0) : bn.scale;
  banks.bn_offset = bn.offset.empty() ? std::vector<std::int64_t>(w.c_o, 0) : bn.offset;

  const std::size_t per_channel = w.taps_per_channel();
  for (std::size_t i = 0; i < w.values.size(); ++i) {
    const double raw = w.values[i];
    if (std::isnan(raw)) throw NumericError("weight tap " + std::to_string(i) + " is NaN");
    const double folded = raw * banks.bn_scale[i / per_channel];
    realize(i, folded, banks);
  }
  return banks;
}

std::int64_t round_counts(double analog, double lsb) {
  constexpr double kLimit = 4.0e18;
  const double v = std::clamp(analog / lsb, -kLimit, kLimit);
  return static_cast<std::int64_t>(std::llround(v));  // half away from zero
}

void check_forward_shapes(const Image& image, const WeightBanks& banks, const LayerSpec& layer) {
  if (image.height != layer.h_i || image.width != layer.w_i) {
    throw ShapeError("image is " + std::to_string(image.height) + "x" + std::to_string(image.width) +
                     ", layer expects " + std::to_string(layer.h_i) + "x" + std::to_string(layer.w_i));
  }
  if (image.data.size() != static_cast<std::size_t>(image.height) * image.width * 3) {
    throw ShapeError("image buffer size does not match its dimensions");
  }
  if (banks.c_o != layer.c_o || banks.k != layer.k) {
    throw ShapeError("weight banks have shape " + shape_str(banks.c_o, banks.k, banks.k, 3) +
                     ", layer expects " + shape_str(layer.c_o, layer.k, layer.k, 3));
  }
  const std::size_t taps = static_cast<std::size_t>(banks.c_o) * banks.k * banks.k * 3;
  if (banks.positive.size() != taps || banks.negative.size() != taps ||
      banks.bn_offset.size() != banks.c_o) {
    throw ShapeError("weight bank buffers do not match shape " +
                     shape_str(banks.c_o, banks.k, banks.k, 3));
  }
}

std::vector<double> vec_or_empty(const json& j, const char* key) {
  if (!j.contains(key)) return {};
  return j.at(key).get<std::vector<double>>();
}

}  // namespace

std::uint32_t RramMap::level_of(double magnitude) const {
  const double t = std::clamp(magnitude / w_max, 0.0, 1.0);
  return static_cast<std::uint32_t>(std::llround(t * (levels - 1)));
}

double RramMap::magnitude_of(std::uint32_t level) const {
  return w_max * static_cast<double>(level) / static_cast<double>(levels - 1);
}

double RramMap::conductance_of(std::uint32_t level) const {
  return g_min() + (g_max() - g_min()) * static_cast<double>(level) / static_cast<double>(levels - 1);
}

void validate(const RramMap& m) {
  if (!(m.r_min > 0.0)) throw ConfigError("rram.r_min: must be > 0");
  if (!(m.r_max > m.r_min)) throw ConfigError("rram.r_max: must be > r_min");
  if (m.levels < 2) throw ConfigError("rram.levels: must be >= 2");
  if (!(m.w_max > 0.0) || !std::isfinite(m.w_max)) throw ConfigError("rram.w_max: must be > 0");
}

void validate(const AdcModel& a) {
  if (a.bits < 1 || a.bits > 31) throw ConfigError("adc.bits: must be in [1, 31]");
  if (!(a.full_scale > 0.0) || !std::isfinite(a.full_scale)) {
    throw ConfigError("adc.full_scale: must be > 0");
  }
}

WeightBanks quantize_weights(const WeightTensor& weights, const RramMap& map, const BatchNormFold& bn) {
  validate(map);
  const std::size_t taps = weights.values.size();
  std::vector<std::uint32_t> pos_level(taps, 0), neg_level(taps, 0);
  WeightBanks banks = split(weights, bn, [&](std::size_t i, double w, WeightBanks& b) {
    if (std::fabs(w) > map.w_max) {
      throw NumericError("weight tap " + std::to_string(i) + " magnitude " + std::to_string(std::fabs(w)) +
                         " exceeds w_max " + std::to_string(map.w_max));
    }
    const std::uint32_t level = map.level_of(std::fabs(w));
    if (level == 0) return;
    if (w > 0) {
      pos_level[i] = level;
      b.positive[i] = map.magnitude_of(level);
    } else {
      neg_level[i] = level;
      b.negative[i] = map.magnitude_of(level);
    }
  });
  banks.positive_level = std::move(pos_level);
  banks.negative_level = std::move(neg_level);
  banks.levels = map.levels;
  banks.w_max = map.w_max;
  return banks;
}

WeightBanks exact_weight_banks(const WeightTensor& weights, const BatchNormFold& bn) {
  double w_max = 0.0;
  WeightBanks banks = split(weights, bn, [&](std::size_t i, double w, WeightBanks& b) {
    if (!std::isfinite(w)) throw NumericError("weight tap " + std::to_string(i) + " is not finite");
    w_max = std::max(w_max, std::fabs(w));
    if (w > 0) b.positive[i] = w;
    if (w < 0) b.negative[i] = -w;
  });
  banks.w_max = w_max;
  return banks;
}

Image make_image(std::uint32_t height, std::uint32_t width) {
  Image img;
  img.height = height;
  img.width = width;
  img.data.assign(static_cast<std::size_t>(height) * width * 3, 0.0);
  return img;
}

Image random_image(std::uint32_t height, std::uint32_t width, std::uint64_t seed) {
  Image img = make_image(height, width);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double& v : img.data) v = u(rng);
  return img;
}

Image bin_image(const Image& image, std::uint32_t factor) {
  if (factor == 0) throw ArgumentError("binning factor must be >= 1");
  if (factor == 1) return image;
  Image out = make_image(image.height / factor, image.width / factor);
  const double inv = 1.0 / (static_cast<double>(factor) * factor);
  for (std::uint32_t y = 0; y < out.height; ++y)
    for (std::uint32_t x = 0; x < out.width; ++x)
      for (std::uint32_t ch = 0; ch < 3; ++ch) {
        double acc = 0.0;
        for (std::uint32_t dy = 0; dy < factor; ++dy)
          for (std::uint32_t dx = 0; dx < factor; ++dx)
            acc += image.at(y * factor + dy, x * factor + dx, ch);
        out.at(y, x, ch) = acc * inv;
      }
  return out;
}

BankResponse bank_response(const Image& image, const WeightBanks& banks, const LayerSpec& layer,
                           const TransferFunction& tf) {
  check_forward_shapes(image, banks, layer);
  const OutputGeometry g = output_dims(layer);
  const Image binned = bin_image(image, layer.binning);

  BankResponse r;
  r.height = static_cast<std::uint32_t>(g.conv_h);
  r.width = static_cast<std::uint32_t>(g.conv_w);
  r.channels = layer.c_o;
  const std::size_t n = static_cast<std::size_t>(r.height) * r.width * r.channels;
  r.a_pos.resize(n);
  r.a_neg.resize(n);

  const auto pad = static_cast<std::int64_t>(layer.p);
  for (std::uint32_t oy = 0; oy < r.height; ++oy) {
    for (std::uint32_t ox = 0; ox < r.width; ++ox) {
      for (std::uint32_t c = 0; c < r.channels; ++c) {
        double pos = 0.0, neg = 0.0;
        for (std::uint32_t ky = 0; ky < layer.k; ++ky) {
          const std::int64_t iy = static_cast<std::int64_t>(oy) * layer.s + ky - pad;
          if (iy < 0 || iy >= binned.height) continue;
          for (std::uint32_t kx = 0; kx < layer.k; ++kx) {
            const std::int64_t ix = static_cast<std::int64_t>(ox) * layer.s + kx - pad;
            if (ix < 0 || ix >= binned.width) continue;
            for (std::uint32_t ch = 0; ch < 3; ++ch) {
              const double in = binned.at(static_cast<std::uint32_t>(iy), static_cast<std::uint32_t>(ix), ch);
              const std::size_t t = banks.index(c, ky, kx, ch);
              pos += banks.positive[t] * in;
              neg += banks.negative[t] * in;
            }
          }
        }
        const std::size_t o = (static_cast<std::size_t>(oy) * r.width + ox) * r.channels + c;
        r.a_pos[o] = tf(pos);
        r.a_neg[o] = tf(neg);
      }
    }
  }
  return r;
}

ActivationMap forward(const Image& image, const WeightBanks& banks, const LayerSpec& layer,
                      const TransferFunction& tf, const AdcModel& adc, PoolMode pool) {
  validate(adc);
  const BankResponse r = bank_response(image, banks, layer, tf);
  const OutputGeometry g = output_dims(layer);
  const double lsb = adc.lsb();
  const auto top = static_cast<std::int64_t>(adc.max_count());

  // Up-count the positive phase, down-count the negative one, starting from
  // the BN preset; the latched value cannot go below zero.
  std::vector<std::uint32_t> conv(r.a_pos.size());
  for (std::size_t i = 0; i < conv.size(); ++i) {
    const std::uint32_t c = static_cast<std::uint32_t>(i % r.channels);
    std::int64_t count = banks.bn_offset[c];
    count += round_counts(r.a_pos[i], lsb);
    count -= round_counts(r.a_neg[i], lsb);
    conv[i] = static_cast<std::uint32_t>(std::clamp<std::int64_t>(count, 0, top));
  }

  ActivationMap out;
  out.height = static_cast<std::uint32_t>(g.h_o);
  out.width = static_cast<std::uint32_t>(g.w_o);
  out.channels = layer.c_o;
  out.bits = adc.bits;
  if (layer.pool_stride == 1) {
    out.counts = std::move(conv);
    return out;
  }

  out.counts.assign(static_cast<std::size_t>(out.height) * out.width * out.channels, 0);
  const std::uint32_t sp = layer.pool_stride;
  for (std::uint32_t py = 0; py < out.height; ++py) {
    // When the map is shorter than one window the single output covers it all.
    const std::uint32_t y0 = py * sp, y1 = std::min(y0 + sp, r.height);
    for (std::uint32_t px = 0; px < out.width; ++px) {
      const std::uint32_t x0 = px * sp, x1 = std::min(x0 + sp, r.width);
      for (std::uint32_t c = 0; c < out.channels; ++c) {
        std::uint64_t acc = 0, best = 0, n = 0;
        for (std::uint32_t y = y0; y < y1; ++y)
          for (std::uint32_t x = x0; x < x1; ++x) {
            const std::uint32_t v = conv[(static_cast<std::size_t>(y) * r.width + x) * r.channels + c];
            best = std::max<std::uint64_t>(best, v);
            acc += v;
            ++n;
          }
        const std::uint64_t value = pool == PoolMode::Max ? best : (2 * acc + n) / (2 * n);
        out.counts[(static_cast<std::size_t>(py) * out.width + px) * out.channels + c] =
            static_cast<std::uint32_t>(value);
      }
    }
  }
  return out;
}

json WeightBanks::to_json() const {
  json j{{"shape", {c_o, k, k, 3}},  {"levels", levels},       {"w_max", w_max},
         {"positive", positive},     {"negative", negative},   {"bn_scale", bn_scale},
         {"bn_offset", bn_offset}};
  if (levels > 0) {
    j["positive_level"] = positive_level;
    j["negative_level"] = negative_level;
  }
  return j;
}

WeightBanks WeightBanks::from_json(const json& j) {
  try {
    WeightBanks b;
    const auto shape = j.at("shape").get<std::vector<std::uint32_t>>();
    if (shape.size() != 4 || shape[1] != shape[2] || shape[3] != 3) {
      throw ShapeError("weight banks: shape must be [c_o, k, k, 3]");
    }
    b.c_o = shape[0];
    b.k = shape[1];
    b.levels = j.value("levels", 0u);
    b.w_max = j.value("w_max", 0.0);
    b.positive = j.at("positive").get<std::vector<double>>();
    b.negative = j.at("negative").get<std::vector<double>>();
    if (b.levels > 0) {
      b.positive_level = j.at("positive_level").get<std::vector<std::uint32_t>>();
      b.negative_level = j.at("negative_level").get<std::vector<std::uint32_t>>();
    }
    b.bn_scale = vec_or_empty(j, "bn_scale");
    b.bn_offset = j.contains("bn_offset") ? j.at("bn_offset").get<std::vector<std::int64_t>>()
                                          : std::vector<std::int64_t>(b.c_o, 0);
    const std::size_t taps = static_cast<std::size_t>(b.c_o) * b.k * b.k * 3;
    if (b.positive.size() != taps || b.negative.size() != taps || b.bn_offset.size() != b.c_o) {
      throw ShapeError("weight banks: buffer sizes do not match shape " + shape_str(b.c_o, b.k, b.k, 3));
    }
    for (std::size_t i = 0; i < taps; ++i) {
      if (b.positive[i] < 0 || b.negative[i] < 0) {
        throw ConfigError("weight banks: tap " + std::to_string(i) + " has a negative magnitude");
      }
      if (b.positive[i] != 0 && b.negative[i] != 0) {
        throw ConfigError("weight banks: tap " + std::to_string(i) + " is set in both banks");
      }
    }
    return b;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("weight banks: ") + e.what());
  }
}

WeightTensor weight_tensor_from_json(const json& j) {
  try {
    const auto shape = j.at("shape").get<std::vector<std::uint32_t>>();
    if (shape.size() != 4 || shape[1] != shape[2] || shape[3] != 3) {
      throw ShapeError("weights: shape must be [c_o, k, k, 3]");
    }
    WeightTensor w;
    w.c_o = shape[0];
    w.k = shape[1];
    w.values = j.at("weights").get<std::vector<double>>();
    check_tensor(w);
    return w;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("weights: ") + e.what());
  }
}

RramMap rram_map_from_json(const json& j) {
  RramMap m;
  auto q = [&](const char* key, units::Dimension dim, double& out) {
    if (!j.contains(key)) return;
    const json& v = j.at(key);
    out = v.is_string() ? units::parse_quantity(v.get<std::string>(), dim) : v.get<double>();
  };
  try {
    q("r_min", units::Dimension::Resistance, m.r_min);
    q("r_max", units::Dimension::Resistance, m.r_max);
    if (j.contains("levels")) m.levels = j.at("levels").get<std::uint32_t>();
    q("w_max", units::Dimension::Dimensionless, m.w_max);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("rram: ") + e.what());
  }
  validate(m);
  return m;
}

AdcModel adc_model_from_json(const json& j) {
  if (!j.is_object()) throw ConfigError("adc: must be an object");
  for (const auto& [key, _] : j.items()) {
    if (key != "bits" && key != "full_scale" && key != "t_adc" && key != "e_adc" && key != "name") {
      throw ConfigError("adc: unknown field '" + key + "'");
    }
  }
  AdcModel a;
  try {
    a.bits = j.at("bits").get<std::uint32_t>();
    a.full_scale = j.at("full_scale").get<double>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("adc: ") + e.what());
  }
  validate(a);
  return a;
}

WeightBanks weight_banks_from_json(const json& j) {
  const WeightTensor w = weight_tensor_from_json(j);
  BatchNormFold bn;
  try {
    bn.scale = vec_or_empty(j, "bn_scale");
    if (j.contains("bn_offset")) bn.offset = j.at("bn_offset").get<std::vector<std::int64_t>>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("weights: ") + e.what());
  }
  if (j.contains("rram")) return quantize_weights(w, rram_map_from_json(j.at("rram")), bn);
  return exact_weight_banks(w, bn);
}

}  // namespace p2m
