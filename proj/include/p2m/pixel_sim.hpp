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

#pragma once

#include <cstdint>
#include <vector>

#include "json.hpp"
#include "p2m/techlib.hpp"
#include "p2m/transfer.hpp"

namespace p2m {

/// Linear |w| -> conductance map over the programmable resistance window.
/// Level 0 is the high-resistance state (weight 0), level `levels-1` the
/// low-resistance state (|w| = w_max).
struct RramMap {
  double r_min = 8e6;     ///< [ohm]
  double r_max = 23.4e6;  ///< [ohm]
  std::uint32_t levels = 16;
  double w_max = 1.0;

  double g_min() const noexcept { return 1.0 / r_max; }
  double g_max() const noexcept { return 1.0 / r_min; }

  /// Nearest level for a magnitude in [0, w_max].
  std::uint32_t level_of(double magnitude) const;
  double magnitude_of(std::uint32_t level) const;
  double conductance_of(std::uint32_t level) const;
  double resistance_of(std::uint32_t level) const { return 1.0 / conductance_of(level); }
};

void validate(const RramMap& map);

/// Real-valued first-layer kernels, layout [c_o][k][k][3].
struct WeightTensor {
  std::uint32_t c_o = 0;
  std::uint32_t k = 0;
  std::vector<double> values;

  static constexpr std::uint32_t kChannels = 3;
  std::size_t index(std::uint32_t c, std::uint32_t ky, std::uint32_t kx, std::uint32_t ch) const {
    return ((static_cast<std::size_t>(c) * k + ky) * k + kx) * kChannels + ch;
  }
  std::size_t taps_per_channel() const { return static_cast<std::size_t>(k) * k * kChannels; }
};

/// Batch-norm terms folded into the readout: `scale` multiplies the weights
/// before they are programmed, `offset` presets the ADC counter.
struct BatchNormFold {
  std::vector<double> scale;          ///< per channel, empty = 1
  std::vector<std::int64_t> offset;   ///< per channel [counts], empty = 0
};

/// Signed weights split into two non-negative banks. `positive`/`negative`
/// hold the magnitudes the hardware realises (dequantized levels, or exact
/// values when quantization is off). At most one bank is non-zero per tap.
struct WeightBanks {
  std::uint32_t c_o = 0;
  std::uint32_t k = 0;
  std::vector<double> positive;
  std::vector<double> negative;
  std::vector<std::uint32_t> positive_level;  ///< empty when unquantized
  std::vector<std::uint32_t> negative_level;
  std::uint32_t levels = 0;  ///< 0 = unquantized
  double w_max = 0.0;
  std::vector<double> bn_scale;
  std::vector<std::int64_t> bn_offset;

  std::size_t index(std::uint32_t c, std::uint32_t ky, std::uint32_t kx, std::uint32_t ch) const {
    return ((static_cast<std::size_t>(c) * k + ky) * k + kx) * WeightTensor::kChannels + ch;
  }

  nlohmann::json to_json() const;
  static WeightBanks from_json(const nlohmann::json& j);
};

/// Folds BN scale, splits by sign and rounds each magnitude to the nearest
/// conductance level. Throws NumericError on NaN or when |scale*w| > w_max
/// (message carries the flat tap index).
WeightBanks quantize_weights(const WeightTensor& weights, const RramMap& map,
                             const BatchNormFold& bn = {});

/// Same split without quantization (ideal devices).
WeightBanks exact_weight_banks(const WeightTensor& weights, const BatchNormFold& bn = {});

/// Single-slope ADC with an up/down counter.
struct AdcModel {
  std::uint32_t bits = 8;
  double full_scale = 1.0;

  double lsb() const noexcept { return full_scale / static_cast<double>(1ull << bits); }
  std::uint32_t max_count() const noexcept {
    return static_cast<std::uint32_t>((1ull << bits) - 1);
  }
};

void validate(const AdcModel& adc);

/// Normalized intensities in [0, 1], row-major HWC with 3 channels.
struct Image {
  std::uint32_t height = 0;
  std::uint32_t width = 0;
  std::vector<double> data;

  double at(std::uint32_t y, std::uint32_t x, std::uint32_t ch) const {
    return data[(static_cast<std::size_t>(y) * width + x) * 3 + ch];
  }
  double& at(std::uint32_t y, std::uint32_t x, std::uint32_t ch) {
    return data[(static_cast<std::size_t>(y) * width + x) * 3 + ch];
  }
};

Image make_image(std::uint32_t height, std::uint32_t width);
/// Uniform [0,1) intensities from a seeded mt19937_64.
Image random_image(std::uint32_t height, std::uint32_t width, std::uint64_t seed);
/// Averages full b x b blocks; trailing rows/columns are dropped.
Image bin_image(const Image& image, std::uint32_t factor);

enum class PoolMode { Max, Average };

/// ADC counts, row-major HWC.
struct ActivationMap {
  std::uint32_t height = 0;
  std::uint32_t width = 0;
  std::uint32_t channels = 0;
  std::uint32_t bits = 0;
  std::vector<std::uint32_t> counts;

  std::uint32_t at(std::uint32_t y, std::uint32_t x, std::uint32_t c) const {
    return counts[(static_cast<std::size_t>(y) * width + x) * channels + c];
  }
  std::uint64_t emitted_bits() const noexcept {
    return static_cast<std::uint64_t>(height) * width * channels * bits;
  }
};

/// Analog bank outputs before conversion, on the convolution grid (HWC).
struct BankResponse {
  std::uint32_t height = 0;
  std::uint32_t width = 0;
  std::uint32_t channels = 0;
  std::vector<double> a_pos;
  std::vector<double> a_neg;
};

BankResponse bank_response(const Image& image, const WeightBanks& banks, const LayerSpec& layer,
                           const TransferFunction& tf);

/// Binning -> per-bank MAC -> transfer -> two-phase count with BN preset and
/// ReLU clamp -> peripheral pooling. Throws ShapeError on mismatched inputs.
ActivationMap forward(const Image& image, const WeightBanks& banks, const LayerSpec& layer,
                      const TransferFunction& tf, const AdcModel& adc, PoolMode pool = PoolMode::Max);

/// Reads `{"shape":[c_o,k,k,3], "weights":[...], "bn_scale":[...],
/// "bn_offset":[...], "rram":{...}}`; quantizes when "rram" is present.
WeightBanks weight_banks_from_json(const nlohmann::json& j);
WeightTensor weight_tensor_from_json(const nlohmann::json& j);
RramMap rram_map_from_json(const nlohmann::json& j);
AdcModel adc_model_from_json(const nlohmann::json& j);

}  // namespace p2m
