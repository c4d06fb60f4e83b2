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

#include "p2m/techlib.hpp"

namespace p2m {

/// Feature-map sizes through the readout chain:
/// sensor -> binning -> strided conv -> peripheral pooling -> IO.
struct OutputGeometry {
  std::uint64_t binned_h = 0, binned_w = 0;  ///< after b x b binning
  std::uint64_t conv_h = 0, conv_w = 0;      ///< convolution output
  std::uint64_t h_o = 0, w_o = 0;            ///< after pooling (what leaves the chip)
  std::uint64_t c_o = 0;
  std::uint64_t o_elems = 0;  ///< h_o * w_o * c_o
  std::uint64_t i_elems = 0;  ///< 3 * h_i * w_i on the unbinned sensor
};

/// Throws GeometryError naming the stage ("binning" or "convolution") whose
/// output would be empty. Non-divisible strides floor; pooling floors at 1.
OutputGeometry output_dims(const LayerSpec& layer);

/// BR = (I/O) * (4/3) * (12/b_ADC)
double bandwidth_reduction(const LayerSpec& layer, const AdcSpec& adc);

/// O * b_ADC: bits leaving a P2M sensor per frame.
std::uint64_t transmitted_bits(const LayerSpec& layer, const AdcSpec& adc);

/// I * (4/3) * 12 = 48 * h_i * w_i: bits a conventional 12-bit Bayer readout sends.
std::uint64_t conventional_bits(const LayerSpec& layer);

}  // namespace p2m
