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
#include <string_view>

#include "p2m/techlib.hpp"

namespace p2m {

enum class ReadoutMode { P2M, Conventional };

std::string_view readout_mode_name(ReadoutMode mode) noexcept;

struct LatencyOptions {
  /// ADCs read in parallel. Values above 1 need a non-overlapping stride.
  std::uint32_t n_parallel_adc = 1;
  /// Exposure and conversion happen once per weight sign. Set to 1 to
  /// evaluate the single-phase form.
  std::uint32_t sign_phase_factor = 2;
};

struct LatencyBreakdown {
  std::uint64_t n_c = 0;  ///< read cycles
  double t_exp_total = 0.0;
  double t_adc_total = 0.0;
  double t_io_total = 0.0;
  double t_frontend = 0.0;  ///< [s]
  double frame_rate = 0.0;  ///< [1/s]
};

/// n_C = h_o * c_o on the convolution output (before pooling).
std::uint64_t read_cycles(const LayerSpec& layer);

/// Per-cycle IO delay: w_o * b_ADC / (BW_IO * n_pads), using the transmitted
/// (pooled) row width.
double io_time(const LayerSpec& layer, const AdcSpec& adc, const IoTech& io);

/// P2M: n_C * (f*T_EXP + f*T_ADC + T_IO) / n_parallel_adc, f = sign_phase_factor.
/// Conventional: h_i * (T_EXP + T_ADC,base + w_i*bits/(BW*n_pads)); needs `baseline`.
LatencyBreakdown frontend_latency(const LayerSpec& layer, const TechStack& stack, ReadoutMode mode,
                                  const LatencyOptions& options = {},
                                  const Baseline* baseline = nullptr);

}  // namespace p2m
