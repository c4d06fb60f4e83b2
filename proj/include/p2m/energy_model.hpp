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

#include "p2m/latency_model.hpp"
#include "p2m/techlib.hpp"

namespace p2m {

struct EnergyOptions {
  /// Charge the compute term once per weight sign (sensitivity studies only).
  bool sign_phase = false;
  std::uint32_t sign_phase_factor = 2;
};

struct EnergyBreakdown {
  std::uint64_t n_read = 0;  ///< convolution operations (or pixel reads)
  double e_compute = 0.0;    ///< n_read * (e_PX + e_ADC)
  double e_io = 0.0;
  double e_frontend = 0.0;  ///< e_compute + e_io
  double normalized = 0.0;  ///< vs conventional readout of the same sensor
};

/// n_READ = h_o * w_o * c_o on the convolution output; every output is
/// computed even when pooling later drops it.
std::uint64_t conv_ops(const LayerSpec& layer);

/// h_o * w_o * c_o * b_ADC * e_IO on the pooled map.
double io_energy(const LayerSpec& layer, const AdcSpec& adc, const IoTech& io);

EnergyBreakdown frontend_energy(const LayerSpec& layer, const TechStack& stack, ReadoutMode mode,
                                const Baseline& baseline, const EnergyOptions& options = {});

}  // namespace p2m
