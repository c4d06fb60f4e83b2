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

#include "p2m/latency_model.hpp"

#include <string>

#include "p2m/bandwidth_model.hpp"
#include "p2m/error.hpp"

namespace p2m {

std::string_view readout_mode_name(ReadoutMode mode) noexcept {
  return mode == ReadoutMode::P2M ? "p2m" : "conventional";
}

std::uint64_t read_cycles(const LayerSpec& layer) {
  const OutputGeometry g = output_dims(layer);
  return g.conv_h * g.c_o;
}

double io_time(const LayerSpec& layer, const AdcSpec& adc, const IoTech& io) {
  const OutputGeometry g = output_dims(layer);
  return static_cast<double>(g.w_o * adc.bits) / (io.require_bandwidth() * io.n_pads);
}

LatencyBreakdown frontend_latency(const LayerSpec& layer, const TechStack& stack, ReadoutMode mode,
                                  const LatencyOptions& options, const Baseline* baseline) {
  const std::uint32_t m = options.n_parallel_adc;
  if (m < 1) throw ArgumentError("n_parallel_adc must be >= 1");

  LatencyBreakdown r;
  if (mode == ReadoutMode::P2M) {
    if (m > 1 && layer.s < layer.k) {
      throw ArgumentError("parallel ADC readout requires non-overlapping stride (s=" +
                          std::to_string(layer.s) + " < k=" + std::to_string(layer.k) + ")");
    }
    if (m > layer.k) {
      throw ArgumentError("n_parallel_adc=" + std::to_string(m) + " exceeds kernel size k=" +
                          std::to_string(layer.k));
    }
    if (options.sign_phase_factor < 1) throw ArgumentError("sign_phase_factor must be >= 1");

    const double f = options.sign_phase_factor;
    const double t_exp = f * stack.pixel.t_exp;
    const double t_adc = f * stack.adc.t_adc;
    const double t_io = io_time(layer, stack.adc, stack.io);

    r.n_c = read_cycles(layer);
    const double cycles = static_cast<double>(r.n_c);
    r.t_exp_total = cycles * t_exp / m;
    r.t_adc_total = cycles * t_adc / m;
    r.t_io_total = cycles * t_io / m;
    // One expression so that m-way parallelism divides exactly.
    r.t_frontend = cycles * (t_exp + t_adc + t_io) / m;
  } else {
    if (m != 1) throw ArgumentError("conventional readout has no parallel-ADC mode");
    if (!baseline) throw ConfigError("baseline: missing baseline ADC entry for conventional readout");
    const IoTech& io = baseline->io ? *baseline->io : stack.io;
    const double t_io_row =
        static_cast<double>(std::uint64_t{layer.w_i} * baseline->adc.bits) /
        (io.require_bandwidth() * io.n_pads);

    r.n_c = layer.h_i;
    const double rows = static_cast<double>(r.n_c);
    r.t_exp_total = rows * stack.pixel.t_exp;
    r.t_adc_total = rows * baseline->adc.t_adc;
    r.t_io_total = rows * t_io_row;
    r.t_frontend = rows * (stack.pixel.t_exp + baseline->adc.t_adc + t_io_row);
  }
  r.frame_rate = 1.0 / r.t_frontend;
  return r;
}

}  // namespace p2m
