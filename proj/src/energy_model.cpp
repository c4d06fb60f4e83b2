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

#include "p2m/energy_model.hpp"

#include "p2m/bandwidth_model.hpp"
#include "p2m/error.hpp"

namespace p2m {
namespace {

EnergyBreakdown conventional(const LayerSpec& layer, const TechStack& stack, const Baseline& base) {
  const IoTech& io = base.io ? *base.io : stack.io;
  EnergyBreakdown e;
  e.n_read = std::uint64_t{layer.h_i} * layer.w_i;
  const double reads = static_cast<double>(e.n_read);
  e.e_compute = reads * (stack.pixel.e_px + base.adc.e_adc);
  e.e_io = reads * base.adc.bits * io.energy_per_bit;
  e.e_frontend = e.e_compute + e.e_io;
  e.normalized = 1.0;
  return e;
}

}  // namespace

std::uint64_t conv_ops(const LayerSpec& layer) {
  const OutputGeometry g = output_dims(layer);
  return g.conv_h * g.conv_w * g.c_o;
}

double io_energy(const LayerSpec& layer, const AdcSpec& adc, const IoTech& io) {
  const OutputGeometry g = output_dims(layer);
  return static_cast<double>(g.o_elems * adc.bits) * io.energy_per_bit;
}

EnergyBreakdown frontend_energy(const LayerSpec& layer, const TechStack& stack, ReadoutMode mode,
                                const Baseline& baseline, const EnergyOptions& options) {
  const EnergyBreakdown base = conventional(layer, stack, baseline);
  if (mode == ReadoutMode::Conventional) return base;

  if (options.sign_phase && options.sign_phase_factor < 1) {
    throw ArgumentError("sign_phase_factor must be >= 1");
  }
  EnergyBreakdown e;
  e.n_read = conv_ops(layer);
  const double phases = options.sign_phase ? options.sign_phase_factor : 1.0;
  e.e_compute = static_cast<double>(e.n_read) * (stack.pixel.e_px + stack.adc.e_adc) * phases;
  e.e_io = io_energy(layer, stack.adc, stack.io);
  e.e_frontend = e.e_compute + e.e_io;
  if (base.e_frontend <= 0.0) {
    throw NumericError("conventional baseline energy is zero; cannot normalize");
  }
  e.normalized = e.e_frontend / base.e_frontend;
  return e;
}

}  // namespace p2m
