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

#include "p2m/area_model.hpp"

#include <algorithm>

namespace p2m {

std::string_view limiter_name(Limiter limiter) noexcept {
  return limiter == Limiter::BondLimited ? "bond-limited" : "transistor-limited";
}

std::uint64_t weights_per_pixel(const LayerSpec& layer) {
  const std::uint64_t taps = (std::uint64_t{layer.k} + layer.s - 1) / layer.s;
  return std::uint64_t{layer.c_o} * taps * taps;
}

FootprintResult weight_footprint(const LayerSpec& layer, const ProcessNode& node, const BondTech& bond) {
  FootprintResult r;
  r.n_t = weights_per_pixel(layer);

  const double columns = static_cast<double>((r.n_t + 1) / 2);
  const double transistor_w = columns * node.cpp;
  const double transistor_h = static_cast<double>(r.n_t + 3) * node.mp + bond.bond_height;

  r.limiter_w = bond.bond_pitch >= transistor_w ? Limiter::BondLimited : Limiter::TransistorLimited;
  r.limiter_h = bond.bond_pitch >= transistor_h ? Limiter::BondLimited : Limiter::TransistorLimited;
  r.w_px = std::max(transistor_w, bond.bond_pitch);
  r.h_px = std::max(transistor_h, bond.bond_pitch);
  r.min_pitch = std::max(r.w_px, r.h_px);
  return r;
}

double pixel_area(const LayerSpec& layer, const ProcessNode& node, const BondTech& bond) {
  return weight_footprint(layer, node, bond).area();
}

double normalized_area(const AreaPoint& point, const AreaPoint& reference) {
  return pixel_area(point.layer, point.node, point.bond) /
         pixel_area(reference.layer, reference.node, reference.bond);
}

}  // namespace p2m
