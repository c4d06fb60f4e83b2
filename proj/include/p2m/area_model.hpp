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

enum class Limiter { BondLimited, TransistorLimited };

std::string_view limiter_name(Limiter limiter) noexcept;

/// Weight-die footprint of one pixel.
struct FootprintResult {
  std::uint64_t n_t = 0;  ///< weight transistors per pixel
  double w_px = 0.0;      ///< [m]
  double h_px = 0.0;      ///< [m]
  Limiter limiter_w = Limiter::BondLimited;
  Limiter limiter_h = Limiter::BondLimited;
  double min_pitch = 0.0;  ///< max(w_px, h_px) [m]

  /// BondLimited only when neither dimension is set by the transistors.
  Limiter pitch_limiter() const noexcept {
    return limiter_w == Limiter::BondLimited && limiter_h == Limiter::BondLimited
               ? Limiter::BondLimited
               : Limiter::TransistorLimited;
  }
  double area() const noexcept { return w_px * h_px; }
};

/// n_T = c_o * ceil(k/s)^2
std::uint64_t weights_per_pixel(const LayerSpec& layer);

/// Transistors are packed in two columns of ceil(n_T/2) at CPP pitch; the
/// height stacks n_T + 3 routing tracks at MP pitch plus the bond height.
/// Either dimension is floored by the bond pitch; a tie counts as bond-limited.
FootprintResult weight_footprint(const LayerSpec& layer, const ProcessNode& node, const BondTech& bond);

/// w_px * h_px [m^2]
double pixel_area(const LayerSpec& layer, const ProcessNode& node, const BondTech& bond);

struct AreaPoint {
  LayerSpec layer;
  ProcessNode node;
  BondTech bond;
};

double normalized_area(const AreaPoint& point, const AreaPoint& reference);

}  // namespace p2m
