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

#include "p2m/bandwidth_model.hpp"

#include <algorithm>
#include <string>

#include "p2m/error.hpp"

namespace p2m {
namespace {

std::uint64_t conv_extent(std::uint64_t in, const LayerSpec& l, const char* axis) {
  const std::int64_t span = static_cast<std::int64_t>(in) + 2 * static_cast<std::int64_t>(l.p) -
                            static_cast<std::int64_t>(l.k);
  if (span < 0) {
    throw GeometryError(std::string("convolution: ") + axis + " extent " + std::to_string(in) +
                        " + 2*p(" + std::to_string(l.p) + ") is smaller than kernel k=" +
                        std::to_string(l.k));
  }
  return static_cast<std::uint64_t>(span) / l.s + 1;
}

}  // namespace

OutputGeometry output_dims(const LayerSpec& layer) {
  validate(layer);
  OutputGeometry g;
  g.c_o = layer.c_o;
  g.i_elems = 3ull * layer.h_i * layer.w_i;

  g.binned_h = layer.h_i / layer.binning;
  g.binned_w = layer.w_i / layer.binning;
  if (g.binned_h == 0 || g.binned_w == 0) {
    throw GeometryError("binning: factor " + std::to_string(layer.binning) + " exceeds input " +
                        std::to_string(layer.h_i) + "x" + std::to_string(layer.w_i));
  }

  g.conv_h = conv_extent(g.binned_h, layer, "height");
  g.conv_w = conv_extent(g.binned_w, layer, "width");

  g.h_o = std::max<std::uint64_t>(g.conv_h / layer.pool_stride, 1);
  g.w_o = std::max<std::uint64_t>(g.conv_w / layer.pool_stride, 1);
  g.o_elems = g.h_o * g.w_o * g.c_o;
  return g;
}

double bandwidth_reduction(const LayerSpec& layer, const AdcSpec& adc) {
  const OutputGeometry g = output_dims(layer);
  return (static_cast<double>(g.i_elems) / static_cast<double>(g.o_elems)) * (4.0 / 3.0) *
         (12.0 / static_cast<double>(adc.bits));
}

std::uint64_t transmitted_bits(const LayerSpec& layer, const AdcSpec& adc) {
  return output_dims(layer).o_elems * adc.bits;
}

std::uint64_t conventional_bits(const LayerSpec& layer) {
  return 48ull * layer.h_i * layer.w_i;
}

}  // namespace p2m
