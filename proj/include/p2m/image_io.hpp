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
#include <span>
#include <string>
#include <vector>

#include "p2m/pixel_sim.hpp"

namespace p2m {

/// Decodes binary PPM (P6, maxval 255) or 8-bit PNG; picks the codec from the
/// magic bytes. Intensities are divided by 255. Grey and alpha PNGs are
/// expanded/stripped to RGB.
Image decode_image(std::span<const std::uint8_t> bytes);
Image load_image(const std::string& path);

/// 8-bit encoders; values are clamped to [0,1] and rounded to v*255.
std::vector<std::uint8_t> encode_ppm(const Image& image);
std::vector<std::uint8_t> encode_png(const Image& image);

std::vector<std::uint8_t> read_file(const std::string& path);
void write_file(const std::string& path, std::span<const std::uint8_t> bytes);
void write_file(const std::string& path, const std::string& text);

}  // namespace p2m
