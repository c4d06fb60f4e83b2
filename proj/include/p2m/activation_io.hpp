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
#include <string_view>
#include <vector>

#include "p2m/pixel_sim.hpp"

namespace p2m {

// Packed activation file:
//   bytes 0..3   "P2MA"
//   bytes 4..15  u32 h_o, u32 w_o, u32 c_o (little endian)
//   payload      h_o*w_o*c_o counts, row-major HWC, `bits` bits each,
//                LSB-first bit stream, last byte zero-padded
//   trailer      optional: "P2MM", u32 length, UTF-8 JSON run manifest
// The header does not carry the bit width; readers supply it.

inline constexpr std::size_t kActivationHeaderBytes = 16;

std::size_t packed_payload_bytes(std::uint64_t n_values, std::uint32_t bits);

std::vector<std::uint8_t> pack_counts(std::span<const std::uint32_t> counts, std::uint32_t bits);
std::vector<std::uint32_t> unpack_counts(std::span<const std::uint8_t> payload, std::uint64_t n_values,
                                         std::uint32_t bits);

std::vector<std::uint8_t> encode_activation(const ActivationMap& map, std::string_view manifest_json = {});

struct DecodedActivation {
  ActivationMap map;
  std::string manifest_json;  ///< empty when the file has no trailer
};

DecodedActivation decode_activation(std::span<const std::uint8_t> bytes, std::uint32_t bits);

/// `y,x,channel,count` rows; the manifest goes on a leading `#` line.
std::string activation_to_csv(const ActivationMap& map, std::string_view manifest_json = {});

}  // namespace p2m
