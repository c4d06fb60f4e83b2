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

#include "p2m/activation_io.hpp"

#include <algorithm>
#include <cstring>

#include "p2m/error.hpp"

namespace p2m {
namespace {

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> b, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[at + i]) << (8 * i);
  return v;
}

void check_bits(std::uint32_t bits) {
  if (bits < 1 || bits > 32) throw ArgumentError("bit width must be in [1, 32]");
}

}  // namespace

std::size_t packed_payload_bytes(std::uint64_t n_values, std::uint32_t bits) {
  return static_cast<std::size_t>((n_values * bits + 7) / 8);
}

std::vector<std::uint8_t> pack_counts(std::span<const std::uint32_t> counts, std::uint32_t bits) {
  check_bits(bits);
  std::vector<std::uint8_t> out(packed_payload_bytes(counts.size(), bits), 0);
  const std::uint64_t mask = bits == 32 ? 0xFFFFFFFFull : ((1ull << bits) - 1);
  std::uint64_t bitpos = 0;
  for (std::uint32_t raw : counts) {
    if (raw > mask) throw ArgumentError("count " + std::to_string(raw) + " does not fit in " +
                                        std::to_string(bits) + " bits");
    std::uint64_t v = raw;
    std::uint32_t left = bits;
    while (left > 0) {
      const std::size_t byte = bitpos / 8;
      const std::uint32_t shift = bitpos % 8;
      const std::uint32_t take = std::min<std::uint32_t>(8 - shift, left);
      out[byte] |= static_cast<std::uint8_t>((v & ((1u << take) - 1)) << shift);
      v >>= take;
      left -= take;
      bitpos += take;
    }
  }
  return out;
}

std::vector<std::uint32_t> unpack_counts(std::span<const std::uint8_t> payload, std::uint64_t n_values,
                                         std::uint32_t bits) {
  check_bits(bits);
  if (payload.size() < packed_payload_bytes(n_values, bits)) {
    throw IoError("activation payload truncated");
  }
  std::vector<std::uint32_t> out(n_values);
  std::uint64_t bitpos = 0;
  for (auto& value : out) {
    std::uint64_t v = 0;
    std::uint32_t got = 0;
    while (got < bits) {
      const std::size_t byte = bitpos / 8;
      const std::uint32_t shift = bitpos % 8;
      const std::uint32_t take = std::min<std::uint32_t>(8 - shift, bits - got);
      v |= static_cast<std::uint64_t>((payload[byte] >> shift) & ((1u << take) - 1)) << got;
      got += take;
      bitpos += take;
    }
    value = static_cast<std::uint32_t>(v);
  }
  return out;
}

std::vector<std::uint8_t> encode_activation(const ActivationMap& map, std::string_view manifest_json) {
  std::vector<std::uint8_t> out{'P', '2', 'M', 'A'};
  put_u32(out, map.height);
  put_u32(out, map.width);
  put_u32(out, map.channels);
  const auto payload = pack_counts(map.counts, map.bits);
  out.insert(out.end(), payload.begin(), payload.end());
  if (!manifest_json.empty()) {
    out.insert(out.end(), {'P', '2', 'M', 'M'});
    put_u32(out, static_cast<std::uint32_t>(manifest_json.size()));
    out.insert(out.end(), manifest_json.begin(), manifest_json.end());
  }
  return out;
}

DecodedActivation decode_activation(std::span<const std::uint8_t> bytes, std::uint32_t bits) {
  if (bytes.size() < kActivationHeaderBytes || std::memcmp(bytes.data(), "P2MA", 4) != 0) {
    throw IoError("not a P2MA activation file");
  }
  DecodedActivation d;
  d.map.height = get_u32(bytes, 4);
  d.map.width = get_u32(bytes, 8);
  d.map.channels = get_u32(bytes, 12);
  d.map.bits = bits;
  const std::uint64_t n = static_cast<std::uint64_t>(d.map.height) * d.map.width * d.map.channels;
  const auto payload = bytes.subspan(kActivationHeaderBytes);
  d.map.counts = unpack_counts(payload, n, bits);

  const std::size_t used = kActivationHeaderBytes + packed_payload_bytes(n, bits);
  const auto rest = bytes.subspan(used);
  if (rest.size() >= 8 && std::memcmp(rest.data(), "P2MM", 4) == 0) {
    const std::uint32_t len = get_u32(rest, 4);
    if (rest.size() - 8 < len) throw IoError("activation manifest trailer truncated");
    d.manifest_json.assign(reinterpret_cast<const char*>(rest.data() + 8), len);
  }
  return d;
}

std::string activation_to_csv(const ActivationMap& map, std::string_view manifest_json) {
  std::string out;
  if (!manifest_json.empty()) {
    out += "# manifest: ";
    out += manifest_json;
    out += "\r\n";
  }
  out += "y,x,channel,count\r\n";
  for (std::uint32_t y = 0; y < map.height; ++y)
    for (std::uint32_t x = 0; x < map.width; ++x)
      for (std::uint32_t c = 0; c < map.channels; ++c) {
        out += std::to_string(y) + "," + std::to_string(x) + "," + std::to_string(c) + "," +
               std::to_string(map.at(y, x, c)) + "\r\n";
      }
  return out;
}

}  // namespace p2m
