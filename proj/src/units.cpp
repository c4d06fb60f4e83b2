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

#include "p2m/units.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <utility>

#include "p2m/error.hpp"

namespace p2m {

const char* error_kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Config: return "config";
    case ErrorKind::Geometry: return "geometry";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::Numeric: return "numeric";
    case ErrorKind::Io: return "io";
    case ErrorKind::Argument: return "argument";
  }
  return "unknown";
}

namespace units {
namespace {

struct Suffix {
  std::string_view text;
  Dimension dim;
  int exponent;  // power of ten
};

// "u" and the two unicode micro signs are all accepted.
constexpr std::array<Suffix, 40> kSuffixes{{
    {"m", Dimension::Length, 0},         {"mm", Dimension::Length, -3},
    {"um", Dimension::Length, -6},       {"\xC2\xB5m", Dimension::Length, -6},
    {"\xCE\xBCm", Dimension::Length, -6}, {"nm", Dimension::Length, -9},
    {"pm", Dimension::Length, -12},

    {"s", Dimension::Time, 0},           {"ms", Dimension::Time, -3},
    {"us", Dimension::Time, -6},         {"\xC2\xB5s", Dimension::Time, -6},
    {"\xCE\xBCs", Dimension::Time, -6},   {"ns", Dimension::Time, -9},
    {"ps", Dimension::Time, -12},

    {"J", Dimension::Energy, 0},         {"mJ", Dimension::Energy, -3},
    {"uJ", Dimension::Energy, -6},       {"\xC2\xB5J", Dimension::Energy, -6},
    {"\xCE\xBCJ", Dimension::Energy, -6}, {"nJ", Dimension::Energy, -9},
    {"pJ", Dimension::Energy, -12},      {"fJ", Dimension::Energy, -15},
    {"aJ", Dimension::Energy, -18},

    {"bps", Dimension::Rate, 0},         {"kbps", Dimension::Rate, 3},
    {"Mbps", Dimension::Rate, 6},        {"Gbps", Dimension::Rate, 9},
    {"Tbps", Dimension::Rate, 12},

    {"ohm", Dimension::Resistance, 0},   {"kohm", Dimension::Resistance, 3},
    {"Mohm", Dimension::Resistance, 6},  {"Gohm", Dimension::Resistance, 9},
    {"\xCE\xA9", Dimension::Resistance, 0},
    {"k\xCE\xA9", Dimension::Resistance, 3},
    {"M\xCE\xA9", Dimension::Resistance, 6},
    {"G\xCE\xA9", Dimension::Resistance, 9},
    {"\xE2\x84\xA6", Dimension::Resistance, 0},
    {"k\xE2\x84\xA6", Dimension::Resistance, 3},
    {"M\xE2\x84\xA6", Dimension::Resistance, 6},
    {"G\xE2\x84\xA6", Dimension::Resistance, 9},
}};

std::string_view trim(std::string_view v) {
  while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
  while (!v.empty() && (v.back() == ' ' || v.back() == '\t')) v.remove_suffix(1);
  return v;
}

[[noreturn]] void bad_token(std::string_view token, std::string_view why) {
  throw ConfigError("invalid quantity '" + std::string(token) + "': " + std::string(why));
}

}  // namespace

std::string_view dimension_name(Dimension dim) noexcept {
  switch (dim) {
    case Dimension::Length: return "length";
    case Dimension::Time: return "time";
    case Dimension::Energy: return "energy";
    case Dimension::Rate: return "rate";
    case Dimension::Resistance: return "resistance";
    case Dimension::Dimensionless: return "dimensionless";
  }
  return "unknown";
}

double parse_quantity(std::string_view token, Dimension dim) {
  const std::string_view text = trim(token);
  if (text.empty()) bad_token(token, "empty");

  double value = 0.0;
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{}) bad_token(token, "no leading number");
  if (!std::isfinite(value)) bad_token(token, "not finite");

  const std::string_view suffix = trim(std::string_view(end, text.data() + text.size() - end));
  if (suffix.empty()) return value;

  for (const auto& s : kSuffixes) {
    if (s.text != suffix) continue;
    if (s.dim != dim) {
      bad_token(token, "unit '" + std::string(suffix) + "' is a " +
                           std::string(dimension_name(s.dim)) + ", expected " +
                           std::string(dimension_name(dim)));
    }
    // Powers of ten up to 1e22 are exact, so dividing keeps "190nm" equal to 190e-9.
    constexpr std::array<double, 19> kPow10{1e0,  1e1,  1e2,  1e3,  1e4,  1e5,  1e6,
                                            1e7,  1e8,  1e9,  1e10, 1e11, 1e12, 1e13,
                                            1e14, 1e15, 1e16, 1e17, 1e18};
    return s.exponent >= 0 ? value * kPow10[s.exponent] : value / kPow10[-s.exponent];
  }
  bad_token(token, "unknown unit suffix '" + std::string(suffix) + "'");
}

}  // namespace units
}  // namespace p2m
