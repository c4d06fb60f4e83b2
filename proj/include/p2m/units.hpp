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

#include <string>
#include <string_view>

// Every physical quantity in the library is a double in SI base units
// (m, s, J, bit/s, ohm). Unit suffixes only exist at the configuration
// boundary, where parse_quantity() converts them.
namespace p2m::units {

inline constexpr double m = 1.0;
inline constexpr double mm = 1e-3;
inline constexpr double um = 1e-6;
inline constexpr double nm = 1e-9;

inline constexpr double s = 1.0;
inline constexpr double ms = 1e-3;
inline constexpr double us = 1e-6;
inline constexpr double ns = 1e-9;

inline constexpr double J = 1.0;
inline constexpr double uJ = 1e-6;
inline constexpr double nJ = 1e-9;
inline constexpr double pJ = 1e-12;
inline constexpr double fJ = 1e-15;

inline constexpr double bps = 1.0;
inline constexpr double Mbps = 1e6;
inline constexpr double Gbps = 1e9;

inline constexpr double ohm = 1.0;
inline constexpr double kohm = 1e3;
inline constexpr double Mohm = 1e6;

enum class Dimension { Length, Time, Energy, Rate, Resistance, Dimensionless };

std::string_view dimension_name(Dimension dim) noexcept;

// Parses "190nm", "1.5 um", "12.34pJ", "1Gbps" or a bare number (taken as SI).
// Throws ConfigError naming the offending token when the suffix is unknown or
// belongs to a different dimension.
double parse_quantity(std::string_view token, Dimension dim);

}  // namespace p2m::units
