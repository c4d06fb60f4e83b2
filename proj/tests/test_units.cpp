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

#include <string>

#include "doctest.h"
#include "p2m/error.hpp"
#include "p2m/units.hpp"

using p2m::units::Dimension;
using p2m::units::parse_quantity;

TEST_CASE("length suffixes") {
  CHECK(parse_quantity("190nm", Dimension::Length) == 190e-9);
  CHECK(parse_quantity("6.3um", Dimension::Length) == 6.3e-6);
  CHECK(parse_quantity("6.3 um", Dimension::Length) == 6.3e-6);
  CHECK(parse_quantity("6.3\xC2\xB5m", Dimension::Length) == 6.3e-6);
  CHECK(parse_quantity("2mm", Dimension::Length) == 2e-3);
  CHECK(parse_quantity("1m", Dimension::Length) == 1.0);
  CHECK(parse_quantity("1e-6", Dimension::Length) == 1e-6);
}

TEST_CASE("energy, time, rate and resistance suffixes") {
  CHECK(parse_quantity("12.34pJ", Dimension::Energy) == 12.34e-12);
  CHECK(parse_quantity("259.9fJ", Dimension::Energy) == 259.9e-15);
  CHECK(parse_quantity("10us", Dimension::Time) == 10e-6);
  CHECK(parse_quantity("1Gbps", Dimension::Rate) == 1e9);
  CHECK(parse_quantity("400Mbps", Dimension::Rate) == 400e6);
  CHECK(parse_quantity("8Mohm", Dimension::Resistance) == 8e6);
  CHECK(parse_quantity("23.4M\xCE\xA9", Dimension::Resistance) == 23.4e6);
}

TEST_CASE("unknown suffix names the token") {
  try {
    parse_quantity("190nx", Dimension::Length);
    FAIL("expected ConfigError");
  } catch (const p2m::ConfigError& e) {
    CHECK(std::string(e.what()).find("190nx") != std::string::npos);
  }
}

TEST_CASE("suffix of the wrong dimension is rejected") {
  CHECK_THROWS_AS(parse_quantity("5pJ", Dimension::Length), p2m::ConfigError);
  CHECK_THROWS_AS(parse_quantity("5um", Dimension::Energy), p2m::ConfigError);
  CHECK_THROWS_AS(parse_quantity("", Dimension::Length), p2m::ConfigError);
  CHECK_THROWS_AS(parse_quantity("um", Dimension::Length), p2m::ConfigError);
}
