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

#include "p2m/techlib.hpp"

// Stack with round placeholder timings used across the model tests.
inline p2m::TechStack test_stack(const char* node = "n28", const char* bond = "tsv", const char* io = "lvds") {
  p2m::TechLibrary lib;
  p2m::TechStack st;
  st.name = "test";
  st.node = lib.node(node);
  st.bond = lib.bond(bond);
  st.io = lib.io(io);
  st.adc = p2m::AdcSpec{"adc8", 8, 2e-6, 10e-12};
  st.pixel = p2m::PixelSpec{"px", 10e-6, 1e-12, 5e-6};
  return st;
}

inline p2m::Baseline test_baseline() {
  p2m::Baseline b;
  b.adc = p2m::AdcSpec{"adc12", 12, 2e-6, 10e-12};
  return b;
}
