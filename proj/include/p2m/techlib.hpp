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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace p2m {

/// Process node layout pitches used by the weight-die footprint model.
struct ProcessNode {
  std::string name;
  double cpp = 0.0;  ///< contacted poly pitch [m]
  double mp = 0.0;   ///< metal pitch [m]
};

/// Die-to-die interconnect (hybrid bond, TSV, ...).
struct BondTech {
  std::string name;
  double bond_pitch = 0.0;   ///< [m]
  double bond_height = 0.0;  ///< [m]
};

/// Off-chip link. Bandwidth is optional because several links are only
/// characterized by their energy per bit; latency evaluation requires it.
struct IoTech {
  std::string name;
  std::optional<double> bandwidth;  ///< per pad [bit/s]
  double energy_per_bit = 0.0;      ///< [J/bit]
  std::uint32_t n_pads = 1;

  /// Throws ConfigError when no bandwidth was configured.
  double require_bandwidth() const;
};

struct AdcSpec {
  std::string name;
  std::uint32_t bits = 8;
  double t_adc = 0.0;  ///< per conversion [s]
  double e_adc = 0.0;  ///< per conversion [J]
};

struct PixelSpec {
  std::string name;
  double t_exp = 0.0;            ///< exposure per read cycle [s]
  double e_px = 0.0;             ///< per convolution operation [J]
  double cis_pixel_pitch = 0.0;  ///< native sensor pitch [m]
};

/// First convolution layer as mapped into the pixel array.
struct LayerSpec {
  std::uint32_t k = 3;            ///< square kernel size
  std::uint32_t s = 1;            ///< stride
  std::uint32_t c_o = 1;          ///< output channels
  std::uint32_t p = 0;            ///< zero padding
  std::uint32_t h_i = 1;          ///< sensor rows
  std::uint32_t w_i = 1;          ///< sensor columns
  std::uint32_t binning = 1;      ///< b x b pixel binning, 1 = off
  std::uint32_t pool_stride = 1;  ///< peripheral pooling stride, 1 = off

  bool operator==(const LayerSpec&) const = default;
};

struct TechStack {
  std::string name;
  ProcessNode node;
  BondTech bond;
  IoTech io;
  AdcSpec adc;
  PixelSpec pixel;
};

/// Conventional-CIS reference readout: row-sequential, `adc.bits` per
/// pixel site (12 unless configured otherwise). `io` defaults to the stack's.
struct Baseline {
  AdcSpec adc;
  std::optional<IoTech> io;
};

// Invariant checks. Each throws ConfigError naming the field and the bound.
void validate(const ProcessNode& node);
void validate(const BondTech& bond);
void validate(const IoTech& io);
void validate(const AdcSpec& adc);
void validate(const PixelSpec& pixel);
void validate(const TechStack& stack);
/// Count-level invariants only; geometric validity is checked by output_dims().
void validate(const LayerSpec& layer);

/// Names of the stack components, resolved against a TechLibrary.
struct StackRef {
  std::string node, bond, io, adc, pixel;
};

enum class ComponentKind { ProcessNode, BondTech, IoTech, Adc, Pixel };

std::string_view section_name(ComponentKind kind) noexcept;

/// Entry that came from a configuration document (as opposed to a built-in).
struct DeclaredEntry {
  ComponentKind kind;
  std::string name;
};

/// Named technology entries. Always seeded with the built-in constants
/// (n45, n28, cu-cu, tsv, lvds, interposer-2.5d, tsv-3d, wifi); documents
/// loaded on top may add entries, declare stacks and a baseline, and may
/// replace a built-in only with `"override": true`.
class TechLibrary {
 public:
  TechLibrary();

  /// Merges a JSON document. `source` labels error locations.
  /// Returns the entries the document declared, in document order.
  std::vector<DeclaredEntry> load(std::string_view json_text, std::string_view source = "<memory>");
  std::vector<DeclaredEntry> load_document(const nlohmann::json& doc, std::string_view source = "<memory>");

  const ProcessNode& node(std::string_view name) const;
  const BondTech& bond(std::string_view name) const;
  const IoTech& io(std::string_view name) const;
  const AdcSpec& adc(std::string_view name) const;
  const PixelSpec& pixel(std::string_view name) const;

  bool contains(ComponentKind kind, std::string_view name) const;
  std::vector<std::string> names(ComponentKind kind) const;
  static bool is_builtin(ComponentKind kind, std::string_view name);

  TechStack resolve(const StackRef& ref, std::string stack_name = {}) const;
  TechStack stack(std::string_view name) const;
  std::vector<std::string> stack_names() const;

  const std::optional<Baseline>& baseline() const noexcept { return baseline_; }
  void set_baseline(Baseline baseline) { baseline_ = std::move(baseline); }

  /// Serializes every non-built-in or overridden entry, stacks and baseline,
  /// in SI numbers. Loading the result into a fresh library reproduces it.
  nlohmann::json to_json() const;

 private:
  template <typename T>
  using Table = std::map<std::string, T, std::less<>>;

  Table<ProcessNode> nodes_;
  Table<BondTech> bonds_;
  Table<IoTech> ios_;
  Table<AdcSpec> adcs_;
  Table<PixelSpec> pixels_;
  Table<StackRef> stacks_;
  std::map<std::string, bool, std::less<>> overridden_;  // "section/name"
  std::optional<Baseline> baseline_;
};

/// Convenience: a library with built-ins plus one document.
TechLibrary load_tech_library(std::string_view json_text, std::string_view source = "<memory>");

/// JSON object -> LayerSpec. Unknown keys are rejected.
LayerSpec layer_from_json(const nlohmann::json& j, std::string_view where = "layer");
nlohmann::json layer_to_json(const LayerSpec& layer);

/// Parses `{"bits":12,"t_adc":"1us","e_adc":"1pJ"}` style objects.
AdcSpec adc_from_json(const nlohmann::json& j, std::string_view name, std::string_view where);

}  // namespace p2m
