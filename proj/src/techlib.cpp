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

#include "p2m/techlib.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "p2m/error.hpp"
#include "p2m/units.hpp"

namespace p2m {
namespace {

using nlohmann::json;
using units::Dimension;

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

[[noreturn]] void field_error(std::string_view where, std::string_view field, std::string_view what) {
  throw ConfigError(std::string(where) + "." + std::string(field) + ": " + std::string(what));
}

void require(bool ok, std::string_view where, std::string_view field, std::string_view bound,
             double got) {
  if (!ok) field_error(where, field, "must be " + std::string(bound) + " (got " + fmt_double(got) + ")");
}

std::string qualified(ComponentKind kind, std::string_view name) {
  return std::string(section_name(kind)) + "." + std::string(name);
}

// Line/column for a byte offset reported by the JSON parser.
std::pair<std::size_t, std::size_t> line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i + 1 < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

double quantity(const json& v, Dimension dim, std::string_view where, std::string_view field) {
  if (v.is_number()) {
    const double d = v.get<double>();
    if (!std::isfinite(d)) field_error(where, field, "not finite");
    return d;
  }
  if (v.is_string()) {
    try {
      return units::parse_quantity(v.get<std::string>(), dim);
    } catch (const ConfigError& e) {
      field_error(where, field, e.what());
    }
  }
  field_error(where, field, "expected a number or a string with unit suffix");
}

std::uint32_t count(const json& v, std::string_view where, std::string_view field) {
  if (v.is_number_unsigned()) {
    const auto u = v.get<std::uint64_t>();
    if (u > 0xFFFFFFFFull) field_error(where, field, "count out of range");
    return static_cast<std::uint32_t>(u);
  }
  if (v.is_number_integer()) {
    const auto i = v.get<std::int64_t>();
    if (i < 0) field_error(where, field, "must be >= 0 (got " + v.dump() + ")");
    if (i > 0xFFFFFFFFll) field_error(where, field, "count out of range");
    return static_cast<std::uint32_t>(i);
  }
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (d >= 0 && d <= 4294967295.0 && std::floor(d) == d) return static_cast<std::uint32_t>(d);
  }
  field_error(where, field, "expected a non-negative integer (got " + v.dump() + ")");
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed,
                    std::string_view where) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(std::string(where) + ": unknown field '" + key + "'");
    }
  }
}

const json* find(const json& obj, std::string_view key) {
  auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

template <typename Setter>
void read_quantity(const json& obj, std::string_view key, Dimension dim, std::string_view where,
                   bool required, Setter&& set) {
  if (const json* v = find(obj, key)) {
    set(quantity(*v, dim, where, key));
  } else if (required) {
    field_error(where, key, "missing");
  }
}

template <typename Setter>
void read_count(const json& obj, std::string_view key, std::string_view where, bool required,
                Setter&& set) {
  if (const json* v = find(obj, key)) {
    set(count(*v, where, key));
  } else if (required) {
    field_error(where, key, "missing");
  }
}

ProcessNode parse_node(const json& obj, ProcessNode base, bool partial, std::string_view where) {
  reject_unknown(obj, {"cpp", "mp", "override"}, where);
  read_quantity(obj, "cpp", Dimension::Length, where, !partial, [&](double v) { base.cpp = v; });
  read_quantity(obj, "mp", Dimension::Length, where, !partial, [&](double v) { base.mp = v; });
  return base;
}

BondTech parse_bond(const json& obj, BondTech base, bool partial, std::string_view where) {
  reject_unknown(obj, {"bond_pitch", "bond_height", "override"}, where);
  read_quantity(obj, "bond_pitch", Dimension::Length, where, !partial,
                [&](double v) { base.bond_pitch = v; });
  read_quantity(obj, "bond_height", Dimension::Length, where, !partial,
                [&](double v) { base.bond_height = v; });
  return base;
}

IoTech parse_io(const json& obj, IoTech base, bool partial, std::string_view where) {
  reject_unknown(obj, {"bandwidth", "energy_per_bit", "n_pads", "override"}, where);
  read_quantity(obj, "bandwidth", Dimension::Rate, where, false,
                [&](double v) { base.bandwidth = v; });
  read_quantity(obj, "energy_per_bit", Dimension::Energy, where, !partial,
                [&](double v) { base.energy_per_bit = v; });
  read_count(obj, "n_pads", where, false, [&](std::uint32_t v) { base.n_pads = v; });
  return base;
}

AdcSpec parse_adc(const json& obj, AdcSpec base, bool partial, std::string_view where) {
  reject_unknown(obj, {"bits", "t_adc", "e_adc", "override"}, where);
  read_count(obj, "bits", where, !partial, [&](std::uint32_t v) { base.bits = v; });
  read_quantity(obj, "t_adc", Dimension::Time, where, !partial, [&](double v) { base.t_adc = v; });
  read_quantity(obj, "e_adc", Dimension::Energy, where, !partial, [&](double v) { base.e_adc = v; });
  return base;
}

PixelSpec parse_pixel(const json& obj, PixelSpec base, bool partial, std::string_view where) {
  reject_unknown(obj, {"t_exp", "e_px", "cis_pixel_pitch", "override"}, where);
  read_quantity(obj, "t_exp", Dimension::Time, where, !partial, [&](double v) { base.t_exp = v; });
  read_quantity(obj, "e_px", Dimension::Energy, where, !partial, [&](double v) { base.e_px = v; });
  read_quantity(obj, "cis_pixel_pitch", Dimension::Length, where, !partial,
                [&](double v) { base.cis_pixel_pitch = v; });
  return base;
}

json io_to_json(const IoTech& io) {
  json j;
  if (io.bandwidth) j["bandwidth"] = *io.bandwidth;
  j["energy_per_bit"] = io.energy_per_bit;
  j["n_pads"] = io.n_pads;
  return j;
}

json adc_to_json(const AdcSpec& adc) {
  return json{{"bits", adc.bits}, {"t_adc", adc.t_adc}, {"e_adc", adc.e_adc}};
}

struct Builtins {
  std::vector<ProcessNode> nodes{
      {"n45", 190e-9, 140e-9},
      {"n28", 120e-9, 90e-9},
  };
  std::vector<BondTech> bonds{
      {"cu-cu", 1e-6, 0.5e-6},
      {"tsv", 6.3e-6, 2.5e-6},
  };
  // Only LVDS has a published link rate; the others are energy-only until a
  // document supplies a bandwidth.
  std::vector<IoTech> ios{
      {"lvds", 1e9, 12.34e-12, 1},
      {"interposer-2.5d", std::nullopt, 259.9e-15, 1},
      {"tsv-3d", std::nullopt, 176.2e-15, 1},
      {"wifi", std::nullopt, 19.5e-12, 1},
  };
};

const Builtins& builtins() {
  static const Builtins b;
  return b;
}

}  // namespace

double IoTech::require_bandwidth() const {
  if (!bandwidth) {
    throw ConfigError("io_techs." + name +
                      ".bandwidth: not configured; supply it in a tech document to evaluate latency");
  }
  return *bandwidth;
}

std::string_view section_name(ComponentKind kind) noexcept {
  switch (kind) {
    case ComponentKind::ProcessNode: return "process_nodes";
    case ComponentKind::BondTech: return "bond_techs";
    case ComponentKind::IoTech: return "io_techs";
    case ComponentKind::Adc: return "adcs";
    case ComponentKind::Pixel: return "pixels";
  }
  return "?";
}

void validate(const ProcessNode& n) {
  const std::string where = qualified(ComponentKind::ProcessNode, n.name);
  require(n.cpp > 0, where, "cpp", "> 0", n.cpp);
  require(n.mp > 0, where, "mp", "> 0", n.mp);
}

void validate(const BondTech& b) {
  const std::string where = qualified(ComponentKind::BondTech, b.name);
  require(b.bond_pitch > 0, where, "bond_pitch", "> 0", b.bond_pitch);
  require(b.bond_height >= 0, where, "bond_height", ">= 0", b.bond_height);
}

void validate(const IoTech& io) {
  const std::string where = qualified(ComponentKind::IoTech, io.name);
  if (io.bandwidth) require(*io.bandwidth > 0, where, "bandwidth", "> 0", *io.bandwidth);
  require(io.energy_per_bit >= 0, where, "energy_per_bit", ">= 0", io.energy_per_bit);
  require(io.n_pads >= 1, where, "n_pads", ">= 1", io.n_pads);
}

void validate(const AdcSpec& a) {
  const std::string where = qualified(ComponentKind::Adc, a.name);
  require(a.bits >= 1 && a.bits <= 16, where, "bits", "in [1, 16]", a.bits);
  require(a.t_adc >= 0, where, "t_adc", ">= 0", a.t_adc);
  require(a.e_adc >= 0, where, "e_adc", ">= 0", a.e_adc);
}

void validate(const PixelSpec& p) {
  const std::string where = qualified(ComponentKind::Pixel, p.name);
  require(p.t_exp >= 0, where, "t_exp", ">= 0", p.t_exp);
  require(p.e_px >= 0, where, "e_px", ">= 0", p.e_px);
  require(p.cis_pixel_pitch > 0, where, "cis_pixel_pitch", "> 0", p.cis_pixel_pitch);
}

void validate(const TechStack& s) {
  validate(s.node);
  validate(s.bond);
  validate(s.io);
  validate(s.adc);
  validate(s.pixel);
}

void validate(const LayerSpec& l) {
  constexpr std::string_view where = "layer";
  require(l.k >= 1, where, "k", ">= 1", l.k);
  require(l.s >= 1, where, "s", ">= 1", l.s);
  require(l.c_o >= 1, where, "c_o", ">= 1", l.c_o);
  require(l.h_i >= 1, where, "h_i", ">= 1", l.h_i);
  require(l.w_i >= 1, where, "w_i", ">= 1", l.w_i);
  require(l.binning >= 1, where, "binning", ">= 1", l.binning);
  require(l.pool_stride >= 1, where, "pool_stride", ">= 1", l.pool_stride);
}

TechLibrary::TechLibrary() {
  const Builtins& b = builtins();
  for (const auto& n : b.nodes) nodes_.emplace(n.name, n);
  for (const auto& x : b.bonds) bonds_.emplace(x.name, x);
  for (const auto& x : b.ios) ios_.emplace(x.name, x);
}

bool TechLibrary::is_builtin(ComponentKind kind, std::string_view name) {
  const Builtins& b = builtins();
  auto has = [&](const auto& list) {
    return std::any_of(list.begin(), list.end(), [&](const auto& e) { return e.name == name; });
  };
  switch (kind) {
    case ComponentKind::ProcessNode: return has(b.nodes);
    case ComponentKind::BondTech: return has(b.bonds);
    case ComponentKind::IoTech: return has(b.ios);
    default: return false;
  }
}

bool TechLibrary::contains(ComponentKind kind, std::string_view name) const {
  switch (kind) {
    case ComponentKind::ProcessNode: return nodes_.find(name) != nodes_.end();
    case ComponentKind::BondTech: return bonds_.find(name) != bonds_.end();
    case ComponentKind::IoTech: return ios_.find(name) != ios_.end();
    case ComponentKind::Adc: return adcs_.find(name) != adcs_.end();
    case ComponentKind::Pixel: return pixels_.find(name) != pixels_.end();
  }
  return false;
}

std::vector<std::string> TechLibrary::names(ComponentKind kind) const {
  std::vector<std::string> out;
  auto collect = [&](const auto& table) {
    for (const auto& [name, _] : table) out.push_back(name);
  };
  switch (kind) {
    case ComponentKind::ProcessNode: collect(nodes_); break;
    case ComponentKind::BondTech: collect(bonds_); break;
    case ComponentKind::IoTech: collect(ios_); break;
    case ComponentKind::Adc: collect(adcs_); break;
    case ComponentKind::Pixel: collect(pixels_); break;
  }
  return out;
}

namespace {

template <typename Table>
const auto& lookup(const Table& table, ComponentKind kind, std::string_view name) {
  auto it = table.find(name);
  if (it == table.end()) {
    throw ConfigError("unknown " + std::string(section_name(kind)) + " entry '" + std::string(name) + "'");
  }
  return it->second;
}

}  // namespace

const ProcessNode& TechLibrary::node(std::string_view name) const {
  return lookup(nodes_, ComponentKind::ProcessNode, name);
}
const BondTech& TechLibrary::bond(std::string_view name) const {
  return lookup(bonds_, ComponentKind::BondTech, name);
}
const IoTech& TechLibrary::io(std::string_view name) const {
  return lookup(ios_, ComponentKind::IoTech, name);
}
const AdcSpec& TechLibrary::adc(std::string_view name) const {
  return lookup(adcs_, ComponentKind::Adc, name);
}
const PixelSpec& TechLibrary::pixel(std::string_view name) const {
  return lookup(pixels_, ComponentKind::Pixel, name);
}

TechStack TechLibrary::resolve(const StackRef& ref, std::string stack_name) const {
  TechStack s;
  s.name = stack_name.empty()
               ? ref.node + "/" + ref.bond + "/" + ref.io + "/" + ref.adc + "/" + ref.pixel
               : std::move(stack_name);
  s.node = node(ref.node);
  s.bond = bond(ref.bond);
  s.io = io(ref.io);
  s.adc = adc(ref.adc);
  s.pixel = pixel(ref.pixel);
  return s;
}

TechStack TechLibrary::stack(std::string_view name) const {
  auto it = stacks_.find(name);
  if (it == stacks_.end()) throw ConfigError("unknown stack '" + std::string(name) + "'");
  return resolve(it->second, std::string(name));
}

std::vector<std::string> TechLibrary::stack_names() const {
  std::vector<std::string> out;
  for (const auto& [name, _] : stacks_) out.push_back(name);
  return out;
}

std::vector<DeclaredEntry> TechLibrary::load(std::string_view text, std::string_view source) {
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = line_col(text, e.byte);
    throw ConfigError(std::string(source) + ":" + std::to_string(line) + ":" + std::to_string(col) +
                      ": parse error: " + e.what());
  }
  return load_document(doc, source);
}

std::vector<DeclaredEntry> TechLibrary::load_document(const json& doc, std::string_view source) {
  const std::string src(source);
  if (doc.is_null()) return {};
  if (!doc.is_object()) throw ConfigError(src + ": top level must be an object");

  // Work on a copy so a failing document leaves the library untouched.
  TechLibrary next = *this;
  std::vector<DeclaredEntry> declared;

  auto section = [&](ComponentKind kind, auto& table, auto parse) {
    const json* sec = find(doc, section_name(kind));
    if (!sec) return;
    const std::string sec_where = src + ": " + std::string(section_name(kind));
    if (!sec->is_object()) throw ConfigError(sec_where + ": must be an object of named entries");
    for (const auto& [name, obj] : sec->items()) {
      const std::string where = src + ": " + qualified(kind, name);
      if (!obj.is_object()) throw ConfigError(where + ": must be an object");
      const json* ov = find(obj, "override");
      const bool override_flag = ov && ov->is_boolean() && ov->get<bool>();
      if (ov && !ov->is_boolean()) throw ConfigError(where + ".override: must be a boolean");

      auto existing = table.find(name);
      const bool exists = existing != table.end();
      if (exists && !override_flag) {
        throw ConfigError(where + ": name already defined" +
                          (is_builtin(kind, name) ? std::string(" (reserved built-in)") : std::string()) +
                          "; set \"override\": true to replace it");
      }
      using Entry = typename std::decay_t<decltype(table)>::mapped_type;
      Entry base{};
      if (exists) base = existing->second;
      base.name = name;
      Entry entry = parse(obj, base, exists, where);
      entry.name = name;
      try {
        validate(entry);
      } catch (const ConfigError& e) {
        throw ConfigError(src + ": " + e.what());
      }
      table.insert_or_assign(name, entry);
      if (exists) next.overridden_[std::string(section_name(kind)) + "/" + name] = true;
      declared.push_back({kind, name});
    }
  };

  reject_unknown(doc,
                 {"process_nodes", "bond_techs", "io_techs", "adcs", "pixels", "stacks", "baseline",
                  "description", "comment"},
                 src);

  section(ComponentKind::ProcessNode, next.nodes_, parse_node);
  section(ComponentKind::BondTech, next.bonds_, parse_bond);
  section(ComponentKind::IoTech, next.ios_, parse_io);
  section(ComponentKind::Adc, next.adcs_, parse_adc);
  section(ComponentKind::Pixel, next.pixels_, parse_pixel);

  if (const json* stacks = find(doc, "stacks")) {
    if (!stacks->is_object()) throw ConfigError(src + ": stacks: must be an object");
    for (const auto& [name, obj] : stacks->items()) {
      const std::string where = src + ": stacks." + name;
      if (!obj.is_object()) throw ConfigError(where + ": must be an object");
      reject_unknown(obj, {"node", "bond", "io", "adc", "pixel"}, where);
      StackRef ref;
      auto name_of = [&](std::string_view key, std::string& out) {
        const json* v = find(obj, key);
        if (!v || !v->is_string()) field_error(where, key, "missing component name");
        out = v->get<std::string>();
      };
      name_of("node", ref.node);
      name_of("bond", ref.bond);
      name_of("io", ref.io);
      name_of("adc", ref.adc);
      name_of("pixel", ref.pixel);
      try {
        (void)next.resolve(ref, name);
      } catch (const ConfigError& e) {
        throw ConfigError(where + ": " + e.what());
      }
      next.stacks_.insert_or_assign(name, ref);
    }
  }

  if (const json* base = find(doc, "baseline")) {
    const std::string where = src + ": baseline";
    if (!base->is_object()) throw ConfigError(where + ": must be an object");
    reject_unknown(*base, {"adc", "io", "bits"}, where);
    const json* adc = find(*base, "adc");
    if (!adc) throw ConfigError(where + ".adc: missing baseline ADC entry");
    Baseline b;
    if (adc->is_string()) {
      b.adc = next.adc(adc->get<std::string>());
    } else if (adc->is_object()) {
      AdcSpec seed;
      seed.bits = 12;
      seed.name = "baseline";
      const bool has_bits = adc->contains("bits");
      json tmp = *adc;
      if (!has_bits) tmp["bits"] = 12;
      b.adc = parse_adc(tmp, seed, false, where + ".adc");
    } else {
      throw ConfigError(where + ".adc: expected an ADC name or object");
    }
    if (const json* bits = find(*base, "bits")) b.adc.bits = count(*bits, where, "bits");
    if (const json* io = find(*base, "io")) {
      if (io->is_string()) {
        b.io = next.io(io->get<std::string>());
      } else if (io->is_object()) {
        IoTech seed;
        seed.name = "baseline";
        b.io = parse_io(*io, seed, false, where + ".io");
      } else {
        throw ConfigError(where + ".io: expected an IO name or object");
      }
    }
    try {
      validate(b.adc);
      if (b.io) validate(*b.io);
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
    next.baseline_ = std::move(b);
  }

  *this = std::move(next);
  return declared;
}

json TechLibrary::to_json() const {
  json doc = json::object();
  auto emit = [&](ComponentKind kind, const auto& table, auto encode) {
    json sec = json::object();
    for (const auto& [name, entry] : table) {
      const bool builtin = is_builtin(kind, name);
      const bool overridden = overridden_.count(std::string(section_name(kind)) + "/" + name) > 0;
      if (builtin && !overridden) continue;
      json j = encode(entry);
      if (builtin) j["override"] = true;
      sec[name] = std::move(j);
    }
    if (!sec.empty()) doc[std::string(section_name(kind))] = std::move(sec);
  };
  emit(ComponentKind::ProcessNode, nodes_,
       [](const ProcessNode& n) { return json{{"cpp", n.cpp}, {"mp", n.mp}}; });
  emit(ComponentKind::BondTech, bonds_, [](const BondTech& b) {
    return json{{"bond_pitch", b.bond_pitch}, {"bond_height", b.bond_height}};
  });
  emit(ComponentKind::IoTech, ios_, io_to_json);
  emit(ComponentKind::Adc, adcs_, adc_to_json);
  emit(ComponentKind::Pixel, pixels_, [](const PixelSpec& p) {
    return json{{"t_exp", p.t_exp}, {"e_px", p.e_px}, {"cis_pixel_pitch", p.cis_pixel_pitch}};
  });
  if (!stacks_.empty()) {
    json st = json::object();
    for (const auto& [name, r] : stacks_) {
      st[name] = json{{"node", r.node}, {"bond", r.bond}, {"io", r.io}, {"adc", r.adc}, {"pixel", r.pixel}};
    }
    doc["stacks"] = std::move(st);
  }
  if (baseline_) {
    json b{{"adc", adc_to_json(baseline_->adc)}};
    if (baseline_->io) {
      const auto& io = *baseline_->io;
      const auto it = ios_.find(io.name);
      const bool named = it != ios_.end() && it->second.bandwidth == io.bandwidth &&
                         it->second.energy_per_bit == io.energy_per_bit && it->second.n_pads == io.n_pads;
      b["io"] = named ? json(io.name) : io_to_json(io);
    }
    doc["baseline"] = std::move(b);
  }
  return doc;
}

TechLibrary load_tech_library(std::string_view json_text, std::string_view source) {
  TechLibrary lib;
  lib.load(json_text, source);
  return lib;
}

LayerSpec layer_from_json(const json& j, std::string_view where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + ": must be an object");
  reject_unknown(j, {"k", "s", "c_o", "p", "h_i", "w_i", "binning", "pool_stride"}, where);
  LayerSpec l;
  read_count(j, "k", where, true, [&](std::uint32_t v) { l.k = v; });
  read_count(j, "s", where, true, [&](std::uint32_t v) { l.s = v; });
  read_count(j, "c_o", where, true, [&](std::uint32_t v) { l.c_o = v; });
  read_count(j, "p", where, false, [&](std::uint32_t v) { l.p = v; });
  read_count(j, "h_i", where, true, [&](std::uint32_t v) { l.h_i = v; });
  read_count(j, "w_i", where, true, [&](std::uint32_t v) { l.w_i = v; });
  read_count(j, "binning", where, false, [&](std::uint32_t v) { l.binning = v; });
  read_count(j, "pool_stride", where, false, [&](std::uint32_t v) { l.pool_stride = v; });
  validate(l);
  return l;
}

json layer_to_json(const LayerSpec& l) {
  return json{{"k", l.k},     {"s", l.s},     {"c_o", l.c_o},         {"p", l.p},
              {"h_i", l.h_i}, {"w_i", l.w_i}, {"binning", l.binning}, {"pool_stride", l.pool_stride}};
}

AdcSpec adc_from_json(const json& j, std::string_view name, std::string_view where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + ": must be an object");
  AdcSpec a;
  a.name = std::string(name);
  a = parse_adc(j, a, false, where);
  validate(a);
  return a;
}

}  // namespace p2m
