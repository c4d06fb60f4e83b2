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

#include "p2m/dse.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <set>
#include <thread>
#include <tuple>

#include "p2m/csv.hpp"
#include "p2m/error.hpp"
#include "p2m/units.hpp"

namespace p2m {
namespace {

using nlohmann::json;

constexpr std::string_view kConstraintNames[] = {"max_pixel_pitch", "min_frame_rate", "min_br",
                                                 "max_energy_norm"};

bool is_constraint_violation(const std::string& v) {
  return std::any_of(std::begin(kConstraintNames), std::end(kConstraintNames),
                     [&](std::string_view name) { return v == name; });
}

std::vector<std::uint32_t> grid_axis(const json& grid, const char* key, std::vector<std::uint32_t> fallback,
                                     bool allow_zero) {
  const std::string where = std::string("layer_grid.") + key;
  if (!grid.contains(key)) return fallback;
  const json& v = grid.at(key);
  std::vector<std::uint32_t> out;
  auto take = [&](const json& e) {
    if (!e.is_number_unsigned() && !(e.is_number_integer() && e.get<std::int64_t>() >= 0)) {
      throw ConfigError(where + ": expected non-negative integers, got " + e.dump());
    }
    const auto u = e.get<std::uint64_t>();
    if ((!allow_zero && u == 0) || u > 0xFFFFFFFFull) {
      throw ConfigError(where + ": value " + e.dump() + " out of range");
    }
    out.push_back(static_cast<std::uint32_t>(u));
  };
  if (v.is_array()) {
    for (const auto& e : v) take(e);
  } else {
    take(v);
  }
  if (out.empty()) throw ConfigError(where + ": grid axis must not be empty");
  return out;
}

std::vector<std::string> name_list(const json& j, const std::string& where) {
  std::vector<std::string> out;
  if (j.is_string()) {
    out.push_back(j.get<std::string>());
  } else if (j.is_array()) {
    for (const auto& e : j) {
      if (!e.is_string()) throw ConfigError(where + ": expected component names");
      out.push_back(e.get<std::string>());
    }
  } else {
    throw ConfigError(where + ": expected a name or a list of names");
  }
  if (out.empty()) throw ConfigError(where + ": must not be empty");
  return out;
}

std::vector<TechStack> tech_grid_from_json(const json& j, const TechLibrary& lib) {
  std::vector<TechStack> out;
  auto ref_from = [&](const json& obj, const std::string& where) {
    StackRef r;
    auto get = [&](const char* key, std::string& dst) {
      if (!obj.contains(key) || !obj.at(key).is_string()) {
        throw ConfigError(where + "." + key + ": missing component name");
      }
      dst = obj.at(key).get<std::string>();
    };
    get("node", r.node);
    get("bond", r.bond);
    get("io", r.io);
    get("adc", r.adc);
    get("pixel", r.pixel);
    return r;
  };

  if (j.is_array()) {
    for (std::size_t i = 0; i < j.size(); ++i) {
      const std::string where = "tech_grid[" + std::to_string(i) + "]";
      if (j[i].is_string()) {
        out.push_back(lib.stack(j[i].get<std::string>()));
      } else if (j[i].is_object()) {
        out.push_back(lib.resolve(ref_from(j[i], where)));
      } else {
        throw ConfigError(where + ": expected a stack name or component object");
      }
    }
  } else if (j.is_object()) {
    // Cartesian form: node outermost, pixel innermost.
    const auto nodes = name_list(j.value("node", json()), "tech_grid.node");
    const auto bonds = name_list(j.value("bond", json()), "tech_grid.bond");
    const auto ios = name_list(j.value("io", json()), "tech_grid.io");
    const auto adcs = name_list(j.value("adc", json()), "tech_grid.adc");
    const auto pixels = name_list(j.value("pixel", json()), "tech_grid.pixel");
    for (const auto& n : nodes)
      for (const auto& b : bonds)
        for (const auto& io : ios)
          for (const auto& a : adcs)
            for (const auto& px : pixels) out.push_back(lib.resolve({n, b, io, a, px}));
  } else {
    throw ConfigError("tech_grid: expected a list of stacks or an object of component lists");
  }
  if (out.empty()) throw ConfigError("tech_grid: must not be empty");
  for (const auto& s : out) validate(s);
  return out;
}

double positive_bound(const json& v, units::Dimension dim, const std::string& where) {
  double d = 0.0;
  if (v.is_number()) {
    d = v.get<double>();
  } else if (v.is_string()) {
    try {
      d = units::parse_quantity(v.get<std::string>(), dim);
    } catch (const ConfigError& e) {
      throw ConfigError(where + ": " + e.what());
    }
  } else {
    throw ConfigError(where + ": expected a number");
  }
  if (!(d > 0.0) || !std::isfinite(d)) throw ConfigError(where + ": bound must be > 0");
  return d;
}

double parse_double(const std::string& s, const std::string& where) {
  double v = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size()) {
    throw ConfigError(where + ": '" + s + "' is not a number");
  }
  return v;
}

std::uint32_t parse_count(const std::string& s, const std::string& where) {
  std::uint32_t v = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || end != s.data() + s.size()) {
    throw ConfigError(where + ": '" + s + "' is not a non-negative integer");
  }
  return v;
}

}  // namespace

void apply_constraints(DesignPoint& pt, const Constraints& c) {
  std::erase_if(pt.violations, is_constraint_violation);
  if (pt.metrics) {
    const MetricSet& m = *pt.metrics;
    if (c.max_pixel_pitch && m.footprint.min_pitch > *c.max_pixel_pitch) {
      pt.violations.emplace_back("max_pixel_pitch");
    }
    if (c.min_frame_rate && (!m.latency || m.latency->frame_rate < *c.min_frame_rate)) {
      pt.violations.emplace_back("min_frame_rate");
    }
    if (c.min_br && m.br < *c.min_br) pt.violations.emplace_back("min_br");
    if (c.max_energy_norm && m.energy.normalized > *c.max_energy_norm) {
      pt.violations.emplace_back("max_energy_norm");
    }
  }
  pt.feasible = pt.violations.empty();
}

DesignPoint evaluate(const LayerSpec& layer, const TechStack& stack, const Baseline& baseline,
                     const Constraints& constraints, const EvalOptions& options) {
  DesignPoint pt;
  pt.layer = layer;
  pt.stack = stack;

  OutputGeometry geometry;
  try {
    geometry = output_dims(layer);
  } catch (const GeometryError& e) {
    pt.feasible = false;
    pt.violations.push_back(std::string("geometry: ") + e.what());
    return pt;
  }

  MetricSet m;
  m.geometry = geometry;
  m.footprint = weight_footprint(layer, stack.node, stack.bond);
  m.pixel_area = m.footprint.area();
  m.normalized_area = m.pixel_area / (stack.pixel.cis_pixel_pitch * stack.pixel.cis_pixel_pitch);
  m.br = bandwidth_reduction(layer, stack.adc);
  m.transmitted_bits = transmitted_bits(layer, stack.adc);
  m.conventional_bits = conventional_bits(layer);

  LatencyOptions lat = options.latency;
  if (options.auto_parallel_adc) lat.n_parallel_adc = layer.s >= layer.k ? layer.k : 1;
  m.n_parallel_adc = lat.n_parallel_adc;
  try {
    m.latency = frontend_latency(layer, stack, ReadoutMode::P2M, lat);
  } catch (const ArgumentError& e) {
    pt.violations.push_back(std::string("n_parallel_adc: ") + e.what());
  } catch (const ConfigError& e) {
    pt.notes.push_back(std::string("latency unavailable: ") + e.what());
  }
  try {
    m.baseline_latency = frontend_latency(layer, stack, ReadoutMode::Conventional,
                                          {1, lat.sign_phase_factor}, &baseline);
  } catch (const ConfigError& e) {
    pt.notes.push_back(std::string("baseline latency unavailable: ") + e.what());
  }

  m.energy = frontend_energy(layer, stack, ReadoutMode::P2M, baseline, options.energy);
  m.baseline_energy = frontend_energy(layer, stack, ReadoutMode::Conventional, baseline, options.energy);

  pt.metrics = std::move(m);
  apply_constraints(pt, constraints);
  return pt;
}

void validate(const SweepSpec& spec) {
  const LayerGrid& g = spec.layer_grid;
  if (g.k.empty() || g.s.empty() || g.c_o.empty() || g.p.empty() || g.binning.empty() ||
      g.pool_stride.empty()) {
    throw ConfigError("sweep: every layer_grid axis must be non-empty");
  }
  if (spec.tech_grid.empty()) throw ConfigError("sweep: tech_grid must be non-empty");
  if (spec.h_i == 0 || spec.w_i == 0) throw ConfigError("sweep: input_dims must be positive");
}

std::size_t sweep_size(const SweepSpec& spec) {
  const LayerGrid& g = spec.layer_grid;
  return spec.tech_grid.size() * g.k.size() * g.s.size() * g.c_o.size() * g.p.size() *
         g.binning.size() * g.pool_stride.size();
}

std::vector<DesignPoint> sweep(const SweepSpec& spec, const Baseline& baseline, unsigned jobs) {
  validate(spec);
  const LayerGrid& g = spec.layer_grid;

  struct Cell {
    std::size_t stack;
    LayerSpec layer;
  };
  std::vector<Cell> cells;
  cells.reserve(sweep_size(spec));
  for (std::size_t t = 0; t < spec.tech_grid.size(); ++t)
    for (auto k : g.k)
      for (auto s : g.s)
        for (auto c : g.c_o)
          for (auto p : g.p)
            for (auto b : g.binning)
              for (auto sp : g.pool_stride) {
                cells.push_back({t, LayerSpec{k, s, c, p, spec.h_i, spec.w_i, b, sp}});
              }

  std::vector<DesignPoint> out(cells.size());
  auto run = [&](std::size_t i) {
    out[i] = evaluate(cells[i].layer, spec.tech_grid[cells[i].stack], baseline, spec.constraints,
                      spec.options);
    out[i].index = i;
  };

  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(cells.size())));
  if (jobs == 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) run(i);
    return out;
  }

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> workers;
  for (unsigned w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < cells.size(); i = next.fetch_add(1)) {
        try {
          run(i);
        } catch (...) {
          std::lock_guard lock(failure_mu);
          if (!failure) failure = std::current_exception();
          next = cells.size();
        }
      }
    });
  }
  for (auto& t : workers) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

Constraints constraints_from_json(const json& j) {
  Constraints c;
  if (j.is_null()) return c;
  if (!j.is_object()) throw ConfigError("constraints: must be an object");
  for (const auto& [key, v] : j.items()) {
    const std::string where = "constraints." + key;
    if (v.is_null()) continue;
    if (key == "max_pixel_pitch") {
      c.max_pixel_pitch = positive_bound(v, units::Dimension::Length, where);
    } else if (key == "min_frame_rate") {
      c.min_frame_rate = positive_bound(v, units::Dimension::Dimensionless, where);
    } else if (key == "min_br") {
      c.min_br = positive_bound(v, units::Dimension::Dimensionless, where);
    } else if (key == "max_energy_norm") {
      c.max_energy_norm = positive_bound(v, units::Dimension::Dimensionless, where);
    } else {
      throw ConfigError("constraints: unknown field '" + key + "'");
    }
  }
  return c;
}

EvalOptions eval_options_from_json(const json& j) {
  EvalOptions o;
  if (j.is_null()) return o;
  if (!j.is_object()) throw ConfigError("options: must be an object");
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "n_parallel_adc") {
        if (v.is_string() && v.get<std::string>() == "auto") {
          o.auto_parallel_adc = true;
        } else {
          o.latency.n_parallel_adc = v.get<std::uint32_t>();
          if (o.latency.n_parallel_adc == 0) throw ConfigError("options.n_parallel_adc: must be >= 1");
        }
      } else if (key == "sign_phase_factor") {
        o.latency.sign_phase_factor = v.get<std::uint32_t>();
        o.energy.sign_phase_factor = o.latency.sign_phase_factor;
        if (o.latency.sign_phase_factor == 0) throw ConfigError("options.sign_phase_factor: must be >= 1");
      } else if (key == "energy_sign_phase") {
        o.energy.sign_phase = v.get<bool>();
      } else {
        throw ConfigError("options: unknown field '" + key + "'");
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("options: ") + e.what());
  }
  return o;
}

SweepSpec sweep_spec_from_json(const json& doc, TechLibrary& library) {
  if (!doc.is_object()) throw ConfigError("sweep spec: top level must be an object");
  for (const auto& [key, _] : doc.items()) {
    static const std::set<std::string> known{"name",        "description", "input_dims", "layer_grid",
                                             "tech_grid",   "constraints", "options",    "tech",
                                             "baseline"};
    if (!known.count(key)) throw ConfigError("sweep spec: unknown field '" + key + "'");
  }
  if (doc.contains("tech")) library.load_document(doc.at("tech"), "sweep.tech");
  if (doc.contains("baseline")) library.load_document(json{{"baseline", doc.at("baseline")}}, "sweep");

  SweepSpec spec;
  spec.name = doc.value("name", std::string());

  if (!doc.contains("input_dims")) throw ConfigError("sweep spec: input_dims missing");
  const json& dims = doc.at("input_dims");
  try {
    if (dims.is_array() && dims.size() == 2) {
      spec.h_i = dims[0].get<std::uint32_t>();
      spec.w_i = dims[1].get<std::uint32_t>();
    } else if (dims.is_object()) {
      spec.h_i = dims.at("h_i").get<std::uint32_t>();
      spec.w_i = dims.at("w_i").get<std::uint32_t>();
    } else {
      throw ConfigError("input_dims: expected [h_i, w_i]");
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("input_dims: ") + e.what());
  }

  if (!doc.contains("layer_grid") || !doc.at("layer_grid").is_object()) {
    throw ConfigError("sweep spec: layer_grid missing");
  }
  const json& grid = doc.at("layer_grid");
  for (const auto& [key, _] : grid.items()) {
    static const std::set<std::string> axes{"k", "s", "c_o", "p", "binning", "pool_stride"};
    if (!axes.count(key)) throw ConfigError("layer_grid: unknown axis '" + key + "'");
  }
  if (!grid.contains("k") || !grid.contains("s") || !grid.contains("c_o")) {
    throw ConfigError("layer_grid: k, s and c_o are required");
  }
  spec.layer_grid.k = grid_axis(grid, "k", {}, false);
  spec.layer_grid.s = grid_axis(grid, "s", {}, false);
  spec.layer_grid.c_o = grid_axis(grid, "c_o", {}, false);
  spec.layer_grid.p = grid_axis(grid, "p", {0}, true);
  spec.layer_grid.binning = grid_axis(grid, "binning", {1}, false);
  spec.layer_grid.pool_stride = grid_axis(grid, "pool_stride", {1}, false);

  if (!doc.contains("tech_grid")) throw ConfigError("sweep spec: tech_grid missing");
  spec.tech_grid = tech_grid_from_json(doc.at("tech_grid"), library);
  spec.constraints = constraints_from_json(doc.value("constraints", json()));
  spec.options = eval_options_from_json(doc.value("options", json()));
  validate(spec);
  return spec;
}

const std::vector<std::string>& metric_names() {
  static const std::vector<std::string> names{
      "min_pitch", "pixel_area", "normalized_area", "n_t",        "br",         "transmitted_bits",
      "n_c",       "t_frontend", "frame_rate",      "n_read",     "e_frontend", "normalized_energy"};
  return names;
}

std::optional<double> metric_value(const DesignPoint& pt, std::string_view metric) {
  if (!pt.metrics) return std::nullopt;
  const MetricSet& m = *pt.metrics;
  if (metric == "min_pitch") return m.footprint.min_pitch;
  if (metric == "pixel_area") return m.pixel_area;
  if (metric == "normalized_area") return m.normalized_area;
  if (metric == "n_t") return static_cast<double>(m.footprint.n_t);
  if (metric == "br") return m.br;
  if (metric == "transmitted_bits") return static_cast<double>(m.transmitted_bits);
  if (metric == "n_read") return static_cast<double>(m.energy.n_read);
  if (metric == "e_frontend") return m.energy.e_frontend;
  if (metric == "normalized_energy") return m.energy.normalized;
  if (metric == "n_c" || metric == "t_frontend" || metric == "frame_rate") {
    if (!m.latency) return std::nullopt;
    if (metric == "n_c") return static_cast<double>(m.latency->n_c);
    if (metric == "t_frontend") return m.latency->t_frontend;
    return m.latency->frame_rate;
  }
  return std::nullopt;
}

namespace {

void check_metric_names(const std::vector<Objective>& objectives) {
  const auto& names = metric_names();
  for (const auto& o : objectives) {
    if (std::find(names.begin(), names.end(), o.metric) == names.end()) {
      std::string list;
      for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
      throw ArgumentError("unknown metric '" + o.metric + "'; valid metrics: " + list);
    }
  }
}

}  // namespace

std::vector<DesignPoint> pareto_front(const std::vector<DesignPoint>& points,
                                      const std::vector<Objective>& objectives) {
  if (objectives.empty()) throw ArgumentError("at least one objective is required");
  check_metric_names(objectives);

  std::vector<std::size_t> candidates;
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!points[i].feasible) continue;
    std::vector<double> row;
    for (const auto& o : objectives) {
      const auto v = metric_value(points[i], o.metric);
      if (!v) break;
      row.push_back(*v);
    }
    if (row.size() != objectives.size()) continue;
    candidates.push_back(i);
    rows.push_back(std::move(row));
  }
  std::vector<Direction> dirs;
  for (const auto& o : objectives) dirs.push_back(o.direction);

  std::vector<DesignPoint> out;
  for (std::size_t r : non_dominated(rows, dirs)) out.push_back(points[candidates[r]]);
  return out;
}

AccuracyTable accuracy_table_from_csv(std::string_view text) {
  const csv::Table t = csv::parse(text);
  static constexpr std::string_view kColumns[] = {"dataset", "k", "s", "c_o", "metric", "value"};
  std::size_t col[6];
  for (int i = 0; i < 6; ++i) {
    const auto c = t.column(kColumns[i]);
    if (!c) throw ConfigError("accuracy table: missing column '" + std::string(kColumns[i]) + "'");
    col[i] = *c;
  }
  AccuracyTable table;
  std::set<std::tuple<std::string, std::uint32_t, std::uint32_t, std::uint32_t, std::string>> keys;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const std::string where = "accuracy table row " + std::to_string(r + 1);
    AccuracyRow a;
    a.dataset = row[col[0]];
    a.k = parse_count(row[col[1]], where + " k");
    a.s = parse_count(row[col[2]], where + " s");
    a.c_o = parse_count(row[col[3]], where + " c_o");
    a.metric = row[col[4]];
    a.value = parse_double(row[col[5]], where + " value");
    if (a.dataset.empty() || a.metric.empty()) throw ConfigError(where + ": empty dataset or metric");
    if (!keys.emplace(a.dataset, a.k, a.s, a.c_o, a.metric).second) {
      throw ConfigError(where + ": duplicate key (" + a.dataset + "," + std::to_string(a.k) + "," +
                        std::to_string(a.s) + "," + std::to_string(a.c_o) + "," + a.metric + ")");
    }
    table.rows.push_back(std::move(a));
  }
  return table;
}

void join_accuracy(std::vector<DesignPoint>& points, const AccuracyTable& table) {
  for (auto& pt : points) {
    for (const auto& row : table.rows) {
      if (row.k == pt.layer.k && row.s == pt.layer.s && row.c_o == pt.layer.c_o) {
        pt.accuracy.push_back({row.dataset, row.metric, row.value});
      }
    }
  }
}

}  // namespace p2m
