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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <map>

#include "p2m/csv.hpp"
#include "p2m/dse.hpp"
#include "p2m/error.hpp"

namespace p2m {
namespace {

using nlohmann::json;

std::string count(std::uint64_t v) { return std::to_string(v); }

// Unit-scaled columns are rounded to 12 significant digits so that a value
// such as 6.3e-6 m prints as 6.3 um.
std::string scaled(double v, double unit) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v / unit);
  return format_number(std::strtod(buf, nullptr));
}

std::string joined(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : "; ") + s;
  return out;
}

std::string accuracy_cell(const DesignPoint& pt) {
  std::string out;
  for (const auto& a : pt.accuracy) {
    out += (out.empty() ? "" : ";") + a.dataset + ":" + a.metric + "=" + format_number(a.value);
  }
  return out;
}

std::string manifest_line(std::string_view manifest_json) {
  if (manifest_json.empty()) return {};
  return "# manifest: " + std::string(manifest_json) + "\r\n";
}

using Row = std::map<std::string, std::string>;

Row point_row(const DesignPoint& pt) {
  Row r;
  const auto& L = pt.layer;
  const auto& S = pt.stack;
  r["index"] = count(pt.index);
  r["stack"] = S.name;
  r["node"] = S.node.name;
  r["bond"] = S.bond.name;
  r["io"] = S.io.name;
  r["adc"] = S.adc.name;
  r["pixel"] = S.pixel.name;
  r["k"] = count(L.k);
  r["s"] = count(L.s);
  r["c_o"] = count(L.c_o);
  r["p"] = count(L.p);
  r["h_i"] = count(L.h_i);
  r["w_i"] = count(L.w_i);
  r["binning"] = count(L.binning);
  r["pool_stride"] = count(L.pool_stride);
  r["feasible"] = pt.feasible ? "true" : "false";
  r["violations"] = joined(pt.violations);
  r["accuracy"] = accuracy_cell(pt);
  r["notes"] = joined(pt.notes);
  if (!pt.metrics) return r;

  const MetricSet& m = *pt.metrics;
  r["n_t"] = count(m.footprint.n_t);
  r["w_px_um"] = scaled(m.footprint.w_px, 1e-6);
  r["h_px_um"] = scaled(m.footprint.h_px, 1e-6);
  r["min_pitch_um"] = scaled(m.footprint.min_pitch, 1e-6);
  r["limiter_w"] = std::string(limiter_name(m.footprint.limiter_w));
  r["limiter_h"] = std::string(limiter_name(m.footprint.limiter_h));
  r["pitch_limiter"] = std::string(limiter_name(m.footprint.pitch_limiter()));
  r["pixel_area_um2"] = scaled(m.pixel_area, 1e-12);
  r["normalized_area"] = format_number(m.normalized_area);
  r["conv_h"] = count(m.geometry.conv_h);
  r["conv_w"] = count(m.geometry.conv_w);
  r["h_o"] = count(m.geometry.h_o);
  r["w_o"] = count(m.geometry.w_o);
  r["o_elems"] = count(m.geometry.o_elems);
  r["br"] = format_number(m.br);
  r["transmitted_bits"] = count(m.transmitted_bits);
  r["conventional_bits"] = count(m.conventional_bits);
  r["n_parallel_adc"] = count(m.n_parallel_adc);
  if (m.latency) {
    r["n_c"] = count(m.latency->n_c);
    r["t_frontend_s"] = format_number(m.latency->t_frontend);
    r["frame_rate"] = format_number(m.latency->frame_rate);
  }
  if (m.baseline_latency) r["baseline_frame_rate"] = format_number(m.baseline_latency->frame_rate);
  r["n_read"] = count(m.energy.n_read);
  r["e_compute_j"] = format_number(m.energy.e_compute);
  r["e_io_j"] = format_number(m.energy.e_io);
  r["e_frontend_j"] = format_number(m.energy.e_frontend);
  r["baseline_energy_j"] = format_number(m.baseline_energy.e_frontend);
  r["normalized_energy"] = format_number(m.energy.normalized);
  return r;
}

std::string rows_csv(const std::vector<DesignPoint>& points, const std::vector<std::string>& columns,
                     std::string_view manifest_json, bool metrics_only) {
  std::string out = manifest_line(manifest_json);
  out += csv::format_row(columns);
  for (const auto& pt : points) {
    if (metrics_only && !pt.metrics) continue;
    const Row r = point_row(pt);
    std::vector<std::string> fields;
    fields.reserve(columns.size());
    for (const auto& c : columns) {
      const auto it = r.find(c);
      fields.push_back(it == r.end() ? std::string() : it->second);
    }
    out += csv::format_row(fields);
  }
  return out;
}

json latency_json(const LatencyBreakdown& l) {
  return {{"n_c", l.n_c},         {"t_exp_total_s", l.t_exp_total}, {"t_adc_total_s", l.t_adc_total},
          {"t_io_total_s", l.t_io_total}, {"t_frontend_s", l.t_frontend}, {"frame_rate", l.frame_rate}};
}

json energy_json(const EnergyBreakdown& e) {
  return {{"n_read", e.n_read},
          {"e_compute_j", e.e_compute},
          {"e_io_j", e.e_io},
          {"e_frontend_j", e.e_frontend},
          {"normalized", e.normalized}};
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw NumericError("format_number: conversion failed");
  return std::string(buf, end);
}

const std::vector<std::string>& points_csv_columns() {
  static const std::vector<std::string> columns{
      "index",        "stack",          "node",         "bond",           "io",
      "adc",          "pixel",          "k",            "s",              "c_o",
      "p",            "h_i",            "w_i",          "binning",        "pool_stride",
      "feasible",     "violations",     "n_t",          "w_px_um",        "h_px_um",
      "min_pitch_um", "limiter_w",      "limiter_h",    "pitch_limiter",  "pixel_area_um2",
      "normalized_area", "conv_h",      "conv_w",       "h_o",            "w_o",
      "o_elems",      "br",             "transmitted_bits", "conventional_bits", "n_parallel_adc",
      "n_c",          "t_frontend_s",   "frame_rate",   "baseline_frame_rate", "n_read",
      "e_compute_j",  "e_io_j",         "e_frontend_j", "baseline_energy_j", "normalized_energy",
      "accuracy",     "notes"};
  return columns;
}

std::string points_to_csv(const std::vector<DesignPoint>& points, std::string_view manifest_json) {
  return rows_csv(points, points_csv_columns(), manifest_json, false);
}

json point_to_json(const DesignPoint& pt) {
  json j;
  j["index"] = pt.index;
  j["layer"] = layer_to_json(pt.layer);
  j["stack"] = {{"name", pt.stack.name},         {"node", pt.stack.node.name}, {"bond", pt.stack.bond.name},
                {"io", pt.stack.io.name},         {"adc", pt.stack.adc.name},   {"pixel", pt.stack.pixel.name}};
  j["feasible"] = pt.feasible;
  j["violations"] = pt.violations;
  j["notes"] = pt.notes;
  json acc = json::array();
  for (const auto& a : pt.accuracy) acc.push_back({{"dataset", a.dataset}, {"metric", a.metric}, {"value", a.value}});
  j["accuracy"] = std::move(acc);
  if (!pt.metrics) {
    j["metrics"] = nullptr;
    return j;
  }
  const MetricSet& m = *pt.metrics;
  json mj;
  mj["footprint"] = {{"n_t", m.footprint.n_t},
                     {"w_px_m", m.footprint.w_px},
                     {"h_px_m", m.footprint.h_px},
                     {"min_pitch_m", m.footprint.min_pitch},
                     {"limiter_w", limiter_name(m.footprint.limiter_w)},
                     {"limiter_h", limiter_name(m.footprint.limiter_h)},
                     {"pitch_limiter", limiter_name(m.footprint.pitch_limiter())}};
  mj["pixel_area_m2"] = m.pixel_area;
  mj["normalized_area"] = m.normalized_area;
  mj["geometry"] = {{"binned_h", m.geometry.binned_h}, {"binned_w", m.geometry.binned_w},
                    {"conv_h", m.geometry.conv_h},     {"conv_w", m.geometry.conv_w},
                    {"h_o", m.geometry.h_o},           {"w_o", m.geometry.w_o},
                    {"c_o", m.geometry.c_o},           {"o_elems", m.geometry.o_elems},
                    {"i_elems", m.geometry.i_elems}};
  mj["br"] = m.br;
  mj["transmitted_bits"] = m.transmitted_bits;
  mj["conventional_bits"] = m.conventional_bits;
  mj["n_parallel_adc"] = m.n_parallel_adc;
  mj["latency"] = m.latency ? latency_json(*m.latency) : json(nullptr);
  mj["baseline_latency"] = m.baseline_latency ? latency_json(*m.baseline_latency) : json(nullptr);
  mj["energy"] = energy_json(m.energy);
  mj["baseline_energy"] = energy_json(m.baseline_energy);
  j["metrics"] = std::move(mj);
  return j;
}

std::string points_to_json(const std::vector<DesignPoint>& points, std::string_view manifest_json) {
  json doc;
  if (!manifest_json.empty()) doc["manifest"] = json::parse(manifest_json);
  json arr = json::array();
  for (const auto& pt : points) arr.push_back(point_to_json(pt));
  doc["points"] = std::move(arr);
  return doc.dump(2) + "\n";
}

std::string_view figure_series_file(FigureSeries series) noexcept {
  switch (series) {
    case FigureSeries::Area: return "fig_area.csv";
    case FigureSeries::BandwidthReduction: return "fig_br.csv";
    case FigureSeries::Latency: return "fig_latency.csv";
    case FigureSeries::Energy: return "fig_energy.csv";
  }
  return "";
}

std::string figure_series_csv(const std::vector<DesignPoint>& points, FigureSeries series,
                              std::string_view manifest_json) {
  static const std::vector<std::string> area{"stack", "node", "bond", "k", "s", "c_o", "n_t", "w_px_um",
                                             "h_px_um", "min_pitch_um", "pitch_limiter", "normalized_area"};
  static const std::vector<std::string> br{"stack", "k", "s", "c_o", "p", "binning", "pool_stride",
                                           "h_o", "w_o", "br"};
  static const std::vector<std::string> latency{"stack", "io", "k", "s", "c_o", "n_parallel_adc", "n_c",
                                                "t_frontend_s", "frame_rate", "baseline_frame_rate"};
  static const std::vector<std::string> energy{"stack", "io", "k", "s", "c_o", "n_read", "e_compute_j",
                                               "e_io_j", "e_frontend_j", "normalized_energy"};
  switch (series) {
    case FigureSeries::Area: return rows_csv(points, area, manifest_json, true);
    case FigureSeries::BandwidthReduction: return rows_csv(points, br, manifest_json, true);
    case FigureSeries::Latency: return rows_csv(points, latency, manifest_json, true);
    case FigureSeries::Energy: return rows_csv(points, energy, manifest_json, true);
  }
  throw ArgumentError("unknown figure series");
}

std::string_view metric_csv_column(std::string_view metric) {
  if (metric == "min_pitch") return "min_pitch_um";
  if (metric == "pixel_area") return "pixel_area_um2";
  if (metric == "t_frontend") return "t_frontend_s";
  if (metric == "e_frontend") return "e_frontend_j";
  return metric;
}

CsvParetoResult pareto_csv(std::string_view points_csv, const std::vector<Objective>& objectives,
                           std::string_view manifest_json) {
  if (objectives.empty()) throw ArgumentError("at least one objective is required");
  const auto& names = metric_names();
  const csv::Table t = csv::parse(points_csv);

  std::vector<std::size_t> cols;
  for (const auto& o : objectives) {
    if (std::find(names.begin(), names.end(), o.metric) == names.end()) {
      std::string list;
      for (const auto& n : names) list += (list.empty() ? "" : ", ") + n;
      throw ArgumentError("unknown metric '" + o.metric + "'; valid metrics: " + list);
    }
    const auto c = t.column(metric_csv_column(o.metric));
    if (!c) throw ConfigError("points file has no column '" + std::string(metric_csv_column(o.metric)) + "'");
    cols.push_back(*c);
  }
  const auto feasible_col = t.column("feasible");
  if (!feasible_col) throw ConfigError("points file has no column 'feasible'");

  CsvParetoResult result;
  result.rows_in = t.rows.size();
  std::vector<std::size_t> candidates;
  std::vector<std::vector<double>> values;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    if (row[*feasible_col] != "true") continue;
    ++result.feasible_in;
    std::vector<double> v;
    for (std::size_t c : cols) {
      const std::string& cell = row[c];
      double d = 0.0;
      const auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), d);
      if (cell.empty()) break;
      if (ec != std::errc{} || end != cell.data() + cell.size()) {
        throw ConfigError("points file row " + std::to_string(r + 1) + ": '" + cell + "' is not a number");
      }
      v.push_back(d);
    }
    if (v.size() != cols.size()) continue;
    candidates.push_back(r);
    values.push_back(std::move(v));
  }

  std::vector<Direction> dirs;
  for (const auto& o : objectives) dirs.push_back(o.direction);
  const auto front = non_dominated(values, dirs);

  std::string out = manifest_line(manifest_json);
  for (const auto& c : t.comments) {
    if (!manifest_json.empty() && c.rfind("# manifest:", 0) == 0) {
      out += "# source " + c.substr(2) + "\r\n";
    } else {
      out += c + "\r\n";
    }
  }
  out += csv::format_row(t.header);
  for (std::size_t i : front) out += csv::format_row(t.rows[candidates[i]]);
  result.rows_out = front.size();
  result.csv = std::move(out);
  return result;
}

}  // namespace p2m
