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
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "p2m/area_model.hpp"
#include "p2m/bandwidth_model.hpp"
#include "p2m/energy_model.hpp"
#include "p2m/latency_model.hpp"
#include "p2m/pareto.hpp"
#include "p2m/techlib.hpp"

namespace p2m {

/// Upper/lower bounds a design point must satisfy. Violations are reported
/// under these field names.
struct Constraints {
  std::optional<double> max_pixel_pitch;  ///< [m]
  std::optional<double> min_frame_rate;   ///< [1/s]
  std::optional<double> min_br;
  std::optional<double> max_energy_norm;
};

struct EvalOptions {
  LatencyOptions latency;
  EnergyOptions energy;
  /// Use k parallel ADCs whenever the stride is non-overlapping; overrides
  /// latency.n_parallel_adc.
  bool auto_parallel_adc = false;
};

struct MetricSet {
  FootprintResult footprint;
  double pixel_area = 0.0;       ///< [m^2]
  double normalized_area = 0.0;  ///< weight-die pixel area / native CIS pixel area
  OutputGeometry geometry;
  double br = 0.0;
  std::uint64_t transmitted_bits = 0;
  std::uint64_t conventional_bits = 0;
  std::uint32_t n_parallel_adc = 1;
  /// Absent when the link has no bandwidth or the ADC parallelism is invalid.
  std::optional<LatencyBreakdown> latency;
  std::optional<LatencyBreakdown> baseline_latency;
  EnergyBreakdown energy;
  EnergyBreakdown baseline_energy;
};

struct AccuracyRecord {
  std::string dataset;
  std::string metric;
  double value = 0.0;
};

struct DesignPoint {
  std::size_t index = 0;  ///< position in the sweep grid
  LayerSpec layer;
  TechStack stack;
  std::optional<MetricSet> metrics;  ///< absent when the geometry is degenerate
  std::vector<AccuracyRecord> accuracy;
  bool feasible = true;
  std::vector<std::string> violations;
  std::vector<std::string> notes;
};

/// Runs every model on one (layer, stack). Degenerate geometry does not
/// throw: the point comes back infeasible with a "geometry: ..." violation.
DesignPoint evaluate(const LayerSpec& layer, const TechStack& stack, const Baseline& baseline,
                     const Constraints& constraints = {}, const EvalOptions& options = {});

/// Re-checks `constraints` against already computed metrics.
void apply_constraints(DesignPoint& point, const Constraints& constraints);

struct LayerGrid {
  std::vector<std::uint32_t> k{3};
  std::vector<std::uint32_t> s{1};
  std::vector<std::uint32_t> c_o{8};
  std::vector<std::uint32_t> p{0};
  std::vector<std::uint32_t> binning{1};
  std::vector<std::uint32_t> pool_stride{1};
};

struct SweepSpec {
  LayerGrid layer_grid;
  std::uint32_t h_i = 0;
  std::uint32_t w_i = 0;
  std::vector<TechStack> tech_grid;
  Constraints constraints;
  EvalOptions options;
  std::string name;
};

void validate(const SweepSpec& spec);

/// Number of points sweep() will produce.
std::size_t sweep_size(const SweepSpec& spec);

/// Cross product in lexicographic grid order: stack (outermost), k, s, c_o,
/// p, binning, pool_stride (innermost). `jobs` > 1 evaluates concurrently;
/// the result order never depends on it.
std::vector<DesignPoint> sweep(const SweepSpec& spec, const Baseline& baseline, unsigned jobs = 1);

/// Parses a sweep document against `library`. An inline "tech" section is
/// merged into `library` first; a "baseline" section there replaces the
/// library's baseline.
SweepSpec sweep_spec_from_json(const nlohmann::json& doc, TechLibrary& library);
Constraints constraints_from_json(const nlohmann::json& j);
EvalOptions eval_options_from_json(const nlohmann::json& j);

/// Metric names understood by pareto_front() and metric_value().
const std::vector<std::string>& metric_names();
std::optional<double> metric_value(const DesignPoint& point, std::string_view metric);

/// Non-dominated subset of the feasible points that have every objective,
/// in input order. Unknown metric names throw ArgumentError listing the valid ones.
std::vector<DesignPoint> pareto_front(const std::vector<DesignPoint>& points,
                                      const std::vector<Objective>& objectives);

struct AccuracyRow {
  std::string dataset;
  std::uint32_t k = 0, s = 0, c_o = 0;
  std::string metric;
  double value = 0.0;
};

struct AccuracyTable {
  std::vector<AccuracyRow> rows;
};

/// CSV with header `dataset,k,s,c_o,metric,value`. Duplicate
/// (dataset,k,s,c_o,metric) keys are rejected.
AccuracyTable accuracy_table_from_csv(std::string_view text);

/// Exact (k,s,c_o) join; every matching row is attached, never interpolated.
void join_accuracy(std::vector<DesignPoint>& points, const AccuracyTable& table);

// Exports. `manifest_json` is embedded (CSV: leading '#' line; JSON: "manifest").

/// Column order of points CSV files.
const std::vector<std::string>& points_csv_columns();
std::string points_to_csv(const std::vector<DesignPoint>& points, std::string_view manifest_json = {});
nlohmann::json point_to_json(const DesignPoint& point);
std::string points_to_json(const std::vector<DesignPoint>& points, std::string_view manifest_json = {});

enum class FigureSeries { Area, BandwidthReduction, Latency, Energy };
std::string_view figure_series_file(FigureSeries series) noexcept;
std::string figure_series_csv(const std::vector<DesignPoint>& points, FigureSeries series,
                              std::string_view manifest_json = {});

/// CSV column a pareto metric lives in.
std::string_view metric_csv_column(std::string_view metric);

/// Pareto filter over an exported points CSV: keeps header, comments and the
/// surviving rows verbatim (feasible rows only).
struct CsvParetoResult {
  std::string csv;
  std::size_t rows_in = 0;
  std::size_t feasible_in = 0;
  std::size_t rows_out = 0;
};
CsvParetoResult pareto_csv(std::string_view points_csv, const std::vector<Objective>& objectives,
                           std::string_view manifest_json = {});

/// Shortest round-trip decimal form used by every exporter.
std::string format_number(double v);

}  // namespace p2m
