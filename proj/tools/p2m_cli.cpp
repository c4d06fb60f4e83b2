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

#include <sys/stat.h>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "p2m/p2m.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitConfig = 2;
constexpr int kExitInfeasible = 3;

struct Failure {
  int code;
  std::string message;
};

void check(p2m_status s) {
  if (s == P2M_OK) return;
  throw Failure{s == P2M_INTERNAL ? kExitInternal : kExitConfig,
                std::string(p2m_status_name(s)) + ": " + p2m_last_error()};
}

class Buffer {
 public:
  ~Buffer() { p2m_buffer_destroy(buf_); }
  p2m_buffer** out() { return &buf_; }
  std::string str() const { return std::string(p2m_buffer_data(buf_), p2m_buffer_size(buf_)); }

 private:
  p2m_buffer* buf_ = nullptr;
};

template <class T, void (*Destroy)(T*)>
class Handle {
 public:
  Handle() = default;
  Handle(const Handle&) = delete;
  Handle& operator=(const Handle&) = delete;
  ~Handle() { Destroy(ptr_); }
  T** out() { return &ptr_; }
  T* get() const { return ptr_; }

 private:
  T* ptr_ = nullptr;
};

using Context = Handle<p2m_context, p2m_context_destroy>;
using Points = Handle<p2m_points, p2m_points_destroy>;
using ImageH = Handle<p2m_image, p2m_image_destroy>;
using WeightsH = Handle<p2m_weights, p2m_weights_destroy>;
using TransferH = Handle<p2m_transfer, p2m_transfer_destroy>;
using ActivationH = Handle<p2m_activation, p2m_activation_destroy>;

// Relative library paths that do not exist here are looked up in the
// directories listed in P2M_TECH_PATH.
std::string resolve_tech_path(const std::string& path) {
  if (path.empty() || fs::path(path).is_absolute() || fs::exists(path)) return path;
  const char* env = std::getenv("P2M_TECH_PATH");
  if (!env) return path;
  std::stringstream dirs(env);
  for (std::string dir; std::getline(dirs, dir, ':');) {
    if (dir.empty()) continue;
    const fs::path candidate = fs::path(dir) / path;
    if (fs::exists(candidate)) return candidate.string();
  }
  return path;
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitConfig, "cannot read '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out || !out.write(data.data(), static_cast<std::streamsize>(data.size())) || !out.flush()) {
    throw Failure{kExitConfig, "cannot write '" + path.string() + "'"};
  }
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Failure{kExitConfig, "cannot create output directory '" + dir + "'"};
}

std::string iso_utc(std::time_t t) {
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// SOURCE_DATE_EPOCH when set, otherwise the newest input modification time,
// so identical inputs give identical artifacts.
std::string manifest_timestamp(const std::vector<std::string>& inputs) {
  if (const char* sde = std::getenv("SOURCE_DATE_EPOCH")) {
    char* end = nullptr;
    const long long v = std::strtoll(sde, &end, 10);
    if (end != sde && *end == '\0' && v >= 0) return iso_utc(static_cast<std::time_t>(v));
  }
  std::time_t newest = 0;
  for (const auto& p : inputs) {
    struct stat st {};
    if (::stat(p.c_str(), &st) == 0 && st.st_mtime > newest) newest = st.st_mtime;
  }
  return iso_utc(newest);
}

struct Manifest {
  std::string command;
  std::vector<std::string> config_paths;
  std::vector<std::string> output_paths;
  std::optional<std::uint64_t> seed;

  std::string dump() const {
    json j;
    j["command"] = command;
    j["config_paths"] = config_paths;
    j["output_paths"] = output_paths;
    j["seed"] = seed ? json(*seed) : json(nullptr);
    j["tool_version"] = p2m_version();
    j["timestamp"] = manifest_timestamp(config_paths);
    return j.dump();
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

void load_library(p2m_context* ctx, const std::string& tech, const std::string& baseline, Manifest& m) {
  if (!tech.empty()) {
    const std::string path = resolve_tech_path(tech);
    m.config_paths.push_back(path);
    check(p2m_context_load_tech(ctx, read_text(path).c_str(), path.c_str()));
  }
  if (!baseline.empty()) {
    const std::string path = resolve_tech_path(baseline);
    m.config_paths.push_back(path);
    check(p2m_context_load_baseline(ctx, read_text(path).c_str(), path.c_str()));
  }
}

// ---------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string tech, layer, baseline, stack, format = "table";
  bool strict = false;
  std::string max_pixel_pitch, min_frame_rate, min_br, max_energy_norm;
  std::string parallel_adc = "1";
  std::uint32_t sign_phase_factor = 2;
};

std::string pick_stack(p2m_context* ctx, const std::string& requested) {
  if (!requested.empty()) return requested;
  Buffer buf;
  check(p2m_context_export_tech(ctx, buf.out()));
  const json tech = json::parse(buf.str());
  if (tech.contains("stacks") && tech["stacks"].size() == 1) return tech["stacks"].begin().key();
  throw Failure{kExitConfig, "--stack is required unless the library defines exactly one stack"};
}

void print_table(const json& pt) {
  const json& L = pt["layer"];
  const json& S = pt["stack"];
  auto row = [](const std::string& label, const std::string& value) {
    std::cout << std::string(label.size() < 18 ? 18 - label.size() : 0, ' ') << label << ' ' << value << '\n';
  };
  row("stack", S["name"].get<std::string>() + " (" + S["node"].get<std::string>() + ", " +
                   S["bond"].get<std::string>() + ", " + S["io"].get<std::string>() + ", " +
                   S["adc"].get<std::string>() + ", " + S["pixel"].get<std::string>() + ")");
  std::string layer;
  for (const char* k : {"k", "s", "c_o", "p", "h_i", "w_i", "binning", "pool_stride"}) {
    if (L.contains(k)) layer += (layer.empty() ? "" : " ") + std::string(k) + "=" + L[k].dump();
  }
  row("layer", layer);
  if (pt["metrics"].is_null()) {
    row("feasible", "no");
    for (const auto& v : pt["violations"]) row("violation", v.get<std::string>());
    return;
  }
  const json& m = pt["metrics"];
  const json& f = m["footprint"];
  auto um = [](const json& v) { return fmt("%.2f", v.get<double>() * 1e6) + " um"; };
  row("n_t", f["n_t"].dump());
  row("w_px", um(f["w_px_m"]) + " (" + f["limiter_w"].get<std::string>() + ")");
  row("h_px", um(f["h_px_m"]) + " (" + f["limiter_h"].get<std::string>() + ")");
  row("min_pitch", um(f["min_pitch_m"]) + " (" + f["pitch_limiter"].get<std::string>() + ")");
  row("pixel_area", fmt("%.4g", m["pixel_area_m2"].get<double>() * 1e12) + " um^2");
  row("normalized_area", fmt("%.4g", m["normalized_area"].get<double>()));
  const json& g = m["geometry"];
  row("output", g["h_o"].dump() + " x " + g["w_o"].dump() + " x " + g["c_o"].dump());
  row("br", fmt("%.4g", m["br"].get<double>()));
  row("transmitted_bits", m["transmitted_bits"].dump());
  row("n_parallel_adc", m["n_parallel_adc"].dump());
  if (!m["latency"].is_null()) {
    const json& l = m["latency"];
    row("n_c", l["n_c"].dump());
    row("t_frontend", fmt("%.4g", l["t_frontend_s"].get<double>()) + " s");
    row("frame_rate", fmt("%.4g", l["frame_rate"].get<double>()) + " fps");
  } else {
    row("frame_rate", "n/a");
  }
  if (!m["baseline_latency"].is_null()) {
    row("baseline_fps", fmt("%.4g", m["baseline_latency"]["frame_rate"].get<double>()) + " fps");
  }
  const json& e = m["energy"];
  row("n_read", e["n_read"].dump());
  row("e_compute", fmt("%.4g", e["e_compute_j"].get<double>()) + " J");
  row("e_io", fmt("%.4g", e["e_io_j"].get<double>()) + " J");
  row("e_frontend", fmt("%.4g", e["e_frontend_j"].get<double>()) + " J");
  row("baseline_energy", fmt("%.4g", m["baseline_energy"]["e_frontend_j"].get<double>()) + " J");
  row("normalized_energy", fmt("%.4g", e["normalized"].get<double>()));
  std::string violations;
  for (const auto& v : pt["violations"]) violations += (violations.empty() ? "" : ", ") + v.get<std::string>();
  row("feasible", pt["feasible"].get<bool>() ? "yes" : "no (" + violations + ")");
  for (const auto& n : pt["notes"]) row("note", n.get<std::string>());
}

void apply_options(p2m_context* ctx, const std::string& parallel_adc, std::uint32_t sign_phase_factor) {
  std::uint32_t n = 0;
  if (parallel_adc != "auto") {
    try {
      std::size_t used = 0;
      const unsigned long v = std::stoul(parallel_adc, &used);
      if (used != parallel_adc.size() || v == 0 || v > 0xFFFFFFFFul) throw std::invalid_argument("range");
      n = static_cast<std::uint32_t>(v);
    } catch (const std::exception&) {
      throw Failure{kExitConfig, "--parallel-adc: expected a positive integer or 'auto', got '" + parallel_adc + "'"};
    }
  }
  check(p2m_context_set_parallel_adc(ctx, n));
  check(p2m_context_set_sign_phase_factor(ctx, sign_phase_factor));
}

int cmd_evaluate(const EvaluateArgs& a) {
  Manifest manifest{"evaluate", {}, {}, std::nullopt};
  Context ctx;
  check(p2m_context_create(ctx.out()));
  load_library(ctx.get(), a.tech, a.baseline, manifest);
  apply_options(ctx.get(), a.parallel_adc, a.sign_phase_factor);
  manifest.config_paths.push_back(a.layer);
  const std::string layer = read_text(a.layer);

  json constraints = json::object();
  if (!a.max_pixel_pitch.empty()) constraints["max_pixel_pitch"] = a.max_pixel_pitch;
  if (!a.min_frame_rate.empty()) constraints["min_frame_rate"] = a.min_frame_rate;
  if (!a.min_br.empty()) constraints["min_br"] = a.min_br;
  if (!a.max_energy_norm.empty()) constraints["max_energy_norm"] = a.max_energy_norm;

  Points pts;
  check(p2m_evaluate(ctx.get(), layer.c_str(), pick_stack(ctx.get(), a.stack).c_str(), constraints.dump().c_str(),
                     pts.out()));
  Buffer buf;
  check(p2m_points_get_json(pts.get(), 0, buf.out()));
  json pt = json::parse(buf.str());

  if (a.format == "json") {
    json doc{{"manifest", json::parse(manifest.dump())}, {"point", pt}};
    std::cout << doc.dump(2) << '\n';
  } else {
    print_table(pt);
  }
  int feasible = 0;
  check(p2m_points_feasible(pts.get(), 0, &feasible));
  return a.strict && !feasible ? kExitInfeasible : kExitOk;
}

// ------------------------------------------------------------------- sweep

struct SweepArgs {
  std::string spec, out, tech, baseline, accuracy;
  unsigned jobs = 1;
};

int cmd_sweep(const SweepArgs& a) {
  Manifest manifest{"sweep", {}, {}, std::nullopt};
  Context ctx;
  check(p2m_context_create(ctx.out()));
  load_library(ctx.get(), a.tech, a.baseline, manifest);
  manifest.config_paths.push_back(a.spec);
  const std::string spec = read_text(a.spec);
  std::string accuracy;
  if (!a.accuracy.empty()) {
    manifest.config_paths.push_back(a.accuracy);
    accuracy = read_text(a.accuracy);
  }

  Points pts;
  check(p2m_sweep(ctx.get(), spec.c_str(), a.jobs, pts.out()));
  if (!a.accuracy.empty()) check(p2m_points_join_accuracy(pts.get(), accuracy.c_str()));

  const std::pair<p2m_export_kind, const char*> files[] = {
      {P2M_EXPORT_POINTS_CSV, "points.csv"},       {P2M_EXPORT_POINTS_JSON, "points.json"},
      {P2M_EXPORT_FIG_AREA, "fig_area.csv"},       {P2M_EXPORT_FIG_BR, "fig_br.csv"},
      {P2M_EXPORT_FIG_LATENCY, "fig_latency.csv"}, {P2M_EXPORT_FIG_ENERGY, "fig_energy.csv"}};
  for (const auto& [kind, name] : files) manifest.output_paths.push_back((fs::path(a.out) / name).string());
  const std::string m = manifest.dump();

  ensure_dir(a.out);
  for (const auto& [kind, name] : files) {
    Buffer buf;
    check(p2m_points_export(pts.get(), kind, m.c_str(), buf.out()));
    write_text(fs::path(a.out) / name, buf.str());
  }

  const std::size_t n = p2m_points_count(pts.get());
  std::size_t feasible = 0;
  for (std::size_t i = 0; i < n; ++i) {
    int f = 0;
    check(p2m_points_feasible(pts.get(), i, &f));
    feasible += f ? 1 : 0;
  }
  std::cout << n << " points, " << feasible << " feasible -> " << a.out << '\n';
  return kExitOk;
}

// ------------------------------------------------------------------ pareto

struct ParetoArgs {
  std::string points, objectives, out;
};

int cmd_pareto(const ParetoArgs& a) {
  Manifest manifest{"pareto", {a.points}, {}, std::nullopt};
  if (!a.out.empty()) manifest.output_paths.push_back(a.out);
  const std::string csv = read_text(a.points);
  Buffer buf;
  std::size_t rows_in = 0, rows_out = 0;
  check(p2m_pareto_csv(csv.c_str(), a.objectives.c_str(), manifest.dump().c_str(), buf.out(), &rows_in, &rows_out));
  if (a.out.empty()) {
    std::cout << buf.str();
    std::cerr << rows_out << " of " << rows_in << " points non-dominated\n";
  } else {
    write_text(a.out, buf.str());
    std::cout << rows_out << " of " << rows_in << " points non-dominated -> " << a.out << '\n';
  }
  return kExitOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string image, weights, layer, adc, transfer, out = ".", pool = "max";
  std::uint64_t seed = 0;
};

int cmd_simulate(const SimulateArgs& a) {
  Manifest manifest{"simulate", {}, {}, a.seed};
  ImageH img;
  if (a.image.rfind("random:", 0) == 0) {
    unsigned h = 0, w = 0;
    char tail = 0;
    if (std::sscanf(a.image.c_str() + 7, "%ux%u%c", &h, &w, &tail) != 2 || h == 0 || w == 0) {
      throw Failure{kExitConfig, "--image: expected random:HxW, got '" + a.image + "'"};
    }
    check(p2m_image_random(h, w, a.seed, img.out()));
  } else {
    manifest.config_paths.push_back(a.image);
    if (!fs::exists(a.image)) throw Failure{kExitConfig, "cannot read '" + a.image + "'"};
    check(p2m_image_load_file(a.image.c_str(), img.out()));
  }
  for (const auto* p : {&a.weights, &a.layer, &a.adc, &a.transfer}) {
    if (!p->empty()) manifest.config_paths.push_back(*p);
  }
  WeightsH weights;
  check(p2m_weights_load_json(read_text(a.weights).c_str(), weights.out()));
  const std::string layer = read_text(a.layer);
  const std::string adc = read_text(a.adc);
  TransferH tf;
  if (a.transfer.empty()) {
    check(p2m_transfer_identity(tf.out()));
  } else {
    check(p2m_transfer_load_json(read_text(a.transfer).c_str(), tf.out()));
  }

  ActivationH act;
  check(p2m_simulate(img.get(), weights.get(), layer.c_str(), adc.c_str(), tf.get(),
                     a.pool == "average" ? P2M_POOL_AVERAGE : P2M_POOL_MAX, act.out()));

  const fs::path bin = fs::path(a.out) / "activations.p2ma";
  const fs::path csv = fs::path(a.out) / "activations.csv";
  manifest.output_paths = {bin.string(), csv.string()};
  const std::string m = manifest.dump();
  ensure_dir(a.out);
  {
    Buffer buf;
    check(p2m_activation_export_binary(act.get(), m.c_str(), buf.out()));
    write_text(bin, buf.str());
  }
  {
    Buffer buf;
    check(p2m_activation_export_csv(act.get(), m.c_str(), buf.out()));
    write_text(csv, buf.str());
  }

  std::uint32_t h = 0, w = 0, c = 0;
  check(p2m_activation_dims(act.get(), &h, &w, &c));
  const std::uint64_t emitted = p2m_activation_emitted_bits(act.get());
  const json adc_doc = json::parse(adc);
  std::uint64_t model_bits = 0, conventional = 0;
  check(p2m_transmitted_bits(layer.c_str(), adc_doc.at("bits").get<std::uint32_t>(), &model_bits, &conventional));

  std::cout << "activation " << h << " x " << w << " x " << c << '\n';
  std::cout << "emitted_bits " << emitted << '\n';
  std::cout << "model_transmitted_bits " << model_bits << (model_bits == emitted ? " (match)" : " (MISMATCH)")
            << '\n';
  std::cout << "conventional_bits " << conventional << '\n';
  std::cout << "br " << fmt("%.6g", static_cast<double>(conventional) / static_cast<double>(emitted)) << '\n';
  std::cout << "wrote " << bin.string() << ", " << csv.string() << '\n';
  return kExitOk;
}

// --------------------------------------------------------------------- fit

struct FitArgs {
  std::string samples, kind = "polynomial", out;
};

int cmd_fit(const FitArgs& a) {
  std::istringstream in(read_text(a.samples));
  std::vector<double> xs, ys;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    char* end = nullptr;
    const double x = std::strtod(line.c_str(), &end);
    if (end == line.c_str() || *end != ',') {
      if (xs.empty() && line_no == 1) continue;  // header
      throw Failure{kExitConfig, a.samples + ":" + std::to_string(line_no) + ": expected 'x,y'"};
    }
    const char* ystart = end + 1;
    const double y = std::strtod(ystart, &end);
    if (end == ystart || *end != '\0') {
      throw Failure{kExitConfig, a.samples + ":" + std::to_string(line_no) + ": expected 'x,y'"};
    }
    xs.push_back(x);
    ys.push_back(y);
  }
  const p2m_transfer_kind kind = a.kind == "tanh" ? P2M_TRANSFER_TANH : P2M_TRANSFER_POLYNOMIAL;
  TransferH tf;
  check(p2m_transfer_fit(xs.data(), ys.data(), xs.size(), kind, tf.out()));
  Buffer buf;
  check(p2m_transfer_to_json(tf.get(), buf.out()));
  const json doc = json::parse(buf.str());
  if (!doc.value("monotone", true)) std::cerr << "warning: fitted transfer is not monotone over its domain\n";
  if (a.out.empty()) {
    std::cout << buf.str();
  } else {
    write_text(a.out, buf.str());
    std::cout << "rms " << fmt("%.6g", doc.value("rms", 0.0)) << " -> " << a.out << '\n';
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"P2M design-space exploration and first-layer simulation"};
  app.set_version_flag("--version", std::string(p2m_version()));
  app.require_subcommand(1);

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate one layer on one technology stack");
  evaluate->add_option("--tech", ev.tech, "Technology library JSON")->required();
  evaluate->add_option("--layer", ev.layer, "Layer JSON")->required();
  evaluate->add_option("--baseline", ev.baseline, "Baseline readout JSON");
  evaluate->add_option("--stack", ev.stack, "Stack name from the library");
  evaluate->add_option("--format", ev.format, "Output format")->check(CLI::IsMember({"table", "json"}));
  evaluate->add_flag("--strict", ev.strict, "Exit 3 when the point is infeasible");
  evaluate->add_option("--max-pixel-pitch", ev.max_pixel_pitch, "Constraint, e.g. 5um");
  evaluate->add_option("--min-frame-rate", ev.min_frame_rate, "Constraint [1/s]");
  evaluate->add_option("--min-br", ev.min_br, "Constraint on bandwidth reduction");
  evaluate->add_option("--max-energy-norm", ev.max_energy_norm, "Constraint on normalized energy");
  evaluate->add_option("--parallel-adc", ev.parallel_adc, "ADCs read in parallel, or 'auto'");
  evaluate->add_option("--sign-phase-factor", ev.sign_phase_factor, "Exposure/conversion phases per read")
      ->check(CLI::PositiveNumber);

  SweepArgs sw;
  auto* sweep = app.add_subcommand("sweep", "Sweep a layer/technology grid");
  sweep->add_option("--spec", sw.spec, "Sweep spec JSON")->required();
  sweep->add_option("--out", sw.out, "Output directory")->required();
  sweep->add_option("--tech", sw.tech, "Technology library JSON");
  sweep->add_option("--baseline", sw.baseline, "Baseline readout JSON");
  sweep->add_option("--accuracy", sw.accuracy, "Accuracy table CSV to join");
  sweep->add_option("--jobs", sw.jobs, "Concurrent evaluations")->check(CLI::PositiveNumber);

  ParetoArgs pa;
  auto* pareto = app.add_subcommand("pareto", "Extract the non-dominated points of a points CSV");
  pareto->add_option("--points", pa.points, "points.csv from a sweep")->required();
  pareto->add_option("--objectives", pa.objectives, "metric:min|max,...")->required();
  pareto->add_option("--out", pa.out, "Output CSV (default stdout)");

  SimulateArgs si;
  auto* simulate = app.add_subcommand("simulate", "Run the in-pixel first layer on an image");
  simulate->add_option("--image", si.image, "PPM/PNG file or random:HxW")->required();
  simulate->add_option("--weights", si.weights, "Weight JSON")->required();
  simulate->add_option("--layer", si.layer, "Layer JSON")->required();
  simulate->add_option("--adc", si.adc, "ADC JSON {bits, full_scale}")->required();
  simulate->add_option("--transfer", si.transfer, "Transfer function JSON (default identity)");
  simulate->add_option("--seed", si.seed, "Seed for random images");
  simulate->add_option("--pool", si.pool, "Peripheral pooling")->check(CLI::IsMember({"max", "average"}));
  simulate->add_option("--out", si.out, "Output directory");

  FitArgs fi;
  auto* fit = app.add_subcommand("fit", "Fit a transfer function to x,y samples");
  fit->add_option("--samples", fi.samples, "CSV of x,y rows")->required();
  fit->add_option("--kind", fi.kind, "Model")->check(CLI::IsMember({"polynomial", "tanh"}));
  fit->add_option("--out", fi.out, "Output JSON (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*evaluate) return cmd_evaluate(ev);
    if (*sweep) return cmd_sweep(sw);
    if (*pareto) return cmd_pareto(pa);
    if (*simulate) return cmd_simulate(si);
    if (*fit) return cmd_fit(fi);
  } catch (const Failure& f) {
    std::cerr << "p2m: " << f.message << '\n';
    return f.code;
  } catch (const json::exception& e) {
    std::cerr << "p2m: config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "p2m: internal error: " << e.what() << '\n';
    return kExitInternal;
  }
  return kExitInternal;
}
