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

#include "p2m/p2m.h"

#include <algorithm>
#include <cstring>
#include <exception>
#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "p2m/activation_io.hpp"
#include "p2m/bandwidth_model.hpp"
#include "p2m/dse.hpp"
#include "p2m/error.hpp"
#include "p2m/image_io.hpp"
#include "p2m/pixel_sim.hpp"
#include "p2m/techlib.hpp"
#include "p2m/transfer.hpp"

using nlohmann::json;

struct p2m_context {
  p2m::TechLibrary library;
  p2m::EvalOptions options;
};

struct p2m_buffer {
  std::string bytes;
};

struct p2m_points {
  std::vector<p2m::DesignPoint> points;
};

struct p2m_image {
  p2m::Image image;
};

struct p2m_weights {
  p2m::WeightBanks banks;
};

struct p2m_transfer {
  p2m::TransferFunction tf = p2m::TransferFunction::identity();
};

struct p2m_activation {
  p2m::ActivationMap map;
};

namespace {

thread_local std::string g_last_error;

p2m_status fail(p2m_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

p2m_status status_of(p2m::ErrorKind kind) {
  switch (kind) {
    case p2m::ErrorKind::Config: return P2M_CONFIG;
    case p2m::ErrorKind::Geometry: return P2M_GEOMETRY;
    case p2m::ErrorKind::Shape: return P2M_SHAPE;
    case p2m::ErrorKind::Numeric: return P2M_NUMERIC;
    case p2m::ErrorKind::Io: return P2M_IO;
    case p2m::ErrorKind::Argument: return P2M_INVALID_ARGUMENT;
  }
  return P2M_INTERNAL;
}

template <class F>
p2m_status guarded(F&& body) {
  try {
    body();
    return P2M_OK;
  } catch (const p2m::Error& e) {
    return fail(status_of(e.kind()), e.what());
  } catch (const json::exception& e) {
    return fail(P2M_CONFIG, e.what());
  } catch (const std::bad_alloc&) {
    return fail(P2M_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(P2M_INTERNAL, e.what());
  } catch (...) {
    return fail(P2M_INTERNAL, "unknown error");
  }
}

#define P2M_REQUIRE(cond, what) \
  if (!(cond)) return fail(P2M_INVALID_ARGUMENT, what)

json parse_doc(const char* text, const char* what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw p2m::ConfigError(std::string(what) + ": " + e.what());
  }
}

p2m_buffer* make_buffer(std::string bytes) { return new p2m_buffer{std::move(bytes)}; }

std::string_view opt(const char* s) { return s ? std::string_view(s) : std::string_view(); }

}  // namespace

extern "C" {

const char* p2m_version(void) { return P2M_VERSION_STRING; }

const char* p2m_status_name(p2m_status status) {
  switch (status) {
    case P2M_OK: return "ok";
    case P2M_INVALID_ARGUMENT: return "invalid argument";
    case P2M_CONFIG: return "config error";
    case P2M_GEOMETRY: return "geometry error";
    case P2M_IO: return "io error";
    case P2M_SHAPE: return "shape error";
    case P2M_NUMERIC: return "numeric error";
    case P2M_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* p2m_last_error(void) { return g_last_error.c_str(); }

const char* p2m_buffer_data(const p2m_buffer* buf) { return buf ? buf->bytes.c_str() : nullptr; }
size_t p2m_buffer_size(const p2m_buffer* buf) { return buf ? buf->bytes.size() : 0; }
void p2m_buffer_destroy(p2m_buffer* buf) { delete buf; }

p2m_status p2m_context_create(p2m_context** out) {
  P2M_REQUIRE(out, "out is null");
  return guarded([&] { *out = new p2m_context(); });
}

void p2m_context_destroy(p2m_context* ctx) { delete ctx; }

p2m_status p2m_context_load_tech(p2m_context* ctx, const char* text, const char* source) {
  P2M_REQUIRE(ctx && text, "context and json are required");
  return guarded([&] { ctx->library.load(std::string_view(text), source ? source : "<memory>"); });
}

p2m_status p2m_context_load_baseline(p2m_context* ctx, const char* text, const char* source) {
  P2M_REQUIRE(ctx && text, "context and json are required");
  return guarded([&] {
    json doc = parse_doc(text, source ? source : "baseline");
    if (!doc.is_object() || !doc.contains("baseline")) doc = json{{"baseline", std::move(doc)}};
    ctx->library.load_document(doc, source ? source : "<memory>");
  });
}

p2m_status p2m_context_export_tech(const p2m_context* ctx, p2m_buffer** out) {
  P2M_REQUIRE(ctx && out, "context and out are required");
  return guarded([&] { *out = make_buffer(ctx->library.to_json().dump(2) + "\n"); });
}

p2m_status p2m_context_set_parallel_adc(p2m_context* ctx, uint32_t n) {
  P2M_REQUIRE(ctx, "context is null");
  ctx->options.auto_parallel_adc = n == 0;
  ctx->options.latency.n_parallel_adc = n == 0 ? 1 : n;
  return P2M_OK;
}

p2m_status p2m_context_set_sign_phase_factor(p2m_context* ctx, uint32_t factor) {
  P2M_REQUIRE(ctx, "context is null");
  P2M_REQUIRE(factor >= 1, "sign-phase factor must be >= 1");
  ctx->options.latency.sign_phase_factor = factor;
  ctx->options.energy.sign_phase_factor = factor;
  return P2M_OK;
}

p2m_status p2m_context_set_energy_sign_phase(p2m_context* ctx, int enabled) {
  P2M_REQUIRE(ctx, "context is null");
  ctx->options.energy.sign_phase = enabled != 0;
  return P2M_OK;
}

p2m_status p2m_evaluate(p2m_context* ctx, const char* layer_json, const char* stack_name,
                        const char* constraints_json, p2m_points** out) {
  P2M_REQUIRE(ctx && layer_json && stack_name && out, "context, layer, stack and out are required");
  return guarded([&] {
    const auto& baseline = ctx->library.baseline();
    if (!baseline) throw p2m::ConfigError("baseline.adc: missing baseline ADC entry");
    const p2m::LayerSpec layer = p2m::layer_from_json(parse_doc(layer_json, "layer"));
    const p2m::TechStack stack = ctx->library.stack(stack_name);
    p2m::Constraints c;
    if (constraints_json) c = p2m::constraints_from_json(parse_doc(constraints_json, "constraints"));
    auto pts = std::make_unique<p2m_points>();
    pts->points.push_back(p2m::evaluate(layer, stack, *baseline, c, ctx->options));
    *out = pts.release();
  });
}

p2m_status p2m_sweep(p2m_context* ctx, const char* spec_json, unsigned jobs, p2m_points** out) {
  P2M_REQUIRE(ctx && spec_json && out, "context, spec and out are required");
  return guarded([&] {
    const p2m::SweepSpec spec = p2m::sweep_spec_from_json(parse_doc(spec_json, "sweep spec"), ctx->library);
    const auto& baseline = ctx->library.baseline();
    if (!baseline) throw p2m::ConfigError("baseline.adc: missing baseline ADC entry");
    auto pts = std::make_unique<p2m_points>();
    pts->points = p2m::sweep(spec, *baseline, jobs);
    *out = pts.release();
  });
}

void p2m_points_destroy(p2m_points* points) { delete points; }

size_t p2m_points_count(const p2m_points* points) { return points ? points->points.size() : 0; }

p2m_status p2m_points_feasible(const p2m_points* points, size_t i, int* feasible) {
  P2M_REQUIRE(points && feasible, "points and feasible are required");
  P2M_REQUIRE(i < points->points.size(), "point index out of range");
  *feasible = points->points[i].feasible ? 1 : 0;
  return P2M_OK;
}

p2m_status p2m_points_get_json(const p2m_points* points, size_t i, p2m_buffer** out) {
  P2M_REQUIRE(points && out, "points and out are required");
  P2M_REQUIRE(i < points->points.size(), "point index out of range");
  return guarded([&] { *out = make_buffer(p2m::point_to_json(points->points[i]).dump(2) + "\n"); });
}

p2m_status p2m_points_join_accuracy(p2m_points* points, const char* accuracy_csv) {
  P2M_REQUIRE(points && accuracy_csv, "points and csv are required");
  return guarded([&] { p2m::join_accuracy(points->points, p2m::accuracy_table_from_csv(accuracy_csv)); });
}

p2m_status p2m_points_export(const p2m_points* points, p2m_export_kind kind, const char* manifest_json,
                             p2m_buffer** out) {
  P2M_REQUIRE(points && out, "points and out are required");
  return guarded([&] {
    const auto& p = points->points;
    const auto m = opt(manifest_json);
    switch (kind) {
      case P2M_EXPORT_POINTS_CSV: *out = make_buffer(p2m::points_to_csv(p, m)); return;
      case P2M_EXPORT_POINTS_JSON: *out = make_buffer(p2m::points_to_json(p, m)); return;
      case P2M_EXPORT_FIG_AREA:
        *out = make_buffer(p2m::figure_series_csv(p, p2m::FigureSeries::Area, m));
        return;
      case P2M_EXPORT_FIG_BR:
        *out = make_buffer(p2m::figure_series_csv(p, p2m::FigureSeries::BandwidthReduction, m));
        return;
      case P2M_EXPORT_FIG_LATENCY:
        *out = make_buffer(p2m::figure_series_csv(p, p2m::FigureSeries::Latency, m));
        return;
      case P2M_EXPORT_FIG_ENERGY:
        *out = make_buffer(p2m::figure_series_csv(p, p2m::FigureSeries::Energy, m));
        return;
    }
    throw p2m::ArgumentError("unknown export kind");
  });
}

p2m_status p2m_points_pareto(const p2m_points* points, const char* objectives, p2m_points** out) {
  P2M_REQUIRE(points && objectives && out, "points, objectives and out are required");
  return guarded([&] {
    auto pts = std::make_unique<p2m_points>();
    pts->points = p2m::pareto_front(points->points, p2m::parse_objectives(objectives));
    *out = pts.release();
  });
}

p2m_status p2m_pareto_csv(const char* points_csv, const char* objectives, const char* manifest_json,
                          p2m_buffer** out, size_t* rows_in, size_t* rows_out) {
  P2M_REQUIRE(points_csv && objectives && out, "csv, objectives and out are required");
  return guarded([&] {
    auto r = p2m::pareto_csv(points_csv, p2m::parse_objectives(objectives), opt(manifest_json));
    if (rows_in) *rows_in = r.rows_in;
    if (rows_out) *rows_out = r.rows_out;
    *out = make_buffer(std::move(r.csv));
  });
}

p2m_status p2m_image_load_file(const char* path, p2m_image** out) {
  P2M_REQUIRE(path && out, "path and out are required");
  return guarded([&] { *out = new p2m_image{p2m::load_image(path)}; });
}

p2m_status p2m_image_random(uint32_t height, uint32_t width, uint64_t seed, p2m_image** out) {
  P2M_REQUIRE(out, "out is null");
  P2M_REQUIRE(height > 0 && width > 0, "image dimensions must be positive");
  return guarded([&] { *out = new p2m_image{p2m::random_image(height, width, seed)}; });
}

p2m_status p2m_image_dims(const p2m_image* img, uint32_t* height, uint32_t* width) {
  P2M_REQUIRE(img, "image is null");
  if (height) *height = img->image.height;
  if (width) *width = img->image.width;
  return P2M_OK;
}

void p2m_image_destroy(p2m_image* img) { delete img; }

p2m_status p2m_weights_load_json(const char* text, p2m_weights** out) {
  P2M_REQUIRE(text && out, "json and out are required");
  return guarded([&] { *out = new p2m_weights{p2m::weight_banks_from_json(parse_doc(text, "weights"))}; });
}

p2m_status p2m_weights_export_banks_json(const p2m_weights* w, p2m_buffer** out) {
  P2M_REQUIRE(w && out, "weights and out are required");
  return guarded([&] { *out = make_buffer(w->banks.to_json().dump(2) + "\n"); });
}

void p2m_weights_destroy(p2m_weights* w) { delete w; }

p2m_status p2m_transfer_identity(p2m_transfer** out) {
  P2M_REQUIRE(out, "out is null");
  return guarded([&] { *out = new p2m_transfer{}; });
}

p2m_status p2m_transfer_load_json(const char* text, p2m_transfer** out) {
  P2M_REQUIRE(text && out, "json and out are required");
  return guarded([&] { *out = new p2m_transfer{p2m::TransferFunction::from_json(parse_doc(text, "transfer"))}; });
}

p2m_status p2m_transfer_fit(const double* x, const double* y, size_t n, p2m_transfer_kind kind,
                            p2m_transfer** out) {
  P2M_REQUIRE(out && (n == 0 || (x && y)), "samples and out are required");
  P2M_REQUIRE(kind >= P2M_TRANSFER_IDENTITY && kind <= P2M_TRANSFER_TANH, "unknown transfer kind");
  return guarded([&] {
    std::vector<p2m::TransferSample> samples(n);
    for (size_t i = 0; i < n; ++i) samples[i] = {x[i], y[i]};
    *out = new p2m_transfer{p2m::fit_transfer(samples, static_cast<p2m::TransferKind>(kind))};
  });
}

p2m_status p2m_transfer_to_json(const p2m_transfer* tf, p2m_buffer** out) {
  P2M_REQUIRE(tf && out, "transfer and out are required");
  return guarded([&] { *out = make_buffer(tf->tf.to_json().dump(2) + "\n"); });
}

double p2m_transfer_eval(const p2m_transfer* tf, double x) { return tf ? tf->tf(x) : x; }

void p2m_transfer_destroy(p2m_transfer* tf) { delete tf; }

p2m_status p2m_simulate(const p2m_image* img, const p2m_weights* w, const char* layer_json,
                        const char* adc_json, const p2m_transfer* tf, p2m_pool_mode pool,
                        p2m_activation** out) {
  P2M_REQUIRE(img && w && layer_json && adc_json && out, "image, weights, layer, adc and out are required");
  P2M_REQUIRE(pool == P2M_POOL_MAX || pool == P2M_POOL_AVERAGE, "unknown pool mode");
  return guarded([&] {
    const p2m::LayerSpec layer = p2m::layer_from_json(parse_doc(layer_json, "layer"));
    const p2m::AdcModel adc = p2m::adc_model_from_json(parse_doc(adc_json, "adc"));
    const p2m::TransferFunction identity = p2m::TransferFunction::identity();
    *out = new p2m_activation{p2m::forward(img->image, w->banks, layer, tf ? tf->tf : identity, adc,
                                           pool == P2M_POOL_MAX ? p2m::PoolMode::Max : p2m::PoolMode::Average)};
  });
}

p2m_status p2m_activation_dims(const p2m_activation* act, uint32_t* height, uint32_t* width,
                               uint32_t* channels) {
  P2M_REQUIRE(act, "activation is null");
  if (height) *height = act->map.height;
  if (width) *width = act->map.width;
  if (channels) *channels = act->map.channels;
  return P2M_OK;
}

uint64_t p2m_activation_emitted_bits(const p2m_activation* act) { return act ? act->map.emitted_bits() : 0; }

p2m_status p2m_activation_counts(const p2m_activation* act, uint32_t* dst, size_t capacity, size_t* n) {
  P2M_REQUIRE(act, "activation is null");
  const auto& c = act->map.counts;
  if (n) *n = c.size();
  if (dst) std::copy_n(c.begin(), std::min(capacity, c.size()), dst);
  return P2M_OK;
}

p2m_status p2m_activation_export_binary(const p2m_activation* act, const char* manifest_json, p2m_buffer** out) {
  P2M_REQUIRE(act && out, "activation and out are required");
  return guarded([&] {
    const auto bytes = p2m::encode_activation(act->map, opt(manifest_json));
    *out = make_buffer(std::string(bytes.begin(), bytes.end()));
  });
}

p2m_status p2m_activation_export_csv(const p2m_activation* act, const char* manifest_json, p2m_buffer** out) {
  P2M_REQUIRE(act && out, "activation and out are required");
  return guarded([&] { *out = make_buffer(p2m::activation_to_csv(act->map, opt(manifest_json))); });
}

void p2m_activation_destroy(p2m_activation* act) { delete act; }

p2m_status p2m_transmitted_bits(const char* layer_json, uint32_t adc_bits, uint64_t* transmitted,
                                uint64_t* conventional) {
  P2M_REQUIRE(layer_json, "layer is required");
  P2M_REQUIRE(adc_bits >= 1, "adc bits must be >= 1");
  return guarded([&] {
    const p2m::LayerSpec layer = p2m::layer_from_json(parse_doc(layer_json, "layer"));
    p2m::AdcSpec adc;
    adc.bits = adc_bits;
    if (transmitted) *transmitted = p2m::transmitted_bits(layer, adc);
    if (conventional) *conventional = p2m::conventional_bits(layer);
  });
}

}  // extern "C"
