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

#ifndef P2M_P2M_H
#define P2M_P2M_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(P2M_BUILDING_LIBRARY)
#    define P2M_API __declspec(dllexport)
#  else
#    define P2M_API __declspec(dllimport)
#  endif
#else
#  define P2M_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum p2m_status {
  P2M_OK = 0,
  P2M_INVALID_ARGUMENT = 1,
  P2M_CONFIG = 2,
  P2M_GEOMETRY = 3,
  P2M_IO = 4,
  P2M_SHAPE = 5,
  P2M_NUMERIC = 6,
  P2M_INTERNAL = 7
} p2m_status;

typedef enum p2m_export_kind {
  P2M_EXPORT_POINTS_CSV = 0,
  P2M_EXPORT_POINTS_JSON = 1,
  P2M_EXPORT_FIG_AREA = 2,
  P2M_EXPORT_FIG_BR = 3,
  P2M_EXPORT_FIG_LATENCY = 4,
  P2M_EXPORT_FIG_ENERGY = 5
} p2m_export_kind;

typedef enum p2m_pool_mode { P2M_POOL_MAX = 0, P2M_POOL_AVERAGE = 1 } p2m_pool_mode;

typedef enum p2m_transfer_kind {
  P2M_TRANSFER_IDENTITY = 0,
  P2M_TRANSFER_POLYNOMIAL = 1,
  P2M_TRANSFER_TANH = 2
} p2m_transfer_kind;

typedef struct p2m_context p2m_context;
typedef struct p2m_buffer p2m_buffer;
typedef struct p2m_points p2m_points;
typedef struct p2m_image p2m_image;
typedef struct p2m_weights p2m_weights;
typedef struct p2m_transfer p2m_transfer;
typedef struct p2m_activation p2m_activation;

/* Library information and errors. The last error message is per thread and
 * stays valid until the next failing call on that thread. */
P2M_API const char* p2m_version(void);
P2M_API const char* p2m_status_name(p2m_status status);
P2M_API const char* p2m_last_error(void);

/* Owned byte/text buffers returned by export calls. Text is NUL-terminated. */
P2M_API const char* p2m_buffer_data(const p2m_buffer* buf);
P2M_API size_t p2m_buffer_size(const p2m_buffer* buf);
P2M_API void p2m_buffer_destroy(p2m_buffer* buf);

/* Context: technology library, baseline and evaluation options. */
P2M_API p2m_status p2m_context_create(p2m_context** out);
P2M_API void p2m_context_destroy(p2m_context* ctx);
P2M_API p2m_status p2m_context_load_tech(p2m_context* ctx, const char* json, const char* source);
P2M_API p2m_status p2m_context_load_baseline(p2m_context* ctx, const char* json, const char* source);
P2M_API p2m_status p2m_context_export_tech(const p2m_context* ctx, p2m_buffer** out);
/* n = 0 selects k ADCs whenever the stride is non-overlapping. */
P2M_API p2m_status p2m_context_set_parallel_adc(p2m_context* ctx, uint32_t n);
P2M_API p2m_status p2m_context_set_sign_phase_factor(p2m_context* ctx, uint32_t factor);
P2M_API p2m_status p2m_context_set_energy_sign_phase(p2m_context* ctx, int enabled);

/* Design-space evaluation. `constraints_json` may be NULL. */
P2M_API p2m_status p2m_evaluate(p2m_context* ctx, const char* layer_json, const char* stack_name,
                                const char* constraints_json, p2m_points** out);
P2M_API p2m_status p2m_sweep(p2m_context* ctx, const char* spec_json, unsigned jobs, p2m_points** out);
P2M_API void p2m_points_destroy(p2m_points* points);
P2M_API size_t p2m_points_count(const p2m_points* points);
P2M_API p2m_status p2m_points_feasible(const p2m_points* points, size_t i, int* feasible);
P2M_API p2m_status p2m_points_get_json(const p2m_points* points, size_t i, p2m_buffer** out);
P2M_API p2m_status p2m_points_join_accuracy(p2m_points* points, const char* accuracy_csv);
P2M_API p2m_status p2m_points_export(const p2m_points* points, p2m_export_kind kind,
                                     const char* manifest_json, p2m_buffer** out);
/* `objectives` is "metric:min|max,...". */
P2M_API p2m_status p2m_points_pareto(const p2m_points* points, const char* objectives, p2m_points** out);
P2M_API p2m_status p2m_pareto_csv(const char* points_csv, const char* objectives, const char* manifest_json,
                                  p2m_buffer** out, size_t* rows_in, size_t* rows_out);

/* Simulator inputs. */
P2M_API p2m_status p2m_image_load_file(const char* path, p2m_image** out);
P2M_API p2m_status p2m_image_random(uint32_t height, uint32_t width, uint64_t seed, p2m_image** out);
P2M_API p2m_status p2m_image_dims(const p2m_image* img, uint32_t* height, uint32_t* width);
P2M_API void p2m_image_destroy(p2m_image* img);

P2M_API p2m_status p2m_weights_load_json(const char* json, p2m_weights** out);
P2M_API p2m_status p2m_weights_export_banks_json(const p2m_weights* w, p2m_buffer** out);
P2M_API void p2m_weights_destroy(p2m_weights* w);

P2M_API p2m_status p2m_transfer_identity(p2m_transfer** out);
P2M_API p2m_status p2m_transfer_load_json(const char* json, p2m_transfer** out);
/* Least-squares fit of (x[i], y[i]) samples. */
P2M_API p2m_status p2m_transfer_fit(const double* x, const double* y, size_t n, p2m_transfer_kind kind,
                                    p2m_transfer** out);
P2M_API p2m_status p2m_transfer_to_json(const p2m_transfer* tf, p2m_buffer** out);
P2M_API double p2m_transfer_eval(const p2m_transfer* tf, double x);
P2M_API void p2m_transfer_destroy(p2m_transfer* tf);

/* First-layer forward pass. `tf` may be NULL for the identity transfer. */
P2M_API p2m_status p2m_simulate(const p2m_image* img, const p2m_weights* w, const char* layer_json,
                                const char* adc_json, const p2m_transfer* tf, p2m_pool_mode pool,
                                p2m_activation** out);
P2M_API p2m_status p2m_activation_dims(const p2m_activation* act, uint32_t* height, uint32_t* width,
                                       uint32_t* channels);
P2M_API uint64_t p2m_activation_emitted_bits(const p2m_activation* act);
/* Copies up to `capacity` counts in HWC order; returns the total count in *n. */
P2M_API p2m_status p2m_activation_counts(const p2m_activation* act, uint32_t* dst, size_t capacity, size_t* n);
P2M_API p2m_status p2m_activation_export_binary(const p2m_activation* act, const char* manifest_json,
                                                p2m_buffer** out);
P2M_API p2m_status p2m_activation_export_csv(const p2m_activation* act, const char* manifest_json,
                                             p2m_buffer** out);
P2M_API void p2m_activation_destroy(p2m_activation* act);

/* Bits the analytical model predicts for a layer and ADC resolution, and the
 * conventional readout volume for the same sensor. */
P2M_API p2m_status p2m_transmitted_bits(const char* layer_json, uint32_t adc_bits, uint64_t* transmitted,
                                        uint64_t* conventional);

#ifdef __cplusplus
}
#endif

#endif
