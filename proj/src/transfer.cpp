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

#include "p2m/transfer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <string>
#include <vector>

#include "p2m/error.hpp"

namespace p2m {
namespace {

using nlohmann::json;

[[noreturn]] void degenerate(const std::string& detail) {
  throw NumericError("degenerate sample set: " + detail);
}

void check_finite(std::span<const TransferSample> samples) {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!std::isfinite(samples[i].x) || !std::isfinite(samples[i].y)) {
      throw NumericError("transfer sample " + std::to_string(i) + " is not finite");
    }
  }
}

double residual_rms(const TransferFunction& f, std::span<const TransferSample> samples) {
  long double sse = 0.0L;
  for (const auto& s : samples) {
    const long double r = static_cast<long double>(s.y) - f(s.x);
    sse += r * r;
  }
  return static_cast<double>(std::sqrt(sse / samples.size()));
}

// Solves the 4x4 system in place by Gaussian elimination with partial
// pivoting. Returns false when a pivot collapses relative to the matrix scale.
bool solve4(std::array<std::array<long double, 4>, 4>& m, std::array<long double, 4>& rhs) {
  long double scale = 0.0L;
  for (const auto& row : m)
    for (long double v : row) scale = std::max(scale, std::fabs(v));
  if (scale == 0.0L) return false;
  const long double tiny = scale * 1e-14L;

  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::fabs(m[r][col]) > std::fabs(m[pivot][col])) pivot = r;
    if (std::fabs(m[pivot][col]) <= tiny) return false;
    std::swap(m[col], m[pivot]);
    std::swap(rhs[col], rhs[pivot]);
    for (int r = col + 1; r < 4; ++r) {
      const long double f = m[r][col] / m[col][col];
      for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
      rhs[r] -= f * rhs[col];
    }
  }
  for (int r = 3; r >= 0; --r) {
    long double acc = rhs[r];
    for (int c = r + 1; c < 4; ++c) acc -= m[r][c] * rhs[c];
    rhs[r] = acc / m[r][r];
  }
  return true;
}

TransferFunction fit_polynomial(std::span<const TransferSample> samples, double lo, double hi) {
  if (samples.size() < 4) degenerate("polynomial fit needs at least 4 samples");
  std::set<double> distinct;
  for (const auto& s : samples) distinct.insert(s.x);
  if (distinct.size() < 4) degenerate("polynomial fit needs at least 4 distinct x values");

  // t = (x - centre) / half keeps the Gram matrix well conditioned.
  const long double centre = 0.5L * (static_cast<long double>(lo) + hi);
  const long double half = std::max(0.5L * (static_cast<long double>(hi) - lo), 1e-300L);

  std::array<std::array<long double, 4>, 4> gram{};
  std::array<long double, 4> rhs{};
  for (const auto& s : samples) {
    const long double t = (s.x - centre) / half;
    const std::array<long double, 4> basis{1.0L, t, t * t, t * t * t};
    for (int i = 0; i < 4; ++i) {
      rhs[i] += basis[i] * s.y;
      for (int j = 0; j < 4; ++j) gram[i][j] += basis[i] * basis[j];
    }
  }
  if (!solve4(gram, rhs)) degenerate("normal equations are rank deficient");

  // Expand sum d_j ((x - centre)/half)^j back into powers of x.
  std::array<long double, 4> c{};
  constexpr int binom[4][4] = {{1, 0, 0, 0}, {1, 1, 0, 0}, {1, 2, 1, 0}, {1, 3, 3, 1}};
  for (int j = 0; j < 4; ++j) {
    const long double dj = rhs[j] / std::pow(half, static_cast<long double>(j));
    for (int i = 0; i <= j; ++i) {
      c[i] += dj * binom[j][i] * std::pow(-centre, static_cast<long double>(j - i));
    }
  }
  TransferFunction f = TransferFunction::polynomial(
      {static_cast<double>(c[0]), static_cast<double>(c[1]), static_cast<double>(c[2]),
       static_cast<double>(c[3])},
      lo, hi);
  f.set_rms(residual_rms(f, samples));
  return f;
}

struct TanhProjection {
  long double sse;
  long double amplitude;
};

// For a fixed slope the model is linear in the amplitude.
TanhProjection project(std::span<const TransferSample> samples, long double slope) {
  long double gy = 0.0L, gg = 0.0L, yy = 0.0L;
  for (const auto& s : samples) {
    const long double g = std::tanh(slope * s.x);
    gy += g * s.y;
    gg += g * g;
    yy += static_cast<long double>(s.y) * s.y;
  }
  if (gg == 0.0L) return {yy, 0.0L};
  return {std::max(yy - gy * gy / gg, 0.0L), gy / gg};
}

TransferFunction fit_tanh(std::span<const TransferSample> samples, double lo, double hi) {
  if (samples.size() < 2) degenerate("tanh fit needs at least 2 samples");
  std::set<double> magnitudes;
  double xmax = 0.0;
  for (const auto& s : samples) {
    if (s.x != 0.0) magnitudes.insert(std::fabs(s.x));
    xmax = std::max(xmax, std::fabs(s.x));
  }
  if (magnitudes.size() < 2) degenerate("tanh fit needs at least 2 distinct non-zero |x| values");

  // Slopes from nearly linear (b*xmax = 1e-3) to hard saturation (b*xmax = 1e3).
  constexpr int kGrid = 241;
  const long double log_lo = std::log(1e-3L / xmax);
  const long double log_hi = std::log(1e3L / xmax);
  const long double step = (log_hi - log_lo) / (kGrid - 1);

  int best = 0;
  long double best_sse = std::numeric_limits<long double>::infinity();
  for (int i = 0; i < kGrid; ++i) {
    const long double sse = project(samples, std::exp(log_lo + step * i)).sse;
    if (sse < best_sse) {
      best_sse = sse;
      best = i;
    }
  }

  long double a = log_lo + step * std::max(best - 1, 0);
  long double b = log_lo + step * std::min(best + 1, kGrid - 1);
  const long double inv_phi = (std::sqrt(5.0L) - 1.0L) / 2.0L;
  long double x1 = b - inv_phi * (b - a);
  long double x2 = a + inv_phi * (b - a);
  long double f1 = project(samples, std::exp(x1)).sse;
  long double f2 = project(samples, std::exp(x2)).sse;
  for (int it = 0; it < 200 && (b - a) > 1e-15L; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = project(samples, std::exp(x1)).sse;
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = project(samples, std::exp(x2)).sse;
    }
  }
  const long double slope = std::exp(0.5L * (a + b));
  const TanhProjection p = project(samples, slope);

  TransferFunction f = TransferFunction::tanh_saturation(static_cast<double>(p.amplitude),
                                                         static_cast<double>(slope), lo, hi);
  f.set_rms(residual_rms(f, samples));
  return f;
}

}  // namespace

std::string_view transfer_kind_name(TransferKind kind) noexcept {
  switch (kind) {
    case TransferKind::Identity: return "identity";
    case TransferKind::Polynomial: return "polynomial";
    case TransferKind::TanhSaturation: return "tanh";
  }
  return "?";
}

TransferFunction TransferFunction::identity() {
  TransferFunction f;
  f.lo_ = -std::numeric_limits<double>::infinity();
  f.hi_ = std::numeric_limits<double>::infinity();
  return f;
}

TransferFunction TransferFunction::polynomial(const std::array<double, 4>& coeffs, double lo, double hi) {
  if (!(lo < hi)) throw ArgumentError("transfer domain must satisfy lo < hi");
  for (double c : coeffs)
    if (!std::isfinite(c)) throw NumericError("polynomial coefficient is not finite");
  TransferFunction f;
  f.kind_ = TransferKind::Polynomial;
  f.coeffs_ = coeffs;
  f.lo_ = lo;
  f.hi_ = hi;
  f.check_monotone();
  return f;
}

TransferFunction TransferFunction::tanh_saturation(double a, double b, double lo, double hi) {
  if (!(lo < hi)) throw ArgumentError("transfer domain must satisfy lo < hi");
  if (!std::isfinite(a) || !std::isfinite(b)) throw NumericError("tanh parameter is not finite");
  TransferFunction f;
  f.kind_ = TransferKind::TanhSaturation;
  f.a_ = a;
  f.b_ = b;
  f.lo_ = lo;
  f.hi_ = hi;
  f.check_monotone();
  return f;
}

double TransferFunction::operator()(double x) const noexcept {
  switch (kind_) {
    case TransferKind::Identity: return x;
    case TransferKind::Polynomial:
      return coeffs_[0] + x * (coeffs_[1] + x * (coeffs_[2] + x * coeffs_[3]));
    case TransferKind::TanhSaturation: return a_ * std::tanh(b_ * x);
  }
  return x;
}

void TransferFunction::check_monotone() {
  monotone_ = true;
  if (kind_ == TransferKind::Identity) return;
  constexpr int kSteps = 1000;
  double prev = (*this)(lo_);
  const double tol = 1e-12 * std::max({std::fabs(prev), std::fabs((*this)(hi_)), 1.0});
  for (int i = 1; i <= kSteps; ++i) {
    const double x = lo_ + (hi_ - lo_) * i / kSteps;
    const double y = (*this)(x);
    if (y < prev - tol) {
      monotone_ = false;
      return;
    }
    prev = y;
  }
}

json TransferFunction::to_json() const {
  json j{{"kind", std::string(transfer_kind_name(kind_))}};
  switch (kind_) {
    case TransferKind::Identity: break;
    case TransferKind::Polynomial: j["coefficients"] = coeffs_; break;
    case TransferKind::TanhSaturation:
      j["a"] = a_;
      j["b"] = b_;
      break;
  }
  if (kind_ != TransferKind::Identity) j["domain"] = {lo_, hi_};
  j["rms"] = rms_;
  j["monotone"] = monotone_;
  return j;
}

TransferFunction TransferFunction::from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw ConfigError("transfer: expected an object with a string 'kind'");
  }
  const std::string kind = j["kind"].get<std::string>();
  try {
    if (kind == "identity") return identity();

    std::array<double, 2> domain{-1.0, 1.0};
    if (j.contains("domain")) domain = j.at("domain").get<std::array<double, 2>>();

    if (kind == "polynomial") {
      const auto coeffs = j.at("coefficients").get<std::vector<double>>();
      if (coeffs.empty() || coeffs.size() > 4) {
        throw ConfigError("transfer.coefficients: expected 1 to 4 values");
      }
      std::array<double, 4> c{};
      std::copy(coeffs.begin(), coeffs.end(), c.begin());
      TransferFunction f = polynomial(c, domain[0], domain[1]);
      if (j.contains("rms")) f.set_rms(j["rms"].get<double>());
      return f;
    }
    if (kind == "tanh") {
      TransferFunction f =
          tanh_saturation(j.at("a").get<double>(), j.at("b").get<double>(), domain[0], domain[1]);
      if (j.contains("rms")) f.set_rms(j["rms"].get<double>());
      return f;
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("transfer: ") + e.what());
  } catch (const ArgumentError& e) {
    throw ConfigError(std::string("transfer: ") + e.what());
  }
  throw ConfigError("transfer.kind: unknown kind '" + kind + "' (identity, polynomial, tanh)");
}

TransferFunction fit_transfer(std::span<const TransferSample> samples, TransferKind kind) {
  check_finite(samples);
  if (samples.empty()) degenerate("no samples");
  double lo = samples.front().x, hi = samples.front().x;
  for (const auto& s : samples) {
    lo = std::min(lo, s.x);
    hi = std::max(hi, s.x);
  }
  switch (kind) {
    case TransferKind::Identity: {
      TransferFunction f = TransferFunction::identity();
      f.set_rms(residual_rms(f, samples));
      return f;
    }
    case TransferKind::Polynomial: return fit_polynomial(samples, lo, hi);
    case TransferKind::TanhSaturation: return fit_tanh(samples, lo, hi);
  }
  throw ArgumentError("unknown transfer kind");
}

}  // namespace p2m
