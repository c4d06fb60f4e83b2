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

#include <array>
#include <span>
#include <string_view>

#include "json.hpp"

namespace p2m {

/// One observation of the analog compute path: ideal pre-activation in,
/// measured (e.g. circuit-simulated) output out.
struct TransferSample {
  double x = 0.0;
  double y = 0.0;
};

enum class TransferKind { Identity, Polynomial, TanhSaturation };

std::string_view transfer_kind_name(TransferKind kind) noexcept;

/// Monotone non-linearity applied to each weight bank's accumulated
/// pre-activation. Polynomial is c0 + c1 x + c2 x^2 + c3 x^3; TanhSaturation
/// is a * tanh(b x).
class TransferFunction {
 public:
  static TransferFunction identity();
  static TransferFunction polynomial(const std::array<double, 4>& coeffs, double lo, double hi);
  static TransferFunction tanh_saturation(double a, double b, double lo, double hi);

  double operator()(double x) const noexcept;

  TransferKind kind() const noexcept { return kind_; }
  const std::array<double, 4>& coefficients() const noexcept { return coeffs_; }
  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double domain_lo() const noexcept { return lo_; }
  double domain_hi() const noexcept { return hi_; }

  /// Residual RMS of the fit that produced this function (0 when not fitted).
  double rms() const noexcept { return rms_; }
  void set_rms(double rms) noexcept { rms_ = rms; }

  /// False when dense sampling (1001 points) over the domain found a decrease.
  bool monotone() const noexcept { return monotone_; }

  nlohmann::json to_json() const;
  static TransferFunction from_json(const nlohmann::json& j);

 private:
  TransferFunction() = default;
  void check_monotone();

  TransferKind kind_ = TransferKind::Identity;
  std::array<double, 4> coeffs_{0.0, 1.0, 0.0, 0.0};
  double a_ = 1.0;
  double b_ = 1.0;
  double lo_ = -1.0;
  double hi_ = 1.0;
  double rms_ = 0.0;
  bool monotone_ = true;
};

/// Least-squares fit. Polynomial: cubic via normal equations on a centred,
/// scaled abscissa (needs >= 4 distinct x). TanhSaturation: the amplitude is
/// solved in closed form for each slope, the slope by a log-spaced grid scan
/// refined with golden-section search (needs >= 2 distinct non-zero |x|).
/// Throws NumericError("degenerate sample set") when the system is rank
/// deficient. Identity returns identity() with the residual RMS attached.
TransferFunction fit_transfer(std::span<const TransferSample> samples, TransferKind kind);

}  // namespace p2m
