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

// Independent reference implementations used by the tests. None of these
// call into the library's model code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace oracle {

// Footprint in integer picometres.
struct Footprint {
  std::int64_t n_t;
  std::int64_t w_pm;
  std::int64_t h_pm;
  bool w_bond;
  bool h_bond;
};

inline Footprint footprint(std::int64_t k, std::int64_t s, std::int64_t c_o, std::int64_t cpp_pm,
                           std::int64_t mp_pm, std::int64_t pitch_pm, std::int64_t height_pm) {
  const std::int64_t per_axis = (k + s - 1) / s;
  Footprint f{};
  f.n_t = c_o * per_axis * per_axis;
  const std::int64_t w_tr = (f.n_t + 1) / 2 * cpp_pm;
  const std::int64_t h_tr = (f.n_t + 3) * mp_pm + height_pm;
  f.w_bond = pitch_pm >= w_tr;
  f.h_bond = pitch_pm >= h_tr;
  f.w_pm = std::max(w_tr, pitch_pm);
  f.h_pm = std::max(h_tr, pitch_pm);
  return f;
}

inline std::int64_t conv_out(std::int64_t in, std::int64_t k, std::int64_t s, std::int64_t p) {
  std::int64_t n = 0;
  for (std::int64_t start = -p; start + k <= in + p; start += s) ++n;
  return n;
}

// Textbook strided convolution over an HWC image with zero padding, then a
// per-channel affine count and ReLU clamp. weights[c][ky][kx][ch].
struct ConvCase {
  std::uint32_t h, w, k, s, p, c_o;
  std::vector<double> image;     // h*w*3
  std::vector<double> weights;   // c_o*k*k*3
  std::vector<double> scale;     // c_o
  std::vector<std::int64_t> offset;  // c_o
  double lsb;
  std::int64_t max_count;
};

inline std::vector<std::int64_t> conv_counts(const ConvCase& c, std::uint32_t* out_h, std::uint32_t* out_w) {
  const auto oh = conv_out(c.h, c.k, c.s, c.p);
  const auto ow = conv_out(c.w, c.k, c.s, c.p);
  std::vector<std::int64_t> out(static_cast<std::size_t>(oh * ow * c.c_o));
  for (std::int64_t y = 0; y < oh; ++y) {
    for (std::int64_t x = 0; x < ow; ++x) {
      for (std::uint32_t co = 0; co < c.c_o; ++co) {
        double acc = 0.0;
        for (std::uint32_t ky = 0; ky < c.k; ++ky) {
          for (std::uint32_t kx = 0; kx < c.k; ++kx) {
            const std::int64_t iy = y * c.s - c.p + ky;
            const std::int64_t ix = x * c.s - c.p + kx;
            if (iy < 0 || ix < 0 || iy >= c.h || ix >= c.w) continue;
            for (int ch = 0; ch < 3; ++ch) {
              const double px = c.image[(static_cast<std::size_t>(iy) * c.w + ix) * 3 + ch];
              const double wt = c.weights[((static_cast<std::size_t>(co) * c.k + ky) * c.k + kx) * 3 + ch];
              acc += c.scale[co] * wt * px;
            }
          }
        }
        const std::int64_t v = c.offset[co] + static_cast<std::int64_t>(std::llround(acc / c.lsb));
        out[(static_cast<std::size_t>(y) * ow + x) * c.c_o + co] = std::clamp<std::int64_t>(v, 0, c.max_count);
      }
    }
  }
  *out_h = static_cast<std::uint32_t>(oh);
  *out_w = static_cast<std::uint32_t>(ow);
  return out;
}

// O(n^2) dominance check in the stated directions (true = maximize).
inline std::vector<std::size_t> brute_force_front(const std::vector<std::vector<double>>& rows,
                                                  const std::vector<bool>& maximize) {
  auto better_or_equal = [&](double a, double b, bool mx) { return mx ? a >= b : a <= b; };
  auto strictly_better = [&](double a, double b, bool mx) { return mx ? a > b : a < b; };
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < rows.size() && !dominated; ++j) {
      if (i == j) continue;
      bool all = true, one = false;
      for (std::size_t d = 0; d < maximize.size(); ++d) {
        all = all && better_or_equal(rows[j][d], rows[i][d], maximize[d]);
        one = one || strictly_better(rows[j][d], rows[i][d], maximize[d]);
      }
      dominated = all && one;
    }
    if (!dominated) out.push_back(i);
  }
  return out;
}

inline bool rel_close(double a, double b, double rel) {
  return std::fabs(a - b) <= rel * std::max(std::fabs(a), std::fabs(b));
}

}  // namespace oracle
