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

#include "p2m/pareto.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "p2m/error.hpp"

namespace p2m {

std::vector<Objective> parse_objectives(std::string_view spec) {
  std::vector<Objective> out;
  std::size_t start = 0;
  while (start <= spec.size()) {
    std::size_t end = spec.find(',', start);
    if (end == std::string_view::npos) end = spec.size();
    std::string_view item = spec.substr(start, end - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty()) {
      const std::size_t colon = item.rfind(':');
      if (colon == std::string_view::npos) {
        throw ArgumentError("objective '" + std::string(item) + "' must be <metric>:<min|max>");
      }
      const std::string_view dir = item.substr(colon + 1);
      Objective o;
      o.metric = std::string(item.substr(0, colon));
      if (dir == "min") {
        o.direction = Direction::Minimize;
      } else if (dir == "max") {
        o.direction = Direction::Maximize;
      } else {
        throw ArgumentError("objective '" + std::string(item) + "': direction must be min or max");
      }
      if (o.metric.empty()) throw ArgumentError("objective '" + std::string(item) + "' has no metric");
      out.push_back(std::move(o));
    }
    start = end + 1;
  }
  if (out.empty()) throw ArgumentError("at least one objective is required");
  return out;
}

std::vector<std::size_t> non_dominated(std::span<const std::vector<double>> rows,
                                       std::span<const Direction> directions) {
  const std::size_t m = directions.size();
  if (m == 0) throw ArgumentError("at least one objective is required");

  // Minimization-space copy.
  std::vector<std::vector<double>> cost(rows.size(), std::vector<double>(m));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m) throw ArgumentError("row width does not match objective count");
    for (std::size_t j = 0; j < m; ++j) {
      const double v = rows[i][j];
      if (std::isnan(v)) throw NumericError("objective value is NaN in row " + std::to_string(i));
      cost[i][j] = directions[j] == Direction::Maximize ? -v : v;
    }
  }

  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return cost[a] < cost[b]; });

  auto dominates = [&](const std::vector<double>& a, const std::vector<double>& b) {
    bool strictly = false;
    for (std::size_t j = 0; j < m; ++j) {
      if (a[j] > b[j]) return false;
      if (a[j] < b[j]) strictly = true;
    }
    return strictly;
  };

  std::vector<std::size_t> front;
  for (std::size_t idx : order) {
    const bool beaten = std::any_of(front.begin(), front.end(),
                                    [&](std::size_t f) { return dominates(cost[f], cost[idx]); });
    if (!beaten) front.push_back(idx);
  }
  std::sort(front.begin(), front.end());
  return front;
}

}  // namespace p2m
