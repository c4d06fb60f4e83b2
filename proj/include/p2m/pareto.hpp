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

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace p2m {

enum class Direction { Minimize, Maximize };

struct Objective {
  std::string metric;
  Direction direction = Direction::Minimize;
};

/// "min_pitch:min,br:max" -> objectives. Throws ArgumentError on bad syntax;
/// metric names are checked by the caller.
std::vector<Objective> parse_objectives(std::string_view spec);

/// Indices (ascending) of the rows no other row dominates. Row a dominates
/// row b when it is no worse on every objective and strictly better on one;
/// identical rows do not dominate each other, so ties all survive.
///
/// Rows are sorted lexicographically in minimization space; a dominator
/// always sorts strictly before what it dominates, and dominance is
/// transitive, so each row only needs checking against the front built so far.
std::vector<std::size_t> non_dominated(std::span<const std::vector<double>> rows,
                                       std::span<const Direction> directions);

}  // namespace p2m
