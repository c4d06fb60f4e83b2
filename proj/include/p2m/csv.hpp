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

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace p2m::csv {

/// RFC-4180 table. Lines that begin with '#' outside a quoted field are
/// comments; they are kept verbatim in `comments` and not parsed.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> comments;

  std::optional<std::size_t> column(std::string_view name) const;
};

/// Throws ConfigError on unterminated quotes or ragged rows.
Table parse(std::string_view text);

std::string escape(std::string_view field);
std::string format_row(const std::vector<std::string>& fields);

}  // namespace p2m::csv
