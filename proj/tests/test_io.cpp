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

#include <random>
#include <string>

#include "doctest.h"
#include "p2m/activation_io.hpp"
#include "p2m/csv.hpp"
#include "p2m/error.hpp"
#include "p2m/image_io.hpp"

using namespace p2m;

TEST_CASE("PPM and PNG round trips at 8-bit precision") {
  Image img = make_image(5, 7);
  for (std::size_t i = 0; i < img.data.size(); ++i) img.data[i] = static_cast<double>((i * 37) % 256) / 255.0;
  for (const auto& bytes : {encode_ppm(img), encode_png(img)}) {
    const Image back = decode_image(bytes);
    REQUIRE(back.height == 5);
    REQUIRE(back.width == 7);
    for (std::size_t i = 0; i < img.data.size(); ++i) CHECK(back.data[i] == img.data[i]);
  }
}

TEST_CASE("PPM header comments and bad inputs") {
  const std::string ppm = "P6\n# c\n1 1\n255\n\x10\x20\x30";
  const Image img = decode_image(std::span(reinterpret_cast<const std::uint8_t*>(ppm.data()), ppm.size()));
  CHECK(img.at(0, 0, 1) == 32.0 / 255.0);
  const std::string wide = "P6\n1 1\n65535\n\0\0\0\0\0\0";
  CHECK_THROWS_AS(decode_image(std::span(reinterpret_cast<const std::uint8_t*>(wide.data()), wide.size())),
                  IoError);
  const std::string junk = "hello";
  CHECK_THROWS_AS(decode_image(std::span(reinterpret_cast<const std::uint8_t*>(junk.data()), junk.size())),
                  IoError);
  CHECK_THROWS_AS(load_image("/nonexistent/image.png"), IoError);
}

TEST_CASE("count packing round trips for every width") {
  std::mt19937_64 rng(4);
  for (std::uint32_t bits = 1; bits <= 16; ++bits) {
    std::vector<std::uint32_t> v(37);
    for (auto& x : v) x = static_cast<std::uint32_t>(rng() & ((1u << bits) - 1));
    const auto packed = pack_counts(v, bits);
    CHECK(packed.size() == packed_payload_bytes(v.size(), bits));
    CHECK(packed.size() == (37 * bits + 7) / 8);
    CHECK(unpack_counts(packed, v.size(), bits) == v);
  }
}

TEST_CASE("packing is LSB-first") {
  const std::vector<std::uint32_t> v{1, 2, 3};
  const auto packed = pack_counts(v, 3);
  REQUIRE(packed.size() == 2);
  CHECK(packed[0] == (1 | (2 << 3) | ((3 & 0x3) << 6)));
  CHECK(packed[1] == (3 >> 2));
}

TEST_CASE("activation file layout") {
  ActivationMap m{2, 3, 4, 5, {}};
  for (std::uint32_t i = 0; i < 24; ++i) m.counts.push_back(i);
  const auto bytes = encode_activation(m);
  REQUIRE(bytes.size() == 16 + (24 * 5 + 7) / 8);
  CHECK(std::string(bytes.begin(), bytes.begin() + 4) == "P2MA");
  CHECK(bytes[4] == 2);
  CHECK(bytes[8] == 3);
  CHECK(bytes[12] == 4);
  const auto back = decode_activation(bytes, 5);
  CHECK(back.map.counts == m.counts);
  CHECK(back.manifest_json.empty());

  const auto with = encode_activation(m, R"({"command":"simulate"})");
  const auto back2 = decode_activation(with, 5);
  CHECK(back2.manifest_json == R"({"command":"simulate"})");
  CHECK(back2.map.counts == m.counts);

  auto truncated = bytes;
  truncated.pop_back();
  CHECK_THROWS_AS(decode_activation(truncated, 5), IoError);
}

TEST_CASE("activation csv") {
  ActivationMap m{1, 2, 1, 8, {7, 9}};
  const auto csv = activation_to_csv(m, "{}");
  CHECK(csv == "# manifest: {}\r\ny,x,channel,count\r\n0,0,0,7\r\n0,1,0,9\r\n");
}

TEST_CASE("csv parsing") {
  const auto t = csv::parse("# note\r\na,b\r\n1,\"x,y\"\r\n\"q\"\"t\",3\n");
  CHECK(t.comments == std::vector<std::string>{"# note"});
  CHECK(t.header == std::vector<std::string>{"a", "b"});
  REQUIRE(t.rows.size() == 2);
  CHECK(t.rows[0][1] == "x,y");
  CHECK(t.rows[1][0] == "q\"t");
  CHECK(t.column("b") == 1u);
  CHECK_FALSE(t.column("c").has_value());
  CHECK_THROWS_AS(csv::parse("a,b\n1\n"), ConfigError);
  CHECK_THROWS_AS(csv::parse("a\n\"open\n"), ConfigError);
  CHECK(csv::escape("plain") == "plain");
  CHECK(csv::escape("a,b") == "\"a,b\"");
  CHECK(csv::format_row({"a", "b\"c"}) == "a,\"b\"\"c\"\r\n");
}
