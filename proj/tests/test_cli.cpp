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

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

const std::string kCli = P2M_CLI_PATH;
const std::string kSrc = P2M_SOURCE_DIR;
const fs::path kTmp = fs::path(P2M_TEST_TMP) / "cli";

struct Run {
  int code;
  std::string out;
};

Run run(const std::string& args, const std::string& env = "SOURCE_DATE_EPOCH=1700000000") {
  const std::string cmd = "env " + env + " " + kCli + " " + args + " 2>&1";
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  std::string out;
  char buf[4096];
  while (std::size_t n = std::fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path d = kTmp / name;
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

void put(const fs::path& p, const std::string& text) {
  std::ofstream(p, std::ios::binary) << text;
}

std::string without_first_line(const std::string& s) { return s.substr(s.find('\n') + 1); }

const std::string kTech = kSrc + "/data/tech/p2m_sample.json";
const std::string kLayer = kSrc + "/data/layers/k3s3c32.json";

}  // namespace

TEST_CASE("evaluate prints the pitch line") {
  const auto r = run("evaluate --tech " + kTech + " --layer " + kLayer + " --stack n28-tsv");
  CHECK(r.code == 0);
  CHECK(r.out.find("min_pitch 6.30 um (bond-limited)") != std::string::npos);
}

TEST_CASE("evaluate json output carries the same values") {
  const auto r = run("evaluate --tech " + kTech + " --layer " + kLayer + " --stack n28-tsv --format json");
  REQUIRE(r.code == 0);
  const auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["point"]["metrics"]["footprint"]["min_pitch_m"].get<double>() == doctest::Approx(6.3e-6));
  CHECK(doc["point"]["metrics"]["footprint"]["pitch_limiter"] == "bond-limited");
  CHECK(doc["manifest"]["command"] == "evaluate");
  CHECK(doc["manifest"]["timestamp"] == "2023-11-14T22:13:20Z");
}

TEST_CASE("config errors exit 2 and name the problem") {
  const auto d = scratch("bad_unit");
  put(d / "tech.json", R"({"process_nodes": {"nx": {"cpp": "190nx", "mp": "140nm"}}})");
  auto r = run("evaluate --tech " + (d / "tech.json").string() + " --layer " + kLayer);
  CHECK(r.code == 2);
  CHECK(r.out.find("190nx") != std::string::npos);

  r = run("evaluate --tech " + kTech + " --layer /no/such/layer.json --stack n28-tsv");
  CHECK(r.code == 2);
  CHECK(r.out.find("/no/such/layer.json") != std::string::npos);

  r = run("evaluate --tech " + kTech);
  CHECK(r.code == 2);
  r = run("frobnicate");
  CHECK(r.code == 2);
}

TEST_CASE("strict mode exits 3 on infeasible points") {
  const std::string base = "evaluate --tech " + kTech + " --layer " + kLayer + " --stack n28-tsv";
  CHECK(run(base + " --max-pixel-pitch 5um").code == 0);
  CHECK(run(base + " --max-pixel-pitch 5um --strict").code == 3);
  CHECK(run(base + " --max-pixel-pitch 7um --strict").code == 0);
}

TEST_CASE("library paths resolve through P2M_TECH_PATH") {
  const auto r = run("evaluate --tech p2m_sample.json --layer " + kLayer + " --stack n28-tsv",
                     "P2M_TECH_PATH=/nonexistent:" + kSrc + "/data/tech");
  CHECK(r.code == 0);
  CHECK(r.out.find("min_pitch 6.30 um") != std::string::npos);
}

TEST_CASE("sweep writes every artifact deterministically") {
  const auto d = scratch("sweep");
  const std::string spec = kSrc + "/data/sweeps/paper_fig3c.json";
  auto r = run("sweep --spec " + spec + " --out " + (d / "a").string());
  REQUIRE(r.code == 0);
  CHECK(r.out.find("56 points") != std::string::npos);
  for (const char* f : {"points.csv", "points.json", "fig_area.csv", "fig_br.csv", "fig_latency.csv",
                        "fig_energy.csv"}) {
    const std::string text = slurp(d / "a" / f);
    const bool compact = text.find("\"command\":\"sweep\"") != std::string::npos;
    const bool indented = text.find("\"command\": \"sweep\"") != std::string::npos;
    CHECK((compact || indented));
  }
  const std::string first = slurp(d / "a" / "points.csv");
  REQUIRE(run("sweep --spec " + spec + " --out " + (d / "a").string()).code == 0);
  CHECK(slurp(d / "a" / "points.csv") == first);
  REQUIRE(run("sweep --spec " + spec + " --out " + (d / "b").string() + " --jobs 4").code == 0);
  CHECK(without_first_line(slurp(d / "b" / "points.csv")) == without_first_line(first));
  CHECK(without_first_line(slurp(d / "b" / "points.json")).size() > 0);
}

TEST_CASE("sweep into an unwritable location exits 2") {
  const auto d = scratch("unwritable");
  put(d / "file", "x");
  const auto r = run("sweep --spec " + kSrc + "/data/sweeps/paper_fig4.json --out " + (d / "file" / "sub").string());
  CHECK(r.code == 2);
}

TEST_CASE("sweep joins the accuracy table") {
  const auto d = scratch("accuracy");
  const auto r = run("sweep --spec " + kSrc + "/data/sweeps/paper_fig4.json --accuracy " + kSrc +
                     "/data/accuracy/accuracy_sample.csv --out " + d.string());
  REQUIRE(r.code == 0);
  CHECK(slurp(d / "points.csv").find("BDD100K:mAP_delta_vs_s2=-0.028") != std::string::npos);
}

TEST_CASE("pareto command") {
  const auto d = scratch("pareto");
  REQUIRE(run("sweep --spec " + kSrc + "/data/sweeps/paper_fig4.json --out " + d.string()).code == 0);
  auto r = run("pareto --points " + (d / "points.csv").string() + " --objectives br:max,min_pitch:min --out " +
               (d / "front.csv").string());
  CHECK(r.code == 0);
  CHECK(r.out.find("of 48 points non-dominated") != std::string::npos);
  CHECK(slurp(d / "front.csv").find("\"command\":\"pareto\"") != std::string::npos);

  r = run("pareto --points " + (d / "points.csv").string() + " --objectives speed:max");
  CHECK(r.code == 2);
  CHECK(r.out.find("normalized_energy") != std::string::npos);

  const std::string csv = slurp(d / "points.csv");
  const auto lines_end = csv.find('\n', csv.find('\n') + 1) + 1;
  const auto row_end = csv.find('\n', lines_end) + 1;
  put(d / "one.csv", csv.substr(0, row_end));
  r = run("pareto --points " + (d / "one.csv").string() + " --objectives br:max");
  CHECK(r.code == 0);
  CHECK(r.out.find("1 of 1 points") != std::string::npos);
}

TEST_CASE("simulate command") {
  const auto d = scratch("simulate");
  const std::string common = " --weights " + kSrc + "/data/sim/weights_k3c4.json --layer " + kSrc +
                             "/data/layers/sim_k3s2c4.json --adc " + kSrc + "/data/sim/adc_8b.json";
  auto r = run("simulate --image random:16x16 --seed 7 --out " + (d / "a").string() + common);
  REQUIRE(r.code == 0);
  CHECK(r.out.find("emitted_bits 2048") != std::string::npos);
  CHECK(r.out.find("(match)") != std::string::npos);
  const std::string bin = slurp(d / "a" / "activations.p2ma");
  CHECK(bin.substr(0, 4) == "P2MA");
  REQUIRE(run("simulate --image random:16x16 --seed 7 --out " + (d / "a").string() + common).code == 0);
  CHECK(slurp(d / "a" / "activations.p2ma") == bin);

  // All-black PPM with zero BN offsets gives all-zero counts.
  std::string ppm = "P6\n16 16\n255\n" + std::string(16 * 16 * 3, '\0');
  put(d / "black.ppm", ppm);
  put(d / "w.json", R"({"shape":[1,1,1,3],"weights":[0.5,-0.5,0.25]})");
  put(d / "l.json", R"({"k":1,"s":1,"c_o":1,"h_i":16,"w_i":16})");
  r = run("simulate --image " + (d / "black.ppm").string() + " --weights " + (d / "w.json").string() +
          " --layer " + (d / "l.json").string() + " --adc " + kSrc + "/data/sim/adc_8b.json --out " +
          (d / "b").string());
  REQUIRE(r.code == 0);
  const std::string csv = slurp(d / "b" / "activations.csv");
  CHECK(csv.find(",1\r\n") == std::string::npos);
  CHECK(csv.find("0,0,0,0\r\n") != std::string::npos);

  put(d / "l5.json", R"({"k":5,"s":2,"c_o":4,"h_i":16,"w_i":16})");
  r = run("simulate --image random:16x16 --weights " + kSrc + "/data/sim/weights_k3c4.json --layer " +
          (d / "l5.json").string() + " --adc " + kSrc + "/data/sim/adc_8b.json --out " + (d / "c").string());
  CHECK(r.code == 2);
  CHECK(r.out.find("[4,3,3,3]") != std::string::npos);
  CHECK(r.out.find("[4,5,5,3]") != std::string::npos);
}

TEST_CASE("fit command") {
  const auto d = scratch("fit");
  std::string samples = "x,y\n";
  for (int i = 0; i <= 20; ++i) samples += std::to_string(i * 0.1) + "," + std::to_string(2 * i * 0.1 + 1) + "\n";
  put(d / "s.csv", samples);
  const auto r = run("fit --samples " + (d / "s.csv").string() + " --out " + (d / "tf.json").string());
  REQUIRE(r.code == 0);
  const auto tf = nlohmann::json::parse(slurp(d / "tf.json"));
  CHECK(tf["kind"] == "polynomial");
  CHECK(tf["coefficients"][1].get<double>() == doctest::Approx(2.0));
}
