/*
 * Copyright 2026 The hbmsim Authors
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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "hbmsim/error.hpp"
#include "hbmsim/harness.hpp"

using namespace hbmsim;
namespace fs = std::filesystem;

namespace {

std::string field_of(const Json& j) {
  try {
    parse_config(j);
  } catch (const ValidationError& e) {
    return e.field();
  } catch (const RoutingError&) {
    return "<routing>";
  }
  return "ok";
}

fs::path temp_dir(const std::string& name) {
  const auto d = fs::temp_directory_path() / ("hbmsim_test_" + name);
  fs::remove_all(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("config defaults") {
  const auto c = parse_config(Json::object());
  CHECK(c.memory == MemoryKind::HBM);
  CHECK(c.policy.name == "RGBCG");
  CHECK(c.mode == Mode::ReadThroughput);
  CHECK(c.rst == RstConfig{0, 32, 32, 0x10000000, 1024});
  CHECK(c.channels.size() == 1);
  CHECK_FALSE(c.switch_enabled);
  const auto d = parse_config(Json{{"memory", "ddr4"}});
  CHECK(d.policy.name == "RCB");
  CHECK(d.timing.clock_mhz == 300.0);
}

TEST_CASE("config round trip") {
  for (const auto& info : list_presets()) {
    for (const auto& c : preset_configs(info.name)) {
      CAPTURE(info.name);
      CHECK(parse_config(to_json(c)) == c);
    }
  }
  const Json j = {{"memory", "HBM"},
                  {"policy", {{"name", "mine"}, {"layout", "14R-1BG-2B-5C-1BG"}}},
                  {"timing", {{"t_rcd", 9}, {"refresh_enabled", false}}},
                  {"switch", {{"enabled", true}}},
                  {"mode", "latency"},
                  {"rst", {{"A", "0x1000"}, {"B", 64}, {"S", "4K"}, {"W", "1M"}, {"N", 10}}},
                  {"channels", {{{"axi", 31}, {"hbm", 0}}}}};
  const auto c = parse_config(j);
  CHECK(c.rst.A == 0x1000);
  CHECK(c.rst.S == 4096);
  CHECK(c.rst.W == 0x100000);
  CHECK(c.timing.t_rcd == 9);
  CHECK_FALSE(c.timing.refresh_enabled);
  CHECK(parse_config(to_json(c)) == c);
}

TEST_CASE("config field errors") {
  CHECK(field_of({{"rst", {{"B", 48}}}}) == "rst.B");
  CHECK(field_of({{"rst", {{"S", "abc"}}}}) == "rst.S");
  CHECK(field_of({{"rst", {{"Q", 1}}}}) == "rst.Q");
  CHECK(field_of({{"bogus", 1}}) == "bogus");
  CHECK(field_of({{"policy", "XYZ"}}) == "policy");
  CHECK(field_of({{"memory", "ddr4"}, {"policy", "RGBCG"}}) == "policy");
  CHECK(field_of({{"memory", "sram"}}) == "memory");
  CHECK(field_of({{"mode", "fast"}}) == "mode");
  CHECK(field_of({{"memory", "ddr4"}, {"switch", {{"enabled", true}}}}) == "switch.enabled");
  CHECK(field_of({{"timing", {{"t_cas", -1}}}}) == "timing.t_cas");
  CHECK(field_of({{"channels", {{{"axi", 3}, {"hbm", 5}}}}}) == "<routing>");
  CHECK(field_of({{"sweep", {{"policy", {"RBC"}}, {"B", {32, 48}}, {"S", {64}}, {"W", {0x10000}}}}}) ==
        "sweep");
  CHECK(field_of({{"mode", "latency"},
                  {"sweep", {{"policy", {"RBC"}}, {"B", {32}}, {"S", {64}}, {"W", {0x10000}}}}}) ==
        "mode");
  CHECK_THROWS_AS(parse_config(Json::array()), ValidationError);
}

TEST_CASE("policy names are case-insensitive") {
  const auto c = parse_config({{"policy", "rgbcg"}});
  CHECK(c.policy.name == "RGBCG");
  const auto d = parse_config({{"memory", "ddr4"}, {"policy", "rcbi"}});
  CHECK(d.policy.resolve(MemoryKind::DDR4).name() == PolicyName::RCBI);
}

TEST_CASE("preset list") {
  const auto& p = list_presets();
  REQUIRE(p.size() == 7);
  const char* names[] = {"table4",           "table5",        "table6",
                         "fig4-refresh",     "fig5-policy-sweep", "fig7-locality",
                         "fig8-switch-throughput"};
  for (std::size_t i = 0; i < 7; ++i) CHECK(p[i].name == names[i]);
  try {
    run_preset("table9");
    FAIL("expected an error");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "preset");
    CHECK(std::string(e.what()).find("table4") != std::string::npos);
  }
}

TEST_CASE("table4 preset") {
  const auto art = run_preset("table4");
  const auto& r = art.summary["results"];
  CHECK(r["hbm"]["hit"]["cycles"] == 48);
  CHECK(r["hbm"]["closed"]["cycles"] == 55);
  CHECK(r["hbm"]["miss"]["cycles"] == 62);
  CHECK(r["ddr4"]["hit"]["cycles"] == 22);
  CHECK(r["ddr4"]["closed"]["cycles"] == 27);
  CHECK(r["ddr4"]["miss"]["cycles"] == 32);
  CHECK(r["hbm"]["hit"]["ns"].get<double>() == doctest::Approx(106.7).epsilon(0.001));
  CHECK(std::abs(r["ddr4"]["closed"]["ns"].get<double>() - 89.9) <= 0.1 + 1e-9);
}

TEST_CASE("table5 preset") {
  const auto art = run_preset("table5");
  const auto& rows = art.summary["results"]["rows"];
  REQUIRE(rows.size() == 8);
  const int hit[8] = {55, 56, 58, 60, 71, 73, 75, 77};
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(rows[i]["hit"] == hit[i]);
    CHECK(rows[i]["closed"] == hit[i] + 7);
    CHECK(rows[i]["miss"] == hit[i] + 14);
  }
  CHECK(art.summary["results"]["uniform_within_mini_switch"] == true);
}

TEST_CASE("aggregate throughput scales with channels") {
  Json j = {{"rst", {{"N", 20000}}}};
  const double one = execute(parse_config(j)).aggregate_gbps;
  j["channels"] = Json::array();
  for (unsigned i = 0; i < 8; ++i) j["channels"].push_back({{"axi", i}, {"hbm", i}});
  const auto r = execute(parse_config(j));
  CHECK(r.channels.size() == 8);
  CHECK(r.aggregate_gbps == doctest::Approx(8 * one).epsilon(0.01));
}

TEST_CASE("latency run artifacts") {
  const auto cfg = parse_config({{"mode", "latency"},
                                 {"rst", {{"B", 32}, {"S", 128}, {"W", "16M"}, {"N", 512}}}});
  const auto art = run_experiment(cfg);
  REQUIRE(art.files.size() == 1);
  CHECK(art.files[0].first == "trace_axi0_hbm0.csv");
  const auto& csv = art.files[0].second;
  CHECK(csv.rfind("index,issue,latency,truth,class\n", 0) == 0);
  CHECK(csv.find('\r') == std::string::npos);
  CHECK(art.summary["channels"][0]["histogram"]["modal_latency"] == 48);
}

TEST_CASE("sweep artifacts") {
  const auto cfg = parse_config({{"rst", {{"N", 2000}}},
                                 {"sweep",
                                  {{"policy", {"BRC", "RBC"}},
                                   {"B", {32, 64}},
                                   {"S", {64, 1024}},
                                   {"W", {"256M"}}}}});
  const auto art = sweep(cfg);
  REQUIRE(art.files.size() == 1);
  const auto& csv = art.files[0].second;
  CHECK(csv.rfind("policy,B,S,W,gbps\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
  CHECK(csv.find("RBC,32,64,268435456,") != std::string::npos);
  CHECK(dump(art.summary) == dump(sweep(cfg).summary));
}

TEST_CASE("write_artifact") {
  const auto dir = temp_dir("write");
  Artifact art;
  art.summary = {{"a", 1}};
  art.files.push_back({"x.csv", "h\n1\n"});
  write_artifact(art, dir);
  CHECK(slurp(dir / "x.csv") == "h\n1\n");
  CHECK(Json::parse(slurp(dir / "summary.json"))["a"] == 1);
  const auto blocker = dir / "x.csv" / "sub";
  CHECK_THROWS_AS(write_artifact(art, blocker), IoError);
  fs::remove_all(dir);
}

TEST_CASE("load_config errors") {
  CHECK_THROWS_AS(load_config("/nonexistent/cfg.json"), IoError);
  const auto dir = temp_dir("load");
  fs::create_directories(dir);
  std::ofstream(dir / "bad.json") << "{ nope";
  try {
    load_config(dir / "bad.json");
    FAIL("expected an error");
  } catch (const ValidationError& e) {
    CHECK(e.field() == "config");
  }
  fs::remove_all(dir);
}
