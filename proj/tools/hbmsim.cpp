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

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hbmsim/error.hpp"
#include "hbmsim/harness.hpp"

namespace {

using hbmsim::Json;

int fail(const std::string& kind, const std::string& message, const std::string& field = "") {
  Json err{{"kind", kind}, {"message", message}};
  if (!field.empty()) err["field"] = field;
  std::cerr << Json{{"error", err}}.dump() << "\n";
  return kind == "usage" ? 2 : 1;
}

std::string out_dir(const std::string& flag, const hbmsim::ExperimentConfig& cfg) {
  if (!flag.empty()) return flag;
  if (!cfg.output_dir.empty()) return cfg.output_dir;
  return "hbmsim-out/" + cfg.name;
}

void report(const std::string& dir, const hbmsim::Artifact& art) {
  Json files = Json::array({"summary.json"});
  for (const auto& f : art.files) files.push_back(f.first);
  std::cout << Json{{"out", dir}, {"files", files}}.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"HBM/DDR4 memory benchmark simulator"};
  app.require_subcommand(1);

  std::string config_path, preset_name, out;
  auto* run = app.add_subcommand("run", "run one experiment config");
  run->add_option("config", config_path, "experiment JSON")->required();
  run->add_option("--out", out, "output directory");

  auto* sweep = app.add_subcommand("sweep", "run a config's sweep lists");
  sweep->add_option("config", config_path, "experiment JSON with a sweep section")->required();
  sweep->add_option("--out", out, "output directory");

  auto* preset = app.add_subcommand("preset", "run a named preset");
  preset->add_option("name", preset_name, "preset name")->required();
  preset->add_option("--out", out, "output directory");

  auto* list = app.add_subcommand("list-presets", "list the presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what());
  }

  try {
    if (*list) {
      for (const auto& p : hbmsim::list_presets()) std::cout << p.name << "\t" << p.description << "\n";
      return 0;
    }
    if (*preset) {
      const auto art = hbmsim::run_preset(preset_name);
      const std::string dir = out.empty() ? "hbmsim-out/" + preset_name : out;
      hbmsim::write_artifact(art, dir);
      report(dir, art);
      return 0;
    }
    const auto cfg = hbmsim::load_config(config_path);
    const auto art = *sweep ? hbmsim::sweep(cfg) : hbmsim::run_experiment(cfg);
    const std::string dir = out_dir(out, cfg);
    hbmsim::write_artifact(art, dir);
    report(dir, art);
    return 0;
  } catch (const hbmsim::ValidationError& e) {
    return fail(e.kind(), e.what(), e.field());
  } catch (const hbmsim::Error& e) {
    return fail(e.kind(), e.what());
  } catch (const std::exception& e) {
    return fail("internal", e.what());
  }
}
