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

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hbmsim/addrmap.hpp"
#include "hbmsim/analysis.hpp"
#include "hbmsim/engine.hpp"
#include "hbmsim/interconnect.hpp"
#include "hbmsim/timing.hpp"

namespace hbmsim {

using Json = nlohmann::ordered_json;

enum class Mode { Latency, ReadThroughput, WriteThroughput };
std::string_view to_string(Mode m);
Mode parse_mode(std::string_view s);

/// A table policy by name, or a user layout when `layout` is set.
struct PolicySpec {
  std::string name;
  std::string layout;
  MappingPolicy resolve(MemoryKind kind) const;
  bool operator==(const PolicySpec&) const = default;
};

struct SweepSpec {
  std::vector<PolicySpec> policies;
  std::vector<std::uint32_t> B;
  std::vector<std::uint64_t> S;
  std::vector<std::uint64_t> W;
  bool operator==(const SweepSpec&) const = default;
};

struct ExperimentConfig {
  std::string name = "experiment";
  MemoryKind memory = MemoryKind::HBM;
  PolicySpec policy;
  TimingParams timing;
  bool switch_enabled = false;
  std::optional<PenaltyTable> latency_penalty;
  Mode mode = Mode::ReadThroughput;
  RstConfig rst;
  std::optional<SweepSpec> sweep;
  /// Each entry is simulated as an independent engine on its own channel.
  std::vector<Route> channels{Route{0, 0}};
  EngineOptions engine;
  std::string output_dir;

  bool operator==(const ExperimentConfig&) const = default;
};

/// Parse and validate. Throws ValidationError naming the offending field.
ExperimentConfig parse_config(const Json& j);
ExperimentConfig load_config(const std::filesystem::path& path);
/// Fully expanded config; parse_config(to_json(c)) == c.
Json to_json(const ExperimentConfig& cfg);
/// Semantic checks across fields, including every sweep expansion.
void validate(const ExperimentConfig& cfg);

struct ChannelResult {
  Route route;
  std::uint32_t route_extra = 0;
  std::optional<LatencyTrace> trace;
  std::optional<LatencyHistogram> histogram;
  std::optional<RefreshEstimate> refresh;
  std::string refresh_error;
  std::optional<ThroughputReport> report;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<ChannelResult> channels;  // empty for sweeps
  std::vector<SweepRow> rows;           // sweeps only
  double aggregate_gbps = 0.0;
};

ExperimentResult execute(const ExperimentConfig& cfg);

/// A summary document plus named CSV files.
struct Artifact {
  Json summary;
  std::vector<std::pair<std::string, std::string>> files;
};

Artifact run_experiment(const ExperimentConfig& cfg);
/// Requires cfg.sweep; the Cartesian product policy x B x S x W on channels[0].
Artifact sweep(const ExperimentConfig& cfg);
/// Writes summary.json and every file into `dir`. Throws IoError.
void write_artifact(const Artifact& art, const std::filesystem::path& dir);
std::string dump(const Json& j);

struct PresetInfo {
  std::string name;
  std::string description;
};
const std::vector<PresetInfo>& list_presets();
/// Configs a preset runs, in order.
std::vector<ExperimentConfig> preset_configs(std::string_view name);
/// Throws ValidationError naming the valid presets for an unknown name.
Artifact run_preset(std::string_view name);

std::string csv_sweep(const std::vector<SweepRow>& rows);
std::string csv_trace(const LatencyTrace& trace, const LatencyHistogram* hist);

}  // namespace hbmsim
