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
#include <string_view>
#include <vector>

#include "hbmsim/addrmap.hpp"
#include "hbmsim/channel.hpp"
#include "hbmsim/interconnect.hpp"

namespace hbmsim {

/// Runtime parameters of one repetitive sequential traversal: N bursts of B
/// bytes at A + (i * S) mod W.
struct RstConfig {
  Address A = 0;
  std::uint32_t B = 64;
  std::uint64_t S = 64;
  std::uint64_t W = 0x10000000;
  std::uint64_t N = 1024;

  /// Throws ValidationError("rst.X", ...) naming the violated constraint.
  void validate(const MappingPolicy& policy) const;
  bool operator==(const RstConfig&) const = default;
};

/// Address of transaction i. Requires i < N and a valid config.
Address gen_address(const RstConfig& cfg, std::uint64_t i);

/// Ground truth recorded by the simulator next to each latency sample.
enum class LatencyTag : std::uint8_t { Hit, Closed, Miss, Refresh };
std::string_view to_string(LatencyTag t);

struct LatencyEntry {
  std::uint64_t index;
  Cycle issue;
  std::uint32_t latency;
  LatencyTag truth;
};

struct LatencyTrace {
  std::size_t capacity = 1024;
  double clock_mhz = 450.0;
  std::uint32_t burst_beats = 1;
  std::uint32_t beat_cycles = 0;  // cycles the trailing beats add to an idle read
  std::vector<LatencyEntry> entries;

  /// Latencies clamped to 8 bits, as a hardware latency list stores them.
  std::vector<std::uint8_t> export_8bit() const;
};

struct ThroughputReport {
  std::uint64_t transactions = 0;
  std::uint64_t bytes = 0;
  Cycle cycles = 0;
  double clock_mhz = 0.0;
  double gbps = 0.0;
};

struct EngineOptions {
  std::uint32_t outstanding = 64;    // in-flight request limit
  std::size_t trace_capacity = 1024;
  bool operator==(const EngineOptions&) const = default;
};

/// Column-to-column cycles the trailing beats of `beats` add after the first.
std::uint32_t beat_cycles(const std::vector<DecodedAddress>& beats, const TimingParams& params);

/// Expand one burst into per-beat targets under `policy`.
std::vector<DecodedAddress> burst_beats(const MappingPolicy& policy, Address addr,
                                        std::uint32_t burst_bytes, std::uint32_t bus_bytes);

/// Serial reads: each read issues the cycle the previous one returned data.
LatencyTrace run_read_latency(const RstConfig& cfg, const MappingPolicy& policy,
                              PseudoChannel& channel, RouteCost route = {},
                              const EngineOptions& opts = {});

/// Saturating issue, at most one request per cycle and `outstanding` in flight.
ThroughputReport run_read_throughput(const RstConfig& cfg, const MappingPolicy& policy,
                                     PseudoChannel& channel, RouteCost route = {},
                                     const EngineOptions& opts = {});
ThroughputReport run_write_throughput(const RstConfig& cfg, const MappingPolicy& policy,
                                      PseudoChannel& channel, RouteCost route = {},
                                      const EngineOptions& opts = {});

}  // namespace hbmsim
