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

#include <array>
#include <cstdint>

namespace hbmsim {

/// An AXI port paired with the HBM pseudo channel it reads or writes.
struct Route {
  unsigned axi = 0;
  unsigned hbm = 0;
  bool operator==(const Route&) const = default;
};

using PenaltyTable = std::array<std::array<std::uint32_t, 8>, 8>;

/// The AXI-to-pseudo-channel switch: eight fully connected 4-port
/// mini-switches with links between neighbours. Latency depends only on the
/// (source, destination) mini-switch pair.
///
/// Only the column for destination mini-switch 0 is measured hardware data.
/// Other pairs are extrapolated from it: the first hop costs 1 cycle, each
/// further hop 2, and crossing between the two stacks (mini-switches 3 and
/// 4) adds 9 more.
class SwitchTopology {
 public:
  static constexpr unsigned kMiniSwitches = 8;
  static constexpr unsigned kPortsPerMiniSwitch = 4;
  static constexpr unsigned kChannels = kMiniSwitches * kPortsPerMiniSwitch;
  static constexpr std::uint32_t kTraversalCycles = 7;

  explicit SwitchTopology(bool enabled = false);
  SwitchTopology(bool enabled, const PenaltyTable& penalties);

  static unsigned mini_switch(unsigned channel) { return channel / kPortsPerMiniSwitch; }
  static PenaltyTable default_penalties();

  bool enabled() const { return enabled_; }
  const PenaltyTable& penalties() const { return penalty_; }
  std::uint32_t penalty(unsigned src_mini_switch, unsigned dst_mini_switch) const;

  /// Throws RangeError for indices >= 32 and RoutingError for a non-local
  /// route through a disabled switch.
  void check(Route r) const;
  /// Extra cycles added to every transaction on the route.
  std::uint32_t route_latency(Route r) const;
  /// Bandwidth scale for a single flow on the route. Link contention is not
  /// modelled, so this is 1.0 for every legal route.
  double route_throughput_factor(Route r) const;

 private:
  bool enabled_;
  PenaltyTable penalty_;
};

/// What an engine needs to know about its route.
struct RouteCost {
  std::uint32_t extra_cycles = 0;
  double throughput_factor = 1.0;

  static RouteCost local() { return {}; }
  static RouteCost through(const SwitchTopology& topo, Route r) {
    return {topo.route_latency(r), topo.route_throughput_factor(r)};
  }
};

}  // namespace hbmsim
