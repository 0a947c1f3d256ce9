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

#include "hbmsim/interconnect.hpp"

#include <string>

#include "hbmsim/error.hpp"

namespace hbmsim {

PenaltyTable SwitchTopology::default_penalties() {
  PenaltyTable t{};
  for (unsigned a = 0; a < kMiniSwitches; ++a) {
    for (unsigned b = 0; b < kMiniSwitches; ++b) {
      const unsigned d = a > b ? a - b : b - a;
      std::uint32_t p = d == 0 ? 0 : 2 * d - 1;
      if ((a < 4) != (b < 4)) p += 9;
      t[a][b] = p;
    }
  }
  return t;
}

SwitchTopology::SwitchTopology(bool enabled)
    : enabled_(enabled), penalty_(default_penalties()) {}

SwitchTopology::SwitchTopology(bool enabled, const PenaltyTable& penalties)
    : enabled_(enabled), penalty_(penalties) {}

std::uint32_t SwitchTopology::penalty(unsigned src, unsigned dst) const {
  if (src >= kMiniSwitches || dst >= kMiniSwitches) {
    throw RangeError("mini-switch index out of range");
  }
  return penalty_[src][dst];
}

void SwitchTopology::check(Route r) const {
  if (r.axi >= kChannels || r.hbm >= kChannels) {
    throw RangeError("channel index out of range (0..31): axi " + std::to_string(r.axi) +
                     ", hbm " + std::to_string(r.hbm));
  }
  if (!enabled_ && r.axi != r.hbm) {
    throw RoutingError("AXI " + std::to_string(r.axi) + " cannot reach HBM channel " +
                       std::to_string(r.hbm) + " with the switch disabled");
  }
}

std::uint32_t SwitchTopology::route_latency(Route r) const {
  check(r);
  if (!enabled_) return 0;
  return kTraversalCycles + penalty_[mini_switch(r.axi)][mini_switch(r.hbm)];
}

double SwitchTopology::route_throughput_factor(Route r) const {
  check(r);
  return 1.0;
}

}  // namespace hbmsim
