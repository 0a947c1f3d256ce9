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

#include "hbmsim/timing.hpp"

#include <cmath>

#include "hbmsim/error.hpp"

namespace hbmsim {

void TimingParams::validate() const {
  if (!(clock_mhz > 0)) throw ValidationError("timing.clock_mhz", "must be positive");
  if (t_ccd_s < 1) throw ValidationError("timing.t_ccd_s", "must be at least 1");
  if (t_ccd_l < t_ccd_s) throw ValidationError("timing.t_ccd_l", "must be >= t_ccd_s");
  if (t_cmd < 1) throw ValidationError("timing.t_cmd", "must be at least 1");
  if (row_cmds_per_cycle < 1) {
    throw ValidationError("timing.row_cmds_per_cycle", "must be at least 1");
  }
  if (t_cas < 1) throw ValidationError("timing.t_cas", "must be at least 1");
  if (bus_bytes_per_cycle == 0 || (bus_bytes_per_cycle & (bus_bytes_per_cycle - 1)) != 0) {
    throw ValidationError("timing.bus_bytes_per_cycle", "must be a power of 2");
  }
  if (!(efficiency_overhead >= 0.0 && efficiency_overhead < 1.0)) {
    throw ValidationError("timing.efficiency_overhead", "must lie in [0, 1)");
  }
  if (scheduler_window < 1) throw ValidationError("timing.scheduler_window", "must be at least 1");
  if (refresh_enabled) {
    if (!(t_rfc_ns >= 0)) throw ValidationError("timing.t_rfc_ns", "must be non-negative");
    if (!(t_refi_ns > t_rfc_ns)) throw ValidationError("timing.t_refi_ns", "must exceed t_rfc_ns");
    if (refi_cycles() <= rfc_cycles()) {
      throw ValidationError("timing.t_refi_ns", "refresh interval rounds to no more than t_rfc");
    }
  }
}

Cycle TimingParams::refi_cycles() const {
  return static_cast<Cycle>(std::llround(t_refi_ns * clock_mhz / 1000.0));
}

Cycle TimingParams::rfc_cycles() const {
  return static_cast<Cycle>(std::llround(t_rfc_ns * clock_mhz / 1000.0));
}

TimingParams hbm_u280() {
  TimingParams p;
  p.name = "hbm-u280";
  return p;
}

TimingParams ddr4_u280() {
  TimingParams p;
  p.name = "ddr4-u280";
  p.clock_mhz = 300.0;
  p.t_cas = 22;
  p.t_rcd = 5;
  p.t_rp = 5;
  p.t_ras = 10;
  p.t_rtp = 2;
  p.t_ccd_s = 1;
  p.t_ccd_l = 2;
  p.t_cmd = 1;
  p.t_rfc_ns = 350.0;
  p.bus_bytes_per_cycle = 64;
  p.efficiency_overhead = 0.0;
  p.scheduler_window = 3;
  return p;
}

TimingParams timing_preset(std::string_view name) {
  if (name == "hbm-u280") return hbm_u280();
  if (name == "ddr4-u280") return ddr4_u280();
  throw ValidationError("timing_preset", "unknown timing preset '" + std::string(name) +
                                             "' (expected hbm-u280 or ddr4-u280)");
}

TimingParams default_timing(MemoryKind kind) {
  return kind == MemoryKind::HBM ? hbm_u280() : ddr4_u280();
}

std::vector<std::string> timing_preset_names() { return {"hbm-u280", "ddr4-u280"}; }

std::vector<RefreshWindow> refresh_windows(const TimingParams& params, Cycle up_to) {
  std::vector<RefreshWindow> out;
  if (!params.refresh_enabled) return out;
  const Cycle refi = params.refi_cycles();
  const Cycle rfc = params.rfc_cycles();
  for (Cycle s = refi; s <= up_to; s += refi) out.push_back({s, s + rfc});
  return out;
}

}  // namespace hbmsim
