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
#include <string>
#include <string_view>
#include <vector>

#include "hbmsim/addrmap.hpp"

namespace hbmsim {

using Cycle = std::uint64_t;

/// Clock, DRAM timing and controller constants of one channel. All cycle
/// counts are in controller (AXI) clock cycles.
struct TimingParams {
  std::string name = "custom";
  double clock_mhz = 450.0;
  std::uint32_t t_cas = 48;    // idle page-hit read latency, issue to last data
  std::uint32_t t_rcd = 7;     // ACT to column command
  std::uint32_t t_rp = 7;      // PRE to ACT
  std::uint32_t t_ras = 21;    // ACT to PRE, same bank
  std::uint32_t t_rtp = 2;     // column command to PRE, same bank
  std::uint32_t t_ccd_s = 1;   // column to column, different bank group
  std::uint32_t t_ccd_l = 2;   // column to column, same bank group
  std::uint32_t t_cmd = 2;     // minimum spacing of accepted transactions
  std::uint32_t row_cmds_per_cycle = 2;  // ACT/PRE slots per controller cycle
  double t_refi_ns = 7800.0;
  double t_rfc_ns = 160.0;
  bool refresh_enabled = true;
  std::uint32_t bus_bytes_per_cycle = 32;
  /// Fractional bus cycles lost per column command; accumulated, and every
  /// whole cycle becomes one idle data-bus slot.
  double efficiency_overhead = 0.0625;
  /// Transactions the controller can look ahead across when reordering.
  std::uint32_t scheduler_window = 8;

  /// Throws ValidationError naming the first violated constraint.
  void validate() const;

  Cycle refi_cycles() const;
  Cycle rfc_cycles() const;
  double cycles_to_ns(double cycles) const { return cycles * 1000.0 / clock_mhz; }

  std::uint32_t hit_latency() const { return t_cas; }
  std::uint32_t closed_latency() const { return t_cas + t_rcd; }
  std::uint32_t miss_latency() const { return t_cas + t_rp + t_rcd; }
  /// Data-bus peak in GB/s.
  double peak_gbps() const { return bus_bytes_per_cycle * clock_mhz / 1000.0; }

  bool operator==(const TimingParams&) const = default;
};

/// "hbm-u280": one HBM pseudo channel at 450 MHz.
TimingParams hbm_u280();
/// "ddr4-u280": one DDR4 channel at 300 MHz.
TimingParams ddr4_u280();
TimingParams timing_preset(std::string_view name);
TimingParams default_timing(MemoryKind kind);
std::vector<std::string> timing_preset_names();

struct RefreshWindow {
  Cycle start;
  Cycle end;  // exclusive; all banks are closed from here on
  bool operator==(const RefreshWindow&) const = default;
};

/// Windows k * tREFI (k >= 1) lasting tRFC whose start is <= up_to.
std::vector<RefreshWindow> refresh_windows(const TimingParams& params, Cycle up_to);

}  // namespace hbmsim
