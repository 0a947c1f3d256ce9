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
#include <map>
#include <string>
#include <vector>

#include "hbmsim/addrmap.hpp"
#include "hbmsim/engine.hpp"
#include "hbmsim/timing.hpp"

namespace hbmsim {

struct Populations {
  std::uint64_t hit = 0;
  std::uint64_t closed = 0;
  std::uint64_t miss = 0;
  std::uint64_t refresh = 0;  // refresh-affected
  std::uint64_t total() const { return hit + closed + miss + refresh; }
  bool operator==(const Populations&) const = default;
};

struct LatencyHistogram {
  std::map<std::uint32_t, std::uint64_t> buckets;
  std::uint32_t modal_latency = 0;  // smallest among equally frequent values
  Populations populations;
  /// Per-entry classification, parallel to the trace.
  std::vector<LatencyTag> labels;
};

struct RefreshEstimate {
  double interval_ns = 0.0;
  std::uint64_t spike_count = 0;
  std::uint32_t spike_threshold = 0;
  std::vector<Cycle> spike_issues;  // issue cycle of the first entry of each spike
};

std::uint32_t modal_latency(const LatencyTrace& trace);

/// Spikes are runs of consecutive entries above `threshold`; the estimate is
/// the mean spacing of their first issue cycles. Throws InsufficientDataError
/// with fewer than two spikes.
RefreshEstimate detect_refresh_interval(const LatencyTrace& trace, double clock_mhz,
                                        std::uint32_t threshold);
/// Threshold = modal + t_rp + t_rcd + 10.
RefreshEstimate detect_refresh_interval(const LatencyTrace& trace, const TimingParams& params);

/// Match each latency to hit / closed / miss levels (+-1 cycle) shifted by
/// `route_extra` and the trace's extra data beats; anything else is
/// refresh-affected.
LatencyHistogram classify_trace(const LatencyTrace& trace, const TimingParams& params,
                                std::uint32_t route_extra);

struct SweepPoint {
  PolicyName policy;
  std::string policy_label;
  std::uint32_t B;
  std::uint64_t S;
  std::uint64_t W;
  ThroughputReport report;
};

struct SweepRow {
  std::string policy;
  std::uint32_t B;
  std::uint64_t S;
  std::uint64_t W;
  double gbps;
};

/// One row per point ordered by (policy, B, S, W).
std::vector<SweepRow> summarize_sweep(std::vector<SweepPoint> points);

}  // namespace hbmsim
