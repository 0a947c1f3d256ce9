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

#include "hbmsim/analysis.hpp"

#include <algorithm>
#include <tuple>

#include "hbmsim/error.hpp"

namespace hbmsim {

std::uint32_t modal_latency(const LatencyTrace& trace) {
  std::map<std::uint32_t, std::uint64_t> counts;
  for (const auto& e : trace.entries) ++counts[e.latency];
  std::uint32_t best = 0;
  std::uint64_t best_n = 0;
  for (const auto& [lat, n] : counts) {
    if (n > best_n) {
      best = lat;
      best_n = n;
    }
  }
  return best;
}

RefreshEstimate detect_refresh_interval(const LatencyTrace& trace, double clock_mhz,
                                        std::uint32_t threshold) {
  if (!(clock_mhz > 0)) throw ValidationError("clock_mhz", "must be positive");
  RefreshEstimate est;
  est.spike_threshold = threshold;
  bool in_spike = false;
  for (const auto& e : trace.entries) {
    const bool above = e.latency > threshold;
    if (above && !in_spike) est.spike_issues.push_back(e.issue);
    in_spike = above;
  }
  est.spike_count = est.spike_issues.size();
  if (est.spike_count < 2) {
    throw InsufficientDataError("found " + std::to_string(est.spike_count) +
                                " latency spike(s) above " + std::to_string(threshold) +
                                " cycles; need at least 2");
  }
  const double span = static_cast<double>(est.spike_issues.back() - est.spike_issues.front());
  est.interval_ns = span / static_cast<double>(est.spike_count - 1) * 1000.0 / clock_mhz;
  return est;
}

RefreshEstimate detect_refresh_interval(const LatencyTrace& trace, const TimingParams& params) {
  const std::uint32_t threshold = modal_latency(trace) + params.t_rp + params.t_rcd + 10;
  return detect_refresh_interval(trace, params.clock_mhz, threshold);
}

LatencyHistogram classify_trace(const LatencyTrace& trace, const TimingParams& params,
                                std::uint32_t route_extra) {
  LatencyHistogram h;
  if (trace.entries.empty()) return h;
  const std::uint32_t shift = route_extra + trace.beat_cycles;
  const std::uint32_t levels[3] = {params.hit_latency() + shift, params.closed_latency() + shift,
                                   params.miss_latency() + shift};
  auto near = [](std::uint32_t v, std::uint32_t level) {
    return v + 1 >= level && v <= level + 1;
  };
  h.labels.reserve(trace.entries.size());
  for (const auto& e : trace.entries) {
    ++h.buckets[e.latency];
    LatencyTag tag = LatencyTag::Refresh;
    if (near(e.latency, levels[0])) {
      tag = LatencyTag::Hit;
    } else if (near(e.latency, levels[1])) {
      tag = LatencyTag::Closed;
    } else if (near(e.latency, levels[2])) {
      tag = LatencyTag::Miss;
    }
    switch (tag) {
      case LatencyTag::Hit: ++h.populations.hit; break;
      case LatencyTag::Closed: ++h.populations.closed; break;
      case LatencyTag::Miss: ++h.populations.miss; break;
      case LatencyTag::Refresh: ++h.populations.refresh; break;
    }
    h.labels.push_back(tag);
  }
  h.modal_latency = modal_latency(trace);
  return h;
}

std::vector<SweepRow> summarize_sweep(std::vector<SweepPoint> points) {
  std::stable_sort(points.begin(), points.end(), [](const SweepPoint& a, const SweepPoint& b) {
    return std::tie(a.policy, a.policy_label, a.B, a.S, a.W) <
           std::tie(b.policy, b.policy_label, b.B, b.S, b.W);
  });
  std::vector<SweepRow> rows;
  rows.reserve(points.size());
  for (const auto& p : points) rows.push_back({p.policy_label, p.B, p.S, p.W, p.report.gbps});
  return rows;
}

}  // namespace hbmsim
