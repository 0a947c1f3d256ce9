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

#include "hbmsim/engine.hpp"

#include <algorithm>
#include <bit>

#include "hbmsim/error.hpp"

namespace hbmsim {
namespace {

bool pow2(std::uint64_t v) { return v != 0 && std::has_single_bit(v); }

ThroughputReport run_throughput(const RstConfig& cfg, const MappingPolicy& policy,
                                PseudoChannel& ch, RouteCost route,
                                const EngineOptions& opts, bool write) {
  cfg.validate(policy);
  if (opts.outstanding == 0) throw ValidationError("engine.outstanding", "must be at least 1");
  if (!ch.idle()) throw ValidationError("channel", "channel has queued requests");
  const auto bus = ch.timing().bus_bytes_per_cycle;

  ThroughputReport rep;
  rep.clock_mhz = ch.timing().clock_mhz;
  const Cycle start = ch.now();
  Cycle last = start;
  std::uint64_t issued = 0, completed = 0, outstanding = 0;
  while (completed < cfg.N) {
    while (auto c = ch.pop_completion()) {
      ++completed;
      --outstanding;
      last = std::max(last, c->completion);
    }
    if (completed == cfg.N) break;
    if (issued < cfg.N && outstanding < opts.outstanding) {
      Request r;
      r.tag = issued;
      r.arrival = ch.now() + route.extra_cycles;
      r.write = write;
      r.beats = burst_beats(policy, gen_address(cfg, issued), cfg.B, bus);
      ch.submit(std::move(r));
      ++issued;
      ++outstanding;
    }
    const bool more = issued < cfg.N && outstanding < opts.outstanding;
    ch.advance(more ? ch.now() + 1 : kNever);
  }
  rep.transactions = cfg.N;
  rep.bytes = cfg.N * cfg.B;
  rep.cycles = last - start;
  if (rep.cycles > 0) {
    rep.gbps = static_cast<double>(rep.bytes) * rep.clock_mhz / 1000.0 /
               static_cast<double>(rep.cycles) * route.throughput_factor;
  }
  return rep;
}

}  // namespace

void RstConfig::validate(const MappingPolicy& policy) const {
  const Address align = policy.alignment();
  if (!pow2(B)) throw ValidationError("rst.B", "burst size must be a power of 2");
  if (B < align) {
    throw ValidationError("rst.B", "burst size must be at least " + std::to_string(align) +
                                       " bytes for this memory");
  }
  if (!pow2(S)) throw ValidationError("rst.S", "stride must be a power of 2");
  if (S % align != 0) {
    throw ValidationError("rst.S", "stride must be a multiple of " + std::to_string(align));
  }
  if (!pow2(W) || W <= 16) {
    throw ValidationError("rst.W", "working set must be a power of 2 greater than 16");
  }
  if (S > W) throw ValidationError("rst.S", "stride must not exceed the working set");
  if (A % align != 0) {
    throw ValidationError("rst.A", "initial address must be aligned to " +
                                       std::to_string(align) + " bytes");
  }
  const Address cap = policy.capacity_bytes();
  if (A >= cap || W > cap || A > cap - W || W - S + B > cap - A) {
    throw ValidationError("rst.W", "traversal leaves the channel's address space");
  }
}

Address gen_address(const RstConfig& cfg, std::uint64_t i) {
  if (i >= cfg.N) throw RangeError("transaction index beyond N");
  // S and W are powers of two with S <= W, so (i * S) mod W never overflows
  // when reduced as (i mod (W / S)) * S.
  return cfg.A + (i % (cfg.W / cfg.S)) * cfg.S;
}

std::string_view to_string(LatencyTag t) {
  switch (t) {
    case LatencyTag::Hit: return "hit";
    case LatencyTag::Closed: return "closed";
    case LatencyTag::Miss: return "miss";
    case LatencyTag::Refresh: return "refresh";
  }
  return "?";
}

std::vector<std::uint8_t> LatencyTrace::export_8bit() const {
  std::vector<std::uint8_t> out;
  out.reserve(entries.size());
  for (const auto& e : entries) out.push_back(static_cast<std::uint8_t>(std::min<std::uint32_t>(e.latency, 255)));
  return out;
}

std::vector<DecodedAddress> burst_beats(const MappingPolicy& policy, Address addr,
                                        std::uint32_t burst_bytes, std::uint32_t bus_bytes) {
  std::vector<DecodedAddress> beats;
  beats.reserve(burst_bytes / bus_bytes);
  for (std::uint32_t off = 0; off < burst_bytes; off += bus_bytes) {
    beats.push_back(policy.decode(addr + off));
  }
  return beats;
}

std::uint32_t beat_cycles(const std::vector<DecodedAddress>& beats, const TimingParams& params) {
  std::uint32_t cycles = 0;
  for (std::size_t i = 1; i < beats.size(); ++i) {
    cycles += beats[i].bank_group == beats[i - 1].bank_group ? params.t_ccd_l : params.t_ccd_s;
  }
  return cycles;
}

LatencyTrace run_read_latency(const RstConfig& cfg, const MappingPolicy& policy,
                              PseudoChannel& ch, RouteCost route, const EngineOptions& opts) {
  cfg.validate(policy);
  const TimingParams& tp = ch.timing();
  const auto bus = tp.bus_bytes_per_cycle;
  LatencyTrace trace;
  trace.capacity = opts.trace_capacity;
  trace.clock_mhz = ch.timing().clock_mhz;
  trace.burst_beats = cfg.B / bus;
  trace.entries.reserve(std::min<std::uint64_t>(cfg.N, opts.trace_capacity));

  Cycle issue = ch.now();
  for (std::uint64_t i = 0; i < cfg.N; ++i) {
    const auto beats = burst_beats(policy, gen_address(cfg, i), cfg.B, bus);
    if (i == 0) trace.beat_cycles = beat_cycles(beats, tp);
    const auto res = ch.service(beats, false, issue + route.extra_cycles);
    const auto latency = static_cast<std::uint32_t>(res.completion - issue);
    if (trace.entries.size() < trace.capacity) {
      LatencyTag tag = LatencyTag::Miss;
      std::uint32_t level = tp.miss_latency();
      if (res.classification == AccessClass::PageHit) {
        tag = LatencyTag::Hit;
        level = tp.hit_latency();
      } else if (res.classification == AccessClass::PageClosed) {
        tag = LatencyTag::Closed;
        level = tp.closed_latency();
      }
      // A refresh that delayed the read by at most a cycle is not observable.
      if (res.refresh_stalled && latency > level + route.extra_cycles + trace.beat_cycles + 1) {
        tag = LatencyTag::Refresh;
      }
      trace.entries.push_back({i, issue, latency, tag});
    }
    issue = res.completion;
  }
  return trace;
}

ThroughputReport run_read_throughput(const RstConfig& cfg, const MappingPolicy& policy,
                                     PseudoChannel& channel, RouteCost route,
                                     const EngineOptions& opts) {
  return run_throughput(cfg, policy, channel, route, opts, false);
}

ThroughputReport run_write_throughput(const RstConfig& cfg, const MappingPolicy& policy,
                                      PseudoChannel& channel, RouteCost route,
                                      const EngineOptions& opts) {
  return run_throughput(cfg, policy, channel, route, opts, true);
}

}  // namespace hbmsim
