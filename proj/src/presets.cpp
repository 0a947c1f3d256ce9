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

#include <algorithm>
#include <cstdio>
#include <map>

#include "hbmsim/error.hpp"
#include "hbmsim/harness.hpp"

namespace hbmsim {
namespace {

constexpr Address kLatencyW = 0x1000000;
constexpr Address kLargeW = 0x10000000;

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

ExperimentConfig base(std::string name, MemoryKind kind, Mode mode) {
  ExperimentConfig c;
  c.name = std::move(name);
  c.memory = kind;
  c.timing = default_timing(kind);
  c.policy.name = std::string(to_string(MappingPolicy::default_for(kind).name()));
  c.mode = mode;
  c.rst.B = kind_info(kind).min_burst_bytes;
  return c;
}

ExperimentConfig latency_cfg(std::string name, MemoryKind kind, std::uint64_t S) {
  auto c = base(std::move(name), kind, Mode::Latency);
  c.rst.S = S;
  c.rst.W = kLatencyW;
  c.rst.N = 1024;
  return c;
}

std::vector<std::uint64_t> pow2_range(std::uint64_t lo, std::uint64_t hi) {
  std::vector<std::uint64_t> v;
  for (std::uint64_t x = lo; x <= hi; x *= 2) v.push_back(x);
  return v;
}

std::vector<std::uint32_t> bursts(MemoryKind kind) {
  if (kind == MemoryKind::HBM) return {32, 64, 128, 256};
  return {64, 128, 256, 512};
}

/// One sweep config per burst size: strides below B would overrun a
/// channel-sized working set.
std::vector<ExperimentConfig> sweep_cfgs(const std::string& prefix, MemoryKind kind, bool all_policies,
                                         std::uint64_t s_max, std::vector<std::uint64_t> ws) {
  std::vector<ExperimentConfig> out;
  for (auto B : bursts(kind)) {
    auto c = base(prefix + "-" + std::string(to_string(kind)) + "-b" + std::to_string(B), kind,
                  Mode::ReadThroughput);
    c.rst.B = B;
    c.rst.S = std::max<std::uint64_t>(64, B);
    c.rst.W = ws.front();
    c.rst.N = 20000;
    SweepSpec s;
    if (all_policies) {
      for (auto p : MappingPolicy::available(kind)) s.policies.push_back({std::string(to_string(p)), ""});
    } else {
      s.policies = {c.policy};
    }
    s.B = {B};
    s.S = pow2_range(c.rst.S, s_max);
    s.W = ws;
    c.sweep = s;
    out.push_back(std::move(c));
  }
  return out;
}

std::vector<ExperimentConfig> table4_cfgs() {
  std::vector<ExperimentConfig> v;
  for (auto k : {MemoryKind::HBM, MemoryKind::DDR4}) {
    v.push_back(latency_cfg("table4-" + std::string(to_string(k)) + "-s128", k, 128));
    v.push_back(latency_cfg("table4-" + std::string(to_string(k)) + "-s128k", k, 128 * 1024));
  }
  return v;
}

std::vector<ExperimentConfig> table5_cfgs() {
  std::vector<ExperimentConfig> v;
  for (std::uint64_t S : {128ull, 128ull * 1024}) {
    auto c = latency_cfg(S == 128 ? "table5-s128" : "table5-s128k", MemoryKind::HBM, S);
    c.switch_enabled = true;
    c.channels.clear();
    for (unsigned a = 0; a < SwitchTopology::kChannels; ++a) c.channels.push_back({a, 0});
    v.push_back(std::move(c));
  }
  return v;
}

std::vector<ExperimentConfig> table6_cfgs() {
  std::vector<ExperimentConfig> v;
  for (auto k : {MemoryKind::HBM, MemoryKind::DDR4}) {
    auto c = base("table6-" + std::string(to_string(k)), k, Mode::ReadThroughput);
    c.rst.B = 64;
    c.rst.S = 64;
    c.rst.W = kLargeW;
    c.rst.N = 200000;
    c.channels.clear();
    const unsigned n = k == MemoryKind::HBM ? SwitchTopology::kChannels : 2;
    for (unsigned i = 0; i < n; ++i) c.channels.push_back({i, i});
    v.push_back(std::move(c));
  }
  return v;
}

std::vector<ExperimentConfig> fig4_cfgs() {
  std::vector<ExperimentConfig> v;
  for (auto k : {MemoryKind::HBM, MemoryKind::DDR4}) {
    v.push_back(latency_cfg("fig4-" + std::string(to_string(k)), k, 64));
  }
  return v;
}

std::vector<ExperimentConfig> fig5_cfgs() {
  auto v = sweep_cfgs("fig5", MemoryKind::HBM, true, 16384, {kLargeW});
  for (auto& c : sweep_cfgs("fig5", MemoryKind::DDR4, true, 16384, {kLargeW})) v.push_back(std::move(c));
  return v;
}

std::vector<ExperimentConfig> fig7_cfgs() {
  auto v = sweep_cfgs("fig7", MemoryKind::HBM, false, 8192, {8192, kLargeW});
  for (auto& c : sweep_cfgs("fig7", MemoryKind::DDR4, false, 8192, {8192, kLargeW})) v.push_back(std::move(c));
  return v;
}

std::vector<ExperimentConfig> fig8_cfgs() {
  std::vector<ExperimentConfig> v;
  for (std::uint64_t S : {64ull, 256ull, 1024ull, 4096ull}) {
    auto c = base("fig8-s" + std::to_string(S), MemoryKind::HBM, Mode::ReadThroughput);
    c.switch_enabled = true;
    c.rst.B = 64;
    c.rst.S = S;
    c.rst.W = kLatencyW;
    c.rst.N = 200000;
    c.channels.clear();
    for (unsigned a = 0; a < SwitchTopology::kChannels; a += 4) c.channels.push_back({a, 0});
    v.push_back(std::move(c));
  }
  return v;
}

std::optional<std::uint32_t> mode_of(const LatencyTrace& t, LatencyTag tag) {
  std::map<std::uint32_t, std::uint64_t> counts;
  for (const auto& e : t.entries) {
    if (e.truth == tag) ++counts[e.latency];
  }
  std::optional<std::uint32_t> best;
  std::uint64_t n = 0;
  for (const auto& [lat, c] : counts) {
    if (c > n) {
      best = lat;
      n = c;
    }
  }
  return best;
}

std::uint32_t need(std::optional<std::uint32_t> v, const std::string& what) {
  if (!v) throw InsufficientDataError("no " + what + " samples in the trace");
  return *v;
}

struct Levels {
  std::uint32_t hit, closed, miss;
};

Levels levels(const LatencyTrace& seq, const LatencyTrace& far) {
  Levels l{};
  l.hit = need(mode_of(seq, LatencyTag::Hit), "page-hit");
  auto closed = mode_of(seq, LatencyTag::Closed);
  if (!closed) closed = mode_of(far, LatencyTag::Closed);
  l.closed = need(closed, "page-closed");
  l.miss = need(mode_of(far, LatencyTag::Miss), "page-miss");
  return l;
}

Json sweep_rows_json(const std::vector<SweepRow>& rows) {
  Json a = Json::array();
  for (const auto& r : rows) {
    a.push_back(Json{{"policy", r.policy}, {"B", r.B}, {"S", r.S}, {"W", r.W}, {"gbps", r.gbps}});
  }
  return a;
}

void sort_rows(std::vector<SweepRow>& rows, MemoryKind kind) {
  const auto order = MappingPolicy::available(kind);
  auto rank = [&](const std::string& label) {
    for (std::size_t i = 0; i < order.size(); ++i) {
      if (to_string(order[i]) == label) return i;
    }
    return order.size();
  };
  std::stable_sort(rows.begin(), rows.end(), [&](const SweepRow& a, const SweepRow& b) {
    return std::make_tuple(rank(a.policy), a.B, a.S, a.W) <
           std::make_tuple(rank(b.policy), b.B, b.S, b.W);
  });
}

Artifact sweep_preset(const std::vector<ExperimentConfig>& cfgs, const std::string& prefix) {
  Artifact art;
  std::map<MemoryKind, std::vector<SweepRow>> rows;
  for (const auto& c : cfgs) {
    auto r = execute(c);
    auto& dst = rows[c.memory];
    dst.insert(dst.end(), r.rows.begin(), r.rows.end());
  }
  Json results = Json::object();
  for (auto k : {MemoryKind::HBM, MemoryKind::DDR4}) {
    auto& r = rows[k];
    sort_rows(r, k);
    const std::string key(to_string(k));
    results[key] = sweep_rows_json(r);
    art.files.emplace_back(prefix + "_" + key + ".csv", csv_sweep(r));
  }
  art.summary["results"] = results;
  return art;
}

Artifact table4() {
  const auto cfgs = table4_cfgs();
  Artifact art;
  Json results = Json::object();
  std::string csv = "memory,class,cycles,ns\n";
  for (std::size_t i = 0; i < cfgs.size(); i += 2) {
    const auto seq = execute(cfgs[i]);
    const auto far = execute(cfgs[i + 1]);
    const auto l = levels(*seq.channels[0].trace, *far.channels[0].trace);
    const auto& tp = cfgs[i].timing;
    const std::string key(to_string(cfgs[i].memory));
    Json mem{{"clock_mhz", tp.clock_mhz}};
    for (auto [cls, cyc] : {std::pair<const char*, std::uint32_t>{"hit", l.hit},
                            {"closed", l.closed},
                            {"miss", l.miss}}) {
      const double ns = tp.cycles_to_ns(cyc);
      mem[cls] = Json{{"cycles", cyc}, {"ns", ns}};
      csv += key + "," + cls + "," + std::to_string(cyc) + "," + fmt("%.1f", ns) + "\n";
    }
    results[key] = mem;
  }
  art.summary["results"] = results;
  art.files.emplace_back("table4.csv", csv);
  return art;
}

Artifact table5() {
  const auto cfgs = table5_cfgs();
  const auto seq = execute(cfgs[0]);
  const auto far = execute(cfgs[1]);
  const auto& tp = cfgs[0].timing;
  Artifact art;
  Json per_channel = Json::array();
  std::vector<Levels> by_axi;
  for (std::size_t a = 0; a < seq.channels.size(); ++a) {
    const auto l = levels(*seq.channels[a].trace, *far.channels[a].trace);
    by_axi.push_back(l);
    per_channel.push_back(Json{{"axi", seq.channels[a].route.axi},
                               {"hbm", seq.channels[a].route.hbm},
                               {"hit", l.hit},
                               {"closed", l.closed},
                               {"miss", l.miss}});
  }
  Json rows = Json::array();
  std::string csv = "axi_channels,hit,closed,miss,hit_ns,closed_ns,miss_ns\n";
  Levels lo{UINT32_MAX, UINT32_MAX, UINT32_MAX}, hi{0, 0, 0};
  bool uniform = true;
  for (unsigned m = 0; m < SwitchTopology::kMiniSwitches; ++m) {
    const auto& l = by_axi[m * SwitchTopology::kPortsPerMiniSwitch];
    for (unsigned p = 1; p < SwitchTopology::kPortsPerMiniSwitch; ++p) {
      const auto& o = by_axi[m * SwitchTopology::kPortsPerMiniSwitch + p];
      uniform = uniform && o.hit == l.hit && o.closed == l.closed && o.miss == l.miss;
    }
    lo = {std::min(lo.hit, l.hit), std::min(lo.closed, l.closed), std::min(lo.miss, l.miss)};
    hi = {std::max(hi.hit, l.hit), std::max(hi.closed, l.closed), std::max(hi.miss, l.miss)};
    const std::string label = std::to_string(4 * m) + "-" + std::to_string(4 * m + 3);
    rows.push_back(Json{{"axi_channels", label},
                        {"hit", l.hit},
                        {"closed", l.closed},
                        {"miss", l.miss},
                        {"hit_ns", tp.cycles_to_ns(l.hit)},
                        {"closed_ns", tp.cycles_to_ns(l.closed)},
                        {"miss_ns", tp.cycles_to_ns(l.miss)}});
    csv += label + "," + std::to_string(l.hit) + "," + std::to_string(l.closed) + "," +
           std::to_string(l.miss) + "," + fmt("%.1f", tp.cycles_to_ns(l.hit)) + "," +
           fmt("%.1f", tp.cycles_to_ns(l.closed)) + "," + fmt("%.1f", tp.cycles_to_ns(l.miss)) + "\n";
  }
  art.summary["results"] = Json{
      {"hbm_channel", 0},
      {"rows", rows},
      {"spread", {{"hit", hi.hit - lo.hit}, {"closed", hi.closed - lo.closed}, {"miss", hi.miss - lo.miss}}},
      {"uniform_within_mini_switch", uniform},
      {"per_channel", per_channel}};
  art.files.emplace_back("table5.csv", csv);
  return art;
}

Artifact table6() {
  Artifact art;
  Json results = Json::object();
  std::string per = "memory,axi,hbm,gbps\n";
  std::string agg = "memory,channels,mean_gbps,aggregate_gbps\n";
  for (const auto& c : table6_cfgs()) {
    const auto r = execute(c);
    const std::string key(to_string(c.memory));
    Json list = Json::array();
    for (const auto& ch : r.channels) {
      list.push_back(ch.report->gbps);
      per += key + "," + std::to_string(ch.route.axi) + "," + std::to_string(ch.route.hbm) + "," +
             fmt("%.4f", ch.report->gbps) + "\n";
    }
    const double mean = r.aggregate_gbps / static_cast<double>(r.channels.size());
    results[key] = Json{{"channels", r.channels.size()},
                        {"per_channel_gbps", list},
                        {"mean_gbps", mean},
                        {"aggregate_gbps", r.aggregate_gbps}};
    agg += key + "," + std::to_string(r.channels.size()) + "," + fmt("%.4f", mean) + "," +
           fmt("%.4f", r.aggregate_gbps) + "\n";
  }
  art.summary["results"] = results;
  art.files.emplace_back("table6.csv", agg);
  art.files.emplace_back("table6_channels.csv", per);
  return art;
}

Artifact fig4() {
  Artifact art;
  Json results = Json::object();
  for (const auto& c : fig4_cfgs()) {
    const auto r = execute(c);
    const auto& ch = r.channels[0];
    const std::string key(to_string(c.memory));
    Json est;
    if (ch.refresh) {
      Json spikes = Json::array();
      for (auto s : ch.refresh->spike_issues) spikes.push_back(s);
      est = Json{{"interval_ns", ch.refresh->interval_ns},
                 {"spike_count", ch.refresh->spike_count},
                 {"spike_threshold", ch.refresh->spike_threshold},
                 {"spike_issue_cycles", spikes}};
    } else {
      est = Json{{"error", ch.refresh_error}};
    }
    results[key] = Json{{"refresh", est},
                        {"configured_t_refi_ns", c.timing.t_refi_ns},
                        {"modal_latency", ch.histogram->modal_latency}};
    art.files.emplace_back("fig4_" + key + ".csv", csv_trace(*ch.trace, &*ch.histogram));
  }
  art.summary["results"] = results;
  return art;
}

Artifact fig8() {
  Artifact art;
  Json rows = Json::array();
  std::string csv = "axi,hbm,S,route_extra_cycles,gbps\n";
  for (const auto& c : fig8_cfgs()) {
    const auto r = execute(c);
    for (const auto& ch : r.channels) {
      rows.push_back(Json{{"axi", ch.route.axi},
                          {"hbm", ch.route.hbm},
                          {"S", c.rst.S},
                          {"route_extra_cycles", ch.route_extra},
                          {"gbps", ch.report->gbps}});
      csv += std::to_string(ch.route.axi) + "," + std::to_string(ch.route.hbm) + "," +
             std::to_string(c.rst.S) + "," + std::to_string(ch.route_extra) + "," +
             fmt("%.4f", ch.report->gbps) + "\n";
    }
  }
  art.summary["results"] = Json{{"rows", rows}};
  art.files.emplace_back("fig8.csv", csv);
  return art;
}

struct PresetEntry {
  PresetInfo info;
  std::vector<ExperimentConfig> (*configs)();
  Artifact (*run)();
};

const std::vector<PresetEntry>& registry() {
  static const std::vector<PresetEntry> r = {
      {{"table4", "idle hit/closed/miss read latency, HBM and DDR4"}, table4_cfgs, table4},
      {{"table5", "switch-enabled latency from each AXI channel to HBM channel 0"}, table5_cfgs, table5},
      {{"table6", "sequential read throughput per channel and aggregate"}, table6_cfgs, table6},
      {{"fig4-refresh", "serial read latency traces and refresh interval"}, fig4_cfgs, fig4},
      {{"fig5-policy-sweep", "throughput over policy x stride x burst"}, fig5_cfgs,
       [] { return sweep_preset(fig5_cfgs(), "fig5"); }},
      {{"fig7-locality", "throughput with W=8K against W=256M"}, fig7_cfgs,
       [] { return sweep_preset(fig7_cfgs(), "fig7"); }},
      {{"fig8-switch-throughput", "throughput from AXI 0,4,...,28 to HBM channel 0"}, fig8_cfgs, fig8},
  };
  return r;
}

const PresetEntry& find(std::string_view name) {
  for (const auto& e : registry()) {
    if (e.info.name == name) return e;
  }
  std::string valid;
  for (const auto& e : registry()) valid += (valid.empty() ? "" : ", ") + e.info.name;
  throw ValidationError("preset", "unknown preset '" + std::string(name) + "' (valid: " + valid + ")");
}

}  // namespace

const std::vector<PresetInfo>& list_presets() {
  static const std::vector<PresetInfo> v = [] {
    std::vector<PresetInfo> out;
    for (const auto& e : registry()) out.push_back(e.info);
    return out;
  }();
  return v;
}

std::vector<ExperimentConfig> preset_configs(std::string_view name) { return find(name).configs(); }

Artifact run_preset(std::string_view name) {
  const auto& e = find(name);
  Artifact body = e.run();
  Artifact art;
  art.summary["preset"] = e.info.name;
  art.summary["description"] = e.info.description;
  Json cfgs = Json::array();
  for (const auto& c : e.configs()) cfgs.push_back(to_json(c));
  art.summary["configs"] = cfgs;
  art.summary["results"] = body.summary["results"];
  art.files = std::move(body.files);
  return art;
}

}  // namespace hbmsim
