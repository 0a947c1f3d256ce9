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

#include <charconv>
#include <fstream>

#include "hbmsim/error.hpp"
#include "hbmsim/harness.hpp"

namespace hbmsim {
namespace {

[[noreturn]] void bad(const std::string& field, const std::string& msg) {
  throw ValidationError(field, msg);
}

std::uint64_t parse_size(std::string_view s, const std::string& field) {
  std::uint64_t mult = 1;
  if (!s.empty()) {
    switch (s.back()) {
      case 'K': case 'k': mult = 1ull << 10; break;
      case 'M': case 'm': mult = 1ull << 20; break;
      case 'G': case 'g': mult = 1ull << 30; break;
      default: break;
    }
    if (mult != 1) s.remove_suffix(1);
  }
  int base = 10;
  if (s.size() > 2 && s[0] == '0' && (s[1] == 'x' || s[1] == 'X')) {
    s.remove_prefix(2);
    base = 16;
  }
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v, base);
  if (s.empty() || ec != std::errc() || p != s.data() + s.size()) {
    bad(field, "expected an integer such as 4096, \"0x1000\" or \"4K\"");
  }
  if (v > UINT64_MAX / mult) bad(field, "value too large");
  return v * mult;
}

std::uint64_t get_u64(const Json& j, const std::string& field) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  if (j.is_number_integer()) {
    if (j.get<std::int64_t>() < 0) bad(field, "must be non-negative");
    return static_cast<std::uint64_t>(j.get<std::int64_t>());
  }
  if (j.is_string()) return parse_size(j.get<std::string>(), field);
  bad(field, "expected a non-negative integer");
}

std::uint32_t get_u32(const Json& j, const std::string& field) {
  const auto v = get_u64(j, field);
  if (v > UINT32_MAX) bad(field, "value too large");
  return static_cast<std::uint32_t>(v);
}

double get_double(const Json& j, const std::string& field) {
  if (!j.is_number()) bad(field, "expected a number");
  return j.get<double>();
}

bool get_bool(const Json& j, const std::string& field) {
  if (!j.is_boolean()) bad(field, "expected true or false");
  return j.get<bool>();
}

std::string get_string(const Json& j, const std::string& field) {
  if (!j.is_string()) bad(field, "expected a string");
  return j.get<std::string>();
}

const Json& get_object(const Json& j, const std::string& field) {
  if (!j.is_object()) bad(field, "expected an object");
  return j;
}

const Json& get_array(const Json& j, const std::string& field) {
  if (!j.is_array()) bad(field, "expected an array");
  return j;
}

void check_keys(const Json& obj, const std::string& prefix,
                std::initializer_list<std::string_view> allowed) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok) bad(prefix.empty() ? key : prefix + "." + key, "unknown key");
  }
}

std::string sub(const std::string& prefix, std::string_view key) {
  return prefix + "." + std::string(key);
}

struct U32Field {
  const char* key;
  std::uint32_t TimingParams::*member;
};
struct DoubleField {
  const char* key;
  double TimingParams::*member;
};

constexpr U32Field kTimingU32[] = {
    {"t_cas", &TimingParams::t_cas},
    {"t_rcd", &TimingParams::t_rcd},
    {"t_rp", &TimingParams::t_rp},
    {"t_ras", &TimingParams::t_ras},
    {"t_rtp", &TimingParams::t_rtp},
    {"t_ccd_s", &TimingParams::t_ccd_s},
    {"t_ccd_l", &TimingParams::t_ccd_l},
    {"t_cmd", &TimingParams::t_cmd},
    {"row_cmds_per_cycle", &TimingParams::row_cmds_per_cycle},
    {"bus_bytes_per_cycle", &TimingParams::bus_bytes_per_cycle},
    {"scheduler_window", &TimingParams::scheduler_window},
};
constexpr DoubleField kTimingDouble[] = {
    {"clock_mhz", &TimingParams::clock_mhz},
    {"t_refi_ns", &TimingParams::t_refi_ns},
    {"t_rfc_ns", &TimingParams::t_rfc_ns},
    {"efficiency_overhead", &TimingParams::efficiency_overhead},
};

void apply_timing(TimingParams& t, const Json& j) {
  get_object(j, "timing");
  for (const auto& [key, value] : j.items()) {
    const std::string field = "timing." + key;
    bool done = false;
    for (const auto& f : kTimingU32) {
      if (key == f.key) {
        t.*f.member = get_u32(value, field);
        done = true;
      }
    }
    for (const auto& f : kTimingDouble) {
      if (key == f.key) {
        t.*f.member = get_double(value, field);
        done = true;
      }
    }
    if (key == "refresh_enabled") {
      t.refresh_enabled = get_bool(value, field);
      done = true;
    }
    if (!done) bad(field, "unknown timing parameter");
  }
}

Json timing_json(const TimingParams& t) {
  Json j = Json::object();
  j["clock_mhz"] = t.clock_mhz;
  for (const auto& f : kTimingU32) j[f.key] = t.*f.member;
  j["t_refi_ns"] = t.t_refi_ns;
  j["t_rfc_ns"] = t.t_rfc_ns;
  j["refresh_enabled"] = t.refresh_enabled;
  j["efficiency_overhead"] = t.efficiency_overhead;
  return j;
}

PolicySpec parse_policy(const Json& j, const std::string& field) {
  PolicySpec p;
  if (j.is_string()) {
    p.name = j.get<std::string>();
  } else if (j.is_object()) {
    check_keys(j, field, {"name", "layout"});
    if (j.contains("name")) p.name = get_string(j["name"], sub(field, "name"));
    if (j.contains("layout")) p.layout = get_string(j["layout"], sub(field, "layout"));
    if (p.name.empty()) p.name = p.layout.empty() ? "" : "custom";
  } else {
    bad(field, "expected a policy name or {\"name\", \"layout\"}");
  }
  if (p.name.empty()) bad(field, "empty policy name");
  return p;
}

Json policy_json(const PolicySpec& p) {
  if (p.layout.empty()) return p.name;
  return Json{{"name", p.name}, {"layout", p.layout}};
}

/// Canonical spelling so that echoes compare equal.
PolicySpec normalize(PolicySpec p, MemoryKind kind, const std::string& field) {
  try {
    const auto resolved = p.resolve(kind);
    if (p.layout.empty()) {
      p.name = resolved.label();
    } else {
      p.layout = resolved.notation();
    }
  } catch (const ValidationError& e) {
    bad(field, e.what());
  }
  return p;
}

template <typename T, typename F>
std::vector<T> parse_list(const Json& j, const std::string& field, F&& one) {
  get_array(j, field);
  std::vector<T> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(one(j[i], field + "[" + std::to_string(i) + "]"));
  }
  if (out.empty()) bad(field, "sweep list must not be empty");
  return out;
}

}  // namespace

std::string_view to_string(Mode m) {
  switch (m) {
    case Mode::Latency: return "latency";
    case Mode::ReadThroughput: return "read_throughput";
    case Mode::WriteThroughput: return "write_throughput";
  }
  return "?";
}

Mode parse_mode(std::string_view s) {
  if (s == "latency") return Mode::Latency;
  if (s == "read_throughput") return Mode::ReadThroughput;
  if (s == "write_throughput") return Mode::WriteThroughput;
  bad("mode", "unknown mode '" + std::string(s) +
                  "' (expected latency, read_throughput or write_throughput)");
}

MappingPolicy PolicySpec::resolve(MemoryKind kind) const {
  if (layout.empty()) return MappingPolicy::parse(name, kind);
  return MappingPolicy::from_layout(name, layout, kind);
}

ExperimentConfig parse_config(const Json& j) {
  if (!j.is_object()) bad("config", "expected a JSON object");
  check_keys(j, "", {"name", "memory", "policy", "timing_preset", "timing", "switch", "mode",
                     "rst", "sweep", "channels", "engine", "output"});
  ExperimentConfig c;
  if (j.contains("name")) c.name = get_string(j["name"], "name");
  if (j.contains("memory")) c.memory = parse_memory_kind(get_string(j["memory"], "memory"));

  c.timing = default_timing(c.memory);
  if (j.contains("timing_preset")) {
    c.timing = timing_preset(get_string(j["timing_preset"], "timing_preset"));
  }
  if (j.contains("timing")) apply_timing(c.timing, j["timing"]);

  c.policy.name = std::string(to_string(MappingPolicy::default_for(c.memory).name()));
  if (j.contains("policy")) c.policy = parse_policy(j["policy"], "policy");
  c.policy = normalize(c.policy, c.memory, "policy");

  if (j.contains("switch")) {
    const auto& s = get_object(j["switch"], "switch");
    check_keys(s, "switch", {"enabled", "latency_penalty"});
    if (s.contains("enabled")) c.switch_enabled = get_bool(s["enabled"], "switch.enabled");
    if (s.contains("latency_penalty") && !s["latency_penalty"].is_null()) {
      const auto& t = get_array(s["latency_penalty"], "switch.latency_penalty");
      if (t.size() != SwitchTopology::kMiniSwitches) {
        bad("switch.latency_penalty", "expected an 8x8 array");
      }
      PenaltyTable table{};
      for (std::size_t a = 0; a < t.size(); ++a) {
        const std::string f = "switch.latency_penalty[" + std::to_string(a) + "]";
        if (!t[a].is_array() || t[a].size() != SwitchTopology::kMiniSwitches) {
          bad(f, "expected 8 entries");
        }
        for (std::size_t b = 0; b < t[a].size(); ++b) {
          table[a][b] = get_u32(t[a][b], f + "[" + std::to_string(b) + "]");
        }
      }
      c.latency_penalty = table;
    }
  }

  if (j.contains("mode")) c.mode = parse_mode(get_string(j["mode"], "mode"));

  c.rst.B = kind_info(c.memory).min_burst_bytes;
  c.rst.S = c.rst.B;
  if (j.contains("rst")) {
    const auto& r = get_object(j["rst"], "rst");
    check_keys(r, "rst", {"A", "B", "S", "W", "N"});
    if (r.contains("A")) c.rst.A = get_u64(r["A"], "rst.A");
    if (r.contains("B")) c.rst.B = get_u32(r["B"], "rst.B");
    if (r.contains("S")) c.rst.S = get_u64(r["S"], "rst.S");
    if (r.contains("W")) c.rst.W = get_u64(r["W"], "rst.W");
    if (r.contains("N")) c.rst.N = get_u64(r["N"], "rst.N");
  }

  if (j.contains("sweep") && !j["sweep"].is_null()) {
    const auto& s = get_object(j["sweep"], "sweep");
    check_keys(s, "sweep", {"policy", "B", "S", "W"});
    SweepSpec sw;
    sw.policies = {c.policy};
    sw.B = {c.rst.B};
    sw.S = {c.rst.S};
    sw.W = {c.rst.W};
    if (s.contains("policy")) {
      sw.policies = parse_list<PolicySpec>(s["policy"], "sweep.policy", [&](const Json& e, const std::string& f) {
        return normalize(parse_policy(e, f), c.memory, f);
      });
    }
    if (s.contains("B")) sw.B = parse_list<std::uint32_t>(s["B"], "sweep.B", get_u32);
    if (s.contains("S")) sw.S = parse_list<std::uint64_t>(s["S"], "sweep.S", get_u64);
    if (s.contains("W")) sw.W = parse_list<std::uint64_t>(s["W"], "sweep.W", get_u64);
    c.sweep = std::move(sw);
  }

  if (j.contains("channels")) {
    const auto& arr = get_array(j["channels"], "channels");
    c.channels.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const std::string f = "channels[" + std::to_string(i) + "]";
      const auto& e = get_object(arr[i], f);
      check_keys(e, f, {"axi", "hbm"});
      if (!e.contains("axi") || !e.contains("hbm")) bad(f, "needs both axi and hbm");
      c.channels.push_back(Route{get_u32(e["axi"], f + ".axi"), get_u32(e["hbm"], f + ".hbm")});
    }
  }

  if (j.contains("engine")) {
    const auto& e = get_object(j["engine"], "engine");
    check_keys(e, "engine", {"outstanding", "trace_capacity"});
    if (e.contains("outstanding")) c.engine.outstanding = get_u32(e["outstanding"], "engine.outstanding");
    if (e.contains("trace_capacity")) {
      c.engine.trace_capacity = get_u64(e["trace_capacity"], "engine.trace_capacity");
    }
  }

  if (j.contains("output")) {
    const auto& o = get_object(j["output"], "output");
    check_keys(o, "output", {"dir"});
    if (o.contains("dir")) c.output_dir = get_string(o["dir"], "output.dir");
  }

  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError("config", std::string("malformed JSON: ") + e.what());
  }
  return parse_config(j);
}

Json to_json(const ExperimentConfig& c) {
  Json j = Json::object();
  j["name"] = c.name;
  j["memory"] = std::string(to_string(c.memory));
  j["policy"] = policy_json(c.policy);
  j["timing_preset"] = c.timing.name;
  j["timing"] = timing_json(c.timing);
  Json sw = Json::object();
  sw["enabled"] = c.switch_enabled;
  if (c.latency_penalty) {
    Json t = Json::array();
    for (const auto& row : *c.latency_penalty) t.push_back(Json(row));
    sw["latency_penalty"] = t;
  }
  j["switch"] = sw;
  j["mode"] = std::string(to_string(c.mode));
  j["rst"] = Json{{"A", c.rst.A}, {"B", c.rst.B}, {"S", c.rst.S}, {"W", c.rst.W}, {"N", c.rst.N}};
  if (c.sweep) {
    Json pol = Json::array();
    for (const auto& p : c.sweep->policies) pol.push_back(policy_json(p));
    j["sweep"] = Json{{"policy", pol}, {"B", c.sweep->B}, {"S", c.sweep->S}, {"W", c.sweep->W}};
  }
  Json ch = Json::array();
  for (const auto& r : c.channels) ch.push_back(Json{{"axi", r.axi}, {"hbm", r.hbm}});
  j["channels"] = ch;
  j["engine"] = Json{{"outstanding", c.engine.outstanding},
                     {"trace_capacity", c.engine.trace_capacity}};
  if (!c.output_dir.empty()) j["output"] = Json{{"dir", c.output_dir}};
  return j;
}

void validate(const ExperimentConfig& c) {
  c.timing.validate();
  const auto& info = kind_info(c.memory);
  if (c.timing.bus_bytes_per_cycle > info.min_burst_bytes) {
    bad("timing.bus_bytes_per_cycle",
        "must not exceed the " + std::to_string(info.min_burst_bytes) + "-byte minimum burst");
  }
  const MappingPolicy policy = c.policy.resolve(c.memory);
  c.rst.validate(policy);

  if (c.engine.outstanding == 0) bad("engine.outstanding", "must be at least 1");
  if (c.engine.trace_capacity == 0) bad("engine.trace_capacity", "must be at least 1");
  if (c.channels.empty()) bad("channels", "at least one channel is required");

  if (c.memory == MemoryKind::DDR4) {
    if (c.switch_enabled) bad("switch.enabled", "DDR4 channels have no switch");
    for (std::size_t i = 0; i < c.channels.size(); ++i) {
      const auto& r = c.channels[i];
      if (r.axi != r.hbm || r.axi >= 2) {
        bad("channels[" + std::to_string(i) + "]", "DDR4 routes must be local, channel 0 or 1");
      }
    }
  } else {
    const SwitchTopology topo = c.latency_penalty ? SwitchTopology(c.switch_enabled, *c.latency_penalty)
                                                  : SwitchTopology(c.switch_enabled);
    for (std::size_t i = 0; i < c.channels.size(); ++i) {
      try {
        topo.check(c.channels[i]);
      } catch (const RoutingError& e) {
        throw RoutingError("channels[" + std::to_string(i) + "]: " + e.what());
      } catch (const RangeError& e) {
        bad("channels[" + std::to_string(i) + "]", e.what());
      }
    }
  }

  if (c.sweep) {
    const auto& s = *c.sweep;
    if (s.policies.empty() || s.B.empty() || s.S.empty() || s.W.empty()) {
      bad("sweep", "sweep lists must not be empty");
    }
    if (c.mode == Mode::Latency) bad("mode", "sweeps measure throughput");
    if (c.channels.size() != 1) bad("channels", "a sweep runs on exactly one channel");
    for (const auto& p : s.policies) {
      const MappingPolicy mp = p.resolve(c.memory);
      for (auto B : s.B) {
        for (auto S : s.S) {
          for (auto W : s.W) {
            RstConfig r = c.rst;
            r.B = B;
            r.S = S;
            r.W = W;
            try {
              r.validate(mp);
            } catch (const ValidationError& e) {
              bad("sweep", "point " + mp.label() + " B=" + std::to_string(B) +
                               " S=" + std::to_string(S) + " W=" + std::to_string(W) + ": " +
                               e.what());
            }
          }
        }
      }
    }
  }
}

}  // namespace hbmsim
