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

#include <cstdio>
#include <fstream>

#include "hbmsim/error.hpp"
#include "hbmsim/harness.hpp"

namespace hbmsim {
namespace {

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

SwitchTopology topology(const ExperimentConfig& c) {
  return c.latency_penalty ? SwitchTopology(c.switch_enabled, *c.latency_penalty)
                           : SwitchTopology(c.switch_enabled);
}

ThroughputReport run_throughput(const ExperimentConfig& c, const RstConfig& rst,
                                const MappingPolicy& policy, RouteCost route) {
  PseudoChannel ch(c.timing);
  return c.mode == Mode::WriteThroughput
             ? run_write_throughput(rst, policy, ch, route, c.engine)
             : run_read_throughput(rst, policy, ch, route, c.engine);
}

Json report_json(const ThroughputReport& r) {
  return Json{{"transactions", r.transactions}, {"bytes", r.bytes}, {"cycles", r.cycles},
              {"gbps", r.gbps}};
}

Json histogram_json(const LatencyHistogram& h) {
  Json buckets = Json::object();
  for (const auto& [lat, n] : h.buckets) buckets[std::to_string(lat)] = n;
  return Json{{"modal_latency", h.modal_latency},
              {"populations",
               {{"hit", h.populations.hit},
                {"closed", h.populations.closed},
                {"miss", h.populations.miss},
                {"refresh", h.populations.refresh}}},
              {"buckets", buckets}};
}

Json refresh_json(const ChannelResult& r) {
  if (!r.refresh) return Json{{"error", r.refresh_error}};
  return Json{{"interval_ns", r.refresh->interval_ns},
              {"spike_count", r.refresh->spike_count},
              {"spike_threshold", r.refresh->spike_threshold}};
}

std::string channel_tag(const Route& r) {
  return "axi" + std::to_string(r.axi) + "_hbm" + std::to_string(r.hbm);
}

}  // namespace

ExperimentResult execute(const ExperimentConfig& c) {
  validate(c);
  ExperimentResult out;
  out.config = c;
  const SwitchTopology topo = topology(c);

  if (c.sweep) {
    const RouteCost route = c.memory == MemoryKind::HBM ? RouteCost::through(topo, c.channels[0])
                                                        : RouteCost::local();
    std::vector<SweepPoint> points;
    for (const auto& p : c.sweep->policies) {
      const MappingPolicy mp = p.resolve(c.memory);
      for (auto B : c.sweep->B) {
        for (auto S : c.sweep->S) {
          for (auto W : c.sweep->W) {
            RstConfig r = c.rst;
            r.B = B;
            r.S = S;
            r.W = W;
            points.push_back({mp.name(), mp.label(), B, S, W, run_throughput(c, r, mp, route)});
          }
        }
      }
    }
    out.rows = summarize_sweep(std::move(points));
    return out;
  }

  const MappingPolicy policy = c.policy.resolve(c.memory);
  for (const auto& r : c.channels) {
    ChannelResult cr;
    cr.route = r;
    const RouteCost route =
        c.memory == MemoryKind::HBM ? RouteCost::through(topo, r) : RouteCost::local();
    cr.route_extra = route.extra_cycles;
    if (c.mode == Mode::Latency) {
      PseudoChannel ch(c.timing);
      cr.trace = run_read_latency(c.rst, policy, ch, route, c.engine);
      cr.histogram = classify_trace(*cr.trace, c.timing, route.extra_cycles);
      try {
        cr.refresh = detect_refresh_interval(*cr.trace, c.timing);
      } catch (const InsufficientDataError& e) {
        cr.refresh_error = e.what();
      }
    } else {
      cr.report = run_throughput(c, c.rst, policy, route);
      out.aggregate_gbps += cr.report->gbps;
    }
    out.channels.push_back(std::move(cr));
  }
  return out;
}

std::string csv_sweep(const std::vector<SweepRow>& rows) {
  std::string s = "policy,B,S,W,gbps\n";
  for (const auto& r : rows) {
    s += r.policy + "," + std::to_string(r.B) + "," + std::to_string(r.S) + "," +
         std::to_string(r.W) + "," + fmt("%.4f", r.gbps) + "\n";
  }
  return s;
}

std::string csv_trace(const LatencyTrace& trace, const LatencyHistogram* hist) {
  std::string s = hist ? "index,issue,latency,truth,class\n" : "index,issue,latency,truth\n";
  for (std::size_t i = 0; i < trace.entries.size(); ++i) {
    const auto& e = trace.entries[i];
    s += std::to_string(e.index) + "," + std::to_string(e.issue) + "," +
         std::to_string(e.latency) + "," + std::string(to_string(e.truth));
    if (hist) s += "," + std::string(to_string(hist->labels[i]));
    s += "\n";
  }
  return s;
}

Artifact run_experiment(const ExperimentConfig& c) {
  const ExperimentResult res = execute(c);
  Artifact art;
  art.summary["config"] = to_json(c);
  if (c.sweep) {
    Json rows = Json::array();
    for (const auto& r : res.rows) {
      rows.push_back(Json{{"policy", r.policy}, {"B", r.B}, {"S", r.S}, {"W", r.W}, {"gbps", r.gbps}});
    }
    art.summary["sweep"] = rows;
    art.files.emplace_back("sweep.csv", csv_sweep(res.rows));
    return art;
  }
  Json channels = Json::array();
  std::string table = "axi,hbm,transactions,bytes,cycles,gbps\n";
  for (const auto& cr : res.channels) {
    Json cj{{"axi", cr.route.axi}, {"hbm", cr.route.hbm}, {"route_extra_cycles", cr.route_extra}};
    if (cr.trace) {
      const std::string file = "trace_" + channel_tag(cr.route) + ".csv";
      cj["trace_file"] = file;
      cj["histogram"] = histogram_json(*cr.histogram);
      cj["refresh"] = refresh_json(cr);
      art.files.emplace_back(file, csv_trace(*cr.trace, &*cr.histogram));
    }
    if (cr.report) {
      cj["report"] = report_json(*cr.report);
      table += std::to_string(cr.route.axi) + "," + std::to_string(cr.route.hbm) + "," +
               std::to_string(cr.report->transactions) + "," + std::to_string(cr.report->bytes) +
               "," + std::to_string(cr.report->cycles) + "," + fmt("%.4f", cr.report->gbps) + "\n";
    }
    channels.push_back(cj);
  }
  art.summary["channels"] = channels;
  if (c.mode != Mode::Latency) {
    art.summary["aggregate_gbps"] = res.aggregate_gbps;
    art.files.emplace_back("channels.csv", table);
  }
  return art;
}

Artifact sweep(const ExperimentConfig& c) {
  if (!c.sweep) throw ValidationError("sweep", "config has no sweep section");
  return run_experiment(c);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_artifact(const Artifact& art, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());
  auto put = [&](const std::string& name, const std::string& body) {
    const auto path = dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << body;
    if (!out) throw IoError("cannot write " + path.string());
  };
  put("summary.json", dump(art.summary));
  for (const auto& [name, body] : art.files) put(name, body);
}

}  // namespace hbmsim
