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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hbmsim/channel.hpp"
#include "hbmsim/engine.hpp"
#include "hbmsim/error.hpp"
#include "hbmsim/timing.hpp"

using namespace hbmsim;

namespace {

DecodedAddress at(std::uint32_t row, std::uint32_t bg, std::uint32_t bank, std::uint32_t col = 0) {
  return DecodedAddress{row, bg, bank, col};
}

// Drive a channel with single-beat requests as fast as it accepts them and
// return every completion.
std::vector<Completion> stream(PseudoChannel& ch, const MappingPolicy& p, const RstConfig& cfg) {
  std::vector<Completion> out;
  std::uint64_t issued = 0;
  while (out.size() < cfg.N) {
    while (auto c = ch.pop_completion()) out.push_back(*c);
    if (out.size() == cfg.N) break;
    if (issued < cfg.N && issued - out.size() < 64) {
      Request r;
      r.tag = issued;
      r.arrival = ch.now();
      r.beats = burst_beats(p, gen_address(cfg, issued), cfg.B, ch.timing().bus_bytes_per_cycle);
      ch.submit(std::move(r));
      ++issued;
    }
    ch.advance(issued < cfg.N && issued - out.size() < 64 ? ch.now() + 1 : kNever);
  }
  return out;
}

}  // namespace

TEST_CASE("timing presets") {
  const auto h = hbm_u280();
  CHECK(h.name == "hbm-u280");
  CHECK(h.hit_latency() == 48);
  CHECK(h.closed_latency() == 55);
  CHECK(h.miss_latency() == 62);
  const auto d = ddr4_u280();
  CHECK(d.hit_latency() == 22);
  CHECK(d.closed_latency() == 27);
  CHECK(d.miss_latency() == 32);
  CHECK(timing_preset("ddr4-u280") == d);
  CHECK(default_timing(MemoryKind::HBM) == h);
  CHECK_THROWS_AS(timing_preset("lpddr"), ValidationError);
  CHECK(timing_preset_names().size() == 2);
  CHECK(h.peak_gbps() == doctest::Approx(14.4));
  CHECK(d.peak_gbps() == doctest::Approx(19.2));
}

TEST_CASE("nanosecond conversions") {
  const auto h = hbm_u280();
  const auto d = ddr4_u280();
  CHECK(std::abs(h.cycles_to_ns(48) - 106.7) <= 0.1);
  CHECK(std::abs(h.cycles_to_ns(55) - 122.2) <= 0.1);
  CHECK(std::abs(h.cycles_to_ns(62) - 137.8) <= 0.1);
  CHECK(std::abs(d.cycles_to_ns(22) - 73.3) <= 0.1);
  CHECK(std::abs(d.cycles_to_ns(27) - 89.9) <= 0.1 + 1e-9);
  CHECK(std::abs(d.cycles_to_ns(32) - 106.6) <= 0.1);
}

TEST_CASE("timing validation") {
  auto t = hbm_u280();
  t.t_ccd_l = 0;
  CHECK_THROWS_AS(t.validate(), ValidationError);
  t = hbm_u280();
  t.t_ccd_s = 0;
  CHECK_THROWS_AS(t.validate(), ValidationError);
  t = hbm_u280();
  t.t_rfc_ns = 8000;
  CHECK_THROWS_AS(t.validate(), ValidationError);
  t = hbm_u280();
  t.bus_bytes_per_cycle = 48;
  CHECK_THROWS_AS(t.validate(), ValidationError);
  t = hbm_u280();
  t.efficiency_overhead = 1.0;
  CHECK_THROWS_AS(t.validate(), ValidationError);
  try {
    t.validate();
  } catch (const ValidationError& e) {
    CHECK(e.field() == "timing.efficiency_overhead");
  }
}

TEST_CASE("refresh windows") {
  const auto h = hbm_u280();
  CHECK(h.refi_cycles() == 3510);
  CHECK(h.rfc_cycles() == 72);
  CHECK(ddr4_u280().refi_cycles() == 2340);
  CHECK(refresh_windows(h, 3509).empty());
  const auto w = refresh_windows(h, 100000);
  REQUIRE(w.size() == 28);
  CHECK(w[0] == RefreshWindow{3510, 3582});
  for (std::size_t i = 1; i < w.size(); ++i) {
    CHECK(w[i].start - w[i - 1].start == 3510);
    CHECK(w[i].start >= w[i - 1].end);
  }
  auto off = h;
  off.refresh_enabled = false;
  CHECK(refresh_windows(off, 100000).empty());
}

TEST_CASE("classify_access") {
  PseudoChannel ch(hbm_u280());
  CHECK(ch.classify_access(at(5, 1, 2)) == AccessClass::PageClosed);
  auto r = ch.service_read(at(5, 1, 2), 32, 0);
  CHECK(r.classification == AccessClass::PageClosed);
  CHECK(ch.classify_access(at(5, 1, 2)) == AccessClass::PageHit);
  CHECK(ch.classify_access(at(9, 1, 2)) == AccessClass::PageMiss);
  CHECK(ch.classify_access(at(9, 1, 3)) == AccessClass::PageClosed);
  r = ch.service_read(at(5, 1, 2, 1), 32, r.completion);
  CHECK(r.classification == AccessClass::PageHit);
  r = ch.service_read(at(9, 1, 2), 32, r.completion);
  CHECK(r.classification == AccessClass::PageMiss);
  CHECK(ch.bank(1, 2).open_row == 9u);
}

TEST_CASE("idle latencies") {
  for (const auto& t : {hbm_u280(), ddr4_u280()}) {
    CAPTURE(t.name);
    PseudoChannel ch(t);
    const std::uint32_t burst = t.bus_bytes_per_cycle;
    Cycle issue = 100;
    auto r = ch.service_read(at(3, 0, 0), burst, issue);
    CHECK(r.completion - issue == t.closed_latency());
    issue = r.completion;
    r = ch.service_read(at(3, 0, 0, 1), burst, issue);
    CHECK(r.classification == AccessClass::PageHit);
    CHECK(r.completion - issue == t.hit_latency());
    issue = r.completion;
    r = ch.service_read(at(4, 0, 0), burst, issue);
    CHECK(r.classification == AccessClass::PageMiss);
    CHECK(r.completion - issue == t.miss_latency());
    CHECK_FALSE(r.refresh_stalled);
  }
}

TEST_CASE("extra beats of one burst") {
  PseudoChannel ch(hbm_u280());
  auto r = ch.service_read(at(1, 0, 0), 32, 0);
  const Cycle issue = r.completion;
  // Four beats in one bank group: column commands t_ccd_l apart.
  r = ch.service_read(at(1, 0, 0, 4), 128, issue);
  CHECK(r.completion - issue == 48 + 3 * hbm_u280().t_ccd_l);
  CHECK_THROWS_AS(ch.service_read(at(1, 0, 0), 48, r.completion), ValidationError);
}

TEST_CASE("back-to-back page hits honour t_ccd") {
  // Hand-stepped: with one admission per cycle, the second column command
  // waits t_ccd_l behind the first in the same bank group, t_ccd_s otherwise.
  auto t = hbm_u280();
  t.t_cmd = 1;
  t.efficiency_overhead = 0.0;
  for (const bool same_group : {true, false}) {
    PseudoChannel ch(t);
    const auto a = at(5, 0, 0);
    const auto b = same_group ? at(5, 0, 1) : at(5, 1, 0);
    auto r = ch.service_read(a, 32, 0);
    r = ch.service_read(b, 32, r.completion);
    const Cycle start = r.completion + 10;
    ch.advance(start);
    REQUIRE(ch.now() == start);
    ch.submit(Request{1, start, false, {at(5, 0, 0, 1)}});
    ch.submit(Request{2, start, false, {same_group ? at(5, 0, 1, 1) : at(5, 1, 0, 1)}});
    std::vector<Completion> done;
    while (done.size() < 2) {
      if (auto c = ch.pop_completion()) {
        done.push_back(*c);
        continue;
      }
      ch.advance();
    }
    CHECK(done[0].completion == start + 48);
    CHECK(done[1].completion - done[0].completion == (same_group ? t.t_ccd_l : t.t_ccd_s));
  }
}

TEST_CASE("service_write") {
  PseudoChannel ch(hbm_u280());
  auto r = ch.service_write(at(2, 3, 1), 32, 0);
  CHECK(r.classification == AccessClass::PageClosed);
  CHECK(ch.bank(3, 1).open_row == 2u);
  // S == W: the same address over and over stays a page hit.
  const auto p = MappingPolicy::default_for(MemoryKind::HBM);
  PseudoChannel w(hbm_u280());
  Cycle issue = 0;
  for (int i = 0; i < 50; ++i) {
    r = w.service(burst_beats(p, 0x1000, 32, 32), true, issue);
    CHECK(r.classification == (i == 0 ? AccessClass::PageClosed : AccessClass::PageHit));
    issue = r.completion;
  }
}

TEST_CASE("preconditions") {
  PseudoChannel ch(hbm_u280());
  auto r = ch.service_read(at(0, 0, 0), 32, 10);
  CHECK_THROWS_AS(ch.service_read(at(0, 0, 0), 32, r.completion - 1), ValidationError);
  ch.submit(Request{0, ch.now() + 5, false, {at(0, 0, 0)}});
  CHECK_THROWS_AS(ch.submit(Request{1, ch.now() + 4, false, {at(0, 0, 0)}}), ValidationError);
  CHECK_THROWS_AS(ch.submit(Request{1, ch.now() + 6, false, {}}), ValidationError);
  CHECK_THROWS_AS(ch.submit(Request{1, ch.now() + 6, false, {at(0, 4, 0)}}), RangeError);
  CHECK_THROWS_AS(ch.service_read(at(0, 0, 0), 32, ch.now() + 10), ValidationError);
}

TEST_CASE("refresh stalls and closes every bank") {
  const auto t = hbm_u280();
  PseudoChannel ch(t);
  auto r = ch.service_read(at(1, 0, 0), 32, 0);
  r = ch.service_read(at(1, 2, 3), 32, r.completion);
  // Issue inside the first window: wait for its end, then find the bank closed.
  const Cycle issue = t.refi_cycles() + 10;
  r = ch.service_read(at(1, 0, 0), 32, issue);
  CHECK(r.refresh_stalled);
  CHECK(r.classification == AccessClass::PageClosed);
  CHECK(r.completion == t.refi_cycles() + t.rfc_cycles() + t.closed_latency());
  CHECK_FALSE(ch.bank(2, 3).open_row.has_value());
}

TEST_CASE("completion is monotone in the issue cycle") {
  const auto t = hbm_u280();
  PseudoChannel base(t);
  auto r = base.service_read(at(7, 1, 1), 32, 0);
  r = base.service_read(at(7, 2, 0), 32, r.completion);
  const Cycle from = base.now();
  for (const auto& target : {at(7, 1, 1, 3), at(8, 1, 1), at(7, 3, 3)}) {
    Cycle prev = 0;
    for (Cycle issue = from; issue < from + 2 * t.refi_cycles(); issue += 3) {
      PseudoChannel ch = base;
      const Cycle c = ch.service_read(target, 32, issue).completion;
      REQUIRE(c >= prev);
      REQUIRE(c >= issue + t.hit_latency());
      prev = c;
    }
  }
}

TEST_CASE("no column command inside a refresh window") {
  const auto t = hbm_u280();
  PseudoChannel ch(t);
  const auto p = MappingPolicy::default_for(MemoryKind::HBM);
  RstConfig cfg{0, 32, 32, 0x10000000, 40000};
  const auto done = stream(ch, p, cfg);
  const auto windows = refresh_windows(t, ch.now());
  REQUIRE(windows.size() > 5);
  std::size_t w = 0;
  for (const auto& c : done) {
    const Cycle col = c.completion - t.t_cas;
    while (w < windows.size() && windows[w].end <= col) ++w;
    if (w < windows.size()) REQUIRE((col < windows[w].start || col >= windows[w].end));
  }
}

TEST_CASE("determinism") {
  const auto p = MappingPolicy::builtin(PolicyName::RBC, MemoryKind::HBM);
  RstConfig cfg{0, 64, 2048, 0x10000000, 5000};
  PseudoChannel a(hbm_u280()), b(hbm_u280());
  const auto x = stream(a, p, cfg);
  const auto y = stream(b, p, cfg);
  REQUIRE(x.size() == y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    CHECK(x[i].tag == y[i].tag);
    CHECK(x[i].completion == y[i].completion);
    CHECK(x[i].classification == y[i].classification);
  }
}
