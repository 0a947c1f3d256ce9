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

#include <random>
#include <set>
#include <string>

#include "hbmsim/addrmap.hpp"
#include "hbmsim/error.hpp"

using namespace hbmsim;

namespace {

// Independent decoder: walk the layout string most-significant bit first,
// one bit at a time, shifting each bit into its field.
DecodedAddress oracle_decode(const std::string& layout, unsigned lo, unsigned hi, Address addr) {
  std::vector<char> bits;  // field letter per bit, MSB first
  std::size_t pos = 0;
  while (pos < layout.size()) {
    std::size_t end = layout.find('-', pos);
    if (end == std::string::npos) end = layout.size();
    const std::string tok = layout.substr(pos, end - pos);
    std::size_t i = 0;
    while (std::isdigit(static_cast<unsigned char>(tok[i]))) ++i;
    const unsigned w = std::stoul(tok.substr(0, i));
    const std::string f = tok.substr(i);
    const char c = f == "BG" ? 'G' : f[0];
    bits.insert(bits.end(), w, c);
    pos = end + 1;
  }
  REQUIRE(bits.size() == hi - lo + 1);
  DecodedAddress d;
  unsigned bit = hi;
  for (char c : bits) {
    const std::uint32_t v = (addr >> bit) & 1u;
    switch (c) {
      case 'R': d.row = (d.row << 1) | v; break;
      case 'G': d.bank_group = (d.bank_group << 1) | v; break;
      case 'B': d.bank = (d.bank << 1) | v; break;
      case 'C': d.column = (d.column << 1) | v; break;
    }
    --bit;
  }
  return d;
}

std::vector<MappingPolicy> all_policies() {
  std::vector<MappingPolicy> v;
  for (auto k : {MemoryKind::HBM, MemoryKind::DDR4}) {
    for (auto p : MappingPolicy::available(k)) v.push_back(MappingPolicy::builtin(p, k));
  }
  return v;
}

}  // namespace

TEST_CASE("memory kinds") {
  const auto& h = kind_info(MemoryKind::HBM);
  const auto& d = kind_info(MemoryKind::DDR4);
  CHECK(h.field_width() == 23);
  CHECK(d.field_width() == 28);
  CHECK(h.min_burst_bytes == (1u << h.addr_field_lo));
  CHECK(d.min_burst_bytes == (1u << d.addr_field_lo));
  CHECK(h.clock_mhz == 450.0);
  CHECK(d.clock_mhz == 300.0);
  CHECK(parse_memory_kind("HBM") == MemoryKind::HBM);
  CHECK(parse_memory_kind("Ddr4") == MemoryKind::DDR4);
  CHECK_THROWS_AS(parse_memory_kind("ddr5"), ValidationError);
}

TEST_CASE("policy availability") {
  CHECK(MappingPolicy::available(MemoryKind::HBM).size() == 5);
  CHECK(MappingPolicy::available(MemoryKind::DDR4).size() == 4);
  CHECK_THROWS_AS(MappingPolicy::builtin(PolicyName::RCBI, MemoryKind::HBM), ValidationError);
  CHECK_THROWS_AS(MappingPolicy::builtin(PolicyName::RGBCG, MemoryKind::DDR4), ValidationError);
  CHECK_THROWS_AS(MappingPolicy::builtin(PolicyName::BRGCG, MemoryKind::DDR4), ValidationError);
  CHECK(MappingPolicy::default_for(MemoryKind::HBM).name() == PolicyName::RGBCG);
  CHECK(MappingPolicy::default_for(MemoryKind::DDR4).name() == PolicyName::RCB);
  CHECK(MappingPolicy::parse("rgbcg", MemoryKind::HBM).name() == PolicyName::RGBCG);
  CHECK(MappingPolicy::parse("Rcbi", MemoryKind::DDR4).name() == PolicyName::RCBI);
  CHECK_THROWS_AS(MappingPolicy::parse("XYZ", MemoryKind::HBM), ValidationError);
}

TEST_CASE("field layouts") {
  using F = Field;
  CHECK(MappingPolicy::builtin(PolicyName::RBC, MemoryKind::HBM).field_layout() ==
        std::vector<Segment>{{F::Row, 14}, {F::BankGroup, 2}, {F::Bank, 2}, {F::Column, 5}});
  CHECK(MappingPolicy::builtin(PolicyName::BRC, MemoryKind::DDR4).field_layout() ==
        std::vector<Segment>{{F::BankGroup, 2}, {F::Bank, 2}, {F::Row, 17}, {F::Column, 7}});
  CHECK(MappingPolicy::builtin(PolicyName::BRGCG, MemoryKind::HBM).field_layout() ==
        std::vector<Segment>{{F::Bank, 2}, {F::Row, 14}, {F::BankGroup, 1}, {F::Column, 5},
                             {F::BankGroup, 1}});
  CHECK(MappingPolicy::builtin(PolicyName::RGBCG, MemoryKind::HBM).notation() == "14R-1BG-2B-5C-1BG");
  CHECK(MappingPolicy::builtin(PolicyName::RCB, MemoryKind::DDR4).notation() == "17R-7C-2B-2BG");
  CHECK(MappingPolicy::builtin(PolicyName::RCBI, MemoryKind::DDR4).notation() == "17R-6C-2B-1C-2BG");
}

TEST_CASE("width conservation") {
  for (const auto& p : all_policies()) {
    CAPTURE(p.notation());
    const bool hbm = p.addr_field_lo() == 5;
    unsigned sum = 0;
    for (const auto& s : p.field_layout()) sum += s.width;
    CHECK(sum == (hbm ? 23u : 28u));
    CHECK(p.field_width() == sum);
    CHECK(p.width_of(Field::Row) == (hbm ? 14u : 17u));
    CHECK(p.width_of(Field::BankGroup) == 2);
    CHECK(p.width_of(Field::Bank) == 2);
    CHECK(p.width_of(Field::Column) == (hbm ? 5u : 7u));
  }
}

TEST_CASE("decode examples") {
  const auto rgbcg = MappingPolicy::builtin(PolicyName::RGBCG, MemoryKind::HBM);
  CHECK(rgbcg.decode(0x0) == DecodedAddress{0, 0, 0, 0});
  CHECK(rgbcg.decode(0x20) == DecodedAddress{0, 1, 0, 0});
  const auto rcb = MappingPolicy::builtin(PolicyName::RCB, MemoryKind::DDR4);
  CHECK(rcb.decode(0x40) == DecodedAddress{0, 1, 0, 0});
  const auto brc = MappingPolicy::builtin(PolicyName::BRC, MemoryKind::HBM);
  CHECK(brc.decode(Address{1} << 27) == DecodedAddress{0, 2, 0, 0});
}

TEST_CASE("encode examples") {
  const auto rgbcg = MappingPolicy::builtin(PolicyName::RGBCG, MemoryKind::HBM);
  CHECK(rgbcg.encode({0, 0, 0, 0}) == 0x0);
  CHECK(rgbcg.encode({0, 1, 0, 0}) == 0x20);
  const auto rcbi = MappingPolicy::builtin(PolicyName::RCBI, MemoryKind::DDR4);
  CHECK(rcbi.encode({1, 0, 0, 0}) == 0x20000);
}

TEST_CASE("decode and encode errors") {
  const auto p = MappingPolicy::builtin(PolicyName::RGBCG, MemoryKind::HBM);
  CHECK_THROWS_AS(p.decode(0x10), AlignmentError);
  CHECK_THROWS_AS(p.decode(0x21), AlignmentError);
  CHECK_THROWS_AS(p.decode(Address{1} << 28), RangeError);
  CHECK_NOTHROW(p.decode((Address{1} << 28) - 32));
  CHECK_THROWS_AS(p.encode({1u << 14, 0, 0, 0}), RangeError);
  CHECK_THROWS_AS(p.encode({0, 4, 0, 0}), RangeError);
  CHECK_THROWS_AS(p.encode({0, 0, 4, 0}), RangeError);
  CHECK_THROWS_AS(p.encode({0, 0, 0, 32}), RangeError);
  const auto d = MappingPolicy::builtin(PolicyName::RCB, MemoryKind::DDR4);
  CHECK_THROWS_AS(d.decode(0x20), AlignmentError);
  CHECK_THROWS_AS(d.decode(Address{1} << 34), RangeError);
}

TEST_CASE("decode matches the bit-walking oracle") {
  std::mt19937_64 rng(7);
  for (const auto& p : all_policies()) {
    CAPTURE(p.notation());
    const unsigned lo = p.addr_field_lo();
    const unsigned hi = lo + p.field_width() - 1;
    for (int i = 0; i < 20000; ++i) {
      const Address a = (rng() % p.capacity_bytes()) & ~(p.alignment() - 1);
      REQUIRE(p.decode(a) == oracle_decode(p.notation(), lo, hi, a));
    }
  }
}

TEST_CASE("bijection, exhaustive on reduced widths") {
  for (const auto& p : all_policies()) {
    std::vector<Segment> small;
    for (auto s : p.field_layout()) {
      if (s.field == Field::Row || s.field == Field::Column) s.width = std::min(s.width, 3u);
      small.push_back(s);
    }
    const MappingPolicy r("reduced-" + p.label(), 2, small);
    CAPTURE(r.notation());
    std::set<std::tuple<std::uint32_t, std::uint32_t, std::uint32_t, std::uint32_t>> seen;
    for (Address a = 0; a < r.capacity_bytes(); a += r.alignment()) {
      const auto d = r.decode(a);
      REQUIRE(r.encode(d) == a);
      seen.insert({d.row, d.bank_group, d.bank, d.column});
    }
    CHECK(seen.size() == (r.capacity_bytes() >> 2));
    for (std::uint32_t row = 0; row < (1u << r.width_of(Field::Row)); ++row) {
      for (std::uint32_t bg = 0; bg < 4; ++bg) {
        for (std::uint32_t b = 0; b < 4; ++b) {
          for (std::uint32_t c = 0; c < (1u << r.width_of(Field::Column)); ++c) {
            const DecodedAddress d{row, bg, b, c};
            REQUIRE(r.decode(r.encode(d)) == d);
          }
        }
      }
    }
  }
}

TEST_CASE("bijection, randomized at full width") {
  std::mt19937_64 rng(11);
  for (const auto& p : all_policies()) {
    CAPTURE(p.notation());
    for (int i = 0; i < 100000; ++i) {
      const Address a = (rng() % p.capacity_bytes()) & ~(p.alignment() - 1);
      REQUIRE(p.encode(p.decode(a)) == a);
      const DecodedAddress d{static_cast<std::uint32_t>(rng() >> (64 - p.width_of(Field::Row))),
                             static_cast<std::uint32_t>(rng() & 3),
                             static_cast<std::uint32_t>(rng() & 3),
                             static_cast<std::uint32_t>(rng() >> (64 - p.width_of(Field::Column)))};
      REQUIRE(p.decode(p.encode(d)) == d);
    }
  }
}

TEST_CASE("sequential bursts alternate bank groups under RGBCG") {
  const auto p = MappingPolicy::builtin(PolicyName::RGBCG, MemoryKind::HBM);
  for (Address k = 0; k < 4096; k += 2) {
    CHECK(p.decode(k * 32).bank_group != p.decode((k + 1) * 32).bank_group);
  }
}

TEST_CASE("custom layouts") {
  const auto p = MappingPolicy::from_layout("mine", "14r-2bg-5c-2b", MemoryKind::HBM);
  CHECK(p.name() == PolicyName::Custom);
  CHECK(p.label() == "mine");
  CHECK(p.notation() == "14R-2BG-5C-2B");
  CHECK(p.decode(0x20) == DecodedAddress{0, 0, 1, 0});
  CHECK_THROWS_AS(MappingPolicy::from_layout("x", "14R-2BG-2B-4C", MemoryKind::HBM), ValidationError);
  CHECK_THROWS_AS(MappingPolicy::from_layout("x", "13R-3BG-2B-5C", MemoryKind::HBM), ValidationError);
  CHECK_THROWS_AS(MappingPolicy::from_layout("x", "14R-2XX-2B-5C", MemoryKind::HBM), ValidationError);
  CHECK_THROWS_AS(MappingPolicy::from_layout("x", "R-2BG-2B-5C", MemoryKind::HBM), ValidationError);
}
