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

#include "hbmsim/addrmap.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "hbmsim/error.hpp"

namespace hbmsim {
namespace {

constexpr MemoryKindInfo kHbm{MemoryKind::HBM, 5, 27, 32, 32, 450.0};
constexpr MemoryKindInfo kDdr4{MemoryKind::DDR4, 6, 33, 64, 64, 300.0};

struct BuiltinLayout {
  PolicyName name;
  const char* hbm;   // nullptr if undefined for HBM
  const char* ddr4;  // nullptr if undefined for DDR4
};

constexpr BuiltinLayout kLayouts[] = {
    {PolicyName::RBC, "14R-2BG-2B-5C", "17R-2BG-2B-7C"},
    {PolicyName::RCB, "14R-5C-2BG-2B", "17R-7C-2B-2BG"},
    {PolicyName::BRC, "2BG-2B-14R-5C", "2BG-2B-17R-7C"},
    {PolicyName::RGBCG, "14R-1BG-2B-5C-1BG", nullptr},
    {PolicyName::BRGCG, "2B-14R-1BG-5C-1BG", nullptr},
    {PolicyName::RCBI, nullptr, "17R-6C-2B-1C-2BG"},
};

std::string upper(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return out;
}

std::vector<Segment> parse_notation(std::string_view text) {
  std::vector<Segment> segs;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t dash = text.find('-', pos);
    if (dash == std::string_view::npos) dash = text.size();
    std::string_view tok = text.substr(pos, dash - pos);
    std::size_t i = 0;
    unsigned width = 0;
    while (i < tok.size() && std::isdigit(static_cast<unsigned char>(tok[i]))) {
      width = width * 10 + static_cast<unsigned>(tok[i] - '0');
      ++i;
    }
    std::string_view tag = tok.substr(i);
    if (i == 0) throw ValidationError("policy", "layout token '" + std::string(tok) + "' lacks a width");
    Field f;
    if (tag == "R") f = Field::Row;
    else if (tag == "BG") f = Field::BankGroup;
    else if (tag == "B") f = Field::Bank;
    else if (tag == "C") f = Field::Column;
    else throw ValidationError("policy", "bad layout token '" + std::string(tok) + "'");
    segs.push_back({f, width});
    pos = dash + 1;
  }
  return segs;
}

std::uint32_t& coord(DecodedAddress& d, Field f) {
  switch (f) {
    case Field::Row: return d.row;
    case Field::BankGroup: return d.bank_group;
    case Field::Bank: return d.bank;
    case Field::Column: return d.column;
  }
  return d.row;
}

std::uint32_t coord(const DecodedAddress& d, Field f) {
  return coord(const_cast<DecodedAddress&>(d), f);
}

}  // namespace

const MemoryKindInfo& kind_info(MemoryKind kind) {
  return kind == MemoryKind::HBM ? kHbm : kDdr4;
}

std::string_view to_string(MemoryKind kind) {
  return kind == MemoryKind::HBM ? "hbm" : "ddr4";
}

MemoryKind parse_memory_kind(std::string_view name) {
  const std::string u = upper(name);
  if (u == "HBM") return MemoryKind::HBM;
  if (u == "DDR4") return MemoryKind::DDR4;
  throw ValidationError("memory", "unknown memory kind '" + std::string(name) +
                                      "' (expected hbm or ddr4)");
}

std::string_view to_string(Field f) {
  switch (f) {
    case Field::Row: return "R";
    case Field::BankGroup: return "BG";
    case Field::Bank: return "B";
    case Field::Column: return "C";
  }
  return "?";
}

std::string_view to_string(PolicyName p) {
  switch (p) {
    case PolicyName::RBC: return "RBC";
    case PolicyName::RCB: return "RCB";
    case PolicyName::BRC: return "BRC";
    case PolicyName::RGBCG: return "RGBCG";
    case PolicyName::BRGCG: return "BRGCG";
    case PolicyName::RCBI: return "RCBI";
    case PolicyName::Custom: return "CUSTOM";
  }
  return "?";
}

MappingPolicy::MappingPolicy(std::string label, unsigned addr_field_lo,
                             std::vector<Segment> segments)
    : label_(std::move(label)), lo_(addr_field_lo), segments_(std::move(segments)) {
  for (const auto& s : segments_) {
    if (s.width == 0) throw ValidationError("policy", "zero-width segment");
    total_width_ += s.width;
  }
  if (lo_ + total_width_ > 63) throw ValidationError("policy", "layout wider than 63 bits");
  // Walk LSB-first so that earlier segments end up as the high-order bits.
  unsigned addr_shift = 0;
  std::array<unsigned, 4> field_shift{};
  slices_.resize(segments_.size());
  for (std::size_t i = segments_.size(); i-- > 0;) {
    const auto& s = segments_[i];
    auto fi = static_cast<int>(s.field);
    slices_[i] = Slice{s.field, s.width, addr_shift, field_shift[fi]};
    addr_shift += s.width;
    field_shift[fi] += s.width;
  }
  field_bits_ = field_shift;
  for (unsigned bits : field_bits_) {
    if (bits > 32) throw ValidationError("policy", "field wider than 32 bits");
  }
}

MappingPolicy MappingPolicy::builtin(PolicyName name, MemoryKind kind) {
  for (const auto& l : kLayouts) {
    if (l.name != name) continue;
    const char* text = kind == MemoryKind::HBM ? l.hbm : l.ddr4;
    if (text == nullptr) break;
    MappingPolicy p(std::string(to_string(name)), kind_info(kind).addr_field_lo,
                    parse_notation(text));
    p.name_ = name;
    return p;
  }
  throw ValidationError("policy", "policy " + std::string(to_string(name)) +
                                      " is not defined for " +
                                      std::string(to_string(kind)));
}

MappingPolicy MappingPolicy::parse(std::string_view name, MemoryKind kind) {
  const std::string u = upper(name);
  for (const auto& l : kLayouts) {
    if (u == to_string(l.name)) return builtin(l.name, kind);
  }
  throw ValidationError("policy", "unknown policy '" + std::string(name) +
                                      "' (expected RBC, RCB, BRC, RGBCG, BRGCG or RCBI)");
}

MappingPolicy MappingPolicy::from_layout(std::string label, std::string_view layout,
                                         MemoryKind kind) {
  const auto& info = kind_info(kind);
  MappingPolicy p(std::move(label), info.addr_field_lo, parse_notation(upper(layout)));
  if (p.field_width() != info.field_width()) {
    throw ValidationError("policy.layout", "layout covers " + std::to_string(p.field_width()) +
                                               " bits, " + std::string(to_string(kind)) +
                                               " needs " + std::to_string(info.field_width()));
  }
  if (p.width_of(Field::BankGroup) != 2 || p.width_of(Field::Bank) != 2) {
    throw ValidationError("policy.layout", "layout needs exactly 2 BG and 2 B bits");
  }
  if (p.width_of(Field::Row) == 0 || p.width_of(Field::Column) == 0) {
    throw ValidationError("policy.layout", "layout needs row and column bits");
  }
  return p;
}

MappingPolicy MappingPolicy::default_for(MemoryKind kind) {
  return builtin(kind == MemoryKind::HBM ? PolicyName::RGBCG : PolicyName::RCB, kind);
}

std::vector<PolicyName> MappingPolicy::available(MemoryKind kind) {
  std::vector<PolicyName> out;
  for (const auto& l : kLayouts) {
    if ((kind == MemoryKind::HBM ? l.hbm : l.ddr4) != nullptr) out.push_back(l.name);
  }
  return out;
}

DecodedAddress MappingPolicy::decode(Address byte_addr) const {
  if ((byte_addr & (alignment() - 1)) != 0) {
    std::ostringstream os;
    os << "address 0x" << std::hex << byte_addr << " is not aligned to " << std::dec
       << alignment() << " bytes";
    throw AlignmentError(os.str());
  }
  if (byte_addr >= capacity_bytes()) {
    std::ostringstream os;
    os << "address 0x" << std::hex << byte_addr << " exceeds the 0x" << capacity_bytes()
       << "-byte channel";
    throw RangeError(os.str());
  }
  const Address field = byte_addr >> lo_;
  DecodedAddress d;
  for (const auto& s : slices_) {
    auto v = static_cast<std::uint32_t>((field >> s.addr_shift) & ((Address{1} << s.width) - 1));
    coord(d, s.field) |= v << s.field_shift;
  }
  return d;
}

Address MappingPolicy::encode(const DecodedAddress& c) const {
  for (int f = 0; f < 4; ++f) {
    const std::uint64_t v = coord(c, static_cast<Field>(f));
    if (v >> field_bits_[f] != 0) {
      throw RangeError(std::string(to_string(static_cast<Field>(f))) + " coordinate " +
                       std::to_string(v) + " exceeds " + std::to_string(field_bits_[f]) +
                       " bits");
    }
  }
  Address field = 0;
  for (const auto& s : slices_) {
    const Address v = (coord(c, s.field) >> s.field_shift) & ((Address{1} << s.width) - 1);
    field |= v << s.addr_shift;
  }
  return field << lo_;
}

std::string MappingPolicy::notation() const {
  std::string out;
  for (const auto& s : segments_) {
    if (!out.empty()) out += '-';
    out += std::to_string(s.width);
    out += to_string(s.field);
  }
  return out;
}

}  // namespace hbmsim
