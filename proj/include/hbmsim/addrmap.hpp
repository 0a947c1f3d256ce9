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

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hbmsim {

using Address = std::uint64_t;

enum class MemoryKind { HBM, DDR4 };

/// Static properties of a memory kind as seen from the application side.
struct MemoryKindInfo {
  MemoryKind kind;
  unsigned addr_field_lo;  // lowest decoded address bit
  unsigned addr_field_hi;  // highest decoded address bit (inclusive)
  std::uint32_t min_burst_bytes;
  std::uint32_t bus_bytes_per_cycle;
  double clock_mhz;

  unsigned field_width() const { return addr_field_hi - addr_field_lo + 1; }
  /// One past the largest addressable byte of a single channel.
  Address capacity_bytes() const { return Address{1} << (addr_field_hi + 1); }
};

const MemoryKindInfo& kind_info(MemoryKind kind);
std::string_view to_string(MemoryKind kind);
/// Accepts "hbm" / "ddr4" in any case.
MemoryKind parse_memory_kind(std::string_view name);

enum class Field : std::uint8_t { Row, BankGroup, Bank, Column };
std::string_view to_string(Field f);

struct Segment {
  Field field;
  unsigned width;
  bool operator==(const Segment&) const = default;
};

struct DecodedAddress {
  std::uint32_t row = 0;
  std::uint32_t bank_group = 0;
  std::uint32_t bank = 0;
  std::uint32_t column = 0;
  bool operator==(const DecodedAddress&) const = default;
};

enum class PolicyName { RBC, RCB, BRC, RGBCG, BRGCG, RCBI, Custom };
std::string_view to_string(PolicyName p);

/// An address-mapping policy: an ordered list of bit-field segments,
/// most-significant first, laid over app_addr[hi:lo]. A field may appear in
/// several segments; earlier segments supply the higher-order bits.
class MappingPolicy {
 public:
  /// A named layout for a memory kind. Throws ValidationError if the layout
  /// does not exist for that kind (e.g. RCBI on HBM).
  static MappingPolicy builtin(PolicyName name, MemoryKind kind);
  /// Case-insensitive lookup of a named layout.
  static MappingPolicy parse(std::string_view name, MemoryKind kind);
  /// The policy used when none is specified (RGBCG for HBM, RCB for DDR4).
  static MappingPolicy default_for(MemoryKind kind);
  /// A user layout in table notation, e.g. "14R-2BG-2B-5C". It must cover the
  /// kind's whole decoded field with exactly 2 bank-group and 2 bank bits.
  static MappingPolicy from_layout(std::string label, std::string_view layout, MemoryKind kind);
  /// Policies defined for a kind, in table order.
  static std::vector<PolicyName> available(MemoryKind kind);

  /// Arbitrary layout over bits [addr_field_lo, addr_field_lo + sum(widths)).
  MappingPolicy(std::string label, unsigned addr_field_lo,
                std::vector<Segment> segments);

  PolicyName name() const { return name_; }
  const std::string& label() const { return label_; }
  unsigned addr_field_lo() const { return lo_; }
  unsigned field_width() const { return total_width_; }
  Address alignment() const { return Address{1} << lo_; }
  Address capacity_bytes() const { return Address{1} << (lo_ + total_width_); }

  const std::vector<Segment>& field_layout() const { return segments_; }
  /// Total bits of one field across all its segments.
  unsigned width_of(Field f) const { return field_bits_[static_cast<int>(f)]; }

  /// Throws AlignmentError for bits below addr_field_lo and RangeError past
  /// the decoded field.
  DecodedAddress decode(Address byte_addr) const;
  /// Throws RangeError if a coordinate does not fit its field.
  Address encode(const DecodedAddress& coords) const;

  /// Layout in table notation, e.g. "14R-1BG-2B-5C-1BG".
  std::string notation() const;

 private:
  struct Slice {
    Field field;
    unsigned width;
    unsigned addr_shift;   // position inside the decoded field
    unsigned field_shift;  // position inside the coordinate
  };

  PolicyName name_ = PolicyName::Custom;
  std::string label_;
  unsigned lo_ = 0;
  unsigned total_width_ = 0;
  std::vector<Segment> segments_;
  std::vector<Slice> slices_;
  std::array<unsigned, 4> field_bits_{};
};

}  // namespace hbmsim
