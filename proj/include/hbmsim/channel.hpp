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
#include <deque>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "hbmsim/addrmap.hpp"
#include "hbmsim/timing.hpp"

namespace hbmsim {

enum class AccessClass : std::uint8_t { PageHit, PageClosed, PageMiss };
std::string_view to_string(AccessClass c);

inline constexpr unsigned kBankGroups = 4;
inline constexpr unsigned kBanksPerGroup = 4;
inline constexpr unsigned kBanks = kBankGroups * kBanksPerGroup;
inline constexpr Cycle kNever = std::numeric_limits<Cycle>::max();

struct BankState {
  std::optional<std::uint32_t> open_row;
  Cycle act_time = 0;   // last ACT
  Cycle col_ready = 0;  // earliest column command after ACT
  Cycle act_ready = 0;  // earliest ACT after PRE or refresh
  Cycle last_col = 0;   // last column command
  bool has_col = false;
};

struct ServiceResult {
  Cycle completion;
  AccessClass classification;
  bool refresh_stalled;
};

/// A burst as submitted by an engine: one decoded target per data beat.
struct Request {
  std::uint64_t tag = 0;
  Cycle arrival = 0;
  bool write = false;
  std::vector<DecodedAddress> beats;
};

struct Completion {
  std::uint64_t tag;
  Cycle arrival;
  Cycle completion;
  AccessClass classification;  // slowest beat
  bool refresh_stalled;        // a refresh window overlapped the request
  bool write;
};

/// One pseudo channel: 4x4 banks with open-page row buffers, a shared data
/// bus and a small reordering scheduler. Single owner, not thread safe;
/// distinct channels never interact.
///
/// Per cycle the scheduler admits at most one request (every t_cmd cycles)
/// into a window of `scheduler_window` requests, issues at most one column
/// command (row hits first, oldest first) and at most one row command (PRE
/// or ACT for the oldest request whose row is not open). A bank is only
/// precharged once no windowed request still hits its open row. Refresh
/// windows block all commands and close every bank.
class PseudoChannel {
 public:
  explicit PseudoChannel(TimingParams params);

  const TimingParams& timing() const { return params_; }
  Cycle now() const { return now_; }
  const BankState& bank(unsigned bank_group, unsigned bank) const {
    return banks_[bank_group * kBanksPerGroup + bank];
  }

  /// What an access to `coords` would be right now.
  AccessClass classify_access(const DecodedAddress& coords) const;

  /// Serve one burst of consecutive columns in one bank, running the channel
  /// until it completes. Requires issue_cycle >= now() and nothing queued.
  ServiceResult service_read(const DecodedAddress& coords, std::uint32_t burst_bytes,
                             Cycle issue_cycle);
  ServiceResult service_write(const DecodedAddress& coords, std::uint32_t burst_bytes,
                              Cycle issue_cycle);
  /// Same, with an explicit target per data beat (beats may span banks).
  ServiceResult service(std::span<const DecodedAddress> beats, bool write, Cycle issue_cycle);

  // Queued interface used by the throughput engines.
  /// Requests must be submitted in non-decreasing arrival order, arrival >= now().
  void submit(Request request);
  /// Process cycle now(), then move to the next cycle at which anything can
  /// happen, never beyond `limit` (a `limit` <= now() advances one cycle).
  void advance(Cycle limit = kNever);
  /// Pop a completion whose data has returned by now().
  std::optional<Completion> pop_completion();
  /// Earliest undelivered completion time, or kNever.
  Cycle next_completion() const;
  std::size_t in_flight() const { return input_.size() + window_.size() + done_.size(); }
  bool idle() const { return in_flight() == 0; }

 private:
  struct Beat {
    std::uint8_t bank;  // bank_group * 4 + bank
    std::uint8_t bank_group;
    bool issued = false;
    AccessClass cls = AccessClass::PageHit;
    std::uint32_t row;
  };
  struct Txn {
    std::uint64_t tag;
    Cycle arrival;
    bool write;
    std::uint32_t remaining;
    std::vector<Beat> beats;
  };

  void apply_refresh();
  bool window_has_room() const;
  void admit();
  bool issue_column();
  bool issue_row();
  bool row_still_wanted(unsigned bank) const;
  Cycle next_event() const;
  bool overlaps_refresh(Cycle arrival, Cycle last_col) const;
  std::vector<DecodedAddress> expand(const DecodedAddress& coords, std::uint32_t burst_bytes) const;

  TimingParams params_;
  Cycle refi_;
  Cycle rfc_;
  Cycle now_ = 0;
  std::array<BankState, kBanks> banks_{};
  std::array<Cycle, kBankGroups> bg_next_col_{};  // earliest column per bank group
  Cycle col_free_ = 0;                            // earliest column on the bus
  Cycle next_admit_ = 0;
  Cycle next_refresh_ = kNever;
  Cycle refresh_end_ = 0;
  double overhead_acc_ = 0.0;

  std::deque<Txn> input_;
  std::vector<Txn> window_;
  std::deque<Completion> done_;
};

}  // namespace hbmsim
