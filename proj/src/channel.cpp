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

#include "hbmsim/channel.hpp"

#include <algorithm>

#include "hbmsim/error.hpp"

namespace hbmsim {

std::string_view to_string(AccessClass c) {
  switch (c) {
    case AccessClass::PageHit: return "hit";
    case AccessClass::PageClosed: return "closed";
    case AccessClass::PageMiss: return "miss";
  }
  return "?";
}

PseudoChannel::PseudoChannel(TimingParams params) : params_(std::move(params)) {
  params_.validate();
  refi_ = params_.refi_cycles();
  rfc_ = params_.rfc_cycles();
  next_refresh_ = params_.refresh_enabled ? refi_ : kNever;
  window_.reserve(params_.scheduler_window);
}

AccessClass PseudoChannel::classify_access(const DecodedAddress& coords) const {
  const auto& b = banks_.at(coords.bank_group * kBanksPerGroup + coords.bank);
  if (!b.open_row) return AccessClass::PageClosed;
  return *b.open_row == coords.row ? AccessClass::PageHit : AccessClass::PageMiss;
}

std::vector<DecodedAddress> PseudoChannel::expand(const DecodedAddress& coords,
                                                  std::uint32_t burst_bytes) const {
  const auto bus = params_.bus_bytes_per_cycle;
  if (burst_bytes == 0 || burst_bytes % bus != 0) {
    throw ValidationError("burst_bytes", "must be a positive multiple of " + std::to_string(bus));
  }
  std::vector<DecodedAddress> beats(burst_bytes / bus, coords);
  for (std::uint32_t k = 0; k < beats.size(); ++k) beats[k].column = coords.column + k;
  return beats;
}

ServiceResult PseudoChannel::service_read(const DecodedAddress& coords,
                                          std::uint32_t burst_bytes, Cycle issue_cycle) {
  const auto beats = expand(coords, burst_bytes);
  return service(beats, false, issue_cycle);
}

ServiceResult PseudoChannel::service_write(const DecodedAddress& coords,
                                           std::uint32_t burst_bytes, Cycle issue_cycle) {
  const auto beats = expand(coords, burst_bytes);
  return service(beats, true, issue_cycle);
}

ServiceResult PseudoChannel::service(std::span<const DecodedAddress> beats, bool write,
                                     Cycle issue_cycle) {
  if (!idle()) throw ValidationError("issue_cycle", "channel has queued requests");
  if (issue_cycle < now_) {
    throw ValidationError("issue_cycle", "issue cycle " + std::to_string(issue_cycle) +
                                             " precedes channel time " + std::to_string(now_));
  }
  Request r;
  r.arrival = issue_cycle;
  r.write = write;
  r.beats.assign(beats.begin(), beats.end());
  submit(std::move(r));
  for (;;) {
    if (auto c = pop_completion()) return {c->completion, c->classification, c->refresh_stalled};
    advance();
  }
}

void PseudoChannel::submit(Request request) {
  if (request.beats.empty()) throw ValidationError("beats", "request without data beats");
  if (request.arrival < now_ || (!input_.empty() && request.arrival < input_.back().arrival)) {
    throw ValidationError("arrival", "requests must arrive in order and not in the past");
  }
  Txn t{request.tag, request.arrival, request.write,
        static_cast<std::uint32_t>(request.beats.size()), {}};
  t.beats.reserve(request.beats.size());
  for (const auto& d : request.beats) {
    if (d.bank_group >= kBankGroups || d.bank >= kBanksPerGroup) {
      throw RangeError("bank coordinates out of range");
    }
    t.beats.push_back(Beat{static_cast<std::uint8_t>(d.bank_group * kBanksPerGroup + d.bank),
                           static_cast<std::uint8_t>(d.bank_group), false,
                           AccessClass::PageHit, d.row});
  }
  input_.push_back(std::move(t));
}

std::optional<Completion> PseudoChannel::pop_completion() {
  if (done_.empty() || done_.front().completion > now_) return std::nullopt;
  Completion c = done_.front();
  done_.pop_front();
  return c;
}

Cycle PseudoChannel::next_completion() const {
  return done_.empty() ? kNever : done_.front().completion;
}

void PseudoChannel::apply_refresh() {
  while (next_refresh_ <= now_) {
    const Cycle end = next_refresh_ + rfc_;
    for (auto& b : banks_) {
      b.open_row.reset();
      b.act_ready = std::max(b.act_ready, end);
    }
    refresh_end_ = end;
    next_refresh_ += refi_;
  }
}

bool PseudoChannel::window_has_room() const {
  return window_.size() < params_.scheduler_window;
}

void PseudoChannel::admit() {
  if (input_.empty() || input_.front().arrival > now_) return;
  if (now_ < next_admit_ || !window_has_room()) return;
  window_.push_back(std::move(input_.front()));
  input_.pop_front();
  next_admit_ = now_ + params_.t_cmd;
}

bool PseudoChannel::overlaps_refresh(Cycle arrival, Cycle last_col) const {
  if (!params_.refresh_enabled || last_col < refi_) return false;
  const Cycle start = (last_col / refi_) * refi_;
  return start + rfc_ > arrival;
}

bool PseudoChannel::issue_column() {
  if (now_ < refresh_end_ || now_ < col_free_) return false;
  for (auto it = window_.begin(); it != window_.end(); ++it) {
    for (auto& beat : it->beats) {
      if (beat.issued) continue;
      auto& bank = banks_[beat.bank];
      if (bank.open_row != beat.row || bank.col_ready > now_) continue;
      if (bg_next_col_[beat.bank_group] > now_) continue;

      beat.issued = true;
      bank.last_col = now_;
      bank.has_col = true;
      bg_next_col_[beat.bank_group] = now_ + params_.t_ccd_l;
      col_free_ = now_ + params_.t_ccd_s;
      overhead_acc_ += params_.efficiency_overhead;
      if (overhead_acc_ >= 1.0) {
        overhead_acc_ -= 1.0;
        col_free_ += 1;
      }
      if (--it->remaining == 0) {
        AccessClass cls = AccessClass::PageHit;
        for (const auto& b : it->beats) cls = std::max(cls, b.cls);
        done_.push_back(Completion{it->tag, it->arrival, now_ + params_.t_cas, cls,
                                   overlaps_refresh(it->arrival, now_), it->write});
        window_.erase(it);
      }
      return true;
    }
  }
  return false;
}

bool PseudoChannel::row_still_wanted(unsigned bank) const {
  const auto& open = banks_[bank].open_row;
  for (const auto& t : window_) {
    for (const auto& b : t.beats) {
      if (!b.issued && b.bank == bank && open == b.row) return true;
    }
  }
  return false;
}

bool PseudoChannel::issue_row() {
  if (now_ < refresh_end_) return false;
  std::uint32_t visited = 0;
  for (auto& t : window_) {
    for (auto& beat : t.beats) {
      if (beat.issued || (visited >> beat.bank & 1u)) continue;
      visited |= 1u << beat.bank;
      auto& bank = banks_[beat.bank];
      if (bank.open_row == beat.row) continue;
      if (!bank.open_row) {
        if (bank.act_ready > now_) continue;
        bank.open_row = beat.row;
        bank.act_time = now_;
        bank.col_ready = now_ + params_.t_rcd;
        if (beat.cls == AccessClass::PageHit) beat.cls = AccessClass::PageClosed;
        return true;
      }
      if (row_still_wanted(beat.bank)) continue;
      if (now_ < bank.act_time + params_.t_ras) continue;
      if (bank.has_col && now_ < bank.last_col + params_.t_rtp) continue;
      bank.open_row.reset();
      bank.act_ready = now_ + params_.t_rp;
      beat.cls = AccessClass::PageMiss;
      return true;
    }
  }
  return false;
}

Cycle PseudoChannel::next_event() const {
  Cycle cand = done_.empty() ? kNever : done_.front().completion;
  if (!input_.empty() && window_has_room()) {
    cand = std::min(cand, std::max(input_.front().arrival, next_admit_));
  }
  if (window_.empty()) return cand;
  cand = std::min(cand, next_refresh_);
  std::uint32_t visited = 0;
  for (const auto& t : window_) {
    for (const auto& beat : t.beats) {
      if (beat.issued) continue;
      const auto& bank = banks_[beat.bank];
      Cycle at;
      if (bank.open_row == beat.row) {
        at = std::max({bank.col_ready, bg_next_col_[beat.bank_group], col_free_});
      } else {
        if (visited >> beat.bank & 1u) continue;
        visited |= 1u << beat.bank;
        if (!bank.open_row) {
          at = bank.act_ready;
        } else {
          if (row_still_wanted(beat.bank)) continue;
          at = bank.act_time + params_.t_ras;
          if (bank.has_col) at = std::max(at, bank.last_col + params_.t_rtp);
        }
      }
      cand = std::min(cand, std::max(at, refresh_end_));
    }
  }
  return cand;
}

void PseudoChannel::advance(Cycle limit) {
  apply_refresh();
  admit();
  issue_column();
  for (std::uint32_t k = 0; k < params_.row_cmds_per_cycle && issue_row(); ++k) {
  }
  Cycle next = next_event();
  if (next == kNever) next = limit == kNever ? now_ + 1 : limit;
  next = std::max(next, now_ + 1);
  now_ = std::min(next, std::max(limit, now_ + 1));
}

}  // namespace hbmsim
