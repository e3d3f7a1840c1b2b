// Copyright 2026 The pinas Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pinas/common/bytes.h"

namespace pinas {

enum class Direction { kSend, kRecv };

struct TranscriptEntry {
  int round = 0;
  Direction dir = Direction::kSend;
  uint64_t payload_bytes = 0;
  uint64_t header_bytes = 0;
  int64_t t_wall_ns = 0;
};

// Per-session message ledger. Totals are always recomputed from entries.
class Transcript {
 public:
  void Append(const TranscriptEntry& e) { entries_.push_back(e); }
  void MarkRound() { ++rounds_; }
  void Clear() {
    entries_.clear();
    rounds_ = 0;
  }

  const std::vector<TranscriptEntry>& entries() const { return entries_; }
  int rounds() const { return rounds_; }
  int messages(Direction dir) const;
  uint64_t payload_bytes(Direction dir) const;
  uint64_t header_bytes(Direction dir) const;
  uint64_t payload_bytes_in_round(int round, Direction dir) const;
  uint64_t total_payload_bytes() const {
    return payload_bytes(Direction::kSend) + payload_bytes(Direction::kRecv);
  }

  // round,dir,payload_bytes,header_bytes,t_wall_ns
  // Without wall time the CSV depends only on the protocol, not the run.
  std::string ToCsv(bool wall_time = true) const;

 private:
  std::vector<TranscriptEntry> entries_;
  int rounds_ = 0;
};

// Injected per-message delay T_bc + bytes / Rt_bw.
struct DelayModel {
  double t_bc_s = 50e-6;
  double rt_bw_bytes_per_s = 1e9;
  bool enabled = false;

  void Validate() const;
  double DelaySeconds(uint64_t payload_bytes) const {
    return t_bc_s + double(payload_bytes) / rt_bw_bytes_per_s;
  }
};

// Framing: u64 payload length | u32 round tag | payload (little-endian).
inline constexpr uint64_t kFrameHeaderBytes = 12;

// One endpoint of a two-party link. Messages are delivered in order,
// exactly once. Every send and receive is recorded in the transcript; the
// round tag carried by each frame must equal the receiver's round counter.
class Channel {
 public:
  explicit Channel(int role);
  virtual ~Channel() = default;
  Channel(const Channel&) = delete;
  Channel& operator=(const Channel&) = delete;

  int role() const { return role_; }

  void Send(std::span<const uint8_t> payload);
  Bytes Recv();

  // Closes the current round; both parties must call it at the same points.
  int RoundBarrier();
  int round() const { return round_; }

  const Transcript& transcript() const { return transcript_; }
  Transcript& transcript() { return transcript_; }
  // Drops accounting state, e.g. after a handshake.
  void ResetAccounting();

  void SetDelayModel(const DelayModel& d);
  const DelayModel& delay_model() const { return delay_; }
  void SetRecvTimeout(std::chrono::milliseconds t) { timeout_ = t; }

  virtual void Close() = 0;

 protected:
  virtual void SendFrame(Bytes frame) = 0;
  // Throws DisconnectError when the peer is gone, TimeoutError on timeout.
  virtual Bytes RecvFrame(std::chrono::milliseconds timeout) = 0;

 private:
  int64_t NowNs() const;

  int role_;
  int round_ = 0;
  Transcript transcript_;
  DelayModel delay_;
  std::chrono::milliseconds timeout_{std::chrono::minutes(2)};
  std::chrono::steady_clock::time_point epoch_;
};

// Word-level helpers used by the protocols.
void SendWords(Channel& ch, std::span<const uint64_t> words, int width_bytes);
std::vector<uint64_t> RecvWords(Channel& ch, size_t count, int width_bytes);

// Connected in-process endpoints for roles 0 and 1.
std::pair<std::unique_ptr<Channel>, std::unique_ptr<Channel>> MakeInProcPair();

// TCP endpoints; addresses are "host:port".
std::unique_ptr<Channel> TcpListen(int role, const std::string& bind_addr,
                                   std::chrono::milliseconds accept_timeout);
std::unique_ptr<Channel> TcpConnect(int role, const std::string& peer_addr,
                                    std::chrono::milliseconds connect_timeout);

}  // namespace pinas
