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

#include "pinas/transport/channel.h"

#include <sstream>
#include <thread>

namespace pinas {

int Transcript::messages(Direction dir) const {
  int n = 0;
  for (const auto& e : entries_) n += e.dir == dir;
  return n;
}

uint64_t Transcript::payload_bytes(Direction dir) const {
  uint64_t n = 0;
  for (const auto& e : entries_) {
    if (e.dir == dir) n += e.payload_bytes;
  }
  return n;
}

uint64_t Transcript::header_bytes(Direction dir) const {
  uint64_t n = 0;
  for (const auto& e : entries_) {
    if (e.dir == dir) n += e.header_bytes;
  }
  return n;
}

uint64_t Transcript::payload_bytes_in_round(int round, Direction dir) const {
  uint64_t n = 0;
  for (const auto& e : entries_) {
    if (e.dir == dir && e.round == round) n += e.payload_bytes;
  }
  return n;
}

std::string Transcript::ToCsv(bool wall_time) const {
  std::ostringstream os;
  os << "round,dir,payload_bytes,header_bytes" << (wall_time ? ",t_wall_ns" : "") << '\n';
  for (const auto& e : entries_) {
    os << e.round << ',' << (e.dir == Direction::kSend ? "send" : "recv")
       << ',' << e.payload_bytes << ',' << e.header_bytes;
    if (wall_time) os << ',' << e.t_wall_ns;
    os << '\n';
  }
  return os.str();
}

void DelayModel::Validate() const {
  if (!(t_bc_s >= 0)) throw ConfigError("T_bc must be >= 0");
  if (!(rt_bw_bytes_per_s > 0)) throw ConfigError("Rt_bw must be > 0");
}

Channel::Channel(int role) : role_(role), epoch_(std::chrono::steady_clock::now()) {
  if (role != 0 && role != 1) throw ConfigError("role must be 0 or 1");
}

int64_t Channel::NowNs() const {
  return std::chrono::duration_cast<std::chrono::nanoseconds>(
             std::chrono::steady_clock::now() - epoch_)
      .count();
}

void Channel::SetDelayModel(const DelayModel& d) {
  d.Validate();
  delay_ = d;
}

void Channel::Send(std::span<const uint8_t> payload) {
  ByteWriter w;
  w.PutU64(payload.size());
  w.PutU32(uint32_t(round_));
  w.PutRaw(payload);
  if (delay_.enabled) {
    std::this_thread::sleep_for(
        std::chrono::duration<double>(delay_.DelaySeconds(payload.size())));
  }
  SendFrame(w.Take());
  transcript_.Append({round_, Direction::kSend, payload.size(),
                      kFrameHeaderBytes, NowNs()});
}

Bytes Channel::Recv() {
  Bytes frame = RecvFrame(timeout_);
  ByteReader r(frame);
  const uint64_t len = r.GetU64();
  const uint32_t tag = r.GetU32();
  if (len != frame.size() - kFrameHeaderBytes) {
    throw ChannelError("frame length mismatch");
  }
  if (tag != uint32_t(round_)) {
    throw DesyncError("round desync: peer at round " + std::to_string(tag) +
                      ", local at round " + std::to_string(round_));
  }
  transcript_.Append(
      {round_, Direction::kRecv, len, kFrameHeaderBytes, NowNs()});
  return Bytes(frame.begin() + kFrameHeaderBytes, frame.end());
}

int Channel::RoundBarrier() {
  ++round_;
  transcript_.MarkRound();
  return round_;
}

void Channel::ResetAccounting() {
  round_ = 0;
  transcript_.Clear();
}

void SendWords(Channel& ch, std::span<const uint64_t> words, int width_bytes) {
  ByteWriter w;
  w.PutWords(words, width_bytes);
  ch.Send(w.bytes());
}

std::vector<uint64_t> RecvWords(Channel& ch, size_t count, int width_bytes) {
  Bytes b = ch.Recv();
  if (b.size() != count * size_t(width_bytes)) {
    throw ProtocolError("expected " + std::to_string(count * width_bytes) +
                        " payload bytes, got " + std::to_string(b.size()));
  }
  ByteReader r(b);
  return r.GetWords(count, width_bytes);
}

}  // namespace pinas
