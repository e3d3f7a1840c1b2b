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

#include <condition_variable>
#include <deque>
#include <mutex>

#include "pinas/transport/channel.h"

namespace pinas {
namespace {

// Two unbounded queues, one per direction, shared by both endpoints.
struct Link {
  std::mutex mu;
  std::condition_variable cv;
  std::deque<Bytes> queue[2];  // queue[r] holds frames addressed to role r
  bool closed[2] = {false, false};
};

class InProcChannel final : public Channel {
 public:
  InProcChannel(int role, std::shared_ptr<Link> link)
      : Channel(role), link_(std::move(link)) {}
  ~InProcChannel() override { Close(); }

  void Close() override {
    std::lock_guard<std::mutex> lock(link_->mu);
    link_->closed[role()] = true;
    link_->cv.notify_all();
  }

 protected:
  void SendFrame(Bytes frame) override {
    std::lock_guard<std::mutex> lock(link_->mu);
    if (link_->closed[role()] || link_->closed[1 - role()]) {
      throw DisconnectError("send on closed in-process channel");
    }
    link_->queue[1 - role()].push_back(std::move(frame));
    link_->cv.notify_all();
  }

  Bytes RecvFrame(std::chrono::milliseconds timeout) override {
    std::unique_lock<std::mutex> lock(link_->mu);
    auto& q = link_->queue[role()];
    const bool ready = link_->cv.wait_for(lock, timeout, [&] {
      return !q.empty() || link_->closed[0] || link_->closed[1];
    });
    if (!q.empty()) {
      Bytes f = std::move(q.front());
      q.pop_front();
      return f;
    }
    if (!ready) throw TimeoutError("in-process recv timed out");
    throw DisconnectError("recv on closed in-process channel");
  }

 private:
  std::shared_ptr<Link> link_;
};

}  // namespace

std::pair<std::unique_ptr<Channel>, std::unique_ptr<Channel>> MakeInProcPair() {
  auto link = std::make_shared<Link>();
  return {std::make_unique<InProcChannel>(0, link),
          std::make_unique<InProcChannel>(1, link)};
}

}  // namespace pinas
