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

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <condition_variable>
#include <cstring>
#include <deque>
#include <mutex>
#include <thread>

#include "pinas/transport/channel.h"

namespace pinas {
namespace {

std::pair<std::string, std::string> SplitHostPort(const std::string& addr) {
  const auto pos = addr.rfind(':');
  if (pos == std::string::npos || pos + 1 == addr.size()) {
    throw ConfigError("address must be host:port, got '" + addr + "'");
  }
  return {addr.substr(0, pos), addr.substr(pos + 1)};
}

addrinfo* Resolve(const std::string& addr, bool passive) {
  auto [host, port] = SplitHostPort(addr);
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  if (passive) hints.ai_flags = AI_PASSIVE;
  addrinfo* res = nullptr;
  const int rc = getaddrinfo(host.empty() ? nullptr : host.c_str(),
                             port.c_str(), &hints, &res);
  if (rc != 0) throw ConfigError("cannot resolve " + addr + ": " + gai_strerror(rc));
  return res;
}

// Waits for readability; false on timeout.
bool WaitReadable(int fd, std::chrono::milliseconds timeout) {
  pollfd p{fd, POLLIN, 0};
  int rc;
  do {
    rc = ::poll(&p, 1, int(timeout.count()));
  } while (rc < 0 && errno == EINTR);
  if (rc < 0) throw ChannelError(std::string("poll: ") + std::strerror(errno));
  return rc > 0;
}

class TcpChannel final : public Channel {
 public:
  TcpChannel(int role, int fd) : Channel(role), fd_(fd) {
    int one = 1;
    ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    writer_ = std::thread([this] { WriterLoop(); });
  }

  ~TcpChannel() override {
    Close();
    if (writer_.joinable()) writer_.join();
    if (fd_ >= 0) ::close(fd_);
  }

  void Close() override {
    std::unique_lock<std::mutex> lock(mu_);
    if (closing_) return;
    closing_ = true;
    cv_.notify_all();
    // Let queued frames drain before the half-close.
    drained_.wait(lock, [&] { return outbox_.empty() || write_failed_; });
    ::shutdown(fd_, SHUT_WR);
  }

 protected:
  // Sends are handed to a writer thread so both parties may send large
  // messages at once without deadlocking on socket buffers.
  void SendFrame(Bytes frame) override {
    std::lock_guard<std::mutex> lock(mu_);
    if (closing_ || write_failed_) throw DisconnectError("send on closed tcp channel");
    outbox_.push_back(std::move(frame));
    cv_.notify_all();
  }

  Bytes RecvFrame(std::chrono::milliseconds timeout) override {
    uint8_t header[kFrameHeaderBytes];
    ReadExact(header, sizeof(header), timeout);
    ByteReader r(std::span<const uint8_t>(header, sizeof(header)));
    const uint64_t len = r.GetU64();
    if (len > (uint64_t{1} << 34)) throw ChannelError("oversized frame");
    Bytes frame(kFrameHeaderBytes + len);
    std::memcpy(frame.data(), header, sizeof(header));
    ReadExact(frame.data() + kFrameHeaderBytes, len, timeout);
    return frame;
  }

 private:
  void ReadExact(uint8_t* dst, size_t n, std::chrono::milliseconds timeout) {
    size_t got = 0;
    while (got < n) {
      if (!WaitReadable(fd_, timeout)) throw TimeoutError("tcp recv timed out");
      const ssize_t k = ::recv(fd_, dst + got, n - got, 0);
      if (k == 0) throw DisconnectError("peer closed tcp channel");
      if (k < 0) {
        if (errno == EINTR) continue;
        throw DisconnectError(std::string("tcp recv: ") + std::strerror(errno));
      }
      got += size_t(k);
    }
  }

  void WriterLoop() {
    for (;;) {
      Bytes frame;
      {
        std::unique_lock<std::mutex> lock(mu_);
        cv_.wait(lock, [&] { return !outbox_.empty() || closing_; });
        if (outbox_.empty()) {
          drained_.notify_all();
          return;
        }
        frame = std::move(outbox_.front());
      }
      size_t off = 0;
      bool ok = true;
      while (off < frame.size()) {
        const ssize_t k =
            ::send(fd_, frame.data() + off, frame.size() - off, MSG_NOSIGNAL);
        if (k < 0) {
          if (errno == EINTR) continue;
          ok = false;
          break;
        }
        off += size_t(k);
      }
      std::lock_guard<std::mutex> lock(mu_);
      outbox_.pop_front();
      if (!ok) {
        write_failed_ = true;
        outbox_.clear();
      }
      if (outbox_.empty()) drained_.notify_all();
      if (!ok) return;
    }
  }

  int fd_;
  std::mutex mu_;
  std::condition_variable cv_;
  std::condition_variable drained_;
  std::deque<Bytes> outbox_;
  bool closing_ = false;
  bool write_failed_ = false;
  std::thread writer_;
};

}  // namespace

std::unique_ptr<Channel> TcpListen(int role, const std::string& bind_addr,
                                   std::chrono::milliseconds accept_timeout) {
  addrinfo* ai = Resolve(bind_addr, /*passive=*/true);
  const int lfd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
  if (lfd < 0) {
    freeaddrinfo(ai);
    throw ChannelError("socket() failed");
  }
  int one = 1;
  ::setsockopt(lfd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));
  if (::bind(lfd, ai->ai_addr, ai->ai_addrlen) != 0 || ::listen(lfd, 1) != 0) {
    const std::string err = std::strerror(errno);
    freeaddrinfo(ai);
    ::close(lfd);
    throw ChannelError("cannot listen on " + bind_addr + ": " + err);
  }
  freeaddrinfo(ai);
  if (!WaitReadable(lfd, accept_timeout)) {
    ::close(lfd);
    throw TimeoutError("no peer connected to " + bind_addr);
  }
  const int fd = ::accept(lfd, nullptr, nullptr);
  ::close(lfd);
  if (fd < 0) throw ChannelError("accept failed");
  return std::make_unique<TcpChannel>(role, fd);
}

std::unique_ptr<Channel> TcpConnect(int role, const std::string& peer_addr,
                                    std::chrono::milliseconds connect_timeout) {
  const auto deadline = std::chrono::steady_clock::now() + connect_timeout;
  for (;;) {
    addrinfo* ai = Resolve(peer_addr, /*passive=*/false);
    const int fd = ::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol);
    if (fd >= 0 && ::connect(fd, ai->ai_addr, ai->ai_addrlen) == 0) {
      freeaddrinfo(ai);
      return std::make_unique<TcpChannel>(role, fd);
    }
    freeaddrinfo(ai);
    if (fd >= 0) ::close(fd);
    if (std::chrono::steady_clock::now() >= deadline) {
      throw DisconnectError("peer unreachable at " + peer_addr);
    }
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
}

}  // namespace pinas
