#include "vddp/i2dp/transport.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <cstring>

namespace vddp::i2dp {

namespace {

[[noreturn]] void sys_fail(const char* what) { throw TransportError(std::string(what) + ": " + std::strerror(errno)); }

}  // namespace

const char* party_role_name(PartyRole r) {
  switch (r) {
    case PartyRole::client: return "client";
    case PartyRole::server: return "server";
    case PartyRole::verifier: return "verifier";
  }
  return "?";
}

Bytes Message::encode() const {
  Writer w;
  w.u64(session);
  w.u8(phase);
  w.u8(std::uint8_t(role));
  w.u32(index);
  w.blob(payload);
  return w.take();
}

Message Message::decode(std::span<const std::uint8_t> frame) {
  Reader r(frame);
  Message m;
  m.session = r.u64();
  m.phase = r.u8();
  auto role = r.u8();
  if (role > 2) throw DecodeError("message: bad role");
  m.role = PartyRole(role);
  m.index = r.u32();
  m.payload = r.blob();
  r.expect_done();
  return m;
}

void MemoryChannel::send(const Message& m) {
  auto f = m.encode();
  count(f.size());
  queue_.push_back(std::move(f));
}

Message MemoryChannel::recv() {
  if (queue_.empty()) throw TransportError("recv on empty channel");
  auto f = std::move(queue_.front());
  queue_.pop_front();
  return Message::decode(f);
}

TcpChannel::TcpChannel() {
  int ls = ::socket(AF_INET, SOCK_STREAM, 0);
  if (ls < 0) sys_fail("socket");
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = 0;
  socklen_t len = sizeof addr;
  if (::bind(ls, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0 || ::listen(ls, 1) < 0 ||
      ::getsockname(ls, reinterpret_cast<sockaddr*>(&addr), &len) < 0) {
    ::close(ls);
    sys_fail("listen");
  }
  port_ = ntohs(addr.sin_port);
  tx_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (tx_ < 0 || ::connect(tx_, reinterpret_cast<sockaddr*>(&addr), sizeof addr) < 0) {
    ::close(ls);
    sys_fail("connect");
  }
  rx_ = ::accept(ls, nullptr, nullptr);
  ::close(ls);
  if (rx_ < 0) sys_fail("accept");
  int one = 1;
  ::setsockopt(tx_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
}

TcpChannel::~TcpChannel() {
  if (tx_ >= 0) ::close(tx_);
  if (rx_ >= 0) ::close(rx_);
}

void TcpChannel::send(const Message& m) {
  auto f = m.encode();
  auto n = std::uint32_t(f.size());
  for (int i = 0; i < 4; ++i) out_.push_back(std::uint8_t(n >> (8 * i)));
  out_.insert(out_.end(), f.begin(), f.end());
  count(f.size());
}

// Both ends live in this process, so pending output is flushed while
// reading; a large frame never blocks on a full socket buffer.
Message TcpChannel::recv() {
  for (;;) {
    if (in_.size() >= 4) {
      std::uint32_t n = 0;
      for (int i = 0; i < 4; ++i) n |= std::uint32_t(in_[i]) << (8 * i);
      if (in_.size() >= 4 + std::size_t(n)) {
        auto m = Message::decode(std::span(in_).subspan(4, n));
        in_.erase(in_.begin(), in_.begin() + 4 + long(n));
        return m;
      }
    }
    pollfd fds[2] = {{rx_, POLLIN, 0}, {tx_, short(out_.empty() ? 0 : POLLOUT), 0}};
    int ready = ::poll(fds, 2, out_.empty() ? 2000 : 10000);
    if (ready < 0) sys_fail("poll");
    if (ready == 0) throw TransportError("recv timed out");
    if (fds[1].revents & POLLOUT) {
      auto k = ::send(tx_, out_.data(), out_.size(), MSG_NOSIGNAL | MSG_DONTWAIT);
      if (k < 0 && errno != EAGAIN && errno != EINTR) sys_fail("send");
      if (k > 0) out_.erase(out_.begin(), out_.begin() + k);
    }
    if (fds[0].revents & POLLIN) {
      std::uint8_t buf[65536];
      auto k = ::recv(rx_, buf, sizeof buf, MSG_DONTWAIT);
      if (k == 0) throw TransportError("connection closed");
      if (k < 0 && errno != EAGAIN && errno != EINTR) sys_fail("recv");
      if (k > 0) in_.insert(in_.end(), buf, buf + k);
    } else if (fds[0].revents & (POLLERR | POLLHUP)) {
      throw TransportError("connection error");
    }
  }
}

std::unique_ptr<Channel> make_channel(const std::string& kind) {
  if (kind == "memory") return std::make_unique<MemoryChannel>();
  if (kind == "tcp") return std::make_unique<TcpChannel>();
  throw std::invalid_argument("unknown transport: " + kind);
}

}  // namespace vddp::i2dp
