#pragma once

#include <deque>
#include <memory>
#include <string>

#include "vddp/common/bytes.hpp"

namespace vddp::i2dp {

enum class PartyRole : std::uint8_t { client = 0, server = 1, verifier = 2 };
const char* party_role_name(PartyRole r);

struct Message {
  std::uint64_t session = 0;
  std::uint8_t phase = 0;
  PartyRole role = PartyRole::verifier;
  std::uint32_t index = 0;
  Bytes payload;

  // u64 session, u8 phase, u8 role, u32 index, blob payload.
  Bytes encode() const;
  static Message decode(std::span<const std::uint8_t> frame);
  bool operator==(const Message&) const = default;
};

struct TransportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ordered duplex channel; send() then recv() at the other end returns the
// same message. Byte counters cover encoded frames.
class Channel {
 public:
  virtual ~Channel() = default;
  virtual void send(const Message& m) = 0;
  virtual Message recv() = 0;
  virtual const char* kind() const = 0;
  std::size_t bytes_sent() const { return bytes_; }
  std::size_t messages_sent() const { return count_; }

 protected:
  void count(std::size_t n) { bytes_ += n, ++count_; }

 private:
  std::size_t bytes_ = 0, count_ = 0;
};

class MemoryChannel final : public Channel {
 public:
  void send(const Message& m) override;
  Message recv() override;
  const char* kind() const override { return "memory"; }

 private:
  std::deque<Bytes> queue_;
};

// Connected pair of loopback TCP sockets; frames carry a u32 length prefix.
class TcpChannel final : public Channel {
 public:
  TcpChannel();
  ~TcpChannel() override;
  TcpChannel(const TcpChannel&) = delete;
  TcpChannel& operator=(const TcpChannel&) = delete;
  void send(const Message& m) override;
  Message recv() override;
  const char* kind() const override { return "tcp"; }
  int port() const { return port_; }

 private:
  int tx_ = -1, rx_ = -1, port_ = 0;
  Bytes out_, in_;
};

std::unique_ptr<Channel> make_channel(const std::string& kind);

}  // namespace vddp::i2dp
