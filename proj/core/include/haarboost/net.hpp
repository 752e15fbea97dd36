#pragma once

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "haarboost/error.hpp"

namespace haarboost::net {

using Clock = std::chrono::steady_clock;
using Deadline = Clock::time_point;

inline Deadline deadline_in(std::chrono::milliseconds ms) { return Clock::now() + ms; }

/// "host:port". Port 0 asks the OS for an ephemeral port when binding.
struct Endpoint {
  std::string host;
  std::uint16_t port = 0;

  static Endpoint parse(std::string_view text);
  std::string str() const;
};

class TimeoutError : public ClusterError {
 public:
  using ClusterError::ClusterError;
};

class ConnectionClosed : public ClusterError {
 public:
  using ClusterError::ClusterError;
};

/// Owning file descriptor.
class Socket {
 public:
  Socket() = default;
  explicit Socket(int fd) : fd_(fd) {}
  Socket(Socket&& o) noexcept : fd_(o.release()) {}
  Socket& operator=(Socket&& o) noexcept;
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;
  ~Socket();

  int fd() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  int release() {
    const int f = fd_;
    fd_ = -1;
    return f;
  }
  void close();

 private:
  int fd_ = -1;
};

class Listener {
 public:
  static Listener bind(const Endpoint& ep);

  std::uint16_t port() const { return port_; }
  Endpoint endpoint() const { return {host_, port_}; }
  int fd() const { return sock_.fd(); }
  void close() { sock_.close(); }

  /// Throws TimeoutError once the deadline passes.
  Socket accept(Deadline deadline);

 private:
  Socket sock_;
  std::string host_;
  std::uint16_t port_ = 0;
};

/// Retries until the deadline, so children may start before their parent listens.
Socket connect_to(const Endpoint& ep, Deadline deadline);

/// Newline-framed text over a stream socket.
class LineChannel {
 public:
  LineChannel() = default;
  explicit LineChannel(Socket s) : sock_(std::move(s)) {}

  /// Appends '\n'. Throws ConnectionClosed if the peer is gone.
  void send(std::string_view line);
  /// Next complete line. Throws TimeoutError or ConnectionClosed.
  std::string recv(Deadline deadline);

  bool has_line() const;
  std::optional<std::string> pop_line();
  /// One read(2). Returns false on EOF.
  bool fill();

  int fd() const { return sock_.fd(); }
  void close() { sock_.close(); }

 private:
  Socket sock_;
  std::string buf_;
};

/// Waits until every channel has produced one line, delivering each via on_line(index, line)
/// as it arrives. EOF on channel i throws ConnectionClosed naming names[i]; the deadline
/// throws TimeoutError listing the channels still pending.
void gather(std::span<LineChannel* const> channels, std::span<const std::string> names, Deadline deadline,
            const std::function<void(std::size_t, std::string)>& on_line);

}  // namespace haarboost::net
