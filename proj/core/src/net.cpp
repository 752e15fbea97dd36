#include "haarboost/net.hpp"

#include <arpa/inet.h>
#include <fcntl.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cerrno>
#include <charconv>
#include <cstring>
#include <thread>
#include <vector>

namespace haarboost::net {

namespace {

constexpr std::size_t kMaxLine = std::size_t{256} << 20;

int remaining_ms(Deadline deadline) {
  const auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now()).count();
  if (left <= 0) return 0;
  return left > 1'000'000'000 ? 1'000'000'000 : static_cast<int>(left);
}

std::string errno_text(const char* what) { return std::string(what) + ": " + std::strerror(errno); }

sockaddr_in resolve(const Endpoint& ep) {
  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  const std::string host = ep.host.empty() ? "0.0.0.0" : ep.host;
  if (const int rc = ::getaddrinfo(host.c_str(), nullptr, &hints, &res); rc != 0 || res == nullptr) {
    throw ClusterError("cannot resolve host \"" + host + "\": " + ::gai_strerror(rc));
  }
  sockaddr_in addr{};
  std::memcpy(&addr, res->ai_addr, sizeof addr);
  ::freeaddrinfo(res);
  addr.sin_port = htons(ep.port);
  return addr;
}

void set_nodelay(int fd) {
  int one = 1;
  ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
}

}  // namespace

Endpoint Endpoint::parse(std::string_view text) {
  const auto colon = text.rfind(':');
  if (colon == std::string_view::npos || colon + 1 >= text.size()) {
    throw std::invalid_argument("endpoint must look like host:port, got \"" + std::string(text) + "\"");
  }
  unsigned port = 0;
  const auto digits = text.substr(colon + 1);
  auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), port);
  if (ec != std::errc() || p != digits.data() + digits.size() || port > 65535) {
    throw std::invalid_argument("bad port in endpoint \"" + std::string(text) + "\"");
  }
  return Endpoint{std::string(text.substr(0, colon)), static_cast<std::uint16_t>(port)};
}

std::string Endpoint::str() const { return host + ":" + std::to_string(port); }

Socket& Socket::operator=(Socket&& o) noexcept {
  if (this != &o) {
    close();
    fd_ = o.release();
  }
  return *this;
}

Socket::~Socket() { close(); }

void Socket::close() {
  if (fd_ >= 0) ::close(fd_);
  fd_ = -1;
}

Listener Listener::bind(const Endpoint& ep) {
  Listener l;
  l.sock_ = Socket(::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0));
  if (!l.sock_.valid()) throw ClusterError(errno_text("socket"));
  int one = 1;
  ::setsockopt(l.sock_.fd(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
  sockaddr_in addr = resolve(ep);
  if (::bind(l.sock_.fd(), reinterpret_cast<sockaddr*>(&addr), sizeof addr) != 0) {
    throw ClusterError(errno_text(("bind " + ep.str()).c_str()));
  }
  if (::listen(l.sock_.fd(), 128) != 0) throw ClusterError(errno_text("listen"));
  socklen_t len = sizeof addr;
  ::getsockname(l.sock_.fd(), reinterpret_cast<sockaddr*>(&addr), &len);
  l.host_ = ep.host.empty() ? "127.0.0.1" : ep.host;
  l.port_ = ntohs(addr.sin_port);
  return l;
}

Socket Listener::accept(Deadline deadline) {
  for (;;) {
    pollfd pfd{sock_.fd(), POLLIN, 0};
    const int rc = ::poll(&pfd, 1, remaining_ms(deadline));
    if (rc < 0 && errno == EINTR) continue;
    if (rc < 0) throw ClusterError(errno_text("poll"));
    if (rc == 0) throw TimeoutError("timed out waiting for a connection on port " + std::to_string(port_));
    const int fd = ::accept4(sock_.fd(), nullptr, nullptr, SOCK_CLOEXEC);
    if (fd < 0) {
      if (errno == EINTR || errno == EAGAIN || errno == ECONNABORTED) continue;
      throw ClusterError(errno_text("accept"));
    }
    set_nodelay(fd);
    return Socket(fd);
  }
}

Socket connect_to(const Endpoint& ep, Deadline deadline) {
  const sockaddr_in addr = resolve(ep);
  std::string last = "no attempt";
  for (;;) {
    Socket s(::socket(AF_INET, SOCK_STREAM | SOCK_CLOEXEC, 0));
    if (!s.valid()) throw ClusterError(errno_text("socket"));
    if (::connect(s.fd(), reinterpret_cast<const sockaddr*>(&addr), sizeof addr) == 0) {
      set_nodelay(s.fd());
      return s;
    }
    last = std::strerror(errno);
    if (Clock::now() >= deadline) throw TimeoutError("cannot connect to " + ep.str() + ": " + last);
    std::this_thread::sleep_for(std::chrono::milliseconds(50));
  }
}

void LineChannel::send(std::string_view line) {
  std::string framed(line);
  framed += '\n';
  std::size_t off = 0;
  while (off < framed.size()) {
    const ssize_t n = ::send(sock_.fd(), framed.data() + off, framed.size() - off, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      throw ConnectionClosed(errno_text("send"));
    }
    off += static_cast<std::size_t>(n);
  }
}

bool LineChannel::has_line() const { return buf_.find('\n') != std::string::npos; }

std::optional<std::string> LineChannel::pop_line() {
  const auto nl = buf_.find('\n');
  if (nl == std::string::npos) return std::nullopt;
  std::string line = buf_.substr(0, nl);
  buf_.erase(0, nl + 1);
  return line;
}

bool LineChannel::fill() {
  char chunk[65536];
  for (;;) {
    const ssize_t n = ::read(sock_.fd(), chunk, sizeof chunk);
    if (n < 0 && errno == EINTR) continue;
    if (n < 0) {
      if (errno == ECONNRESET) return false;
      throw ClusterError(errno_text("read"));
    }
    if (n == 0) return false;
    buf_.append(chunk, static_cast<std::size_t>(n));
    if (buf_.size() > kMaxLine && !has_line()) throw ClusterError("incoming line exceeds size limit");
    return true;
  }
}

std::string LineChannel::recv(Deadline deadline) {
  for (;;) {
    if (auto line = pop_line()) return *line;
    pollfd pfd{sock_.fd(), POLLIN, 0};
    const int rc = ::poll(&pfd, 1, remaining_ms(deadline));
    if (rc < 0 && errno == EINTR) continue;
    if (rc < 0) throw ClusterError(errno_text("poll"));
    if (rc == 0) throw TimeoutError("timed out waiting for a message");
    if (!fill()) throw ConnectionClosed("connection closed by peer");
  }
}

void gather(std::span<LineChannel* const> channels, std::span<const std::string> names, Deadline deadline,
            const std::function<void(std::size_t, std::string)>& on_line) {
  std::vector<bool> done(channels.size(), false);
  std::size_t remaining = channels.size();
  std::vector<pollfd> fds;
  std::vector<std::size_t> idx;
  while (remaining > 0) {
    for (std::size_t i = 0; i < channels.size(); ++i) {
      if (done[i]) continue;
      if (auto line = channels[i]->pop_line()) {
        done[i] = true;
        --remaining;
        on_line(i, std::move(*line));
      }
    }
    if (remaining == 0) break;
    fds.clear();
    idx.clear();
    for (std::size_t i = 0; i < channels.size(); ++i) {
      if (!done[i]) {
        fds.push_back({channels[i]->fd(), POLLIN, 0});
        idx.push_back(i);
      }
    }
    const int rc = ::poll(fds.data(), fds.size(), remaining_ms(deadline));
    if (rc < 0 && errno == EINTR) continue;
    if (rc < 0) throw ClusterError(errno_text("poll"));
    if (rc == 0) {
      std::string pending;
      for (std::size_t i : idx) pending += (pending.empty() ? "" : ", ") + names[i];
      throw TimeoutError("timed out waiting for " + std::to_string(idx.size()) + " of " +
                         std::to_string(channels.size()) + " children (" + pending + ")");
    }
    for (std::size_t k = 0; k < fds.size(); ++k) {
      if (fds[k].revents == 0) continue;
      if (!channels[idx[k]]->fill()) throw ConnectionClosed(names[idx[k]] + " disconnected");
    }
  }
}

}  // namespace haarboost::net
