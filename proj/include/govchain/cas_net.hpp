// Copyright 2026 The govchain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GOVCHAIN_CAS_NET_HPP
#define GOVCHAIN_CAS_NET_HPP

#include <atomic>
#include <cerrno>
#include <cstdint>
#include <cstring>
#include <optional>
#include <string>
#include <string_view>
#include <thread>

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include "govchain/cas.hpp"
#include "govchain/digest.hpp"
#include "govchain/errors.hpp"

namespace govchain {

inline constexpr std::uint16_t kDefaultCasPort = 7747;

struct Endpoint {
  std::string host;
  std::uint16_t port = kDefaultCasPort;
};

inline Endpoint parse_endpoint(std::string_view text,
                               std::uint16_t default_port = kDefaultCasPort) {
  Endpoint ep;
  ep.port = default_port;
  auto colon = text.rfind(':');
  if (colon == std::string_view::npos) {
    ep.host = std::string(text);
  } else {
    ep.host = std::string(text.substr(0, colon));
    std::string port_text(text.substr(colon + 1));
    try {
      int p = std::stoi(port_text);
      if (p <= 0 || p > 65535) throw std::out_of_range("port");
      ep.port = static_cast<std::uint16_t>(p);
    } catch (const std::exception&) {
      throw ValidationError("invalid endpoint port \"" + port_text + "\"");
    }
  }
  if (ep.host.empty()) throw ValidationError("endpoint host is empty");
  return ep;
}

namespace net_detail {

class ScopedFd {
public:
  ScopedFd() = default;
  explicit ScopedFd(int fd) : fd_(fd) {}
  ScopedFd(const ScopedFd&) = delete;
  ScopedFd& operator=(const ScopedFd&) = delete;
  ScopedFd(ScopedFd&& other) noexcept : fd_(other.release()) {}
  ScopedFd& operator=(ScopedFd&& other) noexcept {
    reset(other.release());
    return *this;
  }
  ~ScopedFd() { reset(); }

  int get() const { return fd_; }
  bool valid() const { return fd_ >= 0; }
  int release() {
    int fd = fd_;
    fd_ = -1;
    return fd;
  }
  void reset(int fd = -1) {
    if (fd_ >= 0) ::close(fd_);
    fd_ = fd;
  }

private:
  int fd_ = -1;
};

inline void set_timeout(int fd, int seconds) {
  timeval tv{};
  tv.tv_sec = seconds;
  ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
  ::setsockopt(fd, SOL_SOCKET, SO_SNDTIMEO, &tv, sizeof(tv));
}

inline bool send_all(int fd, const void* data, std::size_t len) {
  const char* p = static_cast<const char*>(data);
  while (len > 0) {
    ssize_t n = ::send(fd, p, len, MSG_NOSIGNAL);
    if (n <= 0) return false;
    p += n;
    len -= static_cast<std::size_t>(n);
  }
  return true;
}

inline bool send_all(int fd, std::string_view text) {
  return send_all(fd, text.data(), text.size());
}

/// Reads up to and including '\n'; returns the line without the
/// terminator (and without a trailing '\r'). Nullopt on EOF/error or when
/// the line exceeds the bound.
inline std::optional<std::string> read_line(int fd, std::size_t max_len = 256) {
  std::string line;
  char c;
  while (line.size() < max_len) {
    ssize_t n = ::recv(fd, &c, 1, 0);
    if (n <= 0) return std::nullopt;
    if (c == '\n') {
      if (!line.empty() && line.back() == '\r') line.pop_back();
      return line;
    }
    line.push_back(c);
  }
  return std::nullopt;
}

inline bool read_exact(int fd, std::uint8_t* out, std::size_t len) {
  while (len > 0) {
    ssize_t n = ::recv(fd, out, len, 0);
    if (n <= 0) return false;
    out += n;
    len -= static_cast<std::size_t>(n);
  }
  return true;
}

}  // namespace net_detail

/// Serves the store over the fetch wire protocol. One request per
/// connection:
///
///   request:  `GET <64-hex-digest>\n`
///   response: `OK <decimal-length>\n` + exactly length raw bytes,
///             or `MISSING\n`, or `ERR <message>\n`
///
/// Connections are handled sequentially; every request is answered in
/// isolation from the store's current state.
class CasServer {
public:
  explicit CasServer(CasStore& store, std::string host = "127.0.0.1",
                     std::uint16_t port = kDefaultCasPort)
      : store_(store), host_(std::move(host)), port_(port) {}

  ~CasServer() { stop(); }

  CasServer(const CasServer&) = delete;
  CasServer& operator=(const CasServer&) = delete;

  /// Binds and starts the accept loop on a background thread. With port 0
  /// the kernel picks an ephemeral port, readable via port() afterwards.
  void start() {
    if (running_) return;
    net_detail::ScopedFd fd(::socket(AF_INET, SOCK_STREAM, 0));
    if (!fd.valid()) throw TransportError("socket() failed");
    int one = 1;
    ::setsockopt(fd.get(), SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

    sockaddr_in addr{};
    addr.sin_family = AF_INET;
    addr.sin_port = htons(port_);
    if (host_ == "0.0.0.0" || host_.empty()) {
      addr.sin_addr.s_addr = INADDR_ANY;
    } else if (::inet_pton(AF_INET, host_.c_str(), &addr.sin_addr) != 1) {
      throw TransportError("cannot parse bind address \"" + host_ + "\"");
    }
    if (::bind(fd.get(), reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0)
      throw TransportError("cannot bind " + host_ + ":" + std::to_string(port_) +
                           ": " + std::strerror(errno));
    if (::listen(fd.get(), 16) != 0) throw TransportError("listen() failed");

    socklen_t len = sizeof(addr);
    ::getsockname(fd.get(), reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = ntohs(addr.sin_port);

    listen_fd_ = std::move(fd);
    running_ = true;
    thread_ = std::thread([this] { accept_loop(); });
  }

  void stop() {
    if (!running_) return;
    running_ = false;
    if (thread_.joinable()) thread_.join();
    listen_fd_.reset();
  }

  std::uint16_t port() const { return port_; }

private:
  void accept_loop() {
    while (running_) {
      pollfd pfd{listen_fd_.get(), POLLIN, 0};
      int ready = ::poll(&pfd, 1, 200);
      if (ready <= 0) continue;
      net_detail::ScopedFd conn(::accept(listen_fd_.get(), nullptr, nullptr));
      if (!conn.valid()) continue;
      net_detail::set_timeout(conn.get(), 5);
      handle(conn.get());
    }
  }

  void handle(int fd) {
    auto line = net_detail::read_line(fd);
    if (!line) return;
    if (!line->starts_with("GET ")) {
      net_detail::send_all(fd, "ERR malformed request\n");
      return;
    }
    Digest digest;
    try {
      digest = Digest::from_hex(std::string_view(*line).substr(4));
    } catch (const Error&) {
      net_detail::send_all(fd, "ERR bad digest\n");
      return;
    }
    std::optional<Bytes> content;
    try {
      content = store_.get(digest);
    } catch (const Error& e) {
      std::string msg(e.what());
      for (char& c : msg)
        if (c == '\n' || c == '\r') c = ' ';
      net_detail::send_all(fd, "ERR " + msg + "\n");
      return;
    }
    if (!content) {
      net_detail::send_all(fd, "MISSING\n");
      return;
    }
    net_detail::send_all(fd, "OK " + std::to_string(content->size()) + "\n");
    net_detail::send_all(fd, content->data(), content->size());
  }

  CasStore& store_;
  std::string host_;
  std::uint16_t port_;
  net_detail::ScopedFd listen_fd_;
  std::atomic<bool> running_{false};
  std::thread thread_;
};

/// Fetches one object from a remote store and re-verifies its fingerprint
/// before accepting it, so a lying or broken server cannot hand back
/// forged content. Returns nullopt for MISSING; throws TransportError on
/// connection or protocol failures and IntegrityError on digest mismatch.
inline std::optional<Bytes> cas_fetch(const Endpoint& endpoint, const Digest& digest) {
  constexpr std::uint64_t kMaxReplyBytes = 64ull * 1024 * 1024;

  addrinfo hints{};
  hints.ai_family = AF_INET;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  std::string port_text = std::to_string(endpoint.port);
  if (::getaddrinfo(endpoint.host.c_str(), port_text.c_str(), &hints, &res) != 0 ||
      res == nullptr)
    throw TransportError("cannot resolve host \"" + endpoint.host + "\"");

  net_detail::ScopedFd fd;
  for (addrinfo* ai = res; ai != nullptr; ai = ai->ai_next) {
    net_detail::ScopedFd candidate(::socket(ai->ai_family, ai->ai_socktype, ai->ai_protocol));
    if (!candidate.valid()) continue;
    if (::connect(candidate.get(), ai->ai_addr, ai->ai_addrlen) == 0) {
      fd = std::move(candidate);
      break;
    }
  }
  ::freeaddrinfo(res);
  if (!fd.valid())
    throw TransportError("cannot connect to " + endpoint.host + ":" + port_text);
  net_detail::set_timeout(fd.get(), 10);

  if (!net_detail::send_all(fd.get(), "GET " + digest.hex() + "\n"))
    throw TransportError("failed to send request");

  auto status = net_detail::read_line(fd.get());
  if (!status) throw TransportError("connection closed before reply");
  if (*status == "MISSING") return std::nullopt;
  if (status->starts_with("ERR "))
    throw TransportError("server error: " + status->substr(4));
  if (!status->starts_with("OK "))
    throw TransportError("malformed reply \"" + *status + "\"");

  std::uint64_t length = 0;
  try {
    length = std::stoull(status->substr(3));
  } catch (const std::exception&) {
    throw TransportError("malformed reply length");
  }
  if (length > kMaxReplyBytes) throw TransportError("reply too large");

  Bytes content(length);
  if (length > 0 && !net_detail::read_exact(fd.get(), content.data(), length))
    throw TransportError("connection closed mid-content");

  if (fingerprint(content) != digest)
    throw IntegrityError("fetched content for " + digest.hex() +
                         " failed fingerprint verification");
  return content;
}

inline std::optional<Bytes> cas_fetch(std::string_view endpoint_text, const Digest& digest) {
  return cas_fetch(parse_endpoint(endpoint_text), digest);
}

/// Resolver view of a remote store.
inline Resolver remote_resolver(Endpoint endpoint) {
  return [endpoint](const Digest& d) { return cas_fetch(endpoint, d); };
}

}  // namespace govchain

#endif  // GOVCHAIN_CAS_NET_HPP
