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

#ifndef GOVCHAIN_DIGEST_HPP
#define GOVCHAIN_DIGEST_HPP

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "govchain/errors.hpp"
#include "govchain/sha256.hpp"

namespace govchain {

using Bytes = std::vector<std::uint8_t>;

inline Bytes to_bytes(std::string_view text) {
  return Bytes(text.begin(), text.end());
}

inline std::string to_string(std::span<const std::uint8_t> bytes) {
  return std::string(bytes.begin(), bytes.end());
}

inline int hex_nibble(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

/// Lowercase hex, no prefix.
inline std::string hex_encode(std::span<const std::uint8_t> bytes) {
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(bytes.size() * 2);
  for (std::uint8_t b : bytes) {
    out.push_back(kHex[b >> 4]);
    out.push_back(kHex[b & 0x0f]);
  }
  return out;
}

inline Bytes hex_decode(std::string_view hex) {
  if (hex.size() % 2 != 0)
    throw ValidationError("hex string has odd length");
  Bytes out;
  out.reserve(hex.size() / 2);
  for (std::size_t i = 0; i < hex.size(); i += 2) {
    int hi = hex_nibble(hex[i]);
    int lo = hex_nibble(hex[i + 1]);
    if (hi < 0 || lo < 0)
      throw ValidationError("invalid hex character in \"" + std::string(hex) + "\"");
    out.push_back(static_cast<std::uint8_t>((hi << 4) | lo));
  }
  return out;
}

/// 32-byte SHA-256 fingerprint. Rendered as 64 lowercase hex characters
/// without prefix; parsing also accepts a `0x` prefix and uppercase.
struct Digest {
  std::array<std::uint8_t, 32> bytes{};

  static Digest from_hex(std::string_view hex) {
    if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
    if (hex.size() != 64)
      throw ValidationError("digest must be 64 hex characters, got " +
                            std::to_string(hex.size()));
    Digest d;
    for (std::size_t i = 0; i < 32; ++i) {
      int hi = hex_nibble(hex[2 * i]);
      int lo = hex_nibble(hex[2 * i + 1]);
      if (hi < 0 || lo < 0)
        throw ValidationError("digest contains a non-hex character");
      d.bytes[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return d;
  }

  std::string hex() const { return hex_encode(bytes); }

  bool is_zero() const {
    for (auto b : bytes)
      if (b != 0) return false;
    return true;
  }

  auto operator<=>(const Digest&) const = default;
};

/// SHA-256 of arbitrary content. Pure; empty input allowed.
inline Digest fingerprint(std::span<const std::uint8_t> content) {
  Sha256 hasher;
  hasher.update(content.data(), content.size());
  Digest d;
  d.bytes = hasher.finish();
  return d;
}

inline Digest fingerprint(const Bytes& content) {
  return fingerprint(std::span<const std::uint8_t>(content));
}

inline Digest fingerprint(std::string_view content) {
  return fingerprint(std::span<const std::uint8_t>(
      reinterpret_cast<const std::uint8_t*>(content.data()), content.size()));
}

/// Fetches a document by digest. Returns nullopt when the store has no
/// entry; may throw IntegrityError or TransportError.
using Resolver = std::function<std::optional<Bytes>(const Digest&)>;

}  // namespace govchain

#endif  // GOVCHAIN_DIGEST_HPP
