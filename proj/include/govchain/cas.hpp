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

#ifndef GOVCHAIN_CAS_HPP
#define GOVCHAIN_CAS_HPP

#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <optional>
#include <random>
#include <string>
#include <system_error>

#include <sys/stat.h>

#include "govchain/digest.hpp"
#include "govchain/errors.hpp"

namespace govchain {

/// One stored object. `stored_at` is informational only and never enters
/// any hash.
struct CasEntry {
  Digest digest;
  Bytes content;
  std::int64_t stored_at = 0;  // seconds since epoch
};

/// Content-addressable storage backed by one file per object under a
/// two-level hex fan-out (`objects/ab/abcdef...`). Retrieval re-hashes the
/// bytes, so a corrupted entry surfaces as an integrity error and is never
/// returned. Writes go to a temporary file and are renamed into place;
/// concurrent readers are safe against a writer.
class CasStore {
public:
  static constexpr std::uint64_t kDefaultMaxBytes = 16ull * 1024 * 1024;

  explicit CasStore(std::filesystem::path root,
                    std::uint64_t max_bytes = kDefaultMaxBytes)
      : root_(std::move(root)), max_bytes_(max_bytes) {
    std::error_code ec;
    std::filesystem::create_directories(root_ / "objects", ec);
    if (ec)
      throw StorageError("cannot create store root " + root_.string() + ": " +
                         ec.message());
  }

  const std::filesystem::path& root() const { return root_; }

  /// Stores content under its fingerprint. Idempotent: re-putting
  /// identical content returns the same digest without writing again.
  Digest put(std::span<const std::uint8_t> content) {
    if (content.size() > max_bytes_)
      throw SizeError("content of " + std::to_string(content.size()) +
                      " bytes exceeds store limit of " + std::to_string(max_bytes_));
    Digest digest = fingerprint(content);
    std::filesystem::path dest = object_path(digest);
    if (std::filesystem::exists(dest)) return digest;

    std::error_code ec;
    std::filesystem::create_directories(dest.parent_path(), ec);
    if (ec) throw StorageError("cannot create object directory: " + ec.message());

    std::filesystem::path tmp = dest;
    tmp += ".tmp" + std::to_string(random_suffix());
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw StorageError("cannot open " + tmp.string() + " for writing");
      out.write(reinterpret_cast<const char*>(content.data()),
                static_cast<std::streamsize>(content.size()));
      if (!out) throw StorageError("short write to " + tmp.string());
    }
    std::filesystem::rename(tmp, dest, ec);
    if (ec) {
      std::filesystem::remove(tmp);
      throw StorageError("cannot publish object: " + ec.message());
    }
    return digest;
  }

  Digest put(const Bytes& content) {
    return put(std::span<const std::uint8_t>(content));
  }

  /// Returns the content stored under `digest`, or nullopt when no such
  /// entry exists. An on-disk entry whose bytes no longer hash to the
  /// digest raises IntegrityError instead of returning the bytes.
  std::optional<Bytes> get(const Digest& digest) const {
    std::filesystem::path path = object_path(digest);
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    Bytes content((std::istreambuf_iterator<char>(in)),
                  std::istreambuf_iterator<char>());
    if (fingerprint(content) != digest)
      throw IntegrityError("stored entry " + digest.hex() +
                           " failed fingerprint verification");
    return content;
  }

  std::optional<CasEntry> entry(const Digest& digest) const {
    auto content = get(digest);
    if (!content) return std::nullopt;
    CasEntry e;
    e.digest = digest;
    e.content = std::move(*content);
    struct ::stat st {};
    if (::stat(object_path(digest).c_str(), &st) == 0) e.stored_at = st.st_mtime;
    return e;
  }

  bool contains(const Digest& digest) const {
    return std::filesystem::exists(object_path(digest));
  }

  /// Number of stored objects (test and tooling aid).
  std::size_t object_count() const {
    std::size_t n = 0;
    std::error_code ec;
    for (auto it = std::filesystem::recursive_directory_iterator(root_ / "objects", ec);
         it != std::filesystem::recursive_directory_iterator(); ++it)
      if (it->is_regular_file()) ++n;
    return n;
  }

  std::filesystem::path object_path(const Digest& digest) const {
    std::string hex = digest.hex();
    return root_ / "objects" / hex.substr(0, 2) / hex;
  }

  /// A Resolver view of this store, suitable for verify_annotations and
  /// off_chain_assess.
  auto resolver() const {
    return [this](const Digest& d) { return get(d); };
  }

private:
  static std::uint64_t random_suffix() {
    static thread_local std::mt19937_64 rng(std::random_device{}());
    return rng();
  }

  std::filesystem::path root_;
  std::uint64_t max_bytes_;
};

}  // namespace govchain

#endif  // GOVCHAIN_CAS_HPP
