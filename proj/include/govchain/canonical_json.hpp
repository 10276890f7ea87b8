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

#ifndef GOVCHAIN_CANONICAL_JSON_HPP
#define GOVCHAIN_CANONICAL_JSON_HPP

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "govchain/digest.hpp"
#include "govchain/errors.hpp"

namespace govchain {

// nlohmann's default object type is std::map, so object keys come out
// lexicographically sorted, which the canonical profile requires.
using Json = nlohmann::json;

namespace detail {
inline void reject_floats(const Json& j) {
  if (j.is_number_float())
    throw ValidationError("canonical documents must not contain floating-point values");
  if (j.is_object() || j.is_array())
    for (const auto& child : j) reject_floats(child);
}
}  // namespace detail

/// Canonical byte encoding of a document: UTF-8, sorted object keys,
/// no insignificant whitespace, integers only. This is the exact byte
/// sequence that gets fingerprinted and written to disk.
inline Bytes canonical_bytes(const Json& doc) {
  detail::reject_floats(doc);
  std::string s = doc.dump(-1, ' ', false, Json::error_handler_t::strict);
  return Bytes(s.begin(), s.end());
}

inline std::string canonical_text(const Json& doc) {
  Bytes b = canonical_bytes(doc);
  return std::string(b.begin(), b.end());
}

/// Parses JSON, mapping library errors onto this library's ParseError.
inline Json parse_json(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

inline Json parse_json(std::span<const std::uint8_t> bytes) {
  return parse_json(std::string_view(reinterpret_cast<const char*>(bytes.data()),
                                     bytes.size()));
}

}  // namespace govchain

#endif  // GOVCHAIN_CANONICAL_JSON_HPP
