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

#ifndef GOVCHAIN_ERRORS_HPP
#define GOVCHAIN_ERRORS_HPP

#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace govchain {

/// Base class of every error thrown by this library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A document or model violates one of its invariants (dangling
/// cross-reference, duplicate name, bad digest string, ...).
class ValidationError : public Error {
public:
  using Error::Error;
};

/// A name lookup failed (unknown role, unknown power, ...).
class LookupError : public Error {
public:
  using Error::Error;
};

/// Text input could not be parsed. Carries the 1-based source line when
/// one is known; line 0 means "no specific line".
class ParseError : public Error {
public:
  ParseError(int line, const std::string& message)
      : Error(message), line_(line) {}
  explicit ParseError(const std::string& message) : ParseError(0, message) {}

  int line() const noexcept { return line_; }

private:
  int line_;
};

/// Content exceeds a configured size limit.
class SizeError : public Error {
public:
  using Error::Error;
};

/// The storage backend failed (I/O error, unwritable directory, ...).
class StorageError : public Error {
public:
  using Error::Error;
};

/// Retrieved bytes do not hash to the digest they were addressed by.
class IntegrityError : public Error {
public:
  using Error::Error;
};

/// A network operation failed before content could be verified.
class TransportError : public Error {
public:
  using Error::Error;
};

/// The target contract published no disclosure triple.
class NoDisclosureError : public Error {
public:
  using Error::Error;
};

/// No contract account exists at the given address.
class UnknownAddressError : public Error {
public:
  using Error::Error;
};

enum class Severity { warning, error };

/// A line-anchored message emitted by parsers and verifiers. Rendered on
/// CLI surfaces as `LEVEL:LINE:MESSAGE`.
struct Diagnostic {
  Severity severity = Severity::warning;
  int line = 0;  // 1-based; 0 when not tied to a line
  std::string message;
};

inline std::string format_diagnostic(const Diagnostic& d) {
  std::ostringstream out;
  out << (d.severity == Severity::error ? "ERROR" : "WARNING") << ':' << d.line
      << ':' << d.message;
  return out.str();
}

}  // namespace govchain

#endif  // GOVCHAIN_ERRORS_HPP
