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

#ifndef GOVCHAIN_ANNOTATIONS_HPP
#define GOVCHAIN_ANNOTATIONS_HPP

#include <algorithm>
#include <cctype>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "govchain/canonical_json.hpp"
#include "govchain/digest.hpp"
#include "govchain/errors.hpp"
#include "govchain/governance.hpp"

namespace govchain {

enum class EntityKind { state_variable, function, modifier, contract, unknown };

inline std::string_view to_string(EntityKind k) {
  switch (k) {
    case EntityKind::state_variable: return "state_variable";
    case EntityKind::function: return "function";
    case EntityKind::modifier: return "modifier";
    case EntityKind::contract: return "contract";
    default: return "unknown";
  }
}

/// One `@OntoInstance` annotation bound to the declaration that follows it.
struct AnnotationBinding {
  std::string entity_name;  // empty iff entity_kind == unknown
  EntityKind entity_kind = EntityKind::unknown;
  Digest instance_digest;
  int line = 0;  // 1-based line of the annotation tag
};

/// Source text plus the bindings extracted from it.
struct AnnotatedSource {
  std::string source_text;
  std::vector<AnnotationBinding> bindings;  // sorted by line
  Digest source_digest;                     // fingerprint of the raw source bytes
};

/// What an instance digest dereferences to: a small record tying one code
/// entity to one role or power of a declared model.
/// File format: `.inst.json` in the canonical profile.
struct InstanceDocument {
  std::string instance_id;
  std::string role_or_power;
  std::string ontology_id;
  std::string notes;

  Json to_json() const {
    Json j;
    j["instance_id"] = instance_id;
    j["role_or_power"] = role_or_power;
    j["ontology_id"] = ontology_id;
    j["notes"] = notes;
    return j;
  }

  static InstanceDocument from_json(const Json& j) {
    InstanceDocument doc;
    try {
      doc.instance_id = j.at("instance_id").get<std::string>();
      doc.role_or_power = j.at("role_or_power").get<std::string>();
      doc.ontology_id = j.at("ontology_id").get<std::string>();
      doc.notes = j.at("notes").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("malformed instance document: ") + e.what());
    }
    return doc;
  }
};

inline Bytes canonicalize(const InstanceDocument& doc) {
  return canonical_bytes(doc.to_json());
}

namespace detail {

struct SourceToken {
  enum class Kind { word, punct, annotation };
  Kind kind;
  std::string text;  // word text or punctuation ("=>" kept as one token)
  int line;
  Digest digest;  // annotation tokens only
};

inline bool is_ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

inline bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

/// Extracts the digest from a Doxygen comment body known to contain the
/// tag. The digest may carry a 0x prefix and interior whitespace (source
/// files wrap long hex strings across lines).
inline Digest parse_annotation_digest(std::string_view body, std::size_t after_tag,
                                      int tag_line) {
  std::size_t i = after_tag;
  while (i < body.size() && std::isspace(static_cast<unsigned char>(body[i]))) ++i;
  if (i + 1 < body.size() && body[i] == '0' && (body[i + 1] == 'x' || body[i + 1] == 'X'))
    i += 2;
  std::string hex;
  while (i < body.size()) {
    char c = body[i];
    if (hex_nibble(c) >= 0) {
      hex.push_back(c);
      ++i;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else {
      break;
    }
  }
  if (hex.size() != 64)
    throw ParseError(tag_line, "malformed @OntoInstance digest: expected 64 hex characters, found " +
                                   std::to_string(hex.size()));
  return Digest::from_hex(hex);
}

inline std::vector<SourceToken> lex_source(std::string_view src,
                                           std::vector<Diagnostic>* diags) {
  std::vector<SourceToken> tokens;
  std::size_t i = 0;
  int line = 1;
  auto count_lines = [&](std::string_view chunk) {
    line += static_cast<int>(std::count(chunk.begin(), chunk.end(), '\n'));
  };

  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      ++line;
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '/') {
      std::size_t end = src.find('\n', i);
      i = (end == std::string_view::npos) ? src.size() : end;
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
      bool doxygen = i + 2 < src.size() && src[i + 2] == '*';
      std::size_t body_begin = i + (doxygen ? 3 : 2);
      std::size_t close = src.find("*/", body_begin);
      if (close == std::string_view::npos) {
        if (diags)
          diags->push_back({Severity::warning, line, "unterminated block comment"});
        count_lines(src.substr(i));
        i = src.size();
        continue;
      }
      if (doxygen && body_begin <= close) {
        std::string_view body = src.substr(body_begin, close - body_begin);
        std::string lowered(body);
        std::transform(lowered.begin(), lowered.end(), lowered.begin(),
                       [](unsigned char ch) { return std::tolower(ch); });
        static constexpr std::string_view kTag = "@ontoinstance";
        std::size_t tag_pos = lowered.find(kTag);
        if (tag_pos != std::string_view::npos) {
          int tag_line = line + static_cast<int>(std::count(
                                    body.begin(), body.begin() + tag_pos, '\n'));
          Digest d = parse_annotation_digest(body, tag_pos + kTag.size(), tag_line);
          tokens.push_back({SourceToken::Kind::annotation, "", tag_line, d});
        }
      }
      count_lines(src.substr(i, close + 2 - i));
      i = close + 2;
      continue;
    }
    if (c == '"' || c == '\'') {
      char quote = c;
      ++i;
      while (i < src.size() && src[i] != quote) {
        if (src[i] == '\\' && i + 1 < src.size()) ++i;
        if (src[i] == '\n') ++line;
        ++i;
      }
      if (i < src.size()) ++i;  // closing quote
      continue;
    }
    if (is_ident_start(c)) {
      std::size_t start = i;
      while (i < src.size() && is_ident_char(src[i])) ++i;
      tokens.push_back({SourceToken::Kind::word,
                        std::string(src.substr(start, i - start)), line, {}});
      continue;
    }
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t start = i;
      while (i < src.size() && (is_ident_char(src[i]) || src[i] == '.')) ++i;
      tokens.push_back({SourceToken::Kind::punct,
                        std::string(src.substr(start, i - start)), line, {}});
      continue;
    }
    // Keep "=>" as one token so a mapping arrow is never mistaken for an
    // assignment terminator.
    if (c == '=' && i + 1 < src.size() && src[i + 1] == '>') {
      tokens.push_back({SourceToken::Kind::punct, "=>", line, {}});
      i += 2;
      continue;
    }
    tokens.push_back({SourceToken::Kind::punct, std::string(1, c), line, {}});
    ++i;
  }
  return tokens;
}

/// Reads one declaration starting at tokens[begin]. Returns the binding
/// fields and the index just past what was consumed.
inline std::pair<std::pair<EntityKind, std::string>, std::size_t> read_declaration(
    const std::vector<SourceToken>& tokens, std::size_t begin) {
  using Kind = SourceToken::Kind;
  const SourceToken& first = tokens[begin];
  if (first.kind == Kind::word &&
      (first.text == "function" || first.text == "modifier" || first.text == "contract")) {
    EntityKind kind = first.text == "function"   ? EntityKind::function
                      : first.text == "modifier" ? EntityKind::modifier
                                                 : EntityKind::contract;
    if (begin + 1 < tokens.size() && tokens[begin + 1].kind == Kind::word)
      return {{kind, tokens[begin + 1].text}, begin + 2};
    return {{EntityKind::unknown, ""}, begin + 1};
  }
  // State-variable fallback: the last identifier before ';' or '='.
  std::string last_word;
  std::size_t i = begin;
  for (; i < tokens.size(); ++i) {
    const SourceToken& t = tokens[i];
    if (t.kind == Kind::annotation) break;
    if (t.kind == Kind::word) {
      last_word = t.text;
    } else if (t.text == ";" || t.text == "=") {
      if (last_word.empty()) return {{EntityKind::unknown, ""}, i + 1};
      return {{EntityKind::state_variable, last_word}, i + 1};
    }
  }
  return {{EntityKind::unknown, ""}, i};
}

}  // namespace detail

/// Scans source text for `/** @ontoInstance <digest> */` annotations and
/// binds each to the next declaration. The tag match is case-insensitive;
/// `//`-style annotations are ignored; non-annotation comments between an
/// annotation and its declaration do not break the binding. The scanner is
/// lexical only and does not require compilable Solidity.
inline AnnotatedSource parse_annotations(std::string_view source,
                                         std::vector<Diagnostic>* diags = nullptr) {
  auto tokens = detail::lex_source(source, diags);

  AnnotatedSource out;
  out.source_text = std::string(source);
  out.source_digest = fingerprint(source);

  struct Pending {
    Digest digest;
    int line;
  };
  std::optional<Pending> pending;

  std::size_t i = 0;
  while (i < tokens.size()) {
    const auto& tok = tokens[i];
    if (tok.kind == detail::SourceToken::Kind::annotation) {
      if (pending && diags)
        diags->push_back({Severity::warning, tok.line,
                          "annotation overrides earlier @OntoInstance annotation on line " +
                              std::to_string(pending->line)});
      pending = Pending{tok.digest, tok.line};
      ++i;
      continue;
    }
    if (pending) {
      auto [decl, next] = detail::read_declaration(tokens, i);
      out.bindings.push_back(
          {decl.second, decl.first, pending->digest, pending->line});
      pending.reset();
      i = next;
      continue;
    }
    ++i;
  }
  if (pending)
    throw ParseError(pending->line, "annotation at end of file has no following declaration");

  std::stable_sort(out.bindings.begin(), out.bindings.end(),
                   [](const AnnotationBinding& a, const AnnotationBinding& b) {
                     return a.line < b.line;
                   });
  return out;
}

enum class ConsistencyVerdict { consistent, incomplete, inconsistent };

inline std::string_view to_string(ConsistencyVerdict v) {
  switch (v) {
    case ConsistencyVerdict::consistent: return "consistent";
    case ConsistencyVerdict::incomplete: return "incomplete";
    default: return "inconsistent";
  }
}

/// Result of checking annotated source against a declared model.
struct ConsistencyReport {
  std::vector<std::pair<AnnotationBinding, std::string>> matched;
  std::vector<AnnotationBinding> unresolved_bindings;
  // Bindings whose instance document names a role or power the model does
  // not declare; any such binding makes the verdict inconsistent.
  std::vector<std::pair<AnnotationBinding, std::string>> mismatched;
  std::vector<std::string> unannotated_roles;
  ConsistencyVerdict verdict = ConsistencyVerdict::consistent;
  std::vector<Diagnostic> diagnostics;
};

/// Resolves each binding's instance document and checks it names an
/// element of the model. Documents that cannot be fetched, fail digest
/// verification, or fail to parse count as unresolved with a diagnostic
/// attached; they never abort the check.
inline ConsistencyReport verify_annotations(const GovernanceModel& model,
                                            const AnnotatedSource& annotated,
                                            const Resolver& resolve) {
  model.validate();
  ConsistencyReport report;
  std::set<std::string> annotated_roles;

  for (const auto& binding : annotated.bindings) {
    std::optional<Bytes> content;
    try {
      content = resolve(binding.instance_digest);
    } catch (const Error& e) {
      report.diagnostics.push_back(
          {Severity::error, binding.line,
           std::string("instance document resolution failed: ") + e.what()});
      report.unresolved_bindings.push_back(binding);
      continue;
    }
    if (!content) {
      report.unresolved_bindings.push_back(binding);
      continue;
    }
    if (fingerprint(*content) != binding.instance_digest) {
      report.diagnostics.push_back(
          {Severity::error, binding.line,
           "instance document " + binding.instance_digest.hex() +
               " failed fingerprint verification"});
      report.unresolved_bindings.push_back(binding);
      continue;
    }
    InstanceDocument doc;
    try {
      doc = InstanceDocument::from_json(parse_json(*content));
    } catch (const Error& e) {
      report.diagnostics.push_back(
          {Severity::error, binding.line,
           std::string("instance document unparseable: ") + e.what()});
      report.unresolved_bindings.push_back(binding);
      continue;
    }
    if (model.has_role(doc.role_or_power) || model.has_power(doc.role_or_power)) {
      report.matched.emplace_back(binding, doc.role_or_power);
      if (model.has_role(doc.role_or_power)) annotated_roles.insert(doc.role_or_power);
    } else {
      report.mismatched.emplace_back(binding, doc.role_or_power);
      report.diagnostics.push_back(
          {Severity::error, binding.line,
           "instance document names \"" + doc.role_or_power +
               "\" which the declared model does not contain"});
    }
  }

  for (const auto& role : model.roles)
    if (!annotated_roles.count(role.name))
      report.unannotated_roles.push_back(role.name);
  std::sort(report.unannotated_roles.begin(), report.unannotated_roles.end());

  if (!report.mismatched.empty())
    report.verdict = ConsistencyVerdict::inconsistent;
  else if (report.unresolved_bindings.empty() && report.unannotated_roles.empty())
    report.verdict = ConsistencyVerdict::consistent;
  else
    report.verdict = ConsistencyVerdict::incomplete;
  return report;
}

}  // namespace govchain

#endif  // GOVCHAIN_ANNOTATIONS_HPP
