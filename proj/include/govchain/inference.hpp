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

#ifndef GOVCHAIN_INFERENCE_HPP
#define GOVCHAIN_INFERENCE_HPP

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "govchain/annotations.hpp"
#include "govchain/canonical_json.hpp"
#include "govchain/chain.hpp"
#include "govchain/digest.hpp"
#include "govchain/errors.hpp"
#include "govchain/governance.hpp"
#include "govchain/ontology.hpp"

namespace govchain {

// ---------------------------------------------------------------------------
// Template registry: the on-chain-sized table of governance fingerprints a
// contract is willing to trust (or refuse) without off-chain work.
// ---------------------------------------------------------------------------

enum class Policy { accept, reject };

inline std::string_view to_string(Policy p) {
  return p == Policy::accept ? "accept" : "reject";
}

inline Policy policy_from_string(std::string_view s) {
  if (s == "accept") return Policy::accept;
  if (s == "reject") return Policy::reject;
  throw ValidationError("unknown policy \"" + std::string(s) + "\"");
}

struct RegistryEntry {
  std::string name;
  GovernanceModel model;
  Policy policy = Policy::accept;
  Digest governance_digest;  // always fingerprint(canonicalize(model))
  Digest ontology_digest;    // digest of the model's reference ontology document
};

class TemplateRegistry {
public:
  /// Registers a template. The key is always recomputed from the model, so
  /// entries built through here cannot violate the fingerprint invariant.
  /// `ontology_digest` defaults to the built-in reference vocabulary.
  const RegistryEntry& add(std::string name, GovernanceModel model, Policy policy,
                           std::optional<Digest> ontology_digest = std::nullopt) {
    RegistryEntry entry;
    entry.name = std::move(name);
    entry.governance_digest = model_fingerprint(model);
    entry.ontology_digest =
        ontology_digest ? *ontology_digest
                        : fingerprint(canonicalize(standard_blockchain_ontology()));
    entry.model = std::move(model);
    entry.policy = policy;
    auto [it, inserted] = entries_.insert_or_assign(entry.governance_digest,
                                                    std::move(entry));
    (void)inserted;
    return it->second;
  }

  const RegistryEntry* find(const Digest& governance_digest) const {
    auto it = entries_.find(governance_digest);
    return it == entries_.end() ? nullptr : &it->second;
  }

  std::size_t size() const { return entries_.size(); }
  const std::map<Digest, RegistryEntry>& entries() const { return entries_; }

  Json to_json() const {
    Json arr = Json::array();
    for (const auto& [key, entry] : entries_) {
      Json je;
      je["governance_digest"] = key.hex();
      je["model"] = entry.model.to_json();
      je["name"] = entry.name;
      je["ontology_digest"] = entry.ontology_digest.hex();
      je["policy"] = std::string(to_string(entry.policy));
      arr.push_back(std::move(je));
    }
    Json j;
    j["entries"] = std::move(arr);
    return j;
  }

  /// Rejects any entry whose stored key does not match the fingerprint of
  /// its stored model: a registry file cannot smuggle in a mislabeled model.
  static TemplateRegistry from_json(const Json& j) {
    TemplateRegistry registry;
    try {
      for (const auto& je : j.at("entries")) {
        GovernanceModel model = GovernanceModel::from_json(je.at("model"));
        Digest claimed = Digest::from_hex(je.at("governance_digest").get<std::string>());
        if (claimed != model_fingerprint(model))
          throw IntegrityError("registry entry \"" +
                               je.at("name").get<std::string>() +
                               "\" does not hash to its key");
        registry.add(je.at("name").get<std::string>(), std::move(model),
                     policy_from_string(je.at("policy").get<std::string>()),
                     Digest::from_hex(je.at("ontology_digest").get<std::string>()));
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("malformed registry: ") + e.what());
    }
    return registry;
  }

private:
  std::map<Digest, RegistryEntry> entries_;
};

// ---------------------------------------------------------------------------
// Decisions and risk reports.
// ---------------------------------------------------------------------------

enum class Outcome { proceed, reject, delegate_off_chain };

inline std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::proceed: return "proceed";
    case Outcome::reject: return "reject";
    default: return "delegate_off_chain";
  }
}

struct Decision {
  Outcome outcome = Outcome::delegate_off_chain;
  std::string basis;  // template name, or the reason delegation was needed
};

enum class FindingCode {
  unchecked_privileged_role,
  quorum_manipulation_power,
  no_owner_role,
  missing_annotation,
  unresolved_document,
  ontology_mismatch,
};

inline std::string_view to_string(FindingCode code) {
  switch (code) {
    case FindingCode::unchecked_privileged_role: return "unchecked_privileged_role";
    case FindingCode::quorum_manipulation_power: return "quorum_manipulation_power";
    case FindingCode::no_owner_role: return "no_owner_role";
    case FindingCode::missing_annotation: return "missing_annotation";
    case FindingCode::unresolved_document: return "unresolved_document";
    default: return "ontology_mismatch";
  }
}

inline FindingCode finding_code_from_string(std::string_view s) {
  for (FindingCode code :
       {FindingCode::unchecked_privileged_role, FindingCode::quorum_manipulation_power,
        FindingCode::no_owner_role, FindingCode::missing_annotation,
        FindingCode::unresolved_document, FindingCode::ontology_mismatch})
    if (to_string(code) == s) return code;
  throw ValidationError("unknown finding code \"" + std::string(s) + "\"");
}

struct Finding {
  FindingCode code = FindingCode::unresolved_document;
  std::string subject;
  std::string detail;

  auto tie() const { return std::tuple(static_cast<int>(code), subject, detail); }
};

enum class Verdict { acceptable, risky, unverifiable };

inline std::string_view to_string(Verdict v) {
  switch (v) {
    case Verdict::acceptable: return "acceptable";
    case Verdict::risky: return "risky";
    default: return "unverifiable";
  }
}

inline Verdict verdict_from_string(std::string_view s) {
  for (Verdict v : {Verdict::acceptable, Verdict::risky, Verdict::unverifiable})
    if (to_string(v) == s) return v;
  throw ValidationError("unknown verdict \"" + std::string(s) + "\"");
}

/// unresolved_document dominates (we could not see the whole picture);
/// otherwise any structurally dangerous finding makes the report risky.
inline Verdict compute_verdict(const std::vector<Finding>& findings) {
  bool unresolved = false;
  bool dangerous = false;
  for (const auto& f : findings) {
    if (f.code == FindingCode::unresolved_document) unresolved = true;
    if (f.code == FindingCode::unchecked_privileged_role ||
        f.code == FindingCode::quorum_manipulation_power ||
        f.code == FindingCode::ontology_mismatch)
      dangerous = true;
  }
  if (unresolved) return Verdict::unverifiable;
  return dangerous ? Verdict::risky : Verdict::acceptable;
}

struct RiskReport {
  Address contract;
  std::vector<Finding> findings;
  Verdict verdict = Verdict::acceptable;

  Json to_json() const {
    Json jf = Json::array();
    for (const auto& f : findings) {
      Json j;
      j["code"] = std::string(to_string(f.code));
      j["detail"] = f.detail;
      j["subject"] = f.subject;
      jf.push_back(std::move(j));
    }
    Json j;
    j["contract"] = contract.hex();
    j["findings"] = std::move(jf);
    j["verdict"] = std::string(to_string(verdict));
    return j;
  }

  static RiskReport from_json(const Json& j) {
    RiskReport report;
    try {
      report.contract = Address::from_hex(j.at("contract").get<std::string>());
      for (const auto& jf : j.at("findings")) {
        Finding f;
        f.code = finding_code_from_string(jf.at("code").get<std::string>());
        f.subject = jf.at("subject").get<std::string>();
        f.detail = jf.at("detail").get<std::string>();
        report.findings.push_back(std::move(f));
      }
      report.verdict = verdict_from_string(j.at("verdict").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("malformed risk report: ") + e.what());
    }
    return report;
  }
};

/// Per-rule switches for the structural rubric. The honesty signal
/// (unresolved_document) is not a rule and cannot be switched off.
struct RiskRules {
  bool unchecked_privileged_role = true;
  bool quorum_manipulation_power = true;
  bool no_owner_role = true;
  bool missing_annotation = true;
  bool ontology_mismatch = true;

  /// Applies `key = on|off|true|false|1|0` pairs whose keys are rule codes.
  /// Unrelated keys are left to the caller (the CLI shares one config file).
  void apply(const std::map<std::string, std::string>& config) {
    auto read = [&](const char* key, bool& slot) {
      auto it = config.find(key);
      if (it == config.end()) return;
      const std::string& v = it->second;
      if (v == "on" || v == "true" || v == "1")
        slot = true;
      else if (v == "off" || v == "false" || v == "0")
        slot = false;
      else
        throw ValidationError("rule toggle \"" + std::string(key) +
                              "\" must be on/off, got \"" + v + "\"");
    };
    read("unchecked_privileged_role", unchecked_privileged_role);
    read("quorum_manipulation_power", quorum_manipulation_power);
    read("no_owner_role", no_owner_role);
    read("missing_annotation", missing_annotation);
    read("ontology_mismatch", ontology_mismatch);
  }
};

// ---------------------------------------------------------------------------
// The decision flow: cheap fingerprint comparison on-chain, full document
// analysis off-chain only when the fingerprints are unfamiliar.
// ---------------------------------------------------------------------------

/// On-chain branch. Consults nothing but `other`'s disclosed digests and
/// the registry: no content-addressed fetches happen here, by construction.
/// The decision itself is recorded as a transaction.
inline Decision decide(ChainEnvironment& env, const Address& self,
                       const Address& other, const TemplateRegistry& registry) {
  env.account(self);  // both must exist; throws otherwise
  const ContractAccount& other_account = env.account(other);

  Decision decision;
  if (!other_account.disclosure) {
    decision = {Outcome::delegate_off_chain, "no disclosure"};
  } else {
    Digest governance = env.call_disclosure(self, other, DisclosureField::governance);
    Digest ontology = env.call_disclosure(self, other, DisclosureField::ontology);
    const RegistryEntry* entry = registry.find(governance);
    if (!entry) {
      decision = {Outcome::delegate_off_chain, "unknown template"};
    } else if (entry->ontology_digest != ontology) {
      decision = {Outcome::delegate_off_chain, "ontology mismatch"};
    } else {
      decision = {entry->policy == Policy::accept ? Outcome::proceed : Outcome::reject,
                  entry->name};
    }
  }

  std::uint8_t outcome_byte = decision.outcome == Outcome::proceed   ? 1
                              : decision.outcome == Outcome::reject ? 0
                                                                     : 2;
  env.log_call(self, other, "decide", {to_bytes(decision.basis)},
               Bytes{outcome_byte});
  return decision;
}

namespace inference_detail {

inline bool contains_quorum(std::string_view text) {
  static constexpr std::string_view needle = "quorum";
  if (text.size() < needle.size()) return false;
  for (std::size_t i = 0; i + needle.size() <= text.size(); ++i) {
    bool hit = true;
    for (std::size_t k = 0; k < needle.size(); ++k)
      if (std::tolower(static_cast<unsigned char>(text[i + k])) != needle[k]) {
        hit = false;
        break;
      }
    if (hit) return true;
  }
  return false;
}

/// Fetch + parse one document; on any failure appends an unresolved_document
/// finding and returns nullopt.
template <typename T, typename ParseFn>
std::optional<T> resolve_document(const Resolver& resolve, const Digest& digest,
                                  std::string_view label, ParseFn parse,
                                  std::vector<Finding>& findings) {
  std::optional<Bytes> bytes;
  try {
    bytes = resolve(digest);
  } catch (const Error& e) {
    findings.push_back({FindingCode::unresolved_document, std::string(label),
                        std::string(label) + " document " + digest.hex() +
                            " failed verification: " + e.what()});
    return std::nullopt;
  }
  if (!bytes) {
    findings.push_back({FindingCode::unresolved_document, std::string(label),
                        std::string(label) + " document " + digest.hex() +
                            " could not be resolved"});
    return std::nullopt;
  }
  try {
    return parse(*bytes);
  } catch (const Error& e) {
    findings.push_back({FindingCode::unresolved_document, std::string(label),
                        std::string(label) + " document " + digest.hex() +
                            " resolved but is not well-formed: " + e.what()});
    return std::nullopt;
  }
}

}  // namespace inference_detail

/// Off-chain branch: resolve the three disclosed documents, run the
/// structural rubric, and map every defect to a finding. Never throws;
/// everything that goes wrong is part of the report.
inline RiskReport off_chain_assess(const Disclosure& disclosure,
                                   const Resolver& resolve,
                                   const std::optional<OntologyDocument>& expected_ontology =
                                       std::nullopt,
                                   const RiskRules& rules = {},
                                   const Address& contract = {}) {
  using inference_detail::resolve_document;
  RiskReport report;
  report.contract = contract;
  std::vector<Finding>& findings = report.findings;

  std::optional<GovernanceModel> model = resolve_document<GovernanceModel>(
      resolve, disclosure.governance_digest, "governance",
      [](const Bytes& b) { return GovernanceModel::from_json(parse_json(b)); },
      findings);

  std::optional<OntologyDocument> ontology = resolve_document<OntologyDocument>(
      resolve, disclosure.ontology_digest, "ontology",
      [](const Bytes& b) { return OntologyDocument::from_json(parse_json(b)); },
      findings);

  std::optional<AnnotatedSource> source = resolve_document<AnnotatedSource>(
      resolve, disclosure.annotated_source_digest, "annotated_source",
      [](const Bytes& b) { return parse_annotations(to_string(b)); }, findings);

  if (model) {
    // (a) roles holding unconstrained powers with nobody checking them.
    if (rules.unchecked_privileged_role) {
      for (const auto& role : model->roles) {
        std::vector<std::string> privileged;
        for (const auto& power : model->powers)
          if (power.holder == role.name && power.constraints.empty())
            privileged.push_back(power.name);
        if (privileged.empty() || !query_checks(*model, role.name).empty()) continue;
        std::string detail = "role holds unconstrained power(s)";
        for (std::size_t i = 0; i < privileged.size(); ++i)
          detail += (i == 0 ? " " : ", ") + privileged[i];
        detail += " and no checks relation targets it";
        findings.push_back({FindingCode::unchecked_privileged_role, role.name,
                            std::move(detail)});
      }
    }

    // (b) quorum-touching powers concentrated in a single-seat role.
    if (rules.quorum_manipulation_power) {
      for (const auto& power : model->powers) {
        if (!inference_detail::contains_quorum(power.target) &&
            !inference_detail::contains_quorum(power.effect))
          continue;
        const Role& holder = model->role(power.holder);
        if (holder.cardinality == Cardinality::one)
          findings.push_back({FindingCode::quorum_manipulation_power, holder.name,
                              "power \"" + power.name +
                                  "\" manipulates voting quorum and is held by "
                                  "single-seat role \"" +
                                  holder.name + "\""});
      }
    }

    // (c) informational: no accountable "owner" role exists.
    if (rules.no_owner_role && !model->has_role("owner"))
      findings.push_back({FindingCode::no_owner_role, model->model_id,
                          "model declares no \"owner\" role; there is no single "
                          "accountable administrator"});

    // (d) the disclosed documents must agree on which vocabulary they use.
    if (rules.ontology_mismatch && ontology) {
      if (ontology->ontology_id != model->ontology_id)
        findings.push_back({FindingCode::ontology_mismatch, ontology->ontology_id,
                            "resolved ontology \"" + ontology->ontology_id +
                                "\" differs from the model's declared vocabulary \"" +
                                model->ontology_id + "\""});
      else if (expected_ontology &&
               ontology->ontology_id != expected_ontology->ontology_id)
        findings.push_back({FindingCode::ontology_mismatch, ontology->ontology_id,
                            "resolved ontology \"" + ontology->ontology_id +
                                "\" differs from the expected vocabulary \"" +
                                expected_ontology->ontology_id + "\""});
    }

    // (e) every role must be traceable to an annotation in the source.
    if (rules.missing_annotation && source) {
      ConsistencyReport consistency = verify_annotations(*model, *source, resolve);
      for (const auto& role : consistency.unannotated_roles)
        findings.push_back({FindingCode::missing_annotation, role,
                            "role \"" + role +
                                "\" has no annotation binding in the disclosed source"});
      for (const auto& binding : consistency.unresolved_bindings)
        findings.push_back({FindingCode::missing_annotation, binding.entity_name,
                            "instance document " + binding.instance_digest.hex() +
                                " for entity \"" + binding.entity_name +
                                "\" could not be resolved"});
      for (const auto& [binding, named] : consistency.mismatched)
        findings.push_back({FindingCode::missing_annotation, binding.entity_name,
                            "instance document for entity \"" + binding.entity_name +
                                "\" names \"" + named +
                                "\" which is not part of the governance model"});
    }
  }

  std::sort(findings.begin(), findings.end(),
            [](const Finding& a, const Finding& b) { return a.tie() < b.tie(); });
  report.verdict = compute_verdict(findings);
  return report;
}

struct InferenceResult {
  Decision decision;
  std::optional<RiskReport> report;  // present only when delegated with a disclosure
};

/// The full flow: try the cheap on-chain decision; when it delegates and a
/// disclosure exists, run the off-chain assessment against the CAS.
inline InferenceResult run_inference(ChainEnvironment& env, const Address& self,
                                     const Address& other,
                                     const TemplateRegistry& registry,
                                     const Resolver& resolve,
                                     const std::optional<OntologyDocument>& expected_ontology =
                                         std::nullopt,
                                     const RiskRules& rules = {}) {
  InferenceResult result;
  result.decision = decide(env, self, other, registry);
  if (result.decision.outcome == Outcome::delegate_off_chain) {
    const ContractAccount& account = env.account(other);
    if (account.disclosure)
      result.report =
          off_chain_assess(*account.disclosure, resolve, expected_ontology, rules, other);
  }
  return result;
}

// ---------------------------------------------------------------------------
// Reputation: the ecosystem's memory of who disclosed honestly.
// ---------------------------------------------------------------------------

enum class Status { trusted, flagged, blacklisted };

inline std::string_view to_string(Status s) {
  switch (s) {
    case Status::trusted: return "trusted";
    case Status::flagged: return "flagged";
    default: return "blacklisted";
  }
}

inline Status status_from_string(std::string_view s) {
  for (Status st : {Status::trusted, Status::flagged, Status::blacklisted})
    if (to_string(st) == s) return st;
  throw ValidationError("unknown status \"" + std::string(s) + "\"");
}

struct Evidence {
  Digest report_digest;  // fingerprint of the report's canonical encoding
  Verdict verdict = Verdict::acceptable;
};

struct ReputationEntry {
  Status status = Status::trusted;
  std::vector<Evidence> evidence;
};

class ReputationLedger {
public:
  Status status(const Address& contract) const {
    auto it = entries_.find(contract);
    return it == entries_.end() ? Status::trusted : it->second.status;
  }

  const std::map<Address, ReputationEntry>& entries() const { return entries_; }

  ReputationEntry& entry(const Address& contract) { return entries_[contract]; }

  Json to_json() const {
    Json arr = Json::array();
    for (const auto& [address, entry] : entries_) {
      Json je;
      je["address"] = address.hex();
      Json jev = Json::array();
      for (const auto& ev : entry.evidence) {
        Json j;
        j["report_digest"] = ev.report_digest.hex();
        j["verdict"] = std::string(to_string(ev.verdict));
        jev.push_back(std::move(j));
      }
      je["evidence"] = std::move(jev);
      je["status"] = std::string(to_string(entry.status));
      arr.push_back(std::move(je));
    }
    Json j;
    j["entries"] = std::move(arr);
    return j;
  }

  static ReputationLedger from_json(const Json& j) {
    ReputationLedger ledger;
    try {
      for (const auto& je : j.at("entries")) {
        Address address = Address::from_hex(je.at("address").get<std::string>());
        ReputationEntry entry;
        entry.status = status_from_string(je.at("status").get<std::string>());
        for (const auto& jev : je.at("evidence")) {
          Evidence ev;
          ev.report_digest =
              Digest::from_hex(jev.at("report_digest").get<std::string>());
          ev.verdict = verdict_from_string(jev.at("verdict").get<std::string>());
          entry.evidence.push_back(ev);
        }
        ledger.entries_.emplace(address, std::move(entry));
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("malformed reputation ledger: ") + e.what());
    }
    return ledger;
  }

private:
  std::map<Address, ReputationEntry> entries_;
};

/// Records a report against a contract and advances its status. Transitions
/// only move forward: an unverifiable disclosure flags the contract; a risky
/// report carrying a dishonesty signal (missing_annotation or
/// ontology_mismatch) flags it, and blacklists it if it was already flagged.
/// Purely structural risk never downgrades anyone by itself, and nothing is
/// ever rehabilitated automatically.
inline ReputationLedger& update_reputation(ReputationLedger& ledger,
                                           const Address& contract,
                                           const RiskReport& report) {
  ReputationEntry& entry = ledger.entry(contract);
  Status current = entry.status;
  Status next = current;
  switch (report.verdict) {
    case Verdict::acceptable:
      break;
    case Verdict::unverifiable:
      if (current == Status::trusted) next = Status::flagged;
      break;
    case Verdict::risky: {
      bool dishonest = std::any_of(
          report.findings.begin(), report.findings.end(), [](const Finding& f) {
            return f.code == FindingCode::missing_annotation ||
                   f.code == FindingCode::ontology_mismatch;
          });
      if (dishonest)
        next = current == Status::trusted ? Status::flagged : Status::blacklisted;
      break;
    }
  }
  if (static_cast<int>(next) > static_cast<int>(current)) entry.status = next;
  entry.evidence.push_back(
      {fingerprint(canonical_bytes(report.to_json())), report.verdict});
  return ledger;
}

}  // namespace govchain

#endif  // GOVCHAIN_INFERENCE_HPP
