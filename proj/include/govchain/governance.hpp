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

#ifndef GOVCHAIN_GOVERNANCE_HPP
#define GOVCHAIN_GOVERNANCE_HPP

#include <algorithm>
#include <set>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "govchain/canonical_json.hpp"
#include "govchain/digest.hpp"
#include "govchain/errors.hpp"

namespace govchain {

enum class Cardinality { one, many };

inline std::string_view to_string(Cardinality c) {
  return c == Cardinality::one ? "one" : "many";
}

inline Cardinality cardinality_from_string(std::string_view s) {
  if (s == "one") return Cardinality::one;
  if (s == "many") return Cardinality::many;
  throw ValidationError("unknown cardinality \"" + std::string(s) + "\"");
}

/// A named position within a contract's governance structure.
struct Role {
  std::string name;
  std::string description;
  std::string acquisition;  // human-readable rule for how the role is gained
  Cardinality cardinality = Cardinality::many;
};

/// An authority a role holds over some function or parameter of the
/// contract. An empty constraints list marks the power as unconditioned.
struct Power {
  std::string name;
  std::string holder;  // role name
  std::string target;  // the governed function or parameter
  std::string effect;
  std::vector<std::string> constraints;
};

enum class RelationKind { checks, delegates, appoints };

inline std::string_view to_string(RelationKind k) {
  switch (k) {
    case RelationKind::checks: return "checks";
    case RelationKind::delegates: return "delegates";
    default: return "appoints";
  }
}

inline RelationKind relation_kind_from_string(std::string_view s) {
  if (s == "checks") return RelationKind::checks;
  if (s == "delegates") return RelationKind::delegates;
  if (s == "appoints") return RelationKind::appoints;
  throw ValidationError("unknown relation kind \"" + std::string(s) + "\"");
}

/// A directed association between two roles, exercised via a power.
struct Relation {
  RelationKind kind = RelationKind::checks;
  std::string from_role;
  std::string to_role;
  std::string via_power;

  auto tie() const { return std::tie(kind, from_role, to_role, via_power); }
};

/// The roles, powers, and check-and-balance relations of one contract's
/// governance structure. This is the unit that gets canonicalized and
/// fingerprinted; the fingerprint is the only part that lives on-chain.
/// File format: `.gov.json` in the canonical profile.
struct GovernanceModel {
  std::string model_id;
  std::string ontology_id;
  std::vector<Role> roles;
  std::vector<Power> powers;
  std::vector<Relation> relations;

  bool has_role(std::string_view name) const {
    return std::any_of(roles.begin(), roles.end(),
                       [&](const Role& r) { return r.name == name; });
  }

  bool has_power(std::string_view name) const {
    return std::any_of(powers.begin(), powers.end(),
                       [&](const Power& p) { return p.name == name; });
  }

  const Role& role(std::string_view name) const {
    auto it = std::find_if(roles.begin(), roles.end(),
                           [&](const Role& r) { return r.name == name; });
    if (it == roles.end())
      throw LookupError("unknown role \"" + std::string(name) + "\"");
    return *it;
  }

  /// Unique non-empty role and power names; every holder / from_role /
  /// to_role / via_power resolves. Throws ValidationError naming the
  /// first missing reference.
  void validate() const {
    std::set<std::string> role_names;
    for (const auto& r : roles) {
      if (r.name.empty()) throw ValidationError("role with empty name");
      if (!role_names.insert(r.name).second)
        throw ValidationError("duplicate role \"" + r.name + "\"");
    }
    std::set<std::string> power_names;
    for (const auto& p : powers) {
      if (p.name.empty()) throw ValidationError("power with empty name");
      if (!power_names.insert(p.name).second)
        throw ValidationError("duplicate power \"" + p.name + "\"");
      if (!role_names.count(p.holder))
        throw ValidationError("power \"" + p.name + "\" held by unknown role \"" +
                              p.holder + "\"");
    }
    for (const auto& rel : relations) {
      if (!role_names.count(rel.from_role))
        throw ValidationError("relation references unknown role \"" +
                              rel.from_role + "\"");
      if (!role_names.count(rel.to_role))
        throw ValidationError("relation references unknown role \"" +
                              rel.to_role + "\"");
      if (!power_names.count(rel.via_power))
        throw ValidationError("relation references unknown power \"" +
                              rel.via_power + "\"");
    }
  }

  Json to_json() const {
    std::vector<Role> rs = roles;
    std::sort(rs.begin(), rs.end(),
              [](const Role& a, const Role& b) { return a.name < b.name; });
    std::vector<Power> ps = powers;
    std::sort(ps.begin(), ps.end(),
              [](const Power& a, const Power& b) { return a.name < b.name; });
    std::vector<Relation> rels = relations;
    std::sort(rels.begin(), rels.end(),
              [](const Relation& a, const Relation& b) { return a.tie() < b.tie(); });

    Json out;
    out["model_id"] = model_id;
    out["ontology_id"] = ontology_id;
    Json jroles = Json::array();
    for (const auto& r : rs) {
      Json jr;
      jr["name"] = r.name;
      jr["description"] = r.description;
      jr["acquisition"] = r.acquisition;
      jr["cardinality"] = std::string(to_string(r.cardinality));
      jroles.push_back(std::move(jr));
    }
    out["roles"] = std::move(jroles);
    Json jpowers = Json::array();
    for (const auto& p : ps) {
      Json jp;
      jp["name"] = p.name;
      jp["holder"] = p.holder;
      jp["target"] = p.target;
      jp["effect"] = p.effect;
      jp["constraints"] = p.constraints;
      jpowers.push_back(std::move(jp));
    }
    out["powers"] = std::move(jpowers);
    Json jrels = Json::array();
    for (const auto& rel : rels) {
      Json jr;
      jr["kind"] = std::string(to_string(rel.kind));
      jr["from_role"] = rel.from_role;
      jr["to_role"] = rel.to_role;
      jr["via_power"] = rel.via_power;
      jrels.push_back(std::move(jr));
    }
    out["relations"] = std::move(jrels);
    return out;
  }

  static GovernanceModel from_json(const Json& j) {
    GovernanceModel m;
    try {
      m.model_id = j.at("model_id").get<std::string>();
      m.ontology_id = j.at("ontology_id").get<std::string>();
      for (const auto& jr : j.at("roles")) {
        Role r;
        r.name = jr.at("name").get<std::string>();
        r.description = jr.at("description").get<std::string>();
        r.acquisition = jr.at("acquisition").get<std::string>();
        r.cardinality = cardinality_from_string(jr.at("cardinality").get<std::string>());
        m.roles.push_back(std::move(r));
      }
      for (const auto& jp : j.at("powers")) {
        Power p;
        p.name = jp.at("name").get<std::string>();
        p.holder = jp.at("holder").get<std::string>();
        p.target = jp.at("target").get<std::string>();
        p.effect = jp.at("effect").get<std::string>();
        p.constraints = jp.at("constraints").get<std::vector<std::string>>();
        m.powers.push_back(std::move(p));
      }
      for (const auto& jr : j.at("relations")) {
        Relation rel;
        rel.kind = relation_kind_from_string(jr.at("kind").get<std::string>());
        rel.from_role = jr.at("from_role").get<std::string>();
        rel.to_role = jr.at("to_role").get<std::string>();
        rel.via_power = jr.at("via_power").get<std::string>();
        m.relations.push_back(std::move(rel));
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("malformed governance model: ") + e.what());
    }
    m.validate();
    return m;
  }
};

/// Deterministic byte encoding of a model. Role/power/relation ordering in
/// the input does not affect the output: identical models always produce
/// identical bytes, hence identical fingerprints.
inline Bytes canonicalize(const GovernanceModel& model) {
  model.validate();
  return canonical_bytes(model.to_json());
}

inline Digest model_fingerprint(const GovernanceModel& model) {
  return fingerprint(canonicalize(model));
}

/// All powers held by `role`, sorted by name.
inline std::vector<Power> query_powers(const GovernanceModel& model,
                                       std::string_view role) {
  if (!model.has_role(role))
    throw LookupError("unknown role \"" + std::string(role) + "\"");
  std::vector<Power> out;
  for (const auto& p : model.powers)
    if (p.holder == role) out.push_back(p);
  std::sort(out.begin(), out.end(),
            [](const Power& a, const Power& b) { return a.name < b.name; });
  return out;
}

/// All `checks` relations pointing at `role`.
inline std::vector<Relation> query_checks(const GovernanceModel& model,
                                          std::string_view role) {
  if (!model.has_role(role))
    throw LookupError("unknown role \"" + std::string(role) + "\"");
  std::vector<Relation> out;
  for (const auto& rel : model.relations)
    if (rel.kind == RelationKind::checks && rel.to_role == role)
      out.push_back(rel);
  std::sort(out.begin(), out.end(),
            [](const Relation& a, const Relation& b) { return a.tie() < b.tie(); });
  return out;
}

/// The built-in model of The DAO's governance: a single appointed curator
/// gatekeeping payouts and able to lower the voting quorum, token holders
/// who buy in by sending ether, and the child-split power that token
/// holders hold as the counterweight to the curator. There is no owner.
inline GovernanceModel build_the_dao_template() {
  GovernanceModel m;
  m.model_id = "standard-dao";
  m.ontology_id = "standard-blockchain-ontology";
  m.roles = {
      {"curator",
       "gatekeeper appointed at contract creation; screens which proposals may receive funds",
       "appointed when the contract is created", Cardinality::one},
      {"tokenHolder",
       "investor holding voting tokens issued by the contract",
       "send ether into the contract", Cardinality::many},
  };
  m.powers = {
      {"manage-whitelist", "curator", "payout whitelist",
       "add or remove addresses the contract is permitted to send ether to",
       {}},
      {"reduce-quorum", "curator", "voting quorum threshold",
       "lower the number of token holders required to establish voting quorum",
       {}},
      {"create-proposal", "tokenHolder", "proposal queue",
       "submit a new funding proposal for a vote",
       {"must hold at least one token"}},
      {"vote", "tokenHolder", "open proposals",
       "cast a vote for or against an open proposal",
       {"one vote per token held"}},
      {"split", "tokenHolder", "contract funds",
       "split off into a new child organization with a new curator, taking the holder's share of funds",
       {"takes effect only after a waiting period"}},
  };
  m.relations = {
      {RelationKind::checks, "tokenHolder", "curator", "split"},
  };
  return m;
}

}  // namespace govchain

#endif  // GOVCHAIN_GOVERNANCE_HPP
