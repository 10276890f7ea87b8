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

#ifndef GOVCHAIN_ONTOLOGY_HPP
#define GOVCHAIN_ONTOLOGY_HPP

#include <algorithm>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "govchain/canonical_json.hpp"
#include "govchain/digest.hpp"
#include "govchain/errors.hpp"

namespace govchain {

/// One vocabulary term. `parent` links into the same document's term set
/// and expresses is-a subsumption.
struct Term {
  std::string name;
  std::string definition;
  std::optional<std::string> parent;
};

/// The reference vocabulary a governance model is expressed against.
/// File format: `.onto.json` in the canonical profile.
struct OntologyDocument {
  std::string ontology_id;
  std::vector<Term> terms;

  /// Term names unique; every parent names an existing term; subsumption
  /// links form no cycle.
  void validate() const {
    std::set<std::string> names;
    for (const auto& t : terms) {
      if (t.name.empty()) throw ValidationError("ontology term with empty name");
      if (!names.insert(t.name).second)
        throw ValidationError("duplicate ontology term \"" + t.name + "\"");
    }
    for (const auto& t : terms) {
      if (t.parent && !names.count(*t.parent))
        throw ValidationError("term \"" + t.name + "\" has unknown parent \"" +
                              *t.parent + "\"");
    }
    // Walk each parent chain; a chain longer than the term count is a cycle.
    for (const auto& t : terms) {
      const Term* cur = &t;
      std::size_t steps = 0;
      while (cur->parent) {
        if (++steps > terms.size())
          throw ValidationError("cyclic subsumption involving term \"" + t.name + "\"");
        cur = &*std::find_if(terms.begin(), terms.end(), [&](const Term& u) {
          return u.name == *cur->parent;
        });
      }
    }
  }

  Json to_json() const {
    std::vector<Term> sorted = terms;
    std::sort(sorted.begin(), sorted.end(),
              [](const Term& a, const Term& b) { return a.name < b.name; });
    Json out;
    out["ontology_id"] = ontology_id;
    Json arr = Json::array();
    for (const auto& t : sorted) {
      Json jt;
      jt["name"] = t.name;
      jt["definition"] = t.definition;
      jt["parent"] = t.parent ? Json(*t.parent) : Json(nullptr);
      arr.push_back(std::move(jt));
    }
    out["terms"] = std::move(arr);
    return out;
  }

  static OntologyDocument from_json(const Json& j) {
    OntologyDocument doc;
    try {
      doc.ontology_id = j.at("ontology_id").get<std::string>();
      for (const auto& jt : j.at("terms")) {
        Term t;
        t.name = jt.at("name").get<std::string>();
        t.definition = jt.at("definition").get<std::string>();
        if (jt.contains("parent") && !jt.at("parent").is_null())
          t.parent = jt.at("parent").get<std::string>();
        doc.terms.push_back(std::move(t));
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("malformed ontology document: ") + e.what());
    }
    doc.validate();
    return doc;
  }
};

inline Bytes canonicalize(const OntologyDocument& doc) {
  doc.validate();
  return canonical_bytes(doc.to_json());
}

/// The built-in reference vocabulary disclosed alongside governance
/// models: a small taxonomy of organizational concepts.
inline OntologyDocument standard_blockchain_ontology() {
  OntologyDocument doc;
  doc.ontology_id = "standard-blockchain-ontology";
  doc.terms = {
      {"entity", "anything that can be named by the vocabulary", std::nullopt},
      {"agent", "an actor able to occupy roles and exercise powers", "entity"},
      {"organization", "a collective of agents coordinated by a contract", "entity"},
      {"role", "a named position an agent occupies within an organization", "entity"},
      {"power", "an authority a role holds over a resource or process", "entity"},
      {"relation", "a directed association between two roles", "entity"},
      {"checks", "a relation that balances another role's power", "relation"},
      {"delegates", "a relation that passes a power to another role", "relation"},
      {"appoints", "a relation that installs an agent into a role", "relation"},
  };
  return doc;
}

}  // namespace govchain

#endif  // GOVCHAIN_ONTOLOGY_HPP
