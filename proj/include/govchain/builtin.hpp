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

#ifndef GOVCHAIN_BUILTIN_HPP
#define GOVCHAIN_BUILTIN_HPP

#include <string>

#include "govchain/annotations.hpp"
#include "govchain/canonical_json.hpp"
#include "govchain/digest.hpp"
#include "govchain/governance.hpp"
#include "govchain/ontology.hpp"

namespace govchain {

/// Instance document the curator annotation points at.
inline InstanceDocument dao_curator_instance() {
  InstanceDocument doc;
  doc.instance_id = "dao-curator";
  doc.role_or_power = "curator";
  doc.ontology_id = "standard-blockchain-ontology";
  doc.notes =
      "Single curator appointed when the contract is created; gatekeeps the "
      "payout whitelist and may lower the voting quorum.";
  return doc;
}

/// Instance document the token-holder annotation points at.
inline InstanceDocument dao_token_holder_instance() {
  InstanceDocument doc;
  doc.instance_id = "dao-token-holder";
  doc.role_or_power = "tokenHolder";
  doc.ontology_id = "standard-blockchain-ontology";
  doc.notes =
      "Anyone who sends ether into the contract; may create proposals, vote, "
      "and split away into a child fund.";
  return doc;
}

/// Annotated source for the built-in template. The two embedded annotation
/// digests are the fingerprints of the built-in instance documents, so the
/// whole built-in disclosure set is internally consistent by construction.
inline std::string dao_source_text() {
  std::string curator = fingerprint(canonicalize(dao_curator_instance())).hex();
  std::string holder = fingerprint(canonicalize(dao_token_holder_instance())).hex();
  std::string text;
  text += "pragma solidity ^0.4.6;\n";
  text += "\n";
  text += "/// Simplified decentralized venture fund with disclosed governance.\n";
  text += "contract StandardDao {\n";
  text += "\n";
  text += "    /** @ontoInstance 0x" + curator + " */\n";
  text += "    address curator;\n";
  text += "\n";
  text += "    /** @ontoInstance 0x" + holder + " */\n";
  text += "    address[] tokenHolders;\n";
  text += "\n";
  text += "    mapping (address => uint256) balances;\n";
  text += "    mapping (address => bool) allowedRecipients;\n";
  text += "    uint256 minQuorumDivisor;\n";
  text += "\n";
  text += "    function StandardDao(address _curator) {\n";
  text += "        curator = _curator;\n";
  text += "    }\n";
  text += "\n";
  text += "    modifier onlyTokenholders {\n";
  text += "        if (balances[msg.sender] == 0) throw;\n";
  text += "        _;\n";
  text += "    }\n";
  text += "\n";
  text += "    function changeAllowedRecipients(address _recipient, bool _allowed)\n";
  text += "        external returns (bool _success) {\n";
  text += "        if (msg.sender != curator) throw;\n";
  text += "        allowedRecipients[_recipient] = _allowed;\n";
  text += "        return true;\n";
  text += "    }\n";
  text += "\n";
  text += "    function halveMinQuorum() returns (bool _success) {\n";
  text += "        if (msg.sender != curator) throw;\n";
  text += "        minQuorumDivisor *= 2;\n";
  text += "        return true;\n";
  text += "    }\n";
  text += "\n";
  text += "    function newProposal(address _recipient, uint256 _amount)\n";
  text += "        onlyTokenholders returns (uint256 _proposalID) {\n";
  text += "        return 0;\n";
  text += "    }\n";
  text += "\n";
  text += "    function vote(uint256 _proposalID, bool _supportsProposal)\n";
  text += "        onlyTokenholders returns (uint256 _voteID) {\n";
  text += "        return 0;\n";
  text += "    }\n";
  text += "\n";
  text += "    function splitDAO(uint256 _proposalID, address _newCurator)\n";
  text += "        onlyTokenholders returns (bool _success) {\n";
  text += "        return true;\n";
  text += "    }\n";
  text += "}\n";
  return text;
}

inline AnnotatedSource dao_annotated_source() {
  return parse_annotations(dao_source_text());
}

}  // namespace govchain

#endif  // GOVCHAIN_BUILTIN_HPP
