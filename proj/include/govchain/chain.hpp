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

#ifndef GOVCHAIN_CHAIN_HPP
#define GOVCHAIN_CHAIN_HPP

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "govchain/canonical_json.hpp"
#include "govchain/digest.hpp"
#include "govchain/errors.hpp"

namespace govchain {

/// 20-byte account address, rendered 0x-prefixed lowercase.
struct Address {
  std::array<std::uint8_t, 20> bytes{};

  static Address from_hex(std::string_view hex) {
    if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
    if (hex.size() != 40)
      throw ValidationError("address must be 40 hex characters, got " +
                            std::to_string(hex.size()));
    Address a;
    Bytes decoded = hex_decode(hex);
    std::copy(decoded.begin(), decoded.end(), a.bytes.begin());
    return a;
  }

  std::string hex() const { return "0x" + hex_encode(bytes); }

  bool is_zero() const {
    for (auto b : bytes)
      if (b != 0) return false;
    return true;
  }

  auto operator<=>(const Address&) const = default;
};

/// The on-chain governance disclosure: three fingerprints, nothing more.
/// A contract either discloses all three or is treated as non-disclosing.
struct Disclosure {
  Digest governance_digest;
  Digest ontology_digest;
  Digest annotated_source_digest;

  auto operator<=>(const Disclosure&) const = default;
};

enum class DisclosureField { governance, ontology, annotated_source };

inline std::string_view method_name(DisclosureField which) {
  switch (which) {
    case DisclosureField::governance: return "getGovernanceModel";
    case DisclosureField::ontology: return "getReferenceOntology";
    default: return "getAnnotatedSource";
  }
}

/// One row of a contract's on-chain familiarity table.
struct KnownTemplate {
  Digest governance;
  Digest ontology;

  auto operator<=>(const KnownTemplate&) const = default;
};

struct ContractAccount {
  Address address;
  std::optional<Disclosure> disclosure;
  std::vector<KnownTemplate> known_templates;
  std::map<std::string, Bytes> storage;
};

struct Transaction {
  std::uint64_t seq = 0;
  Address caller;
  Address target;
  std::string method;
  std::vector<Bytes> args;
  Bytes result;

  Json to_json() const {
    Json j;
    Json jargs = Json::array();
    for (const auto& a : args) jargs.push_back(hex_encode(a));
    j["args"] = std::move(jargs);
    j["caller"] = caller.hex();
    j["method"] = method;
    j["result"] = hex_encode(result);
    j["seq"] = seq;
    j["target"] = target.hex();
    return j;
  }

  static Transaction from_json(const Json& j) {
    Transaction tx;
    try {
      tx.seq = j.at("seq").get<std::uint64_t>();
      tx.caller = Address::from_hex(j.at("caller").get<std::string>());
      tx.target = Address::from_hex(j.at("target").get<std::string>());
      tx.method = j.at("method").get<std::string>();
      for (const auto& a : j.at("args"))
        tx.args.push_back(hex_decode(a.get<std::string>()));
      tx.result = hex_decode(j.at("result").get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("malformed transaction: ") + e.what());
    }
    return tx;
  }
};

inline Json transactions_to_json(const std::vector<Transaction>& txs) {
  Json arr = Json::array();
  for (const auto& tx : txs) arr.push_back(tx.to_json());
  return arr;
}

/// block_hash = fingerprint(prev_hash bytes ++ canonical encoding of the
/// transaction list). This is what daisy-chains the blocks.
inline Digest compute_block_hash(const Digest& prev_hash,
                                 const std::vector<Transaction>& txs) {
  Bytes material(prev_hash.bytes.begin(), prev_hash.bytes.end());
  Bytes encoded = canonical_bytes(transactions_to_json(txs));
  material.insert(material.end(), encoded.begin(), encoded.end());
  return fingerprint(material);
}

struct Block {
  std::uint64_t index = 0;
  Digest prev_hash;  // 32 zero bytes for block 0
  std::vector<Transaction> transactions;
  Digest block_hash;

  Json to_json() const {
    Json j;
    j["block_hash"] = block_hash.hex();
    j["index"] = index;
    j["prev_hash"] = prev_hash.hex();
    j["transactions"] = transactions_to_json(transactions);
    return j;
  }

  static Block from_json(const Json& j) {
    Block b;
    try {
      b.index = j.at("index").get<std::uint64_t>();
      b.prev_hash = Digest::from_hex(j.at("prev_hash").get<std::string>());
      b.block_hash = Digest::from_hex(j.at("block_hash").get<std::string>());
      for (const auto& jt : j.at("transactions"))
        b.transactions.push_back(Transaction::from_json(jt));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("malformed block: ") + e.what());
    }
    return b;
  }
};

/// Checks every block's hash invariant and every prev_hash linkage.
/// Returns the lowest violating index, or nullopt when the chain is valid.
inline std::optional<std::uint64_t> verify_chain(const std::vector<Block>& blocks) {
  Digest expected_prev;  // zero for the genesis block
  for (std::size_t i = 0; i < blocks.size(); ++i) {
    const Block& b = blocks[i];
    if (b.index != i) return i;
    if (b.prev_hash != expected_prev) return i;
    if (b.block_hash != compute_block_hash(b.prev_hash, b.transactions)) return i;
    expected_prev = b.block_hash;
  }
  return std::nullopt;
}

/// Deterministic simulated contract environment: accounts with storage,
/// synchronous logged calls, and a hash-chained block log. All mutations
/// go through one owner; sealed blocks are immutable.
class ChainEnvironment {
public:
  ChainEnvironment() = default;

  /// Creates a contract at a fresh deterministic address (fingerprint of
  /// the deployment sequence number, truncated to 20 bytes) and records
  /// the deployment in the pending set.
  Address deploy(std::optional<Disclosure> disclosure,
                 std::vector<KnownTemplate> known_templates = {}) {
    Address address = derive_address(deploy_count_);
    ++deploy_count_;

    ContractAccount account;
    account.address = address;
    account.disclosure = disclosure;
    account.known_templates = known_templates;
    accounts_.emplace(address, std::move(account));

    Json payload;
    if (disclosure) {
      Json jd;
      jd["annotated_source_digest"] = disclosure->annotated_source_digest.hex();
      jd["governance_digest"] = disclosure->governance_digest.hex();
      jd["ontology_digest"] = disclosure->ontology_digest.hex();
      payload["disclosure"] = std::move(jd);
    } else {
      payload["disclosure"] = nullptr;
    }
    Json jknown = Json::array();
    for (const auto& kt : known_templates) {
      Json jk;
      jk["governance_digest"] = kt.governance.hex();
      jk["ontology_digest"] = kt.ontology.hex();
      jknown.push_back(std::move(jk));
    }
    payload["known_templates"] = std::move(jknown);

    log_call(Address{}, address, "deploy", {canonical_bytes(payload)},
             Bytes(address.bytes.begin(), address.bytes.end()));
    return address;
  }

  /// Listing-style disclosure getter. The call is logged as a transaction.
  Digest call_disclosure(const Address& caller, const Address& target,
                         DisclosureField which) {
    const ContractAccount& account = this->account(target);
    if (!account.disclosure)
      throw NoDisclosureError("contract " + target.hex() +
                              " discloses no governance information");
    Digest value;
    switch (which) {
      case DisclosureField::governance:
        value = account.disclosure->governance_digest;
        break;
      case DisclosureField::ontology:
        value = account.disclosure->ontology_digest;
        break;
      case DisclosureField::annotated_source:
        value = account.disclosure->annotated_source_digest;
        break;
    }
    log_call(caller, target, std::string(method_name(which)), {},
             Bytes(value.bytes.begin(), value.bytes.end()));
    return value;
  }

  /// True iff `other`'s (governance, ontology) digest pair appears in
  /// `self`'s familiarity table. Absence of disclosure is unfamiliarity,
  /// not an error. Logged as one transaction.
  bool is_familiar_governance(const Address& self, const Address& other) {
    const ContractAccount& self_account = account(self);
    const ContractAccount& other_account = account(other);
    bool familiar = false;
    if (other_account.disclosure) {
      KnownTemplate pair{other_account.disclosure->governance_digest,
                         other_account.disclosure->ontology_digest};
      for (const auto& kt : self_account.known_templates)
        if (kt == pair) {
          familiar = true;
          break;
        }
    }
    log_call(self, other, "isFamiliarGovernance", {},
             Bytes{static_cast<std::uint8_t>(familiar ? 1 : 0)});
    return familiar;
  }

  /// Moves the pending transactions into a new sealed block.
  Block seal_block() {
    Block block;
    block.index = blocks_.size();
    block.prev_hash = blocks_.empty() ? Digest{} : blocks_.back().block_hash;
    block.transactions = std::move(pending_);
    pending_.clear();
    block.block_hash = compute_block_hash(block.prev_hash, block.transactions);
    blocks_.push_back(block);
    return block;
  }

  /// Appends a transaction to the pending set. Exposed so higher layers
  /// (the inference agent) can leave their decisions in the audit trail.
  std::uint64_t log_call(const Address& caller, const Address& target,
                         std::string method, std::vector<Bytes> args, Bytes result) {
    Transaction tx;
    tx.seq = next_seq_++;
    tx.caller = caller;
    tx.target = target;
    tx.method = std::move(method);
    tx.args = std::move(args);
    tx.result = std::move(result);
    pending_.push_back(std::move(tx));
    return pending_.back().seq;
  }

  bool has_account(const Address& address) const {
    return accounts_.count(address) > 0;
  }

  const ContractAccount& account(const Address& address) const {
    auto it = accounts_.find(address);
    if (it == accounts_.end())
      throw UnknownAddressError("no contract at " + address.hex());
    return it->second;
  }

  const std::vector<Block>& blocks() const { return blocks_; }
  std::size_t pending_count() const { return pending_.size(); }

  static Address derive_address(std::uint64_t deploy_seq) {
    Digest d = fingerprint(std::to_string(deploy_seq));
    Address a;
    std::copy(d.bytes.begin(), d.bytes.begin() + 20, a.bytes.begin());
    return a;
  }

  /// Rebuilds an environment from sealed blocks: verifies the chain, then
  /// replays every deployment. Getter and decision transactions carry no
  /// state, so replaying deployments reproduces the full account set.
  static ChainEnvironment replay(std::vector<Block> blocks) {
    if (auto bad = verify_chain(blocks))
      throw ValidationError("chain invalid at block " + std::to_string(*bad));
    ChainEnvironment env;
    std::optional<std::uint64_t> last_seq;
    for (const auto& block : blocks) {
      for (const auto& tx : block.transactions) {
        if (last_seq && tx.seq <= *last_seq)
          throw ValidationError("transaction sequence not strictly increasing at seq " +
                                std::to_string(tx.seq));
        last_seq = tx.seq;
        env.next_seq_ = tx.seq + 1;
        if (tx.method != "deploy") continue;
        if (tx.args.size() != 1)
          throw ValidationError("deploy transaction missing payload");
        Json payload = parse_json(tx.args[0]);
        ContractAccount account;
        account.address = tx.target;
        try {
          if (!payload.at("disclosure").is_null()) {
            const Json& jd = payload.at("disclosure");
            Disclosure d;
            d.governance_digest =
                Digest::from_hex(jd.at("governance_digest").get<std::string>());
            d.ontology_digest =
                Digest::from_hex(jd.at("ontology_digest").get<std::string>());
            d.annotated_source_digest =
                Digest::from_hex(jd.at("annotated_source_digest").get<std::string>());
            account.disclosure = d;
          }
          for (const auto& jk : payload.at("known_templates")) {
            KnownTemplate kt;
            kt.governance = Digest::from_hex(jk.at("governance_digest").get<std::string>());
            kt.ontology = Digest::from_hex(jk.at("ontology_digest").get<std::string>());
            account.known_templates.push_back(kt);
          }
        } catch (const nlohmann::json::exception& e) {
          throw ParseError(std::string("malformed deploy payload: ") + e.what());
        }
        if (account.address != derive_address(env.deploy_count_))
          throw ValidationError("deploy address does not match deployment order at " +
                                account.address.hex());
        ++env.deploy_count_;
        env.accounts_.emplace(account.address, std::move(account));
      }
    }
    env.blocks_ = std::move(blocks);
    return env;
  }

private:
  std::uint64_t next_seq_ = 0;
  std::uint64_t deploy_count_ = 0;
  std::map<Address, ContractAccount> accounts_;
  std::vector<Transaction> pending_;
  std::vector<Block> blocks_;
};

/// Chain file format: newline-delimited canonical JSON, one block per
/// line (`.chain.jsonl`).
inline void export_chain(const std::vector<Block>& blocks, std::ostream& out) {
  for (const auto& block : blocks) out << canonical_text(block.to_json()) << '\n';
}

inline void export_chain(const std::vector<Block>& blocks,
                         const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw StorageError("cannot write chain file " + path.string());
  export_chain(blocks, out);
}

/// Parses and verifies a chain file. Throws ValidationError naming the
/// first invalid block.
inline std::vector<Block> import_chain(std::istream& in) {
  std::vector<Block> blocks;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    blocks.push_back(Block::from_json(parse_json(line)));
  }
  if (auto bad = verify_chain(blocks))
    throw ValidationError("chain invalid at block " + std::to_string(*bad));
  return blocks;
}

inline std::vector<Block> import_chain(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StorageError("cannot read chain file " + path.string());
  return import_chain(in);
}

}  // namespace govchain

#endif  // GOVCHAIN_CHAIN_HPP
