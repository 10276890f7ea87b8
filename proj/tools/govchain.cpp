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
//
// Command-line front end: hash/publish documents into the content store,
// scan annotated source, manage the template registry, deploy simulated
// contracts, run the inference flow, and inspect chain and reputation state.
//
// Exit codes: 0 success, 1 domain error (not found / invalid / inconsistent),
// 2 usage error.

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "govchain/govchain.hpp"

namespace fs = std::filesystem;
using namespace govchain;

namespace {

struct CliConfig {
  fs::path cas_root = "cas";
  std::optional<Endpoint> cas_endpoint;
  fs::path chain_file = "govchain.chain.jsonl";
  fs::path registry_file = "registry.json";
  fs::path reputation_file = "reputation.rep.json";
  RiskRules rules;
};

Bytes read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StorageError("cannot read " + path.string());
  Bytes content((std::istreambuf_iterator<char>(in)),
                std::istreambuf_iterator<char>());
  return content;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw StorageError("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
}

std::string trim(std::string_view s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

/// Minimal key=value config reader: '#' comments, optional [section]
/// headers (ignored), optional quotes around values.
std::map<std::string, std::string> parse_config_file(const fs::path& path) {
  std::map<std::string, std::string> out;
  std::ifstream in(path);
  if (!in) throw StorageError("cannot read config file " + path.string());
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::string t = trim(line);
    if (t.empty() || t.front() == '[') continue;
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ValidationError("config line is not key=value: \"" + t + "\"");
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (value.size() >= 2 && ((value.front() == '"' && value.back() == '"') ||
                              (value.front() == '\'' && value.back() == '\'')))
      value = value.substr(1, value.size() - 2);
    out[key] = value;
  }
  return out;
}

/// Precedence: flags > environment > config file > defaults. Flags are
/// applied by CLI11 after this runs, so here we fold in file then env.
CliConfig resolve_config(const fs::path& config_path, bool config_explicit) {
  CliConfig config;
  std::map<std::string, std::string> file_values;
  if (fs::exists(config_path))
    file_values = parse_config_file(config_path);
  else if (config_explicit)
    throw StorageError("config file not found: " + config_path.string());

  auto file = [&](const char* key) -> std::optional<std::string> {
    auto it = file_values.find(key);
    if (it == file_values.end()) return std::nullopt;
    return it->second;
  };
  if (auto v = file("cas_root")) config.cas_root = *v;
  if (auto v = file("cas_endpoint"); v && !v->empty())
    config.cas_endpoint = parse_endpoint(*v);
  if (auto v = file("chain_file")) config.chain_file = *v;
  if (auto v = file("registry_file")) config.registry_file = *v;
  if (auto v = file("reputation_file")) config.reputation_file = *v;
  config.rules.apply(file_values);

  auto env = [](const char* name) -> std::optional<std::string> {
    const char* v = std::getenv(name);
    if (!v || !*v) return std::nullopt;
    return std::string(v);
  };
  if (auto v = env("GOVCHAIN_CAS_ROOT")) config.cas_root = *v;
  if (auto v = env("GOVCHAIN_CAS_ENDPOINT")) config.cas_endpoint = parse_endpoint(*v);
  if (auto v = env("GOVCHAIN_CHAIN_FILE")) config.chain_file = *v;
  return config;
}

ChainEnvironment load_chain_env(const CliConfig& config) {
  if (!fs::exists(config.chain_file)) return ChainEnvironment{};
  return ChainEnvironment::replay(import_chain(config.chain_file));
}

void save_chain(const ChainEnvironment& env, const CliConfig& config) {
  export_chain(env.blocks(), config.chain_file);
}

TemplateRegistry load_registry(const CliConfig& config) {
  if (!fs::exists(config.registry_file)) return TemplateRegistry{};
  return TemplateRegistry::from_json(parse_json(read_file(config.registry_file)));
}

void save_registry(const TemplateRegistry& registry, const CliConfig& config) {
  write_text(config.registry_file, canonical_text(registry.to_json()) + "\n");
}

ReputationLedger load_ledger(const CliConfig& config) {
  if (!fs::exists(config.reputation_file)) return ReputationLedger{};
  return ReputationLedger::from_json(parse_json(read_file(config.reputation_file)));
}

void save_ledger(const ReputationLedger& ledger, const CliConfig& config) {
  write_text(config.reputation_file, canonical_text(ledger.to_json()) + "\n");
}

Resolver make_resolver(const CliConfig& config) {
  if (config.cas_endpoint) return remote_resolver(*config.cas_endpoint);
  auto store = std::make_shared<CasStore>(config.cas_root);
  return [store](const Digest& digest) { return store->get(digest); };
}

Json bindings_to_json(const AnnotatedSource& source) {
  Json arr = Json::array();
  for (const auto& b : source.bindings) {
    Json j;
    j["entity_kind"] = std::string(to_string(b.entity_kind));
    j["entity_name"] = b.entity_name;
    j["instance_digest"] = b.instance_digest.hex();
    j["line"] = b.line;
    arr.push_back(std::move(j));
  }
  Json out;
  out["bindings"] = std::move(arr);
  out["source_digest"] = source.source_digest.hex();
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"content-addressed governance disclosure toolkit"};
  app.require_subcommand(1);

  std::string config_path = "govchain.toml";
  bool config_explicit = false;
  app.add_option("--config", config_path, "config file (key=value lines)")
      ->each([&](const std::string&) { config_explicit = true; });
  std::string flag_cas_root, flag_endpoint, flag_chain, flag_registry, flag_reputation;
  app.add_option("--cas-root", flag_cas_root, "content store root directory");
  app.add_option("--cas-endpoint", flag_endpoint, "remote content store host:port");
  app.add_option("--chain-file", flag_chain, "block log file (one JSON block per line)");
  app.add_option("--registry-file", flag_registry, "template registry file");
  app.add_option("--reputation-file", flag_reputation, "reputation ledger file");

  std::function<int(const CliConfig&)> action;

  // ---- hash ----------------------------------------------------------
  fs::path hash_file;
  auto* cmd_hash = app.add_subcommand("hash", "print the SHA-256 fingerprint of a file");
  cmd_hash->add_option("file", hash_file, "file to fingerprint")->required();
  cmd_hash->callback([&] {
    action = [&](const CliConfig&) {
      std::cout << fingerprint(read_file(hash_file)).hex() << "\n";
      return 0;
    };
  });

  // ---- publish -------------------------------------------------------
  fs::path publish_file;
  auto* cmd_publish =
      app.add_subcommand("publish", "store a file in the content store, print its digest");
  cmd_publish->add_option("file", publish_file, "file to store")->required();
  cmd_publish->callback([&] {
    action = [&](const CliConfig& config) {
      CasStore store(config.cas_root);
      std::cout << store.put(read_file(publish_file)).hex() << "\n";
      return 0;
    };
  });

  // ---- scan ----------------------------------------------------------
  fs::path scan_file;
  auto* cmd_scan = app.add_subcommand(
      "scan", "extract @OntoInstance annotation bindings from source text");
  cmd_scan->add_option("file", scan_file, "source file (.sol)")->required();
  cmd_scan->callback([&] {
    action = [&](const CliConfig&) {
      std::string text = to_string(read_file(scan_file));
      std::vector<Diagnostic> diagnostics;
      AnnotatedSource source;
      try {
        source = parse_annotations(text, &diagnostics);
      } catch (const ParseError& e) {
        for (const auto& d : diagnostics) std::cerr << format_diagnostic(d) << "\n";
        std::cerr << format_diagnostic({Severity::error, e.line(), e.what()}) << "\n";
        return 1;
      }
      for (const auto& d : diagnostics) std::cerr << format_diagnostic(d) << "\n";
      std::cout << canonical_text(bindings_to_json(source)) << "\n";
      return 0;
    };
  });

  // ---- template ------------------------------------------------------
  auto* cmd_template =
      app.add_subcommand("template", "emit a built-in document on stdout");
  cmd_template->require_subcommand(1);
  auto emit = [&action](std::function<Bytes()> produce) {
    return [&action, produce = std::move(produce)] {
      action = [produce](const CliConfig&) {
        Bytes bytes = produce();
        std::cout.write(reinterpret_cast<const char*>(bytes.data()),
                        static_cast<std::streamsize>(bytes.size()));
        return 0;
      };
    };
  };
  cmd_template->add_subcommand("dao", "built-in governance model (.gov.json)")
      ->callback(emit([] { return canonicalize(build_the_dao_template()); }));
  cmd_template->add_subcommand("ontology", "built-in reference vocabulary (.onto.json)")
      ->callback(emit([] { return canonicalize(standard_blockchain_ontology()); }));
  cmd_template->add_subcommand("source", "annotated source for the built-in model (.sol)")
      ->callback(emit([] { return to_bytes(dao_source_text()); }));
  std::string instance_name;
  auto* cmd_instance = cmd_template->add_subcommand(
      "instance", "built-in ontology-instance document (.inst.json)");
  cmd_instance->add_option("name", instance_name, "curator | tokenholder")->required();
  cmd_instance->callback([&] {
    action = [&](const CliConfig&) {
      if (instance_name == "curator") {
        Bytes b = canonicalize(dao_curator_instance());
        std::cout.write(reinterpret_cast<const char*>(b.data()),
                        static_cast<std::streamsize>(b.size()));
      } else if (instance_name == "tokenholder" || instance_name == "token-holder") {
        Bytes b = canonicalize(dao_token_holder_instance());
        std::cout.write(reinterpret_cast<const char*>(b.data()),
                        static_cast<std::streamsize>(b.size()));
      } else {
        throw LookupError("unknown instance \"" + instance_name +
                          "\" (expected curator or tokenholder)");
      }
      return 0;
    };
  });

  // ---- registry ------------------------------------------------------
  auto* cmd_registry = app.add_subcommand("registry", "manage the template registry");
  cmd_registry->require_subcommand(1);
  fs::path registry_gov_file;
  std::string registry_name, registry_policy = "accept", registry_onto;
  auto* cmd_registry_add =
      cmd_registry->add_subcommand("add", "register a governance model file");
  cmd_registry_add->add_option("gov", registry_gov_file, "governance model (.gov.json)")
      ->required();
  cmd_registry_add->add_option("--name", registry_name, "template name")->required();
  cmd_registry_add->add_option("--policy", registry_policy, "accept | reject")
      ->check(CLI::IsMember({"accept", "reject"}));
  cmd_registry_add->add_option(
      "--onto", registry_onto,
      "digest of the template's ontology document (default: built-in vocabulary)");
  cmd_registry_add->callback([&] {
    action = [&](const CliConfig& config) {
      GovernanceModel model =
          GovernanceModel::from_json(parse_json(read_file(registry_gov_file)));
      TemplateRegistry registry = load_registry(config);
      std::optional<Digest> onto;
      if (!registry_onto.empty()) onto = Digest::from_hex(registry_onto);
      const RegistryEntry& entry =
          registry.add(registry_name, std::move(model),
                       policy_from_string(registry_policy), onto);
      save_registry(registry, config);
      std::cout << entry.governance_digest.hex() << "\n";
      return 0;
    };
  });
  auto* cmd_registry_show = cmd_registry->add_subcommand("show", "print the registry");
  cmd_registry_show->callback([&] {
    action = [&](const CliConfig& config) {
      std::cout << canonical_text(load_registry(config).to_json()) << "\n";
      return 0;
    };
  });

  // ---- deploy --------------------------------------------------------
  std::string deploy_gov, deploy_onto, deploy_src;
  std::vector<std::string> deploy_known;
  auto* cmd_deploy = app.add_subcommand(
      "deploy", "create a simulated contract, seal a block, print its address");
  auto* opt_gov =
      cmd_deploy->add_option("--gov", deploy_gov, "disclosed governance digest");
  auto* opt_onto =
      cmd_deploy->add_option("--onto", deploy_onto, "disclosed ontology digest");
  auto* opt_src = cmd_deploy->add_option("--src", deploy_src,
                                         "disclosed annotated-source digest");
  opt_gov->needs(opt_onto)->needs(opt_src);
  opt_onto->needs(opt_gov)->needs(opt_src);
  opt_src->needs(opt_gov)->needs(opt_onto);
  cmd_deploy->add_option("--know", deploy_known,
                         "familiar template as GOV_DIGEST:ONTO_DIGEST (repeatable)");
  cmd_deploy->callback([&] {
    action = [&](const CliConfig& config) {
      ChainEnvironment env = load_chain_env(config);
      std::optional<Disclosure> disclosure;
      if (!deploy_gov.empty())
        disclosure = Disclosure{Digest::from_hex(deploy_gov),
                                Digest::from_hex(deploy_onto),
                                Digest::from_hex(deploy_src)};
      std::vector<KnownTemplate> known;
      for (const auto& pair : deploy_known) {
        auto colon = pair.find(':');
        if (colon == std::string::npos)
          throw ValidationError("--know expects GOV_DIGEST:ONTO_DIGEST");
        known.push_back(KnownTemplate{Digest::from_hex(pair.substr(0, colon)),
                                      Digest::from_hex(pair.substr(colon + 1))});
      }
      Address address = env.deploy(disclosure, known);
      env.seal_block();
      save_chain(env, config);
      std::cout << address.hex() << "\n";
      return 0;
    };
  });

  // ---- infer ---------------------------------------------------------
  std::string infer_self, infer_other;
  auto* cmd_infer = app.add_subcommand(
      "infer", "run the on-chain decision between two contracts, seal a block");
  cmd_infer->add_option("--self", infer_self, "deciding contract address")->required();
  cmd_infer->add_option("--other", infer_other, "counterparty contract address")
      ->required();
  cmd_infer->callback([&] {
    action = [&](const CliConfig& config) {
      ChainEnvironment env = load_chain_env(config);
      TemplateRegistry registry = load_registry(config);
      Decision decision = decide(env, Address::from_hex(infer_self),
                                 Address::from_hex(infer_other), registry);
      env.seal_block();
      save_chain(env, config);
      Json j;
      j["basis"] = decision.basis;
      j["outcome"] = std::string(to_string(decision.outcome));
      std::cout << canonical_text(j) << "\n";
      return 0;
    };
  });

  // ---- assess --------------------------------------------------------
  std::string assess_other;
  auto* cmd_assess = app.add_subcommand(
      "assess",
      "resolve a contract's disclosed documents and print a structural risk report");
  cmd_assess->add_option("--other", assess_other, "contract address to assess")
      ->required();
  cmd_assess->callback([&] {
    action = [&](const CliConfig& config) {
      ChainEnvironment env = load_chain_env(config);
      Address other = Address::from_hex(assess_other);
      const ContractAccount& account = env.account(other);
      if (!account.disclosure)
        throw NoDisclosureError("contract " + other.hex() +
                                " discloses no governance information");
      RiskReport report =
          off_chain_assess(*account.disclosure, make_resolver(config),
                           standard_blockchain_ontology(), config.rules, other);
      std::string text = canonical_text(report.to_json());
      std::cout << text << "\n";
      fs::path dir = config.reputation_file.parent_path();
      if (dir.empty()) dir = ".";
      write_text(dir / (other.hex() + ".risk.json"), text + "\n");
      ReputationLedger ledger = load_ledger(config);
      update_reputation(ledger, other, report);
      save_ledger(ledger, config);
      return 0;
    };
  });

  // ---- chain ---------------------------------------------------------
  auto* cmd_chain = app.add_subcommand("chain", "inspect the block log");
  cmd_chain->require_subcommand(1);
  auto* cmd_chain_verify =
      cmd_chain->add_subcommand("verify", "check every block hash and linkage");
  cmd_chain_verify->callback([&] {
    action = [&](const CliConfig& config) {
      std::vector<Block> blocks;
      if (fs::exists(config.chain_file)) {
        std::ifstream in(config.chain_file, std::ios::binary);
        if (!in) throw StorageError("cannot read chain file " +
                                    config.chain_file.string());
        std::string line;
        while (std::getline(in, line)) {
          if (line.empty()) continue;
          blocks.push_back(Block::from_json(parse_json(line)));
        }
      }
      if (auto bad = verify_chain(blocks)) {
        std::cout << "invalid at block " << *bad << "\n";
        return 1;
      }
      std::cout << "valid\n";
      return 0;
    };
  });

  // ---- reputation ----------------------------------------------------
  auto* cmd_reputation = app.add_subcommand("reputation", "inspect the reputation ledger");
  cmd_reputation->require_subcommand(1);
  std::string reputation_addr;
  auto* cmd_reputation_show =
      cmd_reputation->add_subcommand("show", "print ledger state (all or one address)");
  cmd_reputation_show->add_option("address", reputation_addr, "contract address");
  cmd_reputation_show->callback([&] {
    action = [&](const CliConfig& config) {
      ReputationLedger ledger = load_ledger(config);
      if (reputation_addr.empty()) {
        std::cout << canonical_text(ledger.to_json()) << "\n";
        return 0;
      }
      Address address = Address::from_hex(reputation_addr);
      Json j;
      j["address"] = address.hex();
      Json jev = Json::array();
      auto it = ledger.entries().find(address);
      if (it != ledger.entries().end())
        for (const auto& ev : it->second.evidence) {
          Json je;
          je["report_digest"] = ev.report_digest.hex();
          je["verdict"] = std::string(to_string(ev.verdict));
          jev.push_back(std::move(je));
        }
      j["evidence"] = std::move(jev);
      j["status"] = std::string(to_string(ledger.status(address)));
      std::cout << canonical_text(j) << "\n";
      return 0;
    };
  });

  // ---- serve ---------------------------------------------------------
  std::string serve_host = "127.0.0.1";
  std::uint16_t serve_port = kDefaultCasPort;
  auto* cmd_serve =
      app.add_subcommand("serve", "serve the content store over the fetch protocol");
  cmd_serve->add_option("--host", serve_host, "bind address");
  cmd_serve->add_option("--port", serve_port, "TCP port (0 = ephemeral)");
  cmd_serve->callback([&] {
    action = [&](const CliConfig& config) {
      CasStore store(config.cas_root);
      CasServer server(store, serve_host, serve_port);
      server.start();
      std::cout << "listening on " << serve_host << ":" << server.port()
                << std::endl;
      while (true) std::this_thread::sleep_for(std::chrono::seconds(1));
      return 0;  // unreachable; terminated by signal
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    CliConfig config = resolve_config(config_path, config_explicit);
    if (!flag_cas_root.empty()) config.cas_root = flag_cas_root;
    if (!flag_endpoint.empty()) config.cas_endpoint = parse_endpoint(flag_endpoint);
    if (!flag_chain.empty()) config.chain_file = flag_chain;
    if (!flag_registry.empty()) config.registry_file = flag_registry;
    if (!flag_reputation.empty()) config.reputation_file = flag_reputation;
    return action(config);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
