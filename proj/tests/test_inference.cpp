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

#include <algorithm>

#include <catch2/catch_amalgamated.hpp>

#include "govchain/builtin.hpp"
#include "govchain/inference.hpp"
#include "test_util.hpp"

using namespace govchain;

namespace {

bool has_finding(const RiskReport& report, FindingCode code) {
  return std::any_of(report.findings.begin(), report.findings.end(),
                     [&](const Finding& f) { return f.code == code; });
}

bool has_finding(const RiskReport& report, FindingCode code,
                 const std::string& subject) {
  return std::any_of(report.findings.begin(), report.findings.end(),
                     [&](const Finding& f) {
                       return f.code == code && f.subject == subject;
                     });
}

Digest standard_ontology_digest() {
  return fingerprint(canonicalize(standard_blockchain_ontology()));
}

}  // namespace

// ---------------------------------------------------------------------------
// Template registry
// ---------------------------------------------------------------------------

TEST_CASE("registry entries are keyed by the model fingerprint") {
  TemplateRegistry registry;
  const RegistryEntry& entry =
      registry.add("standard-dao", build_the_dao_template(), Policy::accept);
  CHECK(entry.governance_digest == model_fingerprint(build_the_dao_template()));
  CHECK(entry.ontology_digest == standard_ontology_digest());
  REQUIRE(registry.find(entry.governance_digest) != nullptr);
  CHECK(registry.find(entry.governance_digest)->name == "standard-dao");
  CHECK(registry.find(fingerprint("nope")) == nullptr);
}

TEST_CASE("registry round-trips through json") {
  TemplateRegistry registry;
  registry.add("standard-dao", build_the_dao_template(), Policy::accept);
  registry.add("checked-committee", testutil::build_checked_committee_model(),
               Policy::reject);
  TemplateRegistry back = TemplateRegistry::from_json(
      parse_json(canonical_text(registry.to_json())));
  CHECK(back.size() == 2);
  const RegistryEntry* entry = back.find(model_fingerprint(build_the_dao_template()));
  REQUIRE(entry != nullptr);
  CHECK(entry->policy == Policy::accept);
}

TEST_CASE("a registry entry whose model does not hash to its key is rejected") {
  TemplateRegistry registry;
  registry.add("standard-dao", build_the_dao_template(), Policy::accept);
  Json j = registry.to_json();
  // Swap in a different model under the same claimed key.
  j["entries"][0]["model"]["model_id"] = "impostor";
  CHECK_THROWS_AS(TemplateRegistry::from_json(j), IntegrityError);
}

// ---------------------------------------------------------------------------
// decide: the on-chain branch
// ---------------------------------------------------------------------------

namespace {

struct DecideFixture {
  ChainEnvironment env;
  TemplateRegistry registry;
  Address self;
  Disclosure dao_disclosure;

  DecideFixture() {
    registry.add("standard-dao", build_the_dao_template(), Policy::accept);
    dao_disclosure.governance_digest = model_fingerprint(build_the_dao_template());
    dao_disclosure.ontology_digest = standard_ontology_digest();
    dao_disclosure.annotated_source_digest =
        fingerprint(to_bytes(dao_source_text()));
    self = env.deploy(std::nullopt,
                      {KnownTemplate{dao_disclosure.governance_digest,
                                     dao_disclosure.ontology_digest}});
  }
};

}  // namespace

TEST_CASE("registered template with accept policy proceeds") {
  DecideFixture fx;
  Address other = fx.env.deploy(fx.dao_disclosure);
  Decision d = decide(fx.env, fx.self, other, fx.registry);
  CHECK(d.outcome == Outcome::proceed);
  CHECK(d.basis == "standard-dao");
}

TEST_CASE("registered template with reject policy rejects") {
  DecideFixture fx;
  fx.registry.add("standard-dao", build_the_dao_template(), Policy::reject);
  Address other = fx.env.deploy(fx.dao_disclosure);
  Decision d = decide(fx.env, fx.self, other, fx.registry);
  CHECK(d.outcome == Outcome::reject);
  CHECK(d.basis == "standard-dao");
}

TEST_CASE("unknown template delegates off-chain") {
  DecideFixture fx;
  Disclosure novel = fx.dao_disclosure;
  novel.governance_digest = fingerprint("a governance model nobody registered");
  Address other = fx.env.deploy(novel);
  Decision d = decide(fx.env, fx.self, other, fx.registry);
  CHECK(d.outcome == Outcome::delegate_off_chain);
  CHECK(d.basis == "unknown template");
}

TEST_CASE("registered template with mismatched ontology delegates") {
  DecideFixture fx;
  Disclosure off = fx.dao_disclosure;
  off.ontology_digest = fingerprint("some other vocabulary");
  Address other = fx.env.deploy(off);
  Decision d = decide(fx.env, fx.self, other, fx.registry);
  CHECK(d.outcome == Outcome::delegate_off_chain);
  CHECK(d.basis == "ontology mismatch");
}

TEST_CASE("missing disclosure delegates") {
  DecideFixture fx;
  Address other = fx.env.deploy(std::nullopt);
  Decision d = decide(fx.env, fx.self, other, fx.registry);
  CHECK(d.outcome == Outcome::delegate_off_chain);
  CHECK(d.basis == "no disclosure");
}

TEST_CASE("decide on unknown addresses is an error") {
  DecideFixture fx;
  Address ghost = ChainEnvironment::derive_address(77);
  CHECK_THROWS_AS(decide(fx.env, fx.self, ghost, fx.registry), UnknownAddressError);
  CHECK_THROWS_AS(decide(fx.env, ghost, fx.self, fx.registry), UnknownAddressError);
}

TEST_CASE("decide records its outcome as a transaction") {
  DecideFixture fx;
  Address other = fx.env.deploy(fx.dao_disclosure);
  fx.env.seal_block();
  decide(fx.env, fx.self, other, fx.registry);
  Block block = fx.env.seal_block();
  REQUIRE_FALSE(block.transactions.empty());
  const Transaction& last = block.transactions.back();
  CHECK(last.method == "decide");
  CHECK(to_string(last.args.at(0)) == "standard-dao");
  CHECK(last.result == Bytes{1});
}

TEST_CASE("on-chain decisions perform zero content-store fetches") {
  DecideFixture fx;
  testutil::CountingResolver store;
  testutil::publish_dao_documents(store);
  Address other = fx.env.deploy(fx.dao_disclosure);

  InferenceResult result = run_inference(fx.env, fx.self, other, fx.registry,
                                         store.resolver());
  CHECK(result.decision.outcome == Outcome::proceed);
  CHECK_FALSE(result.report.has_value());
  CHECK(store.calls() == 0);
}

TEST_CASE("decide never proceeds or rejects on unregistered disclosures") {
  auto rng = testutil::make_rng(0x5eed5001);
  for (int i = 0; i < 60; ++i) {
    ChainEnvironment env;
    TemplateRegistry registry;
    // Register a few random models.
    int registered = static_cast<int>(rng() % 3);
    for (int k = 0; k < registered; ++k)
      registry.add("t" + std::to_string(k), testutil::random_model(rng),
                   (rng() & 1) ? Policy::accept : Policy::reject);
    Address self = env.deploy(std::nullopt);
    Disclosure d;
    d.governance_digest = fingerprint(testutil::random_bytes(rng, 16));
    d.ontology_digest = fingerprint(testutil::random_bytes(rng, 16));
    d.annotated_source_digest = fingerprint(testutil::random_bytes(rng, 16));
    Address other = env.deploy(d);
    Decision decision = decide(env, self, other, registry);
    if (decision.outcome != Outcome::delegate_off_chain) {
      // Only allowed when the pair is genuinely registered.
      const RegistryEntry* entry = registry.find(d.governance_digest);
      REQUIRE(entry != nullptr);
      REQUIRE(entry->ontology_digest == d.ontology_digest);
    }
  }
}

// ---------------------------------------------------------------------------
// off_chain_assess
// ---------------------------------------------------------------------------

TEST_CASE("built-in template assessment is risky for the documented reasons") {
  testutil::CountingResolver store;
  Disclosure d = testutil::publish_dao_documents(store);
  RiskReport report = off_chain_assess(d, store.resolver(),
                                       standard_blockchain_ontology());
  CHECK(report.verdict == Verdict::risky);
  CHECK(has_finding(report, FindingCode::quorum_manipulation_power, "curator"));
  CHECK(has_finding(report, FindingCode::no_owner_role));
  CHECK_FALSE(has_finding(report, FindingCode::unresolved_document));
  CHECK_FALSE(has_finding(report, FindingCode::missing_annotation));
  // curator's unconstrained powers are checked via the split relation.
  CHECK_FALSE(has_finding(report, FindingCode::unchecked_privileged_role));
}

TEST_CASE("findings are sorted by code then subject") {
  testutil::CountingResolver store;
  Disclosure d = testutil::publish_dao_documents(store);
  RiskReport report = off_chain_assess(d, store.resolver(),
                                       standard_blockchain_ontology());
  auto sorted = report.findings;
  std::sort(sorted.begin(), sorted.end(),
            [](const Finding& a, const Finding& b) { return a.tie() < b.tie(); });
  REQUIRE(report.findings.size() == sorted.size());
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    CHECK(report.findings[i].code == sorted[i].code);
    CHECK(report.findings[i].subject == sorted[i].subject);
  }
}

TEST_CASE("checked-committee fixture assesses as acceptable") {
  testutil::CountingResolver store;
  Disclosure d = testutil::publish_checked_committee(store);
  RiskReport report = off_chain_assess(d, store.resolver(),
                                       standard_blockchain_ontology());
  CHECK(report.findings.empty());
  CHECK(report.verdict == Verdict::acceptable);
}

TEST_CASE("removing any one document makes the assessment unverifiable") {
  for (int which = 0; which < 3; ++which) {
    testutil::CountingResolver store;
    Disclosure d = testutil::publish_dao_documents(store);
    Digest victim = which == 0   ? d.governance_digest
                    : which == 1 ? d.ontology_digest
                                 : d.annotated_source_digest;
    store.erase(victim);
    RiskReport report = off_chain_assess(d, store.resolver(),
                                         standard_blockchain_ontology());
    CHECK(report.verdict == Verdict::unverifiable);
    CHECK(has_finding(report, FindingCode::unresolved_document));
  }
}

TEST_CASE("an unconstrained unchecked role is flagged") {
  testutil::CountingResolver store;
  GovernanceModel m;
  m.model_id = "solo";
  m.ontology_id = "standard-blockchain-ontology";
  m.roles = {{"dictator", "sole controller", "appointed", Cardinality::one}};
  m.powers = {{"rule", "dictator", "everything", "do as it pleases", {}}};
  Disclosure d;
  d.governance_digest = store.put(canonicalize(m));
  d.ontology_digest = store.put(canonicalize(standard_blockchain_ontology()));
  d.annotated_source_digest = store.put(to_bytes("contract Solo { }\n"));
  RiskReport report = off_chain_assess(d, store.resolver(),
                                       standard_blockchain_ontology());
  CHECK(report.verdict == Verdict::risky);
  CHECK(has_finding(report, FindingCode::unchecked_privileged_role, "dictator"));
  // The single role is also unannotated.
  CHECK(has_finding(report, FindingCode::missing_annotation, "dictator"));
}

TEST_CASE("vocabulary disagreement is an ontology mismatch") {
  testutil::CountingResolver store;
  Disclosure d = testutil::publish_dao_documents(store);
  OntologyDocument other;
  other.ontology_id = "different-vocabulary";
  other.terms = {{"thing", "anything", std::nullopt}};
  d.ontology_digest = store.put(canonicalize(other));
  RiskReport report = off_chain_assess(d, store.resolver(),
                                       standard_blockchain_ontology());
  CHECK(report.verdict == Verdict::risky);
  CHECK(has_finding(report, FindingCode::ontology_mismatch, "different-vocabulary"));
}

TEST_CASE("missing instance documents surface as missing annotations") {
  testutil::CountingResolver store;
  Disclosure d = testutil::publish_dao_documents(store);
  store.erase(fingerprint(canonicalize(dao_curator_instance())));
  RiskReport report = off_chain_assess(d, store.resolver(),
                                       standard_blockchain_ontology());
  // Still risky (quorum rule), with missing-annotation evidence on top.
  CHECK(report.verdict == Verdict::risky);
  CHECK(has_finding(report, FindingCode::missing_annotation, "curator"));
}

TEST_CASE("rules can be individually switched off") {
  testutil::CountingResolver store;
  Disclosure d = testutil::publish_dao_documents(store);

  RiskRules rules;
  rules.quorum_manipulation_power = false;
  RiskReport report =
      off_chain_assess(d, store.resolver(), standard_blockchain_ontology(), rules);
  CHECK_FALSE(has_finding(report, FindingCode::quorum_manipulation_power));
  // With the only dangerous rule disabled, the verdict relaxes.
  CHECK(report.verdict == Verdict::acceptable);
  CHECK(has_finding(report, FindingCode::no_owner_role));

  rules = RiskRules{};
  rules.no_owner_role = false;
  report =
      off_chain_assess(d, store.resolver(), standard_blockchain_ontology(), rules);
  CHECK_FALSE(has_finding(report, FindingCode::no_owner_role));
  CHECK(report.verdict == Verdict::risky);
}

TEST_CASE("rule toggles parse from key=value configuration") {
  RiskRules rules;
  rules.apply({{"quorum_manipulation_power", "off"},
               {"no_owner_role", "false"},
               {"missing_annotation", "0"},
               {"unrelated_key", "whatever"}});
  CHECK_FALSE(rules.quorum_manipulation_power);
  CHECK_FALSE(rules.no_owner_role);
  CHECK_FALSE(rules.missing_annotation);
  CHECK(rules.unchecked_privileged_role);
  CHECK(rules.ontology_mismatch);
  CHECK_THROWS_AS(rules.apply({{"no_owner_role", "maybe"}}), ValidationError);
}

TEST_CASE("assessment is deterministic given fixed store contents") {
  testutil::CountingResolver store;
  Disclosure d = testutil::publish_dao_documents(store);
  RiskReport a = off_chain_assess(d, store.resolver(),
                                  standard_blockchain_ontology());
  RiskReport b = off_chain_assess(d, store.resolver(),
                                  standard_blockchain_ontology());
  CHECK(canonical_text(a.to_json()) == canonical_text(b.to_json()));
}

TEST_CASE("delegated inference produces a report for disclosed contracts") {
  ChainEnvironment env;
  TemplateRegistry registry;  // empty: everything delegates
  testutil::CountingResolver store;
  Disclosure d = testutil::publish_dao_documents(store);
  Address self = env.deploy(std::nullopt);
  Address other = env.deploy(d);
  InferenceResult result =
      run_inference(env, self, other, registry, store.resolver(),
                    standard_blockchain_ontology());
  CHECK(result.decision.outcome == Outcome::delegate_off_chain);
  REQUIRE(result.report.has_value());
  CHECK(result.report->verdict == Verdict::risky);
  CHECK(result.report->contract == other);
  CHECK(store.calls() > 0);
}

// ---------------------------------------------------------------------------
// Reputation
// ---------------------------------------------------------------------------

namespace {

RiskReport make_report(Verdict verdict, std::vector<FindingCode> codes = {}) {
  RiskReport report;
  report.contract = ChainEnvironment::derive_address(1);
  for (FindingCode code : codes)
    report.findings.push_back({code, "subject", "detail"});
  report.verdict = verdict;
  return report;
}

}  // namespace

TEST_CASE("reputation transitions follow the documented ladder") {
  Address c = ChainEnvironment::derive_address(1);
  ReputationLedger ledger;
  CHECK(ledger.status(c) == Status::trusted);

  // acceptable: no change, evidence recorded
  update_reputation(ledger, c, make_report(Verdict::acceptable));
  CHECK(ledger.status(c) == Status::trusted);
  CHECK(ledger.entries().at(c).evidence.size() == 1);

  // structural risk alone does not flag
  update_reputation(ledger, c,
                    make_report(Verdict::risky,
                                {FindingCode::quorum_manipulation_power}));
  CHECK(ledger.status(c) == Status::trusted);

  // unverifiable flags
  update_reputation(ledger, c, make_report(Verdict::unverifiable,
                                           {FindingCode::unresolved_document}));
  CHECK(ledger.status(c) == Status::flagged);

  // risky with a dishonesty signal after flagged blacklists
  update_reputation(ledger, c,
                    make_report(Verdict::risky, {FindingCode::missing_annotation}));
  CHECK(ledger.status(c) == Status::blacklisted);

  // nothing rehabilitates
  update_reputation(ledger, c, make_report(Verdict::acceptable));
  CHECK(ledger.status(c) == Status::blacklisted);
  CHECK(ledger.entries().at(c).evidence.size() == 5);
}

TEST_CASE("a dishonest risky report flags a trusted contract") {
  Address c = ChainEnvironment::derive_address(2);
  ReputationLedger ledger;
  update_reputation(ledger, c,
                    make_report(Verdict::risky, {FindingCode::ontology_mismatch}));
  CHECK(ledger.status(c) == Status::flagged);
}

TEST_CASE("status never decreases over random report sequences") {
  auto rng = testutil::make_rng(0x5eed6001);
  for (int trial = 0; trial < 40; ++trial) {
    ReputationLedger ledger;
    Address c = ChainEnvironment::derive_address(rng() % 5);
    int prev = static_cast<int>(Status::trusted);
    for (int i = 0; i < 12; ++i) {
      Verdict v = static_cast<Verdict>(rng() % 3);
      std::vector<FindingCode> codes;
      if (rng() & 1) codes.push_back(static_cast<FindingCode>(rng() % 6));
      update_reputation(ledger, c, make_report(v, codes));
      int now = static_cast<int>(ledger.status(c));
      REQUIRE(now >= prev);
      prev = now;
    }
  }
}

TEST_CASE("the flag-then-blacklist path reproduces from assessment fixtures") {
  auto run_path = [] {
    testutil::CountingResolver store;
    Disclosure full = testutil::publish_dao_documents(store);
    Address c = ChainEnvironment::derive_address(3);
    ReputationLedger ledger;

    // First encounter: the governance document is unavailable.
    testutil::CountingResolver partial;
    Disclosure broken = testutil::publish_dao_documents(partial);
    partial.erase(broken.governance_digest);
    RiskReport first = off_chain_assess(broken, partial.resolver(),
                                        standard_blockchain_ontology(), {}, c);
    update_reputation(ledger, c, first);

    // Second encounter: documents resolve, but an instance document is gone.
    testutil::CountingResolver no_instance;
    Disclosure shady = testutil::publish_dao_documents(no_instance);
    no_instance.erase(fingerprint(canonicalize(dao_curator_instance())));
    RiskReport second = off_chain_assess(shady, no_instance.resolver(),
                                         standard_blockchain_ontology(), {}, c);
    update_reputation(ledger, c, second);
    return std::pair{ledger.status(c),
                     std::pair{first.verdict, second.verdict}};
  };
  auto [status1, verdicts1] = run_path();
  auto [status2, verdicts2] = run_path();
  CHECK(verdicts1.first == Verdict::unverifiable);
  CHECK(verdicts1.second == Verdict::risky);
  CHECK(status1 == Status::blacklisted);
  // Deterministic across repeat runs.
  CHECK(status2 == status1);
  CHECK(verdicts2 == verdicts1);
}

TEST_CASE("ledger round-trips through json") {
  ReputationLedger ledger;
  Address a = ChainEnvironment::derive_address(1);
  Address b = ChainEnvironment::derive_address(2);
  update_reputation(ledger, a, make_report(Verdict::unverifiable,
                                           {FindingCode::unresolved_document}));
  update_reputation(ledger, b, make_report(Verdict::acceptable));
  ReputationLedger back =
      ReputationLedger::from_json(parse_json(canonical_text(ledger.to_json())));
  CHECK(back.status(a) == Status::flagged);
  CHECK(back.status(b) == Status::trusted);
  CHECK(back.entries().at(a).evidence.size() == 1);
  CHECK(canonical_text(back.to_json()) == canonical_text(ledger.to_json()));
}

TEST_CASE("risk report round-trips through json") {
  testutil::CountingResolver store;
  Disclosure d = testutil::publish_dao_documents(store);
  RiskReport report = off_chain_assess(d, store.resolver(),
                                       standard_blockchain_ontology(), {},
                                       ChainEnvironment::derive_address(9));
  RiskReport back = RiskReport::from_json(parse_json(canonical_text(report.to_json())));
  CHECK(canonical_text(back.to_json()) == canonical_text(report.to_json()));
}
