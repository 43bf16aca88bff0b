// talscope: gas accounting toolkit for Ethereum transaction access lists
// Copyright 2026 The talscope Authors.
// SPDX-License-Identifier: Apache-2.0

#include <talscope/commands.hpp>

#include <talscope/auditor.hpp>
#include <talscope/corpus.hpp>
#include <talscope/errors.hpp>
#include <talscope/optimizer.hpp>

#include <doctest.h>

#include "../testutil.hpp"

#include <filesystem>

using namespace talscope;
using namespace talscope::cli;
using namespace talscope::test;

namespace {

namespace fs = std::filesystem;

const GasSchedule kBerlin = GasSchedule::preset("berlin");
const ForkConfig kFork{};

const Address kA = addr_of_byte(0xaa, 1);
const StorageKey kK1 = key_of_byte(1);

AccessTrace one_key_trace(std::uint64_t tx) {
    return make_trace(
        {AccessEvent::address_access(kA, 0), AccessEvent::storage_read(kA, kK1, 1)}, tx);
}

AccessTrace sender_only_trace(std::uint64_t tx) {
    return make_trace({AccessEvent::address_access(kSender, 0)}, tx);
}

RunConfig config_for(const TempDir& dir, const std::string& corpus) {
    RunConfig cfg;
    cfg.corpus_path = corpus;
    cfg.out_dir = dir.file("out");
    return cfg;
}

}  // namespace

TEST_CASE("RunConfig input-source validation") {
    RunConfig cfg;
    CHECK_THROWS_AS(cfg.require_corpus(), ConfigError);  // neither source

    cfg.corpus_path = "x.ndjson";
    cfg.rpc_url = "http://localhost:8545";
    CHECK_THROWS_AS(cfg.require_corpus(), ConfigError);  // both sources

    cfg.rpc_url.reset();
    CHECK_NOTHROW(cfg.require_corpus());
    CHECK_THROWS_AS(cfg.require_rpc(), ConfigError);
}

TEST_CASE("RunConfig schedule plumbing") {
    RunConfig cfg;
    CHECK(cfg.schedule().name == "berlin");
    cfg.schedule_name = "eip1884";
    CHECK(cfg.schedule().cold_sload_cost == 800);
    cfg.schedule_name = "nope";
    CHECK_THROWS_AS(cfg.schedule(), ConfigError);

    RunConfig fork_cfg;
    fork_cfg.precompile_max = 0;
    CHECK_THROWS_AS(fork_cfg.fork(), ConfigError);
}

TEST_CASE("cmd_optimize writes per-tx TALs and a summary") {
    TempDir dir;
    const std::string corpus = dir.file("corpus.ndjson");
    std::vector<AccessTrace> traces = {one_key_trace(1), sender_only_trace(2)};
    store_corpus(corpus, traces);

    RunConfig cfg = config_for(dir, corpus);
    CHECK(cmd_optimize(cfg) == 2);

    const std::string summary = slurp(cfg.out_dir + "/optimize_summary.csv");
    CHECK(summary == "tx_hash,vs_empty_gas,vs_empty_wei\n" +
                         to_hex(hash_of(1)) + ",-200,-4000000000000\n" +
                         to_hex(hash_of(2)) + ",0,0\n");

    CHECK(slurp(cfg.out_dir + "/tals/" + to_hex(hash_of(2)) + ".json") == "[]\n");
    const AccessList tal1 =
        decode_tal(slurp(cfg.out_dir + "/tals/" + to_hex(hash_of(1)) + ".json"));
    CHECK(tal1 == optimal_tal(traces[0], kBerlin, kFork));
}

TEST_CASE("cmd_optimize on an empty corpus leaves just the header") {
    TempDir dir;
    const std::string corpus = dir.file("corpus.ndjson");
    store_corpus(corpus, {});
    RunConfig cfg = config_for(dir, corpus);
    CHECK(cmd_optimize(cfg) == 0);
    CHECK(slurp(cfg.out_dir + "/optimize_summary.csv") == "tx_hash,vs_empty_gas,vs_empty_wei\n");
}

TEST_CASE("cmd_optimize rejects corpora with duplicate transactions") {
    TempDir dir;
    const std::string corpus = dir.file("corpus.ndjson");
    store_corpus(corpus, std::vector<AccessTrace>{one_key_trace(1), one_key_trace(1)});
    RunConfig cfg = config_for(dir, corpus);
    CHECK_THROWS_AS(cmd_optimize(cfg), DuplicateTxError);
    // partial outputs are removed on failure
    CHECK_FALSE(fs::exists(cfg.out_dir + "/optimize_summary.csv"));
}

TEST_CASE("cmd_audit classifies a small corpus") {
    TempDir dir;
    const std::string corpus = dir.file("corpus.ndjson");
    const std::string tals = dir.file("tals.ndjson");

    // four TAL-bearing transactions, one of which pays more than without
    std::vector<AccessTrace> traces = {one_key_trace(1), one_key_trace(2),
                                       sender_only_trace(3), sender_only_trace(4),
                                       one_key_trace(5)};
    store_corpus(corpus, traces);
    std::vector<DeclaredTal> declared = {
        {hash_of(1), AccessList{{{kRecipient, {}}}}},           // the textbook mistake
        {hash_of(2), optimal_tal(traces[1], kBerlin, kFork)},   // perfect
        {hash_of(3), AccessList{}},                             // empty is optimal here
        {hash_of(4), AccessList{}},                             // also clean
                                                                // tx 5 has no declared TAL
    };
    store_declared_tals(tals, declared);

    RunConfig cfg = config_for(dir, corpus);
    cfg.declared_tals_path = tals;
    cfg.format = OutputFormat::Json;
    CHECK(cmd_audit(cfg) == 5);

    const std::string detail = slurp(cfg.out_dir + "/audit_detail.csv");
    CHECK(detail.find(to_hex(hash_of(1)) + ",auto_warm_recipient," + to_hex(kRecipient) +
                      ",,2400") != std::string::npos);
    CHECK(detail.find("missing_address," + to_hex(kA)) != std::string::npos);

    const std::string stats = slurp(cfg.out_dir + "/audit_stats.csv");
    CHECK(stats.find("n_txs,5\n") != std::string::npos);
    CHECK(stats.find("n_with_tal,4\n") != std::string::npos);
    CHECK(stats.find("n_imperfect,1\n") != std::string::npos);
    CHECK(stats.find("n_pays_more,1\n") != std::string::npos);
    CHECK(stats.find("frac_pays_more,0.250000\n") != std::string::npos);
    CHECK(stats.find("frac_with_tal,0.800000\n") != std::string::npos);
    CHECK(stats.find("tals_with_auto_warm_recipient,1\n") != std::string::npos);

    CHECK(fs::exists(cfg.out_dir + "/audit_stats.json"));
    CHECK(fs::exists(cfg.out_dir + "/hist_declared_gas.csv"));
    CHECK(fs::exists(cfg.out_dir + "/hist_optimal_wei.csv"));
}

TEST_CASE("cmd_audit is deterministic") {
    TempDir dir;
    const std::string corpus = dir.file("corpus.ndjson");
    const std::string tals = dir.file("tals.ndjson");
    std::mt19937_64 rng(0xde7e12);

    std::vector<AccessTrace> traces;
    std::vector<DeclaredTal> declared;
    for (std::uint64_t i = 0; i < 40; ++i) {
        traces.push_back(random_trace(rng, 700 + i));
        if (i % 2 == 0) {
            AccessList tal = optimal_tal(traces.back(), kBerlin, kFork);
            if (i % 4 == 0) tal.entries.push_back({kRecipient, {}});
            declared.push_back({hash_of(700 + i), std::move(tal)});
        }
    }
    store_corpus(corpus, traces);
    store_declared_tals(tals, declared);

    RunConfig cfg1 = config_for(dir, corpus);
    cfg1.declared_tals_path = tals;
    RunConfig cfg2 = cfg1;
    cfg2.out_dir = dir.file("out2");
    CHECK(cmd_audit(cfg1) == cmd_audit(cfg2));

    for (const char* name :
         {"/audit_detail.csv", "/audit_stats.csv", "/hist_declared_gas.csv",
          "/hist_declared_wei.csv", "/hist_optimal_gas.csv", "/hist_optimal_wei.csv"}) {
        CHECK(slurp(cfg1.out_dir + name) == slurp(cfg2.out_dir + name));
        CHECK_FALSE(slurp(cfg1.out_dir + name).empty());
    }
}

TEST_CASE("cmd_audit requires the declared-TAL companion") {
    TempDir dir;
    const std::string corpus = dir.file("corpus.ndjson");
    store_corpus(corpus, std::vector<AccessTrace>{one_key_trace(1)});
    RunConfig cfg = config_for(dir, corpus);
    CHECK_THROWS_AS(cmd_audit(cfg), ConfigError);
}

TEST_CASE("cmd_block_report compares SOB against IBS") {
    TempDir dir;
    const std::string corpus = dir.file("corpus.ndjson");

    // tx1: state-independent, both traces identical, profitable
    AccessTrace tx1_ibs = one_key_trace(1);
    AccessTrace tx1_sob = tx1_ibs;
    tx1_ibs.state_label = StateLabel::IBS;
    tx1_sob.state_label = StateLabel::SOB;

    // tx2: the SOB state shows a different address and misses a key
    AccessTrace tx2_ibs = make_trace({AccessEvent::address_access(kA, 0),
                                      AccessEvent::storage_read(kA, kK1, 1),
                                      AccessEvent::storage_read(kA, key_of_byte(2), 2)},
                                     2);
    AccessTrace tx2_sob = make_trace({AccessEvent::address_access(kA, 0),
                                      AccessEvent::storage_read(kA, kK1, 1),
                                      AccessEvent::address_access(addr_of_byte(0xaa, 9), 2)},
                                     2);
    tx2_ibs.state_label = StateLabel::IBS;
    tx2_sob.state_label = StateLabel::SOB;

    // tx3: not profitable (only the sender is touched)
    AccessTrace tx3_ibs = sender_only_trace(3);
    AccessTrace tx3_sob = tx3_ibs;
    tx3_ibs.state_label = StateLabel::IBS;
    tx3_sob.state_label = StateLabel::SOB;

    store_corpus(corpus, std::vector<AccessTrace>{tx1_sob, tx1_ibs, tx2_ibs, tx2_sob,
                                                  tx3_ibs, tx3_sob});

    RunConfig cfg = config_for(dir, corpus);
    CHECK(cmd_block_report(cfg) == 3);

    const std::string blocks = slurp(cfg.out_dir + "/block_report_blocks.csv");
    // 3 txs, 2 profitable, SOB suboptimal for exactly one of them
    CHECK(blocks.find(",3,2,1,0.500000,") != std::string::npos);

    const std::string txs = slurp(cfg.out_dir + "/block_report_tx.csv");
    CHECK(txs.find(to_hex(hash_of(1)) + ",-200,-200,1,0") != std::string::npos);
    CHECK(txs.find(to_hex(hash_of(3)) + ",0,0,0,0") != std::string::npos);
}

TEST_CASE("cmd_block_report reports zero when every SOB trace matches IBS") {
    TempDir dir;
    const std::string corpus = dir.file("corpus.ndjson");
    AccessTrace ibs = one_key_trace(1);
    AccessTrace sob = ibs;
    sob.state_label = StateLabel::SOB;
    store_corpus(corpus, std::vector<AccessTrace>{sob, ibs});
    RunConfig cfg = config_for(dir, corpus);
    CHECK(cmd_block_report(cfg) == 1);
    CHECK(slurp(cfg.out_dir + "/block_report_blocks.csv")
              .find(",1,1,0,0.000000,") != std::string::npos);
}

TEST_CASE("cmd_block_report rejects unpaired transactions") {
    TempDir dir;
    const std::string corpus = dir.file("corpus.ndjson");
    AccessTrace lonely = one_key_trace(9);
    lonely.state_label = StateLabel::SOB;
    store_corpus(corpus, std::vector<AccessTrace>{lonely});
    RunConfig cfg = config_for(dir, corpus);
    CHECK_THROWS_AS(cmd_block_report(cfg), MissingPairError);
}

TEST_CASE("cmd_stats builds the adoption time series") {
    TempDir dir;
    const std::string corpus = dir.file("corpus.ndjson");
    const std::string tals = dir.file("tals.ndjson");

    std::vector<AccessTrace> traces;
    std::vector<DeclaredTal> declared;
    for (std::uint64_t i = 0; i < 100; ++i) {
        AccessTrace t = sender_only_trace(1000 + i);
        t.ctx.block_timestamp = 1'692'000'000;  // 2023-08-14 UTC
        traces.push_back(t);
        if (i < 2) declared.push_back({hash_of(1000 + i), AccessList{}});
    }
    // a second day with no TALs at all
    for (std::uint64_t i = 0; i < 10; ++i) {
        AccessTrace t = sender_only_trace(2000 + i);
        t.ctx.block_timestamp = 1'692'000'000 + 86'400;
        traces.push_back(t);
    }
    store_corpus(corpus, traces);
    store_declared_tals(tals, declared);

    RunConfig cfg = config_for(dir, corpus);
    cfg.declared_tals_path = tals;
    CHECK(cmd_stats(cfg) == 110);

    const std::string adoption = slurp(cfg.out_dir + "/adoption.csv");
    CHECK(adoption == "date,n_txs,n_with_tal,fraction\n"
                      "2023-08-14,100,2,0.020000\n"
                      "2023-08-15,10,0,0.000000\n");
}

TEST_CASE("cmd_stats insists on timestamps") {
    TempDir dir;
    const std::string corpus = dir.file("corpus.ndjson");
    const std::string tals = dir.file("tals.ndjson");
    AccessTrace t = sender_only_trace(1);
    t.ctx.block_timestamp.reset();
    store_corpus(corpus, std::vector<AccessTrace>{t});
    store_declared_tals(tals, {});
    RunConfig cfg = config_for(dir, corpus);
    cfg.declared_tals_path = tals;
    CHECK_THROWS_AS(cmd_stats(cfg), ConfigError);
}
