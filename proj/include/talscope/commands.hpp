// talscope: gas accounting toolkit for Ethereum transaction access lists
// Copyright 2026 The talscope Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <talscope/rpc.hpp>
#include <talscope/schedule.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace talscope::cli {

enum class OutputFormat { Csv, Json };

/// Shared configuration of the CLI commands. Exactly one input source
/// (RPC endpoint or corpus path) must be set per command.
struct RunConfig {
    std::optional<std::string> rpc_url;
    std::optional<std::string> corpus_path;
    std::optional<std::string> declared_tals_path;
    std::optional<std::pair<std::uint64_t, std::uint64_t>> block_range;
    std::optional<std::string> tx_file;

    std::string schedule_name = "berlin";
    std::optional<std::string> schedule_overrides_path;
    bool coinbase_auto_warm = true;
    std::uint32_t precompile_max = 9;

    std::string out_dir = ".";
    OutputFormat format = OutputFormat::Csv;

    std::uint32_t max_concurrent_requests = 4;
    double request_timeout_seconds = 30.0;
    std::optional<std::string> opcode_map_path;
    std::string fetch_mode = "ibs";  // ibs | sob | both

    GasSchedule schedule() const;
    ForkConfig fork() const;
    void require_corpus() const;
    void require_rpc() const;
};

// Each command writes its report files under cfg.out_dir and returns the
// number of transactions processed. Failures propagate as talscope
// exceptions; partially written outputs are removed.

/// Per-tx optimal TALs (out/tals/<hash>.json) plus a summary CSV with one
/// row per transaction: tx_hash, vs_empty_gas, vs_empty_wei.
std::uint64_t cmd_optimize(const RunConfig& cfg);

/// Audit detail CSV (tx_hash, reason, address, key, regret), aggregate
/// stats (CSV and, with --format json, JSON) and savings histograms.
std::uint64_t cmd_audit(const RunConfig& cfg);

/// Per-tx and per-block SOB vs IBS comparison; the corpus must contain a
/// SOB and an IBS trace for every transaction.
std::uint64_t cmd_block_report(const RunConfig& cfg);

/// Adoption time series: one row per UTC day with the fraction of
/// transactions carrying a declared TAL.
std::uint64_t cmd_stats(const RunConfig& cfg);

/// Ingests blocks over JSON-RPC into a trace corpus plus the declared-TAL
/// companion file.
std::uint64_t cmd_fetch(const RunConfig& cfg);

// Exit codes of the talscope binary.
inline constexpr int exit_ok = 0;
inline constexpr int exit_config = 2;
inline constexpr int exit_ingestion = 3;
inline constexpr int exit_analysis = 4;

}  // namespace talscope::cli
