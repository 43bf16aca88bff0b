// talscope: gas accounting toolkit for Ethereum transaction access lists
// Copyright 2026 The talscope Authors.
// SPDX-License-Identifier: Apache-2.0

#include <talscope/commands.hpp>
#include <talscope/errors.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <functional>
#include <string>

namespace {

using talscope::cli::RunConfig;

void add_common_options(CLI::App& cmd, RunConfig& cfg) {
    cmd.add_option("--rpc-url", cfg.rpc_url, "JSON-RPC endpoint of an Ethereum node")
        ->envname("TALSCOPE_RPC_URL");
    cmd.add_option("--corpus", cfg.corpus_path, "NDJSON trace corpus");
    cmd.add_option("--tals", cfg.declared_tals_path, "NDJSON companion file of declared TALs");
    cmd.add_option("--schedule", cfg.schedule_name,
                   "gas schedule: frontier, eip150, eip1884 or berlin")
        ->capture_default_str();
    cmd.add_option("--schedule-config", cfg.schedule_overrides_path,
                   "key=integer overrides for the gas schedule");
    cmd.add_option("--coinbase-warm", cfg.coinbase_auto_warm,
                   "whether the block producer is warm at tx start")
        ->capture_default_str();
    cmd.add_option("--precompile-max", cfg.precompile_max,
                   "highest auto-warm precompile ordinal")
        ->capture_default_str();
    cmd.add_option("--out", cfg.out_dir, "output directory")->capture_default_str();
    cmd.add_option("--format", cfg.format, "report format")
        ->transform(CLI::CheckedTransformer(
            std::map<std::string, talscope::cli::OutputFormat>{
                {"csv", talscope::cli::OutputFormat::Csv},
                {"json", talscope::cli::OutputFormat::Json}},
            CLI::ignore_case));
}

void add_fetch_options(CLI::App& cmd, RunConfig& cfg, std::string& blocks) {
    cmd.add_option("--blocks", blocks, "block range A..B (inclusive)");
    cmd.add_option("--tx-file", cfg.tx_file, "file of transaction hashes, one per line");
    cmd.add_option("--mode", cfg.fetch_mode, "trace state: ibs, sob or both")
        ->capture_default_str();
    cmd.add_option("--concurrency", cfg.max_concurrent_requests,
                   "maximum in-flight RPC requests")
        ->capture_default_str();
    cmd.add_option("--timeout", cfg.request_timeout_seconds, "RPC timeout in seconds")
        ->capture_default_str();
    cmd.add_option("--opcode-map", cfg.opcode_map_path,
                   "JSON opcode mapping table overriding the built-in one");
}

void parse_block_range(const std::string& text, RunConfig& cfg) {
    if (text.empty()) return;
    const auto dots = text.find("..");
    if (dots == std::string::npos)
        throw talscope::ConfigError("--blocks expects A..B, got '" + text + "'");
    try {
        const std::uint64_t a = std::stoull(text.substr(0, dots));
        const std::uint64_t b = std::stoull(text.substr(dots + 2));
        if (b < a) throw talscope::ConfigError("--blocks range is empty: " + text);
        cfg.block_range = {a, b};
    } catch (const std::invalid_argument&) {
        throw talscope::ConfigError("--blocks expects numeric bounds, got '" + text + "'");
    } catch (const std::out_of_range&) {
        throw talscope::ConfigError("--blocks bounds out of range: '" + text + "'");
    }
}

int classify_error(const std::exception& e) {
    using namespace talscope;
    if (dynamic_cast<const ConfigError*>(&e)) return talscope::cli::exit_config;
    if (dynamic_cast<const RpcError*>(&e) || dynamic_cast<const NotFoundError*>(&e) ||
        dynamic_cast<const TracerUnsupportedError*>(&e) ||
        dynamic_cast<const NormalizationError*>(&e) || dynamic_cast<const SchemaError*>(&e) ||
        dynamic_cast<const IoError*>(&e))
        return talscope::cli::exit_ingestion;
    return talscope::cli::exit_analysis;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"talscope: simulate EIP-2929 gas charging, generate optimal EIP-2930 "
                 "access lists and audit declared ones"};
    app.require_subcommand(1);

    RunConfig cfg;
    std::string blocks;
    std::function<std::uint64_t(const RunConfig&)> action;

    CLI::App* optimize = app.add_subcommand(
        "optimize", "compute the gas-optimal TAL for every transaction in a corpus");
    add_common_options(*optimize, cfg);
    optimize->callback([&] { action = talscope::cli::cmd_optimize; });

    CLI::App* audit = app.add_subcommand(
        "audit", "classify declared-TAL imperfections and aggregate statistics");
    add_common_options(*audit, cfg);
    audit->callback([&] { action = talscope::cli::cmd_audit; });

    CLI::App* block_report = app.add_subcommand(
        "block-report", "compare start-of-block against intra-block TAL savings");
    add_common_options(*block_report, cfg);
    block_report->callback([&] { action = talscope::cli::cmd_block_report; });

    CLI::App* stats = app.add_subcommand(
        "stats", "per-day TAL adoption time series");
    add_common_options(*stats, cfg);
    stats->callback([&] { action = talscope::cli::cmd_stats; });

    CLI::App* fetch = app.add_subcommand(
        "fetch", "ingest blocks or transactions from a node into a corpus");
    add_common_options(*fetch, cfg);
    add_fetch_options(*fetch, cfg, blocks);
    fetch->callback([&] { action = talscope::cli::cmd_fetch; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : talscope::cli::exit_config;
    }

    try {
        parse_block_range(blocks, cfg);
        const std::uint64_t n = action(cfg);
        std::fprintf(stdout, "processed %llu transactions\n",
                     static_cast<unsigned long long>(n));
        return talscope::cli::exit_ok;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "talscope: %s\n", e.what());
        return classify_error(e);
    }
}
