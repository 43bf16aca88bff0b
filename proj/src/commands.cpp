// talscope: gas accounting toolkit for Ethereum transaction access lists
// Copyright 2026 The talscope Authors.
// SPDX-License-Identifier: Apache-2.0

#include <talscope/commands.hpp>

#include <talscope/auditor.hpp>
#include <talscope/corpus.hpp>
#include <talscope/errors.hpp>
#include <talscope/optimizer.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <unordered_map>
#include <unordered_set>

namespace talscope::cli {
namespace {

namespace fs = std::filesystem;

std::string format_fraction(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

// yyyy-mm-dd in UTC from unix seconds (Gregorian civil-date algorithm).
std::string utc_date(std::uint64_t unix_seconds) {
    std::int64_t z = static_cast<std::int64_t>(unix_seconds / 86400);
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp < 10 ? mp + 3 : mp - 9;
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02u",
                  static_cast<long long>(y + (m <= 2)), m, d);
    return buf;
}

// Tracks files written by a command so a failure removes partial output.
class OutputSet {
public:
    explicit OutputSet(const std::string& out_dir) : dir_(out_dir) {
        fs::create_directories(dir_);
    }

    ~OutputSet() {
        if (committed_) return;
        std::error_code ec;
        for (const fs::path& p : paths_) fs::remove(p, ec);
    }

    fs::path file(const std::string& relative) {
        fs::path p = dir_ / relative;
        fs::create_directories(p.parent_path());
        paths_.push_back(p);
        return p;
    }

    void commit() { committed_ = true; }

private:
    fs::path dir_;
    std::vector<fs::path> paths_;
    bool committed_ = false;
};

std::ofstream open_output(const fs::path& p) {
    std::ofstream out(p, std::ios::trunc | std::ios::binary);
    if (!out) throw IoError("cannot open '" + p.string() + "' for writing");
    return out;
}

std::unordered_map<TxHash, std::optional<AccessList>> load_declared_map(
    const std::string& path) {
    std::unordered_map<TxHash, std::optional<AccessList>> map;
    for (DeclaredTal& d : load_declared_tals(path)) {
        if (!map.emplace(d.tx_hash, std::move(d.tal)).second)
            throw DuplicateTxError("transaction " + to_hex(d.tx_hash) +
                                   " declared twice in '" + path + "'");
    }
    return map;
}

void write_stats_csv(std::ofstream& out, const AggregateStats& stats) {
    out << "metric,value\n";
    out << "n_txs," << stats.n_txs << '\n';
    out << "n_with_tal," << stats.n_with_tal << '\n';
    out << "n_imperfect," << stats.n_imperfect << '\n';
    out << "n_pays_more," << stats.n_pays_more << '\n';
    out << "frac_with_tal," << format_fraction(stats.frac_with_tal()) << '\n';
    out << "frac_imperfect," << format_fraction(stats.frac_imperfect()) << '\n';
    out << "frac_pays_more," << format_fraction(stats.frac_pays_more()) << '\n';
    out << "total_gas_saved_declared," << stats.total_gas_saved_declared << '\n';
    out << "total_wei_saved_declared," << stats.total_wei_saved_declared << '\n';
    out << "total_gas_saved_optimal," << stats.total_gas_saved_optimal << '\n';
    out << "total_wei_saved_optimal," << stats.total_wei_saved_optimal << '\n';
    static constexpr Reason kReasons[] = {
        Reason::NeverAccessed,     Reason::AutoWarmSender,  Reason::AutoWarmRecipient,
        Reason::AutoWarmProducer,  Reason::AutoWarmPrecompile, Reason::AutoWarmCreated,
        Reason::Duplicate,
    };
    for (Reason r : kReasons) {
        const auto it = stats.counts_by_reason.find(r);
        out << "tals_with_" << to_string(r) << ','
            << (it == stats.counts_by_reason.end() ? 0 : it->second) << '\n';
    }
    out << "tals_with_superfluous_keys," << stats.tals_with_superfluous_keys << '\n';
    out << "tals_with_missing_entries," << stats.tals_with_missing_entries << '\n';
}

void write_stats_json(std::ofstream& out, const AggregateStats& stats) {
    nlohmann::json doc;
    doc["n_txs"] = stats.n_txs;
    doc["n_with_tal"] = stats.n_with_tal;
    doc["n_imperfect"] = stats.n_imperfect;
    doc["n_pays_more"] = stats.n_pays_more;
    doc["frac_with_tal"] = stats.frac_with_tal();
    doc["frac_imperfect"] = stats.frac_imperfect();
    doc["frac_pays_more"] = stats.frac_pays_more();
    doc["total_gas_saved_declared"] = stats.total_gas_saved_declared;
    doc["total_wei_saved_declared"] = stats.total_wei_saved_declared;
    doc["total_gas_saved_optimal"] = stats.total_gas_saved_optimal;
    doc["total_wei_saved_optimal"] = stats.total_wei_saved_optimal;
    nlohmann::json reasons = nlohmann::json::object();
    for (const auto& [reason, count] : stats.counts_by_reason)
        reasons[to_string(reason)] = count;
    doc["tals_by_reason"] = std::move(reasons);
    doc["tals_with_superfluous_keys"] = stats.tals_with_superfluous_keys;
    doc["tals_with_missing_entries"] = stats.tals_with_missing_entries;
    out << doc.dump(2) << '\n';
}

void require_exactly_one_source(const RunConfig& cfg) {
    if (cfg.rpc_url.has_value() == cfg.corpus_path.has_value())
        throw ConfigError("exactly one input source is required: --rpc-url or --corpus");
}

}  // namespace

GasSchedule RunConfig::schedule() const {
    GasSchedule s = GasSchedule::preset(schedule_name);
    if (schedule_overrides_path) apply_schedule_overrides_file(s, *schedule_overrides_path);
    s.validate();
    return s;
}

ForkConfig RunConfig::fork() const {
    ForkConfig f{coinbase_auto_warm, precompile_max};
    f.validate();
    return f;
}

void RunConfig::require_corpus() const {
    require_exactly_one_source(*this);
    if (!corpus_path) throw ConfigError("this command reads a corpus; pass --corpus FILE");
}

void RunConfig::require_rpc() const {
    require_exactly_one_source(*this);
    if (!rpc_url) throw ConfigError("this command talks to a node; pass --rpc-url URL");
}

std::uint64_t cmd_optimize(const RunConfig& cfg) {
    cfg.require_corpus();
    const GasSchedule schedule = cfg.schedule();
    const ForkConfig fork = cfg.fork();

    OutputSet outputs(cfg.out_dir);
    std::ofstream summary = open_output(outputs.file("optimize_summary.csv"));
    summary << "tx_hash,vs_empty_gas,vs_empty_wei\n";

    std::unordered_set<TxHash> seen;
    std::uint64_t processed = 0;
    for_each_trace(*cfg.corpus_path, [&](AccessTrace&& trace) {
        if (!seen.insert(trace.ctx.tx_hash).second)
            throw DuplicateTxError("transaction " + to_hex(trace.ctx.tx_hash) +
                                   " appears twice in the corpus; optimize wants one trace per tx");
        const AccessList tal = optimal_tal(trace, schedule, fork);
        const TalDelta delta = tal_delta(trace, tal, schedule, fork);

        std::ofstream tal_file =
            open_output(outputs.file("tals/" + to_hex(trace.ctx.tx_hash) + ".json"));
        tal_file << encode_tal(tal) << '\n';

        summary << to_hex(trace.ctx.tx_hash) << ',' << delta.vs_empty << ','
                << delta.vs_empty_wei << '\n';
        ++processed;
    });

    if (!summary) throw IoError("I/O error while writing the optimize summary");
    outputs.commit();
    return processed;
}

std::uint64_t cmd_audit(const RunConfig& cfg) {
    cfg.require_corpus();
    if (!cfg.declared_tals_path)
        throw ConfigError("audit needs the declared TALs; pass --tals FILE");
    const GasSchedule schedule = cfg.schedule();
    const ForkConfig fork = cfg.fork();

    const auto declared_map = load_declared_map(*cfg.declared_tals_path);

    OutputSet outputs(cfg.out_dir);
    std::ofstream detail = open_output(outputs.file("audit_detail.csv"));
    detail << "tx_hash,reason,address,key,regret\n";

    AggregateStats stats;
    for_each_trace(*cfg.corpus_path, [&](AccessTrace&& trace) {
        const TxHash& hash = trace.ctx.tx_hash;
        const auto declared_it = declared_map.find(hash);
        const bool has_tal = declared_it != declared_map.end() && declared_it->second.has_value();

        const TalDelta optimal_delta =
            tal_delta(trace, optimal_tal(trace, schedule, fork), schedule, fork);
        TxMeta meta{hash, has_tal, optimal_delta.vs_empty, optimal_delta.vs_empty_wei,
                    trace.ctx.block_timestamp};

        if (!has_tal) {
            aggregate_tx(stats, meta, nullptr);
            return;
        }

        const AuditReport report = audit(trace, *declared_it->second, schedule, fork);
        const std::string hash_hex = to_hex(hash);
        for (const SuperfluousAddress& s : report.superfluous_addresses)
            detail << hash_hex << ',' << to_string(s.reason) << ',' << to_hex(s.address)
                   << ",," << schedule.access_list_address_cost << '\n';
        for (const SlotId& slot : report.superfluous_keys)
            detail << hash_hex << ",superfluous_key," << to_hex(slot.address) << ','
                   << to_hex(slot.key) << ',' << schedule.access_list_storage_key_cost << '\n';
        for (const Address& a : report.missing_addresses)
            detail << hash_hex << ",missing_address," << to_hex(a) << ",,"
                   << schedule.per_address_saving() << '\n';
        for (const SlotId& slot : report.missing_keys)
            detail << hash_hex << ",missing_key," << to_hex(slot.address) << ','
                   << to_hex(slot.key) << ',' << schedule.per_key_saving() << '\n';

        aggregate_tx(stats, meta, &report);
    });

    std::ofstream stats_csv = open_output(outputs.file("audit_stats.csv"));
    write_stats_csv(stats_csv, stats);
    if (cfg.format == OutputFormat::Json) {
        std::ofstream stats_json = open_output(outputs.file("audit_stats.json"));
        write_stats_json(stats_json, stats);
    }

    const struct {
        const char* name;
        HistogramAxis axis;
        HistogramSource source;
    } histograms[] = {
        {"hist_declared_gas.csv", HistogramAxis::Gas, HistogramSource::Declared},
        {"hist_declared_wei.csv", HistogramAxis::Wei, HistogramSource::Declared},
        {"hist_optimal_gas.csv", HistogramAxis::Gas, HistogramSource::Optimal},
        {"hist_optimal_wei.csv", HistogramAxis::Wei, HistogramSource::Optimal},
    };
    for (const auto& h : histograms) {
        std::ofstream out = open_output(outputs.file(h.name));
        out << histogram_export(stats, h.axis, h.source);
    }

    if (!detail) throw IoError("I/O error while writing the audit detail");
    outputs.commit();
    return stats.n_txs;
}

std::uint64_t cmd_block_report(const RunConfig& cfg) {
    cfg.require_corpus();
    const GasSchedule schedule = cfg.schedule();
    const ForkConfig fork = cfg.fork();

    struct Pair {
        std::optional<AccessTrace> sob;
        std::optional<AccessTrace> ibs;
    };
    struct Row {
        std::uint64_t block = 0;
        std::uint32_t tx_index = 0;
        TxHash hash;
        SignedGas ibs_delta = 0;
        SignedGas sob_delta = 0;
        bool profitable = false;
        bool sob_suboptimal = false;
    };

    std::unordered_map<TxHash, Pair> pending;
    std::vector<Row> rows;

    const auto flush_pair = [&](const TxHash& hash, Pair& pair) {
        const AccessTrace& sob = *pair.sob;
        const AccessTrace& ibs = *pair.ibs;
        const TalDelta ideal = cross_state_delta(ibs, ibs, schedule, fork);
        const TalDelta sob_delta = cross_state_delta(sob, ibs, schedule, fork);
        Row row;
        row.block = ibs.ctx.block_number;
        row.tx_index = ibs.ctx.tx_index;
        row.hash = hash;
        row.ibs_delta = ideal.vs_empty;
        row.sob_delta = sob_delta.vs_empty;
        row.profitable = ideal.vs_empty < 0;
        row.sob_suboptimal = sob_delta.vs_empty > ideal.vs_empty;
        rows.push_back(row);
    };

    for_each_trace(*cfg.corpus_path, [&](AccessTrace&& trace) {
        Pair& pair = pending[trace.ctx.tx_hash];
        std::optional<AccessTrace>* slot = nullptr;
        if (trace.state_label == StateLabel::SOB) slot = &pair.sob;
        else if (trace.state_label == StateLabel::IBS) slot = &pair.ibs;
        else return;  // other labels take no part in the pairing
        if (slot->has_value())
            throw DuplicateTxError("transaction " + to_hex(trace.ctx.tx_hash) + " has two " +
                                   to_string(trace.state_label) + " traces");
        *slot = std::move(trace);
        if (pair.sob && pair.ibs) {
            const TxHash hash = pair.ibs->ctx.tx_hash;
            flush_pair(hash, pair);
            pending.erase(hash);
        }
    });

    for (const auto& [hash, pair] : pending)
        throw MissingPairError("transaction " + to_hex(hash) + " lacks its " +
                               (pair.sob ? "ibs" : "sob") + " trace");

    std::sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
        return std::tie(a.block, a.tx_index, a.hash) < std::tie(b.block, b.tx_index, b.hash);
    });

    OutputSet outputs(cfg.out_dir);
    std::ofstream tx_csv = open_output(outputs.file("block_report_tx.csv"));
    tx_csv << "block_number,tx_index,tx_hash,ibs_delta_gas,sob_delta_gas,profitable,sob_suboptimal\n";
    for (const Row& r : rows)
        tx_csv << r.block << ',' << r.tx_index << ',' << to_hex(r.hash) << ',' << r.ibs_delta
               << ',' << r.sob_delta << ',' << (r.profitable ? 1 : 0) << ','
               << (r.sob_suboptimal ? 1 : 0) << '\n';

    struct BlockAgg {
        std::uint64_t n_txs = 0;
        std::uint64_t n_profitable = 0;
        std::uint64_t n_sob_suboptimal = 0;  // among profitable txs
        SignedGas ibs_total = 0;
        SignedGas sob_total = 0;
    };
    std::map<std::uint64_t, BlockAgg> blocks;
    for (const Row& r : rows) {
        BlockAgg& agg = blocks[r.block];
        ++agg.n_txs;
        if (r.profitable) {
            ++agg.n_profitable;
            if (r.sob_suboptimal) ++agg.n_sob_suboptimal;
        }
        agg.ibs_total += r.ibs_delta;
        agg.sob_total += r.sob_delta;
    }

    std::ofstream block_csv = open_output(outputs.file("block_report_blocks.csv"));
    block_csv << "block_number,n_txs,n_profitable,n_sob_suboptimal,frac_sob_suboptimal,"
                 "ibs_total_gas,sob_total_gas\n";
    for (const auto& [number, agg] : blocks) {
        const double frac = agg.n_profitable
                                ? static_cast<double>(agg.n_sob_suboptimal) /
                                      static_cast<double>(agg.n_profitable)
                                : 0.0;
        block_csv << number << ',' << agg.n_txs << ',' << agg.n_profitable << ','
                  << agg.n_sob_suboptimal << ',' << format_fraction(frac) << ','
                  << agg.ibs_total << ',' << agg.sob_total << '\n';
    }

    outputs.commit();
    return rows.size();
}

std::uint64_t cmd_stats(const RunConfig& cfg) {
    cfg.require_corpus();
    if (!cfg.declared_tals_path)
        throw ConfigError("stats needs the declared TALs; pass --tals FILE");
    const auto declared_map = load_declared_map(*cfg.declared_tals_path);

    struct DayAgg {
        std::uint64_t n_txs = 0;
        std::uint64_t n_with_tal = 0;
    };
    std::map<std::string, DayAgg> days;
    std::unordered_set<TxHash> seen;

    for_each_trace(*cfg.corpus_path, [&](AccessTrace&& trace) {
        if (!seen.insert(trace.ctx.tx_hash).second)
            throw DuplicateTxError("transaction " + to_hex(trace.ctx.tx_hash) +
                                   " appears twice in the corpus");
        if (!trace.ctx.block_timestamp)
            throw ConfigError("adoption stats need block timestamps; " + to_hex(trace.ctx.tx_hash) +
                              " has none");
        DayAgg& day = days[utc_date(*trace.ctx.block_timestamp)];
        ++day.n_txs;
        const auto it = declared_map.find(trace.ctx.tx_hash);
        if (it != declared_map.end() && it->second.has_value()) ++day.n_with_tal;
    });

    OutputSet outputs(cfg.out_dir);
    std::ofstream out = open_output(outputs.file("adoption.csv"));
    out << "date,n_txs,n_with_tal,fraction\n";
    std::uint64_t total = 0;
    for (const auto& [date, agg] : days) {
        const double frac =
            agg.n_txs ? static_cast<double>(agg.n_with_tal) / static_cast<double>(agg.n_txs) : 0.0;
        out << date << ',' << agg.n_txs << ',' << agg.n_with_tal << ','
            << format_fraction(frac) << '\n';
        total += agg.n_txs;
    }
    outputs.commit();
    return total;
}

std::uint64_t cmd_fetch(const RunConfig& cfg) {
    cfg.require_rpc();
    if (!cfg.block_range && !cfg.tx_file)
        throw ConfigError("fetch needs --blocks A..B or --tx-file FILE");
    if (cfg.block_range && cfg.tx_file)
        throw ConfigError("fetch takes either --blocks or --tx-file, not both");
    const bool want_ibs = cfg.fetch_mode == "ibs" || cfg.fetch_mode == "both";
    const bool want_sob = cfg.fetch_mode == "sob" || cfg.fetch_mode == "both";
    if (!want_ibs && !want_sob)
        throw ConfigError("fetch mode must be ibs, sob or both (got '" + cfg.fetch_mode + "')");

    const rpc::NodeEndpoint endpoint{*cfg.rpc_url, cfg.max_concurrent_requests,
                                     cfg.request_timeout_seconds};
    const rpc::JsonRpcClient client(endpoint);
    const rpc::OpcodeMap map =
        cfg.opcode_map_path ? rpc::OpcodeMap::load_file(*cfg.opcode_map_path)
                            : rpc::OpcodeMap::builtin();

    OutputSet outputs(cfg.out_dir);
    std::ofstream corpus = open_output(outputs.file("corpus.ndjson"));
    std::ofstream declared = open_output(outputs.file("declared_tals.ndjson"));

    std::uint64_t processed = 0;
    const auto emit_tx = [&](const TxHash& hash, const std::optional<AccessList>& tal) {
        if (want_ibs)
            corpus << encode_trace(rpc::fetch_trace(client, hash, rpc::TraceMode::IBS, map))
                   << '\n';
        if (want_sob)
            corpus << encode_trace(rpc::fetch_trace(client, hash, rpc::TraceMode::SOB, map))
                   << '\n';
        declared << encode_declared_tal(DeclaredTal{hash, tal}) << '\n';
        ++processed;
    };

    if (cfg.block_range) {
        rpc::fetch_block_range(client, cfg.block_range->first, cfg.block_range->second,
                               [&](rpc::BlockData&& block) {
                                   for (const rpc::BlockTxRecord& tx : block.txs)
                                       emit_tx(tx.hash, tx.declared_tal);
                               });
    } else {
        std::ifstream txs(*cfg.tx_file);
        if (!txs) throw IoError("cannot open tx file '" + *cfg.tx_file + "'");
        std::string line;
        while (std::getline(txs, line)) {
            if (line.empty() || line[0] == '#') continue;
            const TxHash hash = bytes32_from_hex(line);
            const nlohmann::json tx =
                client.call("eth_getTransactionByHash", nlohmann::json::array({to_hex(hash)}));
            if (tx.is_null()) throw NotFoundError("transaction " + to_hex(hash) + " not found");
            std::optional<AccessList> tal;
            if (const auto al = tx.find("accessList"); al != tx.end() && !al->is_null())
                tal = decode_tal(al->dump());
            emit_tx(hash, tal);
        }
    }

    if (!corpus || !declared) throw IoError("I/O error while writing the fetched corpus");
    outputs.commit();
    return processed;
}

}  // namespace talscope::cli
