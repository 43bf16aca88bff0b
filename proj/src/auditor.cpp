// talscope: gas accounting toolkit for Ethereum transaction access lists
// Copyright 2026 The talscope Authors.
// SPDX-License-Identifier: Apache-2.0

#include <talscope/auditor.hpp>

#include <talscope/errors.hpp>

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>

namespace talscope {
namespace {

bool is_precompile(const Address& a, const ForkConfig& fork) {
    for (std::size_t i = 0; i < 16; ++i)
        if (a.bytes[i] != 0) return false;
    std::uint32_t ordinal = 0;
    for (std::size_t i = 16; i < 20; ++i)
        ordinal = (ordinal << 8) | a.bytes[i];
    return ordinal >= 1 && ordinal <= fork.precompile_max;
}

// Table-2 column order: sender, recipient, producer, created, precompiles.
std::optional<Reason> auto_warm_reason(const Address& a, const TxContext& ctx,
                                       const ForkConfig& fork) {
    if (a == ctx.sender) return Reason::AutoWarmSender;
    if (ctx.recipient && a == *ctx.recipient) return Reason::AutoWarmRecipient;
    if (fork.coinbase_auto_warm && a == ctx.block_producer) return Reason::AutoWarmProducer;
    if (std::find(ctx.created_contracts.begin(), ctx.created_contracts.end(), a) !=
        ctx.created_contracts.end())
        return Reason::AutoWarmCreated;
    if (is_precompile(a, fork)) return Reason::AutoWarmPrecompile;
    return std::nullopt;
}

}  // namespace

const char* to_string(Reason r) {
    switch (r) {
        case Reason::NeverAccessed: return "never_accessed";
        case Reason::AutoWarmSender: return "auto_warm_sender";
        case Reason::AutoWarmRecipient: return "auto_warm_recipient";
        case Reason::AutoWarmProducer: return "auto_warm_producer";
        case Reason::AutoWarmPrecompile: return "auto_warm_precompile";
        case Reason::AutoWarmCreated: return "auto_warm_created";
        case Reason::Duplicate: return "duplicate";
    }
    return "?";
}

AuditReport audit(const AccessTrace& trace, const AccessList& declared,
                  const GasSchedule& schedule, const ForkConfig& fork) {
    if (!schedule.access_lists_supported)
        throw UnsupportedScheduleError(schedule.name);
    validate_trace(trace);

    AuditReport report;
    report.tx_hash = trace.ctx.tx_hash;

    const AccessList optimal = optimal_tal(trace, schedule, fork);
    const WarmSets touched = first_touch_sets(trace);

    std::unordered_map<Address, const AccessListEntry*> optimal_by_address;
    for (const AccessListEntry& entry : optimal.entries)
        optimal_by_address.emplace(entry.address, &entry);

    // Union of declared keys per address across every occurrence; the
    // charge is per occurrence but the warming benefit accrues once.
    std::unordered_map<Address, std::unordered_set<StorageKey>> declared_keys;
    std::unordered_map<Address, std::uint64_t> declared_accessed_keys;
    for (const AccessListEntry& entry : declared.entries) {
        auto& keys = declared_keys[entry.address];
        for (const StorageKey& k : entry.storage_keys) {
            if (keys.insert(k).second &&
                touched.accessed_storage_keys.contains(SlotId{entry.address, k}))
                ++declared_accessed_keys[entry.address];
        }
    }

    // Classify declared entries. A declared address is a defect only when
    // the optimal TAL excludes it and the entry is strictly harmful: an
    // exactly break-even entry (address charge fully amortized by its
    // accessed keys) costs nothing and is left unflagged, keeping the
    // defect lists empty exactly when regret is zero. Wasted key
    // occurrences (never accessed, or listed twice) are always defects.
    std::unordered_set<Address> seen_addresses;
    std::unordered_set<SlotId> seen_keys;
    for (const AccessListEntry& entry : declared.entries) {
        const Address& a = entry.address;
        if (!seen_addresses.insert(a).second) {
            report.superfluous_addresses.push_back({a, Reason::Duplicate});
        } else if (!optimal_by_address.contains(a)) {
            const Gas amortized = declared_accessed_keys.count(a)
                                      ? declared_accessed_keys.at(a) * schedule.per_key_saving()
                                      : 0;
            if (amortized < schedule.access_list_address_cost) {
                const auto warm_reason = auto_warm_reason(a, trace.ctx, fork);
                report.superfluous_addresses.push_back(
                    {a, warm_reason.value_or(Reason::NeverAccessed)});
            }
        }
        for (const StorageKey& k : entry.storage_keys) {
            const SlotId slot{a, k};
            if (!seen_keys.insert(slot).second ||
                !touched.accessed_storage_keys.contains(slot))
                report.superfluous_keys.push_back(slot);
        }
    }

    // Omissions against the optimal TAL.
    for (const AccessListEntry& entry : optimal.entries) {
        const auto it = declared_keys.find(entry.address);
        if (it == declared_keys.end()) {
            report.missing_addresses.push_back(entry.address);
            for (const StorageKey& k : entry.storage_keys)
                report.missing_keys.push_back(SlotId{entry.address, k});
        } else {
            for (const StorageKey& k : entry.storage_keys)
                if (!it->second.contains(k))
                    report.missing_keys.push_back(SlotId{entry.address, k});
        }
    }

    const TalDelta declared_delta = tal_delta(trace, declared, schedule, fork);
    const TalDelta optimal_delta = tal_delta(trace, optimal, schedule, fork);
    report.delta_declared = declared_delta.vs_empty;
    report.delta_optimal = optimal_delta.vs_empty;
    report.regret = report.delta_declared - report.delta_optimal;
    report.delta_declared_wei = declared_delta.vs_empty_wei;
    report.delta_optimal_wei = optimal_delta.vs_empty_wei;
    return report;
}

void DecadeHistogram::add(SignedWei value) {
    ++buckets[decade_bucket(value)];
}

std::uint64_t DecadeHistogram::total() const {
    std::uint64_t n = 0;
    for (const auto& [bucket, count] : buckets) n += count;
    return n;
}

void DecadeHistogram::merge(const DecadeHistogram& other) {
    for (const auto& [bucket, count] : other.buckets) buckets[bucket] += count;
}

int decade_bucket(SignedWei value) {
    if (value == 0) return 0;
    std::uint64_t magnitude =
        value > 0 ? static_cast<std::uint64_t>(value)
                  : ~static_cast<std::uint64_t>(value) + 1;  // safe for INT64_MIN
    int decade = 1;
    while (magnitude >= 10) {
        magnitude /= 10;
        ++decade;
    }
    return value > 0 ? decade : -decade;
}

std::pair<SignedWei, SignedWei> decade_bounds(int bucket) {
    const auto pow10 = [](int exp) -> SignedWei {
        if (exp > 18) return INT64_MAX;  // decade 19 saturates at the int64 range
        SignedWei v = 1;
        for (int i = 0; i < exp; ++i) v *= 10;
        return v;
    };
    if (bucket == 0) return {0, 1};
    if (bucket > 0) return {pow10(bucket - 1), pow10(bucket)};
    const SignedWei magnitude = pow10(-bucket);
    return {magnitude == INT64_MAX ? INT64_MIN : -magnitude, -pow10(-bucket - 1)};
}

void aggregate_tx(AggregateStats& stats, const TxMeta& meta, const AuditReport* report) {
    if (!stats.seen_txs.insert(meta.tx_hash).second)
        throw DuplicateTxError("transaction " + to_hex(meta.tx_hash) +
                               " appeared twice in the aggregation stream");
    if (meta.has_declared_tal != (report != nullptr))
        throw Error("audit stream inconsistent for " + to_hex(meta.tx_hash) +
                    ": report presence must match the declared-TAL flag");

    ++stats.n_txs;

    SignedGas declared_delta = 0;
    SignedWei declared_delta_wei = 0;
    if (report) {
        ++stats.n_with_tal;
        if (report->imperfect()) ++stats.n_imperfect;
        if (report->delta_declared > 0) ++stats.n_pays_more;
        declared_delta = report->delta_declared;
        declared_delta_wei = report->delta_declared_wei;

        std::set<Reason> reasons;
        for (const SuperfluousAddress& s : report->superfluous_addresses)
            reasons.insert(s.reason);
        for (Reason r : reasons) ++stats.counts_by_reason[r];
        if (!report->superfluous_keys.empty()) ++stats.tals_with_superfluous_keys;
        if (!report->missing_addresses.empty() || !report->missing_keys.empty())
            ++stats.tals_with_missing_entries;
    }

    stats.total_gas_saved_declared -= declared_delta;
    stats.total_wei_saved_declared -= declared_delta_wei;
    stats.total_gas_saved_optimal -= meta.optimal_delta;
    stats.total_wei_saved_optimal -= meta.optimal_delta_wei;

    stats.hist_declared_gas.add(declared_delta);
    stats.hist_declared_wei.add(declared_delta_wei);
    stats.hist_optimal_gas.add(meta.optimal_delta);
    stats.hist_optimal_wei.add(meta.optimal_delta_wei);
}

AggregateStats aggregate(std::span<const AuditReport> reports, std::span<const TxMeta> metas) {
    std::unordered_map<TxHash, const AuditReport*> by_hash;
    for (const AuditReport& r : reports)
        if (!by_hash.emplace(r.tx_hash, &r).second)
            throw DuplicateTxError("transaction " + to_hex(r.tx_hash) +
                                   " appeared twice in the report stream");

    AggregateStats stats;
    std::size_t used = 0;
    for (const TxMeta& meta : metas) {
        const auto it = by_hash.find(meta.tx_hash);
        const AuditReport* report = it == by_hash.end() ? nullptr : it->second;
        if (report) ++used;
        aggregate_tx(stats, meta, report);
    }
    if (used != reports.size())
        throw Error("audit stream inconsistent: reports without matching transaction metadata");
    return stats;
}

AggregateStats merge(const AggregateStats& a, const AggregateStats& b) {
    const AggregateStats& small = a.seen_txs.size() <= b.seen_txs.size() ? a : b;
    const AggregateStats& large = a.seen_txs.size() <= b.seen_txs.size() ? b : a;
    for (const TxHash& h : small.seen_txs)
        if (large.seen_txs.contains(h))
            throw DuplicateTxError("transaction " + to_hex(h) + " present in both partials");

    AggregateStats out = large;
    out.n_txs += small.n_txs;
    out.n_with_tal += small.n_with_tal;
    out.n_imperfect += small.n_imperfect;
    out.n_pays_more += small.n_pays_more;
    for (const auto& [reason, count] : small.counts_by_reason)
        out.counts_by_reason[reason] += count;
    out.tals_with_superfluous_keys += small.tals_with_superfluous_keys;
    out.tals_with_missing_entries += small.tals_with_missing_entries;
    out.total_gas_saved_declared += small.total_gas_saved_declared;
    out.total_gas_saved_optimal += small.total_gas_saved_optimal;
    out.total_wei_saved_declared += small.total_wei_saved_declared;
    out.total_wei_saved_optimal += small.total_wei_saved_optimal;
    out.hist_declared_gas.merge(small.hist_declared_gas);
    out.hist_declared_wei.merge(small.hist_declared_wei);
    out.hist_optimal_gas.merge(small.hist_optimal_gas);
    out.hist_optimal_wei.merge(small.hist_optimal_wei);
    out.seen_txs.insert(small.seen_txs.begin(), small.seen_txs.end());
    return out;
}

std::string histogram_export(const AggregateStats& stats, HistogramAxis axis,
                             HistogramSource source) {
    const DecadeHistogram& hist =
        source == HistogramSource::Declared
            ? (axis == HistogramAxis::Gas ? stats.hist_declared_gas : stats.hist_declared_wei)
            : (axis == HistogramAxis::Gas ? stats.hist_optimal_gas : stats.hist_optimal_wei);

    std::ostringstream out;
    out << "bucket_low,bucket_high,count\n";
    for (const auto& [bucket, count] : hist.buckets) {
        const auto [low, high] = decade_bounds(bucket);
        out << low << ',' << high << ',' << count << '\n';
    }
    return out.str();
}

}  // namespace talscope
