// talscope: gas accounting toolkit for Ethereum transaction access lists
// Copyright 2026 The talscope Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <talscope/optimizer.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

namespace talscope {

/// Why a declared entry is superfluous.
enum class Reason {
    NeverAccessed,
    AutoWarmSender,
    AutoWarmRecipient,
    AutoWarmProducer,
    AutoWarmPrecompile,
    AutoWarmCreated,
    Duplicate,
};

const char* to_string(Reason r);

struct SuperfluousAddress {
    Address address;
    Reason reason;

    bool operator==(const SuperfluousAddress&) const = default;
};

/// Classification of one declared TAL against its trace.
///
/// The lists are empty exactly when the declared TAL is gas-equivalent to
/// the optimal one (regret 0). Gas-neutral break-even entries are not
/// defects; an entry can carry several defects, in which case the first
/// applicable reason in the order Duplicate > AutoWarm* > NeverAccessed is
/// reported.
struct AuditReport {
    TxHash tx_hash;
    std::vector<SuperfluousAddress> superfluous_addresses;
    std::vector<SlotId> superfluous_keys;  // never accessed, or repeated occurrences
    std::vector<Address> missing_addresses;
    std::vector<SlotId> missing_keys;

    SignedGas delta_declared = 0;  // declared vs empty
    SignedGas delta_optimal = 0;   // optimal vs empty
    SignedGas regret = 0;          // delta_declared - delta_optimal, always >= 0

    SignedWei delta_declared_wei = 0;
    SignedWei delta_optimal_wei = 0;

    bool imperfect() const { return regret > 0; }
    bool clean() const {
        return superfluous_addresses.empty() && superfluous_keys.empty() &&
               missing_addresses.empty() && missing_keys.empty();
    }
};

AuditReport audit(const AccessTrace& trace, const AccessList& declared,
                  const GasSchedule& schedule, const ForkConfig& fork);

/// Per-transaction flags accompanying an audit stream. Transactions
/// without a declared TAL have no AuditReport; their declared delta is 0
/// by definition.
struct TxMeta {
    TxHash tx_hash;
    bool has_declared_tal = false;
    SignedGas optimal_delta = 0;
    SignedWei optimal_delta_wei = 0;
    std::optional<std::uint64_t> block_timestamp;
};

/// Signed decade histogram. Bucket i >= 1 covers [10^(i-1), 10^i),
/// bucket 0 covers [0, 1) (i.e. exactly zero for integer deltas) and
/// bucket -i mirrors i on the negative axis as [-10^i, -10^(i-1)).
/// Only occupied buckets are stored.
struct DecadeHistogram {
    std::map<int, std::uint64_t> buckets;

    void add(SignedWei value);
    std::uint64_t total() const;
    void merge(const DecadeHistogram& other);

    bool operator==(const DecadeHistogram&) const = default;
};

/// Decade bucket index of a signed value (see DecadeHistogram).
int decade_bucket(SignedWei value);
/// Half-open [low, high) bounds of a decade bucket.
std::pair<SignedWei, SignedWei> decade_bounds(int bucket);

/// Corpus-level audit statistics. Reason counts are per TAL, not per
/// entry: a reason is counted once per TAL containing at least one such
/// entry.
struct AggregateStats {
    std::uint64_t n_txs = 0;
    std::uint64_t n_with_tal = 0;
    std::uint64_t n_imperfect = 0;   // regret > 0
    std::uint64_t n_pays_more = 0;   // declared delta > 0

    std::map<Reason, std::uint64_t> counts_by_reason;
    std::uint64_t tals_with_superfluous_keys = 0;
    std::uint64_t tals_with_missing_entries = 0;

    // Positive totals mean gas saved.
    SignedGas total_gas_saved_declared = 0;
    SignedGas total_gas_saved_optimal = 0;
    SignedWei total_wei_saved_declared = 0;
    SignedWei total_wei_saved_optimal = 0;

    DecadeHistogram hist_declared_gas;
    DecadeHistogram hist_declared_wei;
    DecadeHistogram hist_optimal_gas;
    DecadeHistogram hist_optimal_wei;

    double frac_with_tal() const {
        return n_txs ? static_cast<double>(n_with_tal) / static_cast<double>(n_txs) : 0.0;
    }
    double frac_imperfect() const {
        return n_with_tal ? static_cast<double>(n_imperfect) / static_cast<double>(n_with_tal)
                          : 0.0;
    }
    double frac_pays_more() const {
        return n_with_tal ? static_cast<double>(n_pays_more) / static_cast<double>(n_with_tal)
                          : 0.0;
    }

    // Transactions folded in so far; lets merge() reject overlaps.
    std::unordered_set<TxHash> seen_txs;
};

/// Folds one transaction into the stats. `report` must be present exactly
/// when meta.has_declared_tal. Throws DuplicateTxError on a repeated hash.
void aggregate_tx(AggregateStats& stats, const TxMeta& meta,
                  const AuditReport* report);

/// Joins the two streams by tx_hash and folds every transaction.
AggregateStats aggregate(std::span<const AuditReport> reports,
                         std::span<const TxMeta> metas);

/// Associative, commutative merge of partial aggregates. Throws
/// DuplicateTxError when the partials share a transaction.
AggregateStats merge(const AggregateStats& a, const AggregateStats& b);

enum class HistogramAxis { Gas, Wei };
enum class HistogramSource { Declared, Optimal };

/// Renders one histogram as CSV rows "bucket_low,bucket_high,count"
/// (header included), ascending by bucket, occupied buckets only.
std::string histogram_export(const AggregateStats& stats, HistogramAxis axis,
                             HistogramSource source = HistogramSource::Declared);

}  // namespace talscope
