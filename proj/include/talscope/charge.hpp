// talscope: gas accounting toolkit for Ethereum transaction access lists
// Copyright 2026 The talscope Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <talscope/schedule.hpp>
#include <talscope/trace.hpp>

#include <cstdint>

namespace talscope {

/// Decomposition of the gas charged to a trace under a given TAL.
/// Only EIP-2929 state-access surcharges and EIP-2930 list charges are
/// modeled; intrinsic gas, execution gas and refunds are out of scope.
struct GasBreakdown {
    Gas upfront_tal_cost = 0;  // sum of per-entry TAL charges
    Gas access_gas = 0;        // sum of per-event cold/warm charges
    Gas total = 0;             // upfront_tal_cost + access_gas

    std::uint64_t cold_address_events = 0;
    std::uint64_t warm_address_events = 0;
    std::uint64_t cold_slot_events = 0;
    std::uint64_t warm_slot_events = 0;

    bool operator==(const GasBreakdown&) const = default;
};

/// Addresses warm at transaction start without TAL payment: the sender,
/// the recipient (or the created contracts for creations), the precompiles
/// 0x1..precompile_max and, fork-dependent, the block producer. The
/// storage-key set is always empty.
WarmSets auto_warm_addresses(const TxContext& ctx, const ForkConfig& fork);

/// Upfront charge of a TAL: address cost plus per-key cost for every
/// entry, duplicates charged per occurrence. Throws UnsupportedScheduleError
/// on schedules without access-list support.
Gas tal_upfront_cost(const AccessList& tal, const GasSchedule& schedule);

/// Deterministic charging simulation: seeds the warm sets from the
/// auto-warm addresses and the TAL, then walks the events in order,
/// charging the cold price on first touch and the warm price afterwards.
/// Storage writes carry the same cold/warm surcharge as reads. On
/// pre-berlin schedules the TAL must be empty, storage events cost the
/// flat price each time and address events are not charged (the account
/// access surcharge did not exist before EIP-2929).
///
/// Throws TraceError for malformed traces and UnsupportedScheduleError
/// for a non-empty TAL on a pre-berlin schedule.
GasBreakdown charge_accesses(const AccessTrace& trace, const AccessList& tal,
                             const GasSchedule& schedule, const ForkConfig& fork);

}  // namespace talscope
