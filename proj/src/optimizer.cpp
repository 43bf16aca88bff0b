// talscope: gas accounting toolkit for Ethereum transaction access lists
// Copyright 2026 The talscope Authors.
// SPDX-License-Identifier: Apache-2.0

#include <talscope/optimizer.hpp>

#include <talscope/errors.hpp>

#include <unordered_map>
#include <unordered_set>

namespace talscope {
namespace {

SignedWei to_wei(SignedGas gas, Wei price) {
    const __int128 wide = static_cast<__int128>(gas) * static_cast<__int128>(price);
    if (wide > static_cast<__int128>(INT64_MAX) || wide < static_cast<__int128>(INT64_MIN))
        throw OverflowError("gas delta in wei exceeds the signed 64-bit range");
    return static_cast<SignedWei>(wide);
}

struct AddressGroup {
    Address address;
    std::vector<StorageKey> keys;  // distinct, first-touch order
    bool has_address_event = false;
};

std::vector<AddressGroup> group_by_first_touch(const AccessTrace& trace) {
    std::vector<AddressGroup> groups;
    std::unordered_map<Address, std::size_t> index;
    std::unordered_set<SlotId> seen_slots;

    for (const AccessEvent& ev : trace.events) {
        auto [it, inserted] = index.try_emplace(ev.address, groups.size());
        if (inserted) groups.push_back(AddressGroup{ev.address, {}, false});
        AddressGroup& group = groups[it->second];

        if (is_storage_kind(ev.kind)) {
            if (seen_slots.insert(SlotId{ev.address, *ev.key}).second)
                group.keys.push_back(*ev.key);
        } else {
            group.has_address_event = true;
        }
    }
    return groups;
}

}  // namespace

AccessList optimal_tal(const AccessTrace& trace, const GasSchedule& schedule,
                       const ForkConfig& fork) {
    if (!schedule.access_lists_supported)
        throw UnsupportedScheduleError(schedule.name);
    validate_trace(trace);

    const WarmSets auto_warm = auto_warm_addresses(trace.ctx, fork);

    AccessList tal;
    for (AddressGroup& group : group_by_first_touch(trace)) {
        // The address component saves only when the trace would otherwise
        // pay a cold account access; each accessed key always saves.
        const bool address_pays_cold =
            group.has_address_event && !auto_warm.address_warm(group.address);
        const SignedGas address_saving =
            address_pays_cold ? static_cast<SignedGas>(schedule.per_address_saving()) +
                                    static_cast<SignedGas>(schedule.access_list_address_cost)
                              : 0;
        const SignedGas net =
            address_saving - static_cast<SignedGas>(schedule.access_list_address_cost) +
            static_cast<SignedGas>(group.keys.size()) *
                static_cast<SignedGas>(schedule.per_key_saving());
        if (net > 0)
            tal.entries.push_back(AccessListEntry{group.address, std::move(group.keys)});
    }
    return tal;
}

TalDelta tal_delta(const AccessTrace& trace, const AccessList& tal,
                   const GasSchedule& schedule, const ForkConfig& fork) {
    if (!schedule.access_lists_supported)
        throw UnsupportedScheduleError(schedule.name);

    TalDelta delta;
    delta.breakdown_with = charge_accesses(trace, tal, schedule, fork);
    delta.breakdown_without = charge_accesses(trace, AccessList{}, schedule, fork);
    delta.vs_empty = static_cast<SignedGas>(delta.breakdown_with.total) -
                     static_cast<SignedGas>(delta.breakdown_without.total);
    delta.vs_empty_wei = to_wei(delta.vs_empty, trace.ctx.effective_gas_price);
    return delta;
}

TalDelta cross_state_delta(const AccessTrace& gen_trace, const AccessTrace& exec_trace,
                           const GasSchedule& schedule, const ForkConfig& fork) {
    if (gen_trace.ctx.tx_hash != exec_trace.ctx.tx_hash)
        throw TxMismatchError("cross-state traces refer to different transactions (" +
                              to_hex(gen_trace.ctx.tx_hash) + " vs " +
                              to_hex(exec_trace.ctx.tx_hash) + ")");
    return tal_delta(exec_trace, optimal_tal(gen_trace, schedule, fork), schedule, fork);
}

}  // namespace talscope
