// talscope: gas accounting toolkit for Ethereum transaction access lists
// Copyright 2026 The talscope Authors.
// SPDX-License-Identifier: Apache-2.0

#include <talscope/charge.hpp>

#include <talscope/errors.hpp>

namespace talscope {

WarmSets auto_warm_addresses(const TxContext& ctx, const ForkConfig& fork) {
    WarmSets warm;
    warm.accessed_addresses.insert(ctx.sender);
    if (ctx.recipient) warm.accessed_addresses.insert(*ctx.recipient);
    for (const Address& a : ctx.created_contracts) warm.accessed_addresses.insert(a);
    for (std::uint32_t i = 1; i <= fork.precompile_max; ++i)
        warm.accessed_addresses.insert(precompile_address(i));
    if (fork.coinbase_auto_warm) warm.accessed_addresses.insert(ctx.block_producer);
    return warm;
}

Gas tal_upfront_cost(const AccessList& tal, const GasSchedule& schedule) {
    if (!schedule.access_lists_supported)
        throw UnsupportedScheduleError(schedule.name);
    Gas cost = 0;
    for (const AccessListEntry& entry : tal.entries) {
        cost += schedule.access_list_address_cost;
        cost += static_cast<Gas>(entry.storage_keys.size()) * schedule.access_list_storage_key_cost;
    }
    return cost;
}

GasBreakdown charge_accesses(const AccessTrace& trace, const AccessList& tal,
                             const GasSchedule& schedule, const ForkConfig& fork) {
    validate_trace(trace);

    GasBreakdown out;

    if (!schedule.access_lists_supported) {
        if (!tal.empty())
            throw UnsupportedScheduleError(schedule.name);
        // Flat pricing: every storage access pays the full price, account
        // accesses carry no surcharge.
        for (const AccessEvent& ev : trace.events) {
            if (!is_storage_kind(ev.kind)) continue;
            out.access_gas += schedule.cold_sload_cost;
            ++out.cold_slot_events;
        }
        out.total = out.access_gas;
        return out;
    }

    out.upfront_tal_cost = tal_upfront_cost(tal, schedule);

    WarmSets warm = auto_warm_addresses(trace.ctx, fork);
    for (const AccessListEntry& entry : tal.entries) {
        warm.accessed_addresses.insert(entry.address);
        for (const StorageKey& k : entry.storage_keys)
            warm.accessed_storage_keys.insert(SlotId{entry.address, k});
    }

    for (const AccessEvent& ev : trace.events) {
        if (is_storage_kind(ev.kind)) {
            const SlotId slot{ev.address, *ev.key};
            if (warm.accessed_storage_keys.insert(slot).second) {
                out.access_gas += schedule.cold_sload_cost;
                ++out.cold_slot_events;
            } else {
                out.access_gas += schedule.warm_access_cost;
                ++out.warm_slot_events;
            }
        } else {
            if (warm.accessed_addresses.insert(ev.address).second) {
                out.access_gas += schedule.cold_account_access_cost;
                ++out.cold_address_events;
            } else {
                out.access_gas += schedule.warm_access_cost;
                ++out.warm_address_events;
            }
        }
    }

    out.total = out.upfront_tal_cost + out.access_gas;
    return out;
}

}  // namespace talscope
