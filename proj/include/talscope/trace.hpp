// talscope: gas accounting toolkit for Ethereum transaction access lists
// Copyright 2026 The talscope Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <talscope/types.hpp>

#include <cstdint>
#include <optional>
#include <unordered_set>
#include <vector>

namespace talscope {

enum class EventKind {
    AddressAccess,
    StorageRead,
    StorageWrite,
};

const char* to_string(EventKind k);
bool is_storage_kind(EventKind k);

/// One state access made by a transaction.
struct AccessEvent {
    EventKind kind = EventKind::AddressAccess;
    Address address;
    std::optional<StorageKey> key;  // present exactly for storage kinds
    std::uint64_t seq = 0;

    static AccessEvent address_access(Address a, std::uint64_t seq) {
        return {EventKind::AddressAccess, a, std::nullopt, seq};
    }
    static AccessEvent storage_read(Address a, StorageKey k, std::uint64_t seq) {
        return {EventKind::StorageRead, a, k, seq};
    }
    static AccessEvent storage_write(Address a, StorageKey k, std::uint64_t seq) {
        return {EventKind::StorageWrite, a, k, seq};
    }

    bool operator==(const AccessEvent&) const = default;
};

/// Transaction-level facts that determine the auto-warm set and the
/// wei conversion of gas deltas.
struct TxContext {
    TxHash tx_hash;
    Address sender;
    std::optional<Address> recipient;  // absent for creation transactions
    Address block_producer;
    std::uint64_t block_number = 0;
    std::uint32_t tx_index = 0;
    std::vector<Address> created_contracts;
    Wei effective_gas_price = 0;
    std::optional<std::uint64_t> block_timestamp;  // unix seconds, used by adoption stats

    bool operator==(const TxContext&) const = default;
};

/// Which state the trace was recorded against. Metadata only; no
/// operation branches on it.
enum class StateLabel {
    SOB,       // state at the start of the block
    IBS,       // intra-block state, the transaction's true position
    Declared,  // reconstructed from a declared TAL
    Other,
};

const char* to_string(StateLabel s);

/// Ordered state-access events of one transaction plus its context.
struct AccessTrace {
    TxContext ctx;
    std::vector<AccessEvent> events;
    StateLabel state_label = StateLabel::Other;

    bool operator==(const AccessTrace&) const = default;
};

/// One TAL entry: an address and its storage keys.
struct AccessListEntry {
    Address address;
    std::vector<StorageKey> storage_keys;

    bool operator==(const AccessListEntry&) const = default;
};

/// A transaction access list. Duplicate addresses and keys are legal
/// input (consistent with on-chain reality); they are charged per
/// occurrence and warm idempotently.
struct AccessList {
    std::vector<AccessListEntry> entries;

    bool empty() const { return entries.empty(); }

    bool operator==(const AccessList&) const = default;
};

/// The global warm sets of EIP-2929. Address warmth and slot warmth are
/// independent: neither implies the other.
struct WarmSets {
    std::unordered_set<Address> accessed_addresses;
    std::unordered_set<SlotId> accessed_storage_keys;

    bool address_warm(const Address& a) const {
        return accessed_addresses.contains(a);
    }
    bool slot_warm(const Address& a, const StorageKey& k) const {
        return accessed_storage_keys.contains(SlotId{a, k});
    }
};

/// Checks the structural invariants (strictly increasing seq, key present
/// exactly for storage kinds, creation context has created contracts).
/// Throws TraceError naming the offending event index.
void validate_trace(const AccessTrace& trace);

/// Distinct accessed addresses and (address, key) pairs, independent of
/// event kind, order and duplication. A storage event on address A counts
/// A as touched even without an explicit address event.
WarmSets first_touch_sets(const AccessTrace& trace);

}  // namespace talscope
