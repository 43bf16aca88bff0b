// talscope: gas accounting toolkit for Ethereum transaction access lists
// Copyright 2026 The talscope Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <talscope/charge.hpp>
#include <talscope/trace.hpp>

#include <unistd.h>

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace talscope::test {

/// Self-cleaning scratch directory for file-based tests.
struct TempDir {
    std::filesystem::path path;

    TempDir() {
        static std::atomic<unsigned> counter{0};
        path = std::filesystem::temp_directory_path() /
               ("talscope_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter.fetch_add(1)));
        std::filesystem::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path, ec);
    }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return "<unreadable: " + path + ">";
    return std::string(std::istreambuf_iterator<char>(in), {});
}

inline Address addr_of_byte(std::uint8_t marker, std::uint8_t low) {
    Address a;
    a.bytes[0] = marker;
    a.bytes[19] = low;
    return a;
}

inline StorageKey key_of_byte(std::uint8_t low) {
    StorageKey k;
    k.bytes[31] = low;
    return k;
}

inline TxHash hash_of(std::uint64_t n) {
    TxHash h;
    for (int i = 0; i < 8; ++i)
        h.bytes[31 - i] = static_cast<std::uint8_t>(n >> (8 * i));
    return h;
}

// Fixed parties, all outside the precompile range and distinct from the
// 0xaa-marked pool addresses used for external contracts.
inline const Address kSender = addr_of_byte(0x51, 0x01);
inline const Address kRecipient = addr_of_byte(0x52, 0x02);
inline const Address kProducer = addr_of_byte(0x53, 0x03);
inline const Address kCreated = addr_of_byte(0x54, 0x04);

inline TxContext make_ctx(std::uint64_t tx_counter = 1) {
    TxContext ctx;
    ctx.tx_hash = hash_of(tx_counter);
    ctx.sender = kSender;
    ctx.recipient = kRecipient;
    ctx.block_producer = kProducer;
    ctx.block_number = 17'000'000;
    ctx.tx_index = static_cast<std::uint32_t>(tx_counter % 256);
    ctx.effective_gas_price = 20'000'000'000ull;  // 20 gwei
    ctx.block_timestamp = 1'692'000'000;
    return ctx;
}

inline AccessTrace make_trace(std::vector<AccessEvent> events, std::uint64_t tx_counter = 1) {
    AccessTrace t;
    t.ctx = make_ctx(tx_counter);
    t.events = std::move(events);
    t.state_label = StateLabel::IBS;
    return t;
}

inline void renumber(AccessTrace& trace) {
    for (std::size_t i = 0; i < trace.events.size(); ++i)
        trace.events[i].seq = i;
}

// ---------------------------------------------------------------------
// Independent charging oracle: a direct, step-by-step reading of the
// EIP-2929/2930 rules using hex-string sets. Kept structurally apart
// from the library so the two can check each other.
// ---------------------------------------------------------------------
inline std::uint64_t naive_total(const AccessTrace& trace, const AccessList& tal,
                                 const GasSchedule& sched, const ForkConfig& fork) {
    std::set<std::string> warm_addr;
    std::set<std::string> warm_slot;
    const auto a_key = [](const Address& a) { return to_hex(a); };
    const auto s_key = [](const Address& a, const StorageKey& k) {
        return to_hex(a) + ":" + to_hex(k);
    };

    warm_addr.insert(a_key(trace.ctx.sender));
    if (trace.ctx.recipient) warm_addr.insert(a_key(*trace.ctx.recipient));
    for (const Address& c : trace.ctx.created_contracts) warm_addr.insert(a_key(c));
    for (std::uint32_t i = 1; i <= fork.precompile_max; ++i)
        warm_addr.insert(a_key(precompile_address(i)));
    if (fork.coinbase_auto_warm) warm_addr.insert(a_key(trace.ctx.block_producer));

    std::uint64_t total = 0;
    for (const AccessListEntry& e : tal.entries) {
        total += sched.access_list_address_cost;
        total += e.storage_keys.size() * sched.access_list_storage_key_cost;
        warm_addr.insert(a_key(e.address));
        for (const StorageKey& k : e.storage_keys) warm_slot.insert(s_key(e.address, k));
    }

    for (const AccessEvent& ev : trace.events) {
        if (ev.key.has_value()) {
            const std::string key = s_key(ev.address, *ev.key);
            if (warm_slot.count(key)) {
                total += sched.warm_access_cost;
            } else {
                total += sched.cold_sload_cost;
                warm_slot.insert(key);
            }
        } else {
            const std::string key = a_key(ev.address);
            if (warm_addr.count(key)) {
                total += sched.warm_access_cost;
            } else {
                total += sched.cold_account_access_cost;
                warm_addr.insert(key);
            }
        }
    }
    return total;
}

// ---------------------------------------------------------------------
// Brute-force optimality oracle: enumerate every legal TAL built from
// the accessed atoms (each slot atom pulls in its enclosing address) and
// price each candidate with the naive oracle.
// ---------------------------------------------------------------------
inline std::int64_t brute_force_best_delta(const AccessTrace& trace, const GasSchedule& sched,
                                           const ForkConfig& fork) {
    std::vector<Address> addresses;
    std::vector<SlotId> slots;
    for (const AccessEvent& ev : trace.events) {
        if (std::find(addresses.begin(), addresses.end(), ev.address) == addresses.end())
            addresses.push_back(ev.address);
        if (ev.key.has_value()) {
            const SlotId slot{ev.address, *ev.key};
            if (std::find(slots.begin(), slots.end(), slot) == slots.end())
                slots.push_back(slot);
        }
    }
    const std::size_t n = addresses.size() + slots.size();

    const std::int64_t base =
        static_cast<std::int64_t>(naive_total(trace, AccessList{}, sched, fork));
    std::int64_t best = 0;  // the empty TAL
    for (std::uint64_t mask = 1; mask < (1ull << n); ++mask) {
        // chosen address atoms, then enclosing addresses of chosen slots
        std::vector<Address> entry_order;
        std::vector<std::vector<StorageKey>> entry_keys;
        const auto entry_for = [&](const Address& a) -> std::size_t {
            for (std::size_t i = 0; i < entry_order.size(); ++i)
                if (entry_order[i] == a) return i;
            entry_order.push_back(a);
            entry_keys.emplace_back();
            return entry_order.size() - 1;
        };
        for (std::size_t i = 0; i < addresses.size(); ++i)
            if (mask & (1ull << i)) entry_for(addresses[i]);
        for (std::size_t j = 0; j < slots.size(); ++j)
            if (mask & (1ull << (addresses.size() + j)))
                entry_keys[entry_for(slots[j].address)].push_back(slots[j].key);

        AccessList candidate;
        for (std::size_t i = 0; i < entry_order.size(); ++i)
            candidate.entries.push_back({entry_order[i], entry_keys[i]});

        const std::int64_t delta =
            static_cast<std::int64_t>(naive_total(trace, candidate, sched, fork)) - base;
        best = std::min(best, delta);
    }
    return best;
}

// ---------------------------------------------------------------------
// Deterministic random generators.
// ---------------------------------------------------------------------
struct TraceGenOptions {
    int max_events = 12;
    int address_pool = 4;
    int key_pool = 3;
    bool touch_special_parties = true;  // sometimes hit sender/recipient/producer/precompiles
    bool address_event_before_storage = true;  // ingestion-shaped traces
    std::size_t max_atoms = 0;                 // 0 = unbounded
};

inline AccessTrace random_trace(std::mt19937_64& rng, std::uint64_t tx_counter,
                                const TraceGenOptions& opt = {}) {
    std::uniform_int_distribution<int> n_events(0, opt.max_events);
    std::uniform_int_distribution<int> pick_addr(0, opt.address_pool - 1);
    std::uniform_int_distribution<int> pick_key(0, opt.key_pool - 1);
    std::uniform_int_distribution<int> pick_kind(0, 9);

    for (;;) {
        AccessTrace trace = make_trace({}, tx_counter);
        const int count = n_events(rng);
        for (int i = 0; i < count; ++i) {
            Address a;
            const int special = pick_kind(rng);
            if (opt.touch_special_parties && special == 0) a = trace.ctx.sender;
            else if (opt.touch_special_parties && special == 1) a = *trace.ctx.recipient;
            else if (opt.touch_special_parties && special == 2) a = trace.ctx.block_producer;
            else if (opt.touch_special_parties && special == 3)
                a = precompile_address(1 + static_cast<std::uint32_t>(pick_key(rng)));
            else a = addr_of_byte(0xaa, static_cast<std::uint8_t>(pick_addr(rng)));

            const int kind = pick_kind(rng);
            if (kind < 4) {
                trace.events.push_back(AccessEvent::address_access(a, 0));
            } else {
                const StorageKey k = key_of_byte(static_cast<std::uint8_t>(pick_key(rng)));
                trace.events.push_back(kind < 7 ? AccessEvent::storage_read(a, k, 0)
                                                : AccessEvent::storage_write(a, k, 0));
            }
        }

        if (opt.address_event_before_storage) {
            std::vector<AccessEvent> shaped;
            std::set<Address> addressed;
            for (const AccessEvent& ev : trace.events) {
                if (ev.key.has_value() && addressed.insert(ev.address).second)
                    shaped.push_back(AccessEvent::address_access(ev.address, 0));
                else if (!ev.key.has_value())
                    addressed.insert(ev.address);
                shaped.push_back(ev);
            }
            trace.events = std::move(shaped);
        }
        renumber(trace);

        if (opt.max_atoms) {
            const WarmSets touched = first_touch_sets(trace);
            if (touched.accessed_addresses.size() + touched.accessed_storage_keys.size() >
                opt.max_atoms)
                continue;  // roll again
        }
        return trace;
    }
}

/// Arbitrary TAL with occasional duplicate entries and keys, drawn from
/// wide random bytes; for codec round-trips and charging properties.
inline AccessList random_tal(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> n_entries(0, 5);
    std::uniform_int_distribution<int> n_keys(0, 4);
    std::uniform_int_distribution<int> byte(0, 255);
    std::uniform_int_distribution<int> dup(0, 9);

    AccessList tal;
    const int count = n_entries(rng);
    for (int i = 0; i < count; ++i) {
        AccessListEntry entry;
        if (!tal.entries.empty() && dup(rng) == 0) {
            entry.address = tal.entries.front().address;  // deliberate duplicate
        } else {
            for (auto& b : entry.address.bytes) b = static_cast<std::uint8_t>(byte(rng));
        }
        const int keys = n_keys(rng);
        for (int j = 0; j < keys; ++j) {
            StorageKey k;
            for (auto& b : k.bytes) b = static_cast<std::uint8_t>(byte(rng));
            entry.storage_keys.push_back(k);
            if (dup(rng) == 0) entry.storage_keys.push_back(k);  // duplicate key
        }
        tal.entries.push_back(std::move(entry));
    }
    return tal;
}

}  // namespace talscope::test
