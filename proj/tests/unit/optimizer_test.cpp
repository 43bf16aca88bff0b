// talscope: gas accounting toolkit for Ethereum transaction access lists
// Copyright 2026 The talscope Authors.
// SPDX-License-Identifier: Apache-2.0

#include <talscope/optimizer.hpp>

#include <talscope/errors.hpp>

#include <doctest.h>

#include "../testutil.hpp"

#include <algorithm>
#include <random>
#include <set>

using namespace talscope;
using namespace talscope::test;

namespace {

const GasSchedule kBerlin = GasSchedule::preset("berlin");
const ForkConfig kFork{};

const Address kA = addr_of_byte(0xaa, 1);
const Address kB = addr_of_byte(0xaa, 2);
const StorageKey kK1 = key_of_byte(1);

AccessTrace recipient_with_keys(int n_keys, std::uint64_t tx = 1) {
    AccessTrace trace = make_trace({}, tx);
    trace.events.push_back(AccessEvent::address_access(kRecipient, 0));
    for (int i = 0; i < n_keys; ++i)
        trace.events.push_back(
            AccessEvent::storage_read(kRecipient, key_of_byte(static_cast<std::uint8_t>(i)), 0));
    renumber(trace);
    return trace;
}

}  // namespace

TEST_CASE("an external address with one key is worth one entry") {
    const AccessTrace trace = make_trace({
        AccessEvent::address_access(kA, 0),
        AccessEvent::storage_read(kA, kK1, 1),
    });
    const AccessList tal = optimal_tal(trace, kBerlin, kFork);
    REQUIRE(tal.entries.size() == 1);
    CHECK(tal.entries[0].address == kA);
    CHECK(tal.entries[0].storage_keys == std::vector<StorageKey>{kK1});

    const TalDelta delta = tal_delta(trace, tal, kBerlin, kFork);
    CHECK(delta.vs_empty == -200);  // 2 entry components, 100 each
    CHECK(delta.vs_empty_wei == -200 * 20'000'000'000ll);
}

TEST_CASE("touching only the sender's balance needs no TAL") {
    const AccessTrace trace = make_trace({AccessEvent::address_access(kSender, 0)});
    CHECK(optimal_tal(trace, kBerlin, kFork).empty());
}

TEST_CASE("the recipient crosses break-even at 25 accessed keys") {
    const AccessList at_24 = optimal_tal(recipient_with_keys(24), kBerlin, kFork);
    CHECK(at_24.empty());

    const AccessList at_25 = optimal_tal(recipient_with_keys(25), kBerlin, kFork);
    REQUIRE(at_25.entries.size() == 1);
    CHECK(at_25.entries[0].address == kRecipient);
    CHECK(at_25.entries[0].storage_keys.size() == 25);

    // inclusion at 24 is gas-neutral, at 25 it saves exactly 100
    AccessList forced;
    forced.entries.push_back(at_25.entries[0]);
    forced.entries[0].storage_keys.resize(24);
    CHECK(tal_delta(recipient_with_keys(24), forced, kBerlin, kFork).vs_empty == 0);
    CHECK(tal_delta(recipient_with_keys(25), at_25, kBerlin, kFork).vs_empty == -100);
}

TEST_CASE("tal_delta trivia") {
    const AccessTrace trace = make_trace({AccessEvent::address_access(kA, 0)});
    CHECK(tal_delta(trace, AccessList{}, kBerlin, kFork).vs_empty == 0);
    // listing the auto-warm sender is a pure penalty
    CHECK(tal_delta(trace, AccessList{{{kSender, {}}}}, kBerlin, kFork).vs_empty == 2400);
}

TEST_CASE("optimizer output is deduplicated, ordered by first touch, trace-only") {
    std::mt19937_64 rng(0x0071a1);
    for (int iter = 0; iter < 200; ++iter) {
        const AccessTrace trace = random_trace(rng, 6000 + iter);
        const AccessList tal = optimal_tal(trace, kBerlin, kFork);
        const WarmSets touched = first_touch_sets(trace);

        std::set<Address> seen;
        for (const AccessListEntry& entry : tal.entries) {
            CHECK(seen.insert(entry.address).second);
            CHECK(touched.accessed_addresses.contains(entry.address));
            std::set<StorageKey> entry_keys;
            for (const StorageKey& k : entry.storage_keys) {
                CHECK(entry_keys.insert(k).second);
                CHECK(touched.accessed_storage_keys.contains(SlotId{entry.address, k}));
            }
        }

        // first-touch order of included addresses
        std::vector<Address> first_touch;
        for (const AccessEvent& ev : trace.events)
            if (std::find(first_touch.begin(), first_touch.end(), ev.address) ==
                first_touch.end())
                first_touch.push_back(ev.address);
        std::size_t cursor = 0;
        for (const AccessListEntry& entry : tal.entries) {
            const auto it = std::find(first_touch.begin() + cursor, first_touch.end(),
                                      entry.address);
            CHECK(it != first_touch.end());
            cursor = static_cast<std::size_t>(it - first_touch.begin());
        }
    }
}

TEST_CASE("optimal_tal attains the brute-force minimum") {
    std::mt19937_64 rng(0xb7ef0c);
    TraceGenOptions opt;
    opt.max_events = 8;
    opt.address_pool = 3;
    opt.key_pool = 2;
    opt.max_atoms = 8;

    for (int iter = 0; iter < 300; ++iter) {
        // half the traces are ingestion-shaped, half are adversarial
        opt.address_event_before_storage = (iter % 2 == 0);
        const AccessTrace trace = random_trace(rng, 7000 + iter, opt);
        const AccessList tal = optimal_tal(trace, kBerlin, kFork);
        const TalDelta delta = tal_delta(trace, tal, kBerlin, kFork);
        CHECK(delta.vs_empty == brute_force_best_delta(trace, kBerlin, kFork));
        CHECK(delta.vs_empty <= 0);
    }
}

TEST_CASE("closed form for external-only traces") {
    // all auto-warm addresses have no accessed keys: optimal saving is
    // 100 per included address plus 100 per included key
    AccessTrace trace = make_trace({
        AccessEvent::address_access(kSender, 0),
        AccessEvent::address_access(kA, 1),
        AccessEvent::storage_read(kA, kK1, 2),
        AccessEvent::storage_read(kA, key_of_byte(9), 3),
        AccessEvent::address_access(kB, 4),
    });
    const AccessList tal = optimal_tal(trace, kBerlin, kFork);
    std::size_t included_addresses = tal.entries.size();
    std::size_t included_keys = 0;
    for (const AccessListEntry& e : tal.entries) included_keys += e.storage_keys.size();
    CHECK(included_addresses == 2);
    CHECK(included_keys == 2);
    CHECK(tal_delta(trace, tal, kBerlin, kFork).vs_empty ==
          -100 * static_cast<SignedGas>(included_addresses + included_keys));
}

TEST_CASE("cross_state_delta") {
    AccessTrace exec = make_trace({
        AccessEvent::address_access(kA, 0),
        AccessEvent::storage_read(kA, kK1, 1),
    });

    SUBCASE("identical traces reproduce the ideal saving") {
        const TalDelta ideal = cross_state_delta(exec, exec, kBerlin, kFork);
        const TalDelta direct = tal_delta(exec, optimal_tal(exec, kBerlin, kFork), kBerlin, kFork);
        CHECK(ideal.vs_empty == direct.vs_empty);
        CHECK(ideal.vs_empty == -200);
    }

    SUBCASE("a stale generation state pays for its differences") {
        // generation trace saw B (never executed) and the shared A with its key
        AccessTrace gen = make_trace({
            AccessEvent::address_access(kA, 0),
            AccessEvent::storage_read(kA, kK1, 1),
            AccessEvent::address_access(kB, 2),
        });
        const TalDelta delta = cross_state_delta(gen, exec, kBerlin, kFork);
        CHECK(delta.vs_empty == -200 + 2400);  // saving kept, superfluous B paid
    }

    SUBCASE("a missed key costs exactly its per-key saving") {
        AccessTrace exec2 = exec;
        exec2.events.push_back(AccessEvent::storage_read(kA, key_of_byte(9), 2));
        AccessTrace gen = exec;  // lacks the second key
        const TalDelta stale = cross_state_delta(gen, exec2, kBerlin, kFork);
        const TalDelta ideal = cross_state_delta(exec2, exec2, kBerlin, kFork);
        CHECK(stale.vs_empty == ideal.vs_empty + 100);
    }

    SUBCASE("different transactions are rejected") {
        AccessTrace other = make_trace({}, 999);
        CHECK_THROWS_AS(cross_state_delta(other, exec, kBerlin, kFork), TxMismatchError);
    }
}

TEST_CASE("TAL operations reject pre-berlin schedules") {
    const GasSchedule eip1884 = GasSchedule::preset("eip1884");
    const AccessTrace trace = make_trace({AccessEvent::address_access(kA, 0)});
    CHECK_THROWS_AS(optimal_tal(trace, eip1884, kFork), UnsupportedScheduleError);
    CHECK_THROWS_AS(tal_delta(trace, AccessList{}, eip1884, kFork), UnsupportedScheduleError);
    CHECK_THROWS_AS(cross_state_delta(trace, trace, eip1884, kFork), UnsupportedScheduleError);
}
