// talscope: gas accounting toolkit for Ethereum transaction access lists
// Copyright 2026 The talscope Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <talscope/types.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace talscope {

/// Gas constants for state accesses and access-list charges.
///
/// Four named presets track the history of the SLOAD price: frontier (20),
/// eip150 (200), eip1884 (800) and berlin (2100 cold / 100 warm). Only the
/// berlin schedule distinguishes warm from cold accesses and supports
/// transaction access lists; the earlier schedules charge a single flat
/// price per storage access (held in cold_sload_cost) and reject every TAL
/// operation.
struct GasSchedule {
    std::string name = "berlin";
    bool access_lists_supported = true;

    Gas cold_account_access_cost = 2600;
    Gas warm_access_cost = 100;
    Gas cold_sload_cost = 2100;  // flat per-access price on pre-berlin schedules
    Gas access_list_address_cost = 2400;
    Gas access_list_storage_key_cost = 1900;

    /// Net gas saved by one TAL entry component that is actually used.
    /// 100 for the stock berlin constants.
    Gas per_address_saving() const {
        return cold_account_access_cost - access_list_address_cost - warm_access_cost;
    }
    Gas per_key_saving() const {
        return cold_sload_cost - access_list_storage_key_cost - warm_access_cost;
    }

    /// Returns the named preset. Throws ConfigError for unknown names.
    static GasSchedule preset(const std::string& name);
    static const std::vector<std::string>& preset_names();

    /// Checks the schedule invariants; throws ConfigError on violation.
    /// For berlin both per-entry savings must equal 100.
    void validate() const;
};

/// Fork-dependent warmth rules that are not plain gas constants.
struct ForkConfig {
    /// Whether the block producer address is warm at transaction start.
    bool coinbase_auto_warm = true;
    /// Highest auto-warm precompile ordinal (0x1 through this value).
    std::uint32_t precompile_max = 9;

    void validate() const;
};

/// Applies `key=integer` overrides (one per line, '#' comments) to a
/// schedule, then re-validates. Unknown keys throw ConfigError.
void apply_schedule_overrides(GasSchedule& schedule, std::istream& in);
void apply_schedule_overrides_file(GasSchedule& schedule, const std::string& path);

}  // namespace talscope
