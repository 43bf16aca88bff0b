// talscope: gas accounting toolkit for Ethereum transaction access lists
// Copyright 2026 The talscope Authors.
// SPDX-License-Identifier: Apache-2.0

#include <talscope/schedule.hpp>

#include <talscope/errors.hpp>

#include <charconv>
#include <fstream>
#include <istream>
#include <sstream>

namespace talscope {
namespace {

GasSchedule flat_schedule(std::string name, Gas flat_sload) {
    GasSchedule s;
    s.name = std::move(name);
    s.access_lists_supported = false;
    s.cold_sload_cost = flat_sload;
    s.warm_access_cost = flat_sload;  // no warm discount before EIP-2929
    s.cold_account_access_cost = 0;   // no account-access surcharge either
    s.access_list_address_cost = 0;
    s.access_list_storage_key_cost = 0;
    return s;
}

}  // namespace

GasSchedule GasSchedule::preset(const std::string& name) {
    if (name == "berlin") return GasSchedule{};
    if (name == "frontier") return flat_schedule("frontier", 20);
    if (name == "eip150") return flat_schedule("eip150", 200);
    if (name == "eip1884") return flat_schedule("eip1884", 800);
    throw ConfigError("unknown gas schedule '" + name + "' (expected one of: frontier, eip150, eip1884, berlin)");
}

const std::vector<std::string>& GasSchedule::preset_names() {
    static const std::vector<std::string> names = {"frontier", "eip150", "eip1884", "berlin"};
    return names;
}

void GasSchedule::validate() const {
    if (name == "berlin") {
        if (!access_lists_supported)
            throw ConfigError("berlin schedule must support access lists");
        if (cold_sload_cost < access_list_storage_key_cost + warm_access_cost ||
            per_key_saving() != 100)
            throw ConfigError("berlin schedule violates the per-key saving identity "
                              "cold_sload_cost - access_list_storage_key_cost - warm_access_cost = 100");
        if (cold_account_access_cost < access_list_address_cost + warm_access_cost ||
            per_address_saving() != 100)
            throw ConfigError("berlin schedule violates the per-address saving identity "
                              "cold_account_access_cost - access_list_address_cost - warm_access_cost = 100");
    } else if (access_lists_supported) {
        throw ConfigError("schedule '" + name + "' must not claim access-list support");
    }
}

void ForkConfig::validate() const {
    if (precompile_max < 1)
        throw ConfigError("precompile_max must be at least 1");
}

void apply_schedule_overrides(GasSchedule& schedule, std::istream& in) {
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        // trim
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        const auto last = line.find_last_not_of(" \t\r");
        const std::string item = line.substr(first, last - first + 1);

        const auto eq = item.find('=');
        if (eq == std::string::npos)
            throw ConfigError("schedule override line " + std::to_string(lineno) +
                              ": expected key=integer, got '" + item + "'");
        std::string key = item.substr(0, eq);
        std::string value = item.substr(eq + 1);
        const auto trim = [](std::string& s) {
            const auto b = s.find_first_not_of(" \t");
            const auto e = s.find_last_not_of(" \t");
            s = (b == std::string::npos) ? std::string() : s.substr(b, e - b + 1);
        };
        trim(key);
        trim(value);

        Gas parsed = 0;
        const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), parsed);
        if (ec != std::errc() || ptr != value.data() + value.size())
            throw ConfigError("schedule override line " + std::to_string(lineno) +
                              ": '" + value + "' is not a non-negative integer");

        if (key == "cold_account_access_cost") schedule.cold_account_access_cost = parsed;
        else if (key == "warm_access_cost") schedule.warm_access_cost = parsed;
        else if (key == "cold_sload_cost") schedule.cold_sload_cost = parsed;
        else if (key == "access_list_address_cost") schedule.access_list_address_cost = parsed;
        else if (key == "access_list_storage_key_cost") schedule.access_list_storage_key_cost = parsed;
        else
            throw ConfigError("schedule override line " + std::to_string(lineno) +
                              ": unknown key '" + key + "'");
    }
    schedule.validate();
}

void apply_schedule_overrides_file(GasSchedule& schedule, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open schedule override file '" + path + "'");
    apply_schedule_overrides(schedule, in);
}

}  // namespace talscope
