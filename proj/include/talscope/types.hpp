// talscope: gas accounting toolkit for Ethereum transaction access lists
// Copyright 2026 The talscope Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace talscope {

using Gas = std::uint64_t;
using SignedGas = std::int64_t;
using Wei = std::uint64_t;
using SignedWei = std::int64_t;

/// 20-byte account address.
struct Address {
    std::array<std::uint8_t, 20> bytes{};

    auto operator<=>(const Address&) const = default;
};

/// 32-byte word: storage keys and transaction hashes.
struct Bytes32 {
    std::array<std::uint8_t, 32> bytes{};

    auto operator<=>(const Bytes32&) const = default;
};

using StorageKey = Bytes32;
using TxHash = Bytes32;

/// An (address, storage key) pair, the unit of storage warmth.
struct SlotId {
    Address address;
    StorageKey key;

    auto operator<=>(const SlotId&) const = default;
};

/// The precompile at the given ordinal (0x1 is ecrecover, and so on).
Address precompile_address(std::uint32_t ordinal);

// Hex codec. Canonical form is lowercase with 0x prefix and fixed width
// (42 chars for addresses, 66 for 32-byte words). Parsing accepts mixed
// case but insists on the exact width.
std::string to_hex(const Address& a);
std::string to_hex(const Bytes32& b);
bool parse_address(std::string_view hex, Address& out);
bool parse_bytes32(std::string_view hex, Bytes32& out);

// Throwing variants for call sites where malformed input is a bug.
Address address_from_hex(std::string_view hex);
Bytes32 bytes32_from_hex(std::string_view hex);

namespace detail {

// FNV-1a
inline std::size_t hash_bytes(const std::uint8_t* data, std::size_t n) {
    std::size_t h = 14695981039346656037ull;
    for (std::size_t i = 0; i < n; ++i) {
        h ^= data[i];
        h *= 1099511628211ull;
    }
    return h;
}

}  // namespace detail
}  // namespace talscope

template <>
struct std::hash<talscope::Address> {
    std::size_t operator()(const talscope::Address& a) const noexcept {
        return talscope::detail::hash_bytes(a.bytes.data(), a.bytes.size());
    }
};

template <>
struct std::hash<talscope::Bytes32> {
    std::size_t operator()(const talscope::Bytes32& b) const noexcept {
        return talscope::detail::hash_bytes(b.bytes.data(), b.bytes.size());
    }
};

template <>
struct std::hash<talscope::SlotId> {
    std::size_t operator()(const talscope::SlotId& s) const noexcept {
        const auto h1 = std::hash<talscope::Address>{}(s.address);
        const auto h2 = std::hash<talscope::Bytes32>{}(s.key);
        return h1 ^ (h2 + 0x9e3779b97f4a7c15ull + (h1 << 6) + (h1 >> 2));
    }
};
