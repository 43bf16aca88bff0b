// talscope: gas accounting toolkit for Ethereum transaction access lists
// Copyright 2026 The talscope Authors.
// SPDX-License-Identifier: Apache-2.0

#include <talscope/types.hpp>

#include <talscope/errors.hpp>

#include <cstddef>

namespace talscope {
namespace {

constexpr char kHexDigits[] = "0123456789abcdef";

int nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

template <std::size_t N>
std::string bytes_to_hex(const std::array<std::uint8_t, N>& bytes) {
    std::string out;
    out.reserve(2 + 2 * N);
    out += "0x";
    for (auto b : bytes) {
        out += kHexDigits[b >> 4];
        out += kHexDigits[b & 0x0f];
    }
    return out;
}

template <std::size_t N>
bool hex_to_bytes(std::string_view hex, std::array<std::uint8_t, N>& out) {
    if (hex.size() != 2 + 2 * N || hex[0] != '0' || (hex[1] != 'x' && hex[1] != 'X'))
        return false;
    for (std::size_t i = 0; i < N; ++i) {
        const int hi = nibble(hex[2 + 2 * i]);
        const int lo = nibble(hex[3 + 2 * i]);
        if (hi < 0 || lo < 0) return false;
        out[i] = static_cast<std::uint8_t>((hi << 4) | lo);
    }
    return true;
}

}  // namespace

Address precompile_address(std::uint32_t ordinal) {
    Address a;
    a.bytes[16] = static_cast<std::uint8_t>(ordinal >> 24);
    a.bytes[17] = static_cast<std::uint8_t>(ordinal >> 16);
    a.bytes[18] = static_cast<std::uint8_t>(ordinal >> 8);
    a.bytes[19] = static_cast<std::uint8_t>(ordinal);
    return a;
}

std::string to_hex(const Address& a) { return bytes_to_hex(a.bytes); }
std::string to_hex(const Bytes32& b) { return bytes_to_hex(b.bytes); }

bool parse_address(std::string_view hex, Address& out) {
    return hex_to_bytes(hex, out.bytes);
}

bool parse_bytes32(std::string_view hex, Bytes32& out) {
    return hex_to_bytes(hex, out.bytes);
}

Address address_from_hex(std::string_view hex) {
    Address a;
    if (!parse_address(hex, a))
        throw SchemaError("$", "malformed address '" + std::string(hex) + "'");
    return a;
}

Bytes32 bytes32_from_hex(std::string_view hex) {
    Bytes32 b;
    if (!parse_bytes32(hex, b))
        throw SchemaError("$", "malformed 32-byte word '" + std::string(hex) + "'");
    return b;
}

}  // namespace talscope
