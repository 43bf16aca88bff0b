// talscope: gas accounting toolkit for Ethereum transaction access lists
// Copyright 2026 The talscope Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <talscope/trace.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace talscope {

// TAL JSON codec. The wire shape is the standard transaction accessList
// field: an array of {"address": 0x + 40 hex, "storageKeys": [0x + 64 hex]}
// objects. encode_tal emits the canonical form: compact, lowercase hex,
// fixed width. decode_tal accepts mixed-case hex of the exact width and
// throws SchemaError with a JSON path otherwise.
std::string encode_tal(const AccessList& tal);
AccessList decode_tal(std::string_view text);

// Trace NDJSON codec (see docs/trace-schema.md). One trace per line;
// encode emits the canonical single-line form, decode validates both the
// JSON schema and the trace invariants.
std::string encode_trace(const AccessTrace& trace);
AccessTrace decode_trace(std::string_view line);

/// A transaction's declared TAL. `tal` is empty-but-present for type-1
/// transactions with an empty list and absent for transactions without
/// the accessList field; the two are distinct.
struct DeclaredTal {
    TxHash tx_hash;
    std::optional<AccessList> tal;

    bool operator==(const DeclaredTal&) const = default;
};

std::string encode_declared_tal(const DeclaredTal& d);
DeclaredTal decode_declared_tal(std::string_view line);

}  // namespace talscope
