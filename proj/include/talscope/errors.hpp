// talscope: gas accounting toolkit for Ethereum transaction access lists
// Copyright 2026 The talscope Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace talscope {

/// Base class for all talscope errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A TAL operation was requested on a schedule without access-list support.
struct UnsupportedScheduleError : Error {
    explicit UnsupportedScheduleError(const std::string& schedule_name)
        : Error("schedule '" + schedule_name + "' does not support access lists") {}
};

enum class TraceDefect {
    NonMonotonicSeq,
    MissingKey,
    UnexpectedKey,
    MalformedAddress,
    ContextInvariant,
};

const char* to_string(TraceDefect d);

/// A trace violated a structural invariant; `index` is the offending event
/// position (SIZE_MAX when the defect is in the context, not an event).
struct TraceError : Error {
    TraceDefect defect;
    std::size_t index;

    TraceError(TraceDefect d, std::size_t event_index);
};

/// Input did not match the documented JSON schema. `where` is a JSON path
/// such as "$[2].storageKeys[0]", optionally with an NDJSON line number.
struct SchemaError : Error {
    std::string where;
    std::size_t line = 0;  // 1-based; 0 when not line-oriented

    SchemaError(std::string where_, const std::string& what_, std::size_t line_ = 0)
        : Error(what_ + " at " + where_ + (line_ ? " (line " + std::to_string(line_) + ")" : "")),
          where(std::move(where_)),
          line(line_) {}
};

/// Paired traces do not refer to the same transaction.
struct TxMismatchError : Error {
    using Error::Error;
};

/// The same tx_hash appeared twice in an aggregation stream.
struct DuplicateTxError : Error {
    using Error::Error;
};

/// A transaction lacks one of the two traces required for a pairing.
struct MissingPairError : Error {
    using Error::Error;
};

/// Transport or protocol failure talking to the node.
struct RpcError : Error {
    using Error::Error;
};

/// The node answered with a JSON-RPC error object.
struct RpcProtocolError : RpcError {
    int code;

    RpcProtocolError(int code_, const std::string& message)
        : RpcError("JSON-RPC error " + std::to_string(code_) + ": " + message), code(code_) {}
};

/// The requested entity does not exist (e.g. a future block).
struct NotFoundError : Error {
    using Error::Error;
};

/// The node does not support the requested tracer.
struct TracerUnsupportedError : Error {
    using Error::Error;
};

/// A tracer document could not be normalized into access events.
/// Carries the raw document for debugging.
struct NormalizationError : Error {
    std::string raw_document;

    NormalizationError(const std::string& what_, std::string raw)
        : Error(what_), raw_document(std::move(raw)) {}
};

struct IoError : Error {
    using Error::Error;
};

/// A wei conversion left the 64-bit signed range.
struct OverflowError : Error {
    using Error::Error;
};

/// Invalid run configuration (CLI flags, schedule files).
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace talscope
