// talscope: gas accounting toolkit for Ethereum transaction access lists
// Copyright 2026 The talscope Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <talscope/trace.hpp>

#include <json.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace talscope::rpc {

struct NodeEndpoint {
    std::string url;  // http://host:port[/path]
    std::uint32_t max_concurrent_requests = 4;
    double request_timeout_seconds = 30.0;

    void validate() const;
};

/// Raw tracer output as returned by the node, kept for debugging and for
/// normalization tests.
struct RawTraceDocument {
    TxHash tx_hash;
    std::string tracer_name;
    nlohmann::json payload;
};

enum class TraceMode {
    IBS,  // trace the transaction at its true intra-block position
    SOB,  // re-execute the same call on the state at the end of the previous block
};

/// One transaction as seen in a fetched block.
struct BlockTxRecord {
    TxHash hash;
    std::uint32_t tx_index = 0;
    Address sender;
    std::optional<Address> recipient;           // absent for creations
    std::optional<AccessList> declared_tal;     // absent when the field is missing
    Wei effective_gas_price = 0;
    std::optional<Address> created_contract;    // receipt contractAddress
};

struct BlockData {
    std::uint64_t number = 0;
    std::uint64_t timestamp = 0;
    Address producer;
    std::vector<BlockTxRecord> txs;
};

/// Minimal JSON-RPC 2.0 client over HTTP. Safe for concurrent use; each
/// call opens its own connection. Transport failures are retried twice
/// (all talscope RPCs are read-only and idempotent).
class JsonRpcClient {
public:
    explicit JsonRpcClient(NodeEndpoint endpoint);

    /// Performs one call and returns the "result" member. JSON-RPC error
    /// responses raise RpcError; missing entities raise NotFoundError.
    nlohmann::json call(const std::string& method, const nlohmann::json& params) const;

    const NodeEndpoint& endpoint() const { return endpoint_; }

private:
    NodeEndpoint endpoint_;
    std::string host_;
    int port_ = 0;
    std::string path_;
};

/// How one opcode maps onto access events. The table ships as data
/// (data/opcode_map.json) so new forks can extend it without code
/// changes; see OpcodeMap::builtin for the embedded default.
struct OpcodeRule {
    EventKind kind = EventKind::AddressAccess;
    int stack_pos = 0;  // operand position from the top of the stack
};

enum class FrameEffect {
    Call,      // callee code, callee storage (CALL, STATICCALL)
    Delegate,  // callee code, caller storage (DELEGATECALL, CALLCODE)
    Create,    // created address resolved on frame exit (CREATE, CREATE2)
};

struct OpcodeMap {
    std::unordered_map<std::string, OpcodeRule> event_rules;
    std::unordered_map<std::string, FrameEffect> frame_rules;

    static OpcodeMap builtin();
    static OpcodeMap from_json(const nlohmann::json& doc);
    static OpcodeMap load_file(const std::string& path);
};

struct NormalizedAccesses {
    std::vector<AccessEvent> events;
    std::vector<Address> created_contracts;
};

/// Source of the ordered-access tracer shipped with talscope (a debug
/// tracer in the JavaScript dialect accepted by Geth and Erigon). Its
/// result is {"events": [{kind,address,key?}...], "created": [...]}.
const std::string& access_tracer_source();

/// Normalizes the ordered-access tracer output.
NormalizedAccesses normalize_access_events(const nlohmann::json& payload);

/// Normalizes structured opcode logs ({"structLogs": [...]}) through the
/// opcode mapping table, tracking call frames so storage events attribute
/// to the executing contract's storage address. `root_address` is the
/// outermost storage context (the recipient, or the created contract for
/// creations).
NormalizedAccesses normalize_struct_logs(const nlohmann::json& payload,
                                         const OpcodeMap& map,
                                         const Address& root_address);

/// Dispatches on the document shape; every document either normalizes
/// fully or raises NormalizationError carrying the raw payload.
NormalizedAccesses normalize_trace_document(const RawTraceDocument& doc,
                                            const OpcodeMap& map,
                                            const Address& root_address);

/// Fetches one block with its transactions, declared TALs (decoded via
/// the TAL codec) and per-tx effective gas prices from receipts.
BlockData fetch_block(const JsonRpcClient& client, std::uint64_t number);

/// Fetches blocks [from, to] with at most
/// endpoint.max_concurrent_requests requests in flight; `sink` receives
/// blocks in ascending order.
void fetch_block_range(const JsonRpcClient& client, std::uint64_t from, std::uint64_t to,
                       const std::function<void(BlockData&&)>& sink);

/// Fetches and normalizes the access trace of one transaction. IBS mode
/// uses transaction tracing in place; SOB mode re-executes the same call
/// against the state at the end of the previous block. Falls back from
/// the ordered-access tracer to structured logs when the node rejects
/// custom tracers; raises TracerUnsupportedError when neither works.
AccessTrace fetch_trace(const JsonRpcClient& client, const TxHash& tx_hash,
                        TraceMode mode, const OpcodeMap& map = OpcodeMap::builtin());

}  // namespace talscope::rpc
