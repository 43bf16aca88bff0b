// talscope: gas accounting toolkit for Ethereum transaction access lists
// Copyright 2026 The talscope Authors.
// SPDX-License-Identifier: Apache-2.0

#include <talscope/rpc.hpp>

#include <talscope/codec.hpp>
#include <talscope/errors.hpp>

#include <httplib.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <thread>

namespace talscope::rpc {
namespace {

using nlohmann::json;

// Default opcode mapping, the same table as data/opcode_map.json.
// Address events come from the CALL and EXT opcode families plus BALANCE
// and SELFDESTRUCT; storage events from SLOAD and SSTORE.
constexpr const char* kBuiltinOpcodeMap = R"json({
  "events": {
    "BALANCE":      {"kind": "address", "stack_pos": 0},
    "EXTCODESIZE":  {"kind": "address", "stack_pos": 0},
    "EXTCODECOPY":  {"kind": "address", "stack_pos": 0},
    "EXTCODEHASH":  {"kind": "address", "stack_pos": 0},
    "SELFDESTRUCT": {"kind": "address", "stack_pos": 0},
    "CALL":         {"kind": "address", "stack_pos": 1},
    "CALLCODE":     {"kind": "address", "stack_pos": 1},
    "DELEGATECALL": {"kind": "address", "stack_pos": 1},
    "STATICCALL":   {"kind": "address", "stack_pos": 1},
    "SLOAD":        {"kind": "sload",   "stack_pos": 0},
    "SSTORE":       {"kind": "sstore",  "stack_pos": 0}
  },
  "frames": {
    "CALL":         "call",
    "STATICCALL":   "call",
    "CALLCODE":     "delegate",
    "DELEGATECALL": "delegate",
    "CREATE":       "create",
    "CREATE2":      "create"
  }
})json";

constexpr const char* kAccessTracer = R"js({
    events: [],
    created: [],
    pad: function(s, n) { while (s.length < n) s = "0" + s; return s; },
    word: function(x) { return "0x" + this.pad(x.toString(16), 64); },
    addr: function(x) {
        var s = x.toString(16);
        if (s.length > 40) s = s.slice(-40);
        return "0x" + this.pad(s, 40);
    },
    step: function(log, db) {
        var op = log.op.toString();
        if (op == "SLOAD")
            this.events.push({kind: "sload", address: toHex(log.contract.getAddress()), key: this.word(log.stack.peek(0))});
        else if (op == "SSTORE")
            this.events.push({kind: "sstore", address: toHex(log.contract.getAddress()), key: this.word(log.stack.peek(0))});
        else if (op == "BALANCE" || op == "EXTCODESIZE" || op == "EXTCODECOPY" || op == "EXTCODEHASH" || op == "SELFDESTRUCT")
            this.events.push({kind: "address", address: this.addr(log.stack.peek(0))});
        else if (op == "CALL" || op == "CALLCODE" || op == "DELEGATECALL" || op == "STATICCALL")
            this.events.push({kind: "address", address: this.addr(log.stack.peek(1))});
    },
    enter: function(frame) {
        var t = frame.getType();
        if (t == "CREATE" || t == "CREATE2") this.created.push(toHex(frame.getTo()));
    },
    exit: function(res) {},
    fault: function(log, db) {},
    result: function(ctx, db) { return {events: this.events, created: this.created}; }
})js";

std::uint64_t quantity_to_u64(const json& value, const std::string& what) {
    if (value.is_number_unsigned()) return value.get<std::uint64_t>();
    if (!value.is_string())
        throw SchemaError(what, "expected a hex quantity");
    const std::string s = value.get<std::string>();
    if (s.size() < 3 || s[0] != '0' || (s[1] != 'x' && s[1] != 'X'))
        throw SchemaError(what, "expected a 0x-prefixed hex quantity, got '" + s + "'");
    std::uint64_t out = 0;
    for (std::size_t i = 2; i < s.size(); ++i) {
        const char c = s[i];
        int nib;
        if (c >= '0' && c <= '9') nib = c - '0';
        else if (c >= 'a' && c <= 'f') nib = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') nib = c - 'A' + 10;
        else throw SchemaError(what, "bad hex digit in '" + s + "'");
        if (out >> 60) throw SchemaError(what, "quantity '" + s + "' exceeds 64 bits");
        out = (out << 4) | static_cast<std::uint64_t>(nib);
    }
    return out;
}

std::string u64_to_quantity(std::uint64_t v) {
    char buf[2 + 16 + 1];
    const int n = std::snprintf(buf, sizeof(buf), "0x%llx", static_cast<unsigned long long>(v));
    return std::string(buf, static_cast<std::size_t>(n));
}

Address json_to_address(const json& value, const std::string& what) {
    Address a;
    if (!value.is_string() || !parse_address(value.get<std::string>(), a))
        throw SchemaError(what, "expected a 20-byte hex address");
    return a;
}

Bytes32 json_to_bytes32(const json& value, const std::string& what) {
    Bytes32 b;
    if (!value.is_string() || !parse_bytes32(value.get<std::string>(), b))
        throw SchemaError(what, "expected a 32-byte hex word");
    return b;
}

// Variable-width hex word as found on tracer stacks ("0x0", "0x1f", ...).
bool parse_stack_word(std::string_view hex, Bytes32& out) {
    if (hex.size() >= 2 && hex[0] == '0' && (hex[1] == 'x' || hex[1] == 'X'))
        hex.remove_prefix(2);
    if (hex.empty() || hex.size() > 64) return false;
    out = Bytes32{};
    std::size_t bit = 64 - hex.size();  // nibble offset into the padded word
    for (std::size_t i = 0; i < hex.size(); ++i) {
        const char c = hex[i];
        int nib;
        if (c >= '0' && c <= '9') nib = c - '0';
        else if (c >= 'a' && c <= 'f') nib = c - 'a' + 10;
        else if (c >= 'A' && c <= 'F') nib = c - 'A' + 10;
        else return false;
        const std::size_t pos = bit + i;
        out.bytes[pos / 2] |= static_cast<std::uint8_t>(pos % 2 ? nib : nib << 4);
    }
    return true;
}

Address word_to_address(const Bytes32& w) {
    Address a;
    std::copy(w.bytes.begin() + 12, w.bytes.end(), a.bytes.begin());
    return a;
}

[[noreturn]] void normalization_fail(const std::string& message, const json& payload) {
    throw NormalizationError(message, payload.dump());
}

}  // namespace

void NodeEndpoint::validate() const {
    if (url.empty()) throw ConfigError("RPC endpoint URL is empty");
    if (max_concurrent_requests < 1)
        throw ConfigError("max_concurrent_requests must be at least 1");
    if (!(request_timeout_seconds > 0))
        throw ConfigError("request_timeout must be positive");
}

JsonRpcClient::JsonRpcClient(NodeEndpoint endpoint) : endpoint_(std::move(endpoint)) {
    endpoint_.validate();
    std::string rest;
    if (endpoint_.url.rfind("http://", 0) == 0) {
        rest = endpoint_.url.substr(7);
    } else if (endpoint_.url.rfind("https://", 0) == 0) {
        throw ConfigError("https endpoints are not supported; use a local http endpoint");
    } else {
        throw ConfigError("RPC URL must start with http:// (got '" + endpoint_.url + "')");
    }
    const auto slash = rest.find('/');
    path_ = slash == std::string::npos ? "/" : rest.substr(slash);
    std::string hostport = rest.substr(0, slash);
    const auto colon = hostport.rfind(':');
    if (colon == std::string::npos) {
        host_ = hostport;
        port_ = 8545;
    } else {
        host_ = hostport.substr(0, colon);
        try {
            port_ = std::stoi(hostport.substr(colon + 1));
        } catch (const std::exception&) {
            throw ConfigError("bad port in RPC URL '" + endpoint_.url + "'");
        }
    }
    if (host_.empty()) throw ConfigError("missing host in RPC URL '" + endpoint_.url + "'");
}

json JsonRpcClient::call(const std::string& method, const json& params) const {
    static std::atomic<std::uint64_t> next_id{1};
    const json request = {{"jsonrpc", "2.0"},
                          {"id", next_id.fetch_add(1)},
                          {"method", method},
                          {"params", params}};
    const std::string body = request.dump();

    const auto timeout_s = static_cast<time_t>(endpoint_.request_timeout_seconds);
    const auto timeout_us = static_cast<long>(
        (endpoint_.request_timeout_seconds - std::floor(endpoint_.request_timeout_seconds)) * 1e6);

    std::string transport_error;
    constexpr int kAttempts = 3;  // read-only calls, safe to retry
    for (int attempt = 0; attempt < kAttempts; ++attempt) {
        httplib::Client client(host_, port_);
        client.set_connection_timeout(timeout_s, timeout_us);
        client.set_read_timeout(timeout_s, timeout_us);
        client.set_write_timeout(timeout_s, timeout_us);

        auto res = client.Post(path_, body, "application/json");
        if (!res) {
            transport_error = httplib::to_string(res.error());
            continue;
        }
        if (res->status != 200)
            throw RpcError(method + ": HTTP status " + std::to_string(res->status));

        json reply = json::parse(res->body, nullptr, false);
        if (reply.is_discarded())
            throw RpcError(method + ": response is not valid JSON");
        if (const auto err = reply.find("error"); err != reply.end() && !err->is_null()) {
            const int code = err->value("code", 0);
            const std::string message = err->value("message", "unknown error");
            throw RpcProtocolError(code, method + ": " + message);
        }
        if (const auto result = reply.find("result"); result != reply.end())
            return *result;
        throw RpcError(method + ": response carries neither result nor error");
    }
    throw RpcError(method + ": transport failure after " + std::to_string(kAttempts) +
                   " attempts (" + transport_error + ")");
}

OpcodeMap OpcodeMap::builtin() {
    return from_json(json::parse(kBuiltinOpcodeMap));
}

OpcodeMap OpcodeMap::from_json(const json& doc) {
    OpcodeMap map;
    if (!doc.is_object() || !doc.contains("events") || !doc.contains("frames"))
        throw ConfigError("opcode map must be an object with 'events' and 'frames'");
    for (const auto& [op, rule] : doc.at("events").items()) {
        OpcodeRule r;
        const std::string kind = rule.at("kind").get<std::string>();
        if (kind == "address") r.kind = EventKind::AddressAccess;
        else if (kind == "sload") r.kind = EventKind::StorageRead;
        else if (kind == "sstore") r.kind = EventKind::StorageWrite;
        else throw ConfigError("opcode map: unknown event kind '" + kind + "' for " + op);
        r.stack_pos = rule.at("stack_pos").get<int>();
        if (r.stack_pos < 0) throw ConfigError("opcode map: negative stack_pos for " + op);
        map.event_rules.emplace(op, r);
    }
    for (const auto& [op, effect] : doc.at("frames").items()) {
        const std::string name = effect.get<std::string>();
        if (name == "call") map.frame_rules.emplace(op, FrameEffect::Call);
        else if (name == "delegate") map.frame_rules.emplace(op, FrameEffect::Delegate);
        else if (name == "create") map.frame_rules.emplace(op, FrameEffect::Create);
        else throw ConfigError("opcode map: unknown frame effect '" + name + "' for " + op);
    }
    return map;
}

OpcodeMap OpcodeMap::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open opcode map '" + path + "'");
    json doc = json::parse(in, nullptr, false);
    if (doc.is_discarded()) throw ConfigError("opcode map '" + path + "' is not valid JSON");
    return from_json(doc);
}

const std::string& access_tracer_source() {
    static const std::string source = kAccessTracer;
    return source;
}

NormalizedAccesses normalize_access_events(const json& payload) {
    const auto events = payload.find("events");
    if (events == payload.end() || !events->is_array())
        normalization_fail("tracer document lacks an 'events' array", payload);

    NormalizedAccesses out;
    std::uint64_t seq = 0;
    for (const json& e : *events) {
        if (!e.is_object() || !e.contains("kind") || !e.contains("address"))
            normalization_fail("event lacks kind or address", payload);
        const std::string kind = e.at("kind").get<std::string>();
        Address address;
        if (!parse_address(e.at("address").get<std::string>(), address))
            normalization_fail("event carries a malformed address", payload);
        if (kind == "address") {
            out.events.push_back(AccessEvent::address_access(address, seq++));
        } else if (kind == "sload" || kind == "sstore") {
            if (!e.contains("key"))
                normalization_fail("storage event lacks a key", payload);
            Bytes32 key;
            if (!parse_stack_word(e.at("key").get<std::string>(), key))
                normalization_fail("storage event carries a malformed key", payload);
            out.events.push_back(kind == "sload"
                                     ? AccessEvent::storage_read(address, key, seq++)
                                     : AccessEvent::storage_write(address, key, seq++));
        } else {
            normalization_fail("unknown event kind '" + kind + "'", payload);
        }
    }
    if (const auto created = payload.find("created");
        created != payload.end() && created->is_array()) {
        for (const json& c : *created) {
            Address a;
            if (!c.is_string() || !parse_address(c.get<std::string>(), a))
                normalization_fail("created-contract list carries a malformed address", payload);
            out.created_contracts.push_back(a);
        }
    }
    return out;
}

NormalizedAccesses normalize_struct_logs(const json& payload, const OpcodeMap& map,
                                         const Address& root_address) {
    const auto logs_it = payload.find("structLogs");
    if (logs_it == payload.end() || !logs_it->is_array())
        normalization_fail("tracer document lacks a 'structLogs' array", payload);
    const json& logs = *logs_it;

    struct Frame {
        Address storage;
        int depth = 1;
        bool unresolved_create = false;
        std::size_t create_serial = 0;
    };
    struct PendingEnter {
        FrameEffect effect = FrameEffect::Call;
        Address target;         // call/delegate targets
        std::size_t serial = 0; // create frames
    };

    NormalizedAccesses out;
    std::vector<Frame> frames{Frame{root_address, 1}};
    PendingEnter pending;
    bool has_pending = false;
    std::size_t next_serial = 0;
    std::vector<std::pair<std::size_t, std::size_t>> patches;  // event index -> serial
    std::unordered_map<std::size_t, Address> resolved;

    const auto stack_word = [&](const json& log, int pos_from_top) -> Bytes32 {
        const auto stack = log.find("stack");
        if (stack == log.end() || !stack->is_array())
            normalization_fail("structLog lacks a stack (enable stack recording)", payload);
        const auto size = static_cast<std::ptrdiff_t>(stack->size());
        const std::ptrdiff_t index = size - 1 - pos_from_top;
        if (index < 0)
            normalization_fail("structLog stack too short for operand", payload);
        const json& item = (*stack)[static_cast<std::size_t>(index)];
        Bytes32 word;
        if (!item.is_string() || !parse_stack_word(item.get<std::string>(), word))
            normalization_fail("structLog stack word is malformed", payload);
        return word;
    };

    for (const json& log : logs) {
        if (!log.is_object() || !log.contains("op") || !log.contains("depth"))
            normalization_fail("structLog entry lacks op or depth", payload);
        const int depth = log.at("depth").get<int>();

        if (depth > frames.back().depth) {
            if (!has_pending || depth != frames.back().depth + 1)
                normalization_fail("call depth increased without a frame opcode", payload);
            switch (pending.effect) {
                case FrameEffect::Call:
                    frames.push_back(Frame{pending.target, depth});
                    break;
                case FrameEffect::Delegate:
                    frames.push_back(Frame{frames.back().storage, depth});
                    break;
                case FrameEffect::Create: {
                    Frame f;
                    f.depth = depth;
                    f.unresolved_create = true;
                    f.create_serial = pending.serial;
                    frames.push_back(f);
                    break;
                }
            }
        } else if (depth < frames.back().depth) {
            while (frames.back().depth > depth) {
                const Frame finished = frames.back();
                frames.pop_back();
                if (frames.empty())
                    normalization_fail("call depth fell below the root frame", payload);
                if (!finished.unresolved_create) continue;
                // The created address is the call result on the creator's
                // stack, visible once we are back at its depth.
                if (frames.back().depth != depth)
                    normalization_fail("cannot resolve created address across a multi-frame unwind",
                                       payload);
                const Bytes32 result = stack_word(log, 0);
                const Address created = word_to_address(result);
                if (created == Address{})
                    normalization_fail("contract creation failed; created address unknown",
                                       payload);
                resolved.emplace(finished.create_serial, created);
                out.created_contracts.push_back(created);
            }
        }
        has_pending = false;

        const std::string op = log.at("op").get<std::string>();

        if (const auto rule = map.event_rules.find(op); rule != map.event_rules.end()) {
            const Bytes32 operand = stack_word(log, rule->second.stack_pos);
            if (rule->second.kind == EventKind::AddressAccess) {
                out.events.push_back(
                    AccessEvent::address_access(word_to_address(operand), out.events.size()));
            } else {
                const Frame& frame = frames.back();
                AccessEvent ev = rule->second.kind == EventKind::StorageRead
                                     ? AccessEvent::storage_read(frame.storage, operand,
                                                                 out.events.size())
                                     : AccessEvent::storage_write(frame.storage, operand,
                                                                  out.events.size());
                if (frame.unresolved_create)
                    patches.emplace_back(out.events.size(), frame.create_serial);
                out.events.push_back(std::move(ev));
            }
        }

        if (const auto rule = map.frame_rules.find(op); rule != map.frame_rules.end()) {
            if (rule->second == FrameEffect::Create)
                pending = PendingEnter{rule->second, Address{}, next_serial++};
            else
                pending = PendingEnter{rule->second, word_to_address(stack_word(log, 1)), 0};
            has_pending = true;
        }
    }

    for (const auto& [event_index, serial] : patches) {
        const auto it = resolved.find(serial);
        if (it == resolved.end())
            normalization_fail("storage access inside an unresolved creation frame", payload);
        out.events[event_index].address = it->second;
    }
    return out;
}

NormalizedAccesses normalize_trace_document(const RawTraceDocument& doc, const OpcodeMap& map,
                                            const Address& root_address) {
    if (!doc.payload.is_object())
        throw NormalizationError("tracer payload is not a JSON object", doc.payload.dump());
    if (doc.payload.contains("events"))
        return normalize_access_events(doc.payload);
    if (doc.payload.contains("structLogs"))
        return normalize_struct_logs(doc.payload, map, root_address);
    throw NormalizationError("unrecognized tracer document shape (tracer '" + doc.tracer_name +
                             "')",
                             doc.payload.dump());
}

BlockData fetch_block(const JsonRpcClient& client, std::uint64_t number) {
    const json block =
        client.call("eth_getBlockByNumber", json::array({u64_to_quantity(number), true}));
    if (block.is_null())
        throw NotFoundError("block " + std::to_string(number) + " not found");

    BlockData out;
    out.number = quantity_to_u64(block.at("number"), "block.number");
    out.timestamp = quantity_to_u64(block.at("timestamp"), "block.timestamp");
    out.producer = json_to_address(block.at("miner"), "block.miner");

    const json& txs = block.at("transactions");
    if (!txs.is_array())
        throw SchemaError("block.transactions", "expected an array");
    out.txs.reserve(txs.size());
    for (const json& tx : txs) {
        BlockTxRecord rec;
        rec.hash = json_to_bytes32(tx.at("hash"), "tx.hash");
        rec.tx_index = static_cast<std::uint32_t>(
            quantity_to_u64(tx.at("transactionIndex"), "tx.transactionIndex"));
        rec.sender = json_to_address(tx.at("from"), "tx.from");
        if (const auto to = tx.find("to"); to != tx.end() && !to->is_null())
            rec.recipient = json_to_address(*to, "tx.to");
        if (const auto al = tx.find("accessList"); al != tx.end() && !al->is_null())
            rec.declared_tal = decode_tal(al->dump());

        const json receipt =
            client.call("eth_getTransactionReceipt", json::array({to_hex(rec.hash)}));
        if (receipt.is_null())
            throw NotFoundError("receipt for " + to_hex(rec.hash) + " not found");
        if (const auto price = receipt.find("effectiveGasPrice");
            price != receipt.end() && !price->is_null())
            rec.effective_gas_price = quantity_to_u64(*price, "receipt.effectiveGasPrice");
        else if (const auto gas_price = tx.find("gasPrice");
                 gas_price != tx.end() && !gas_price->is_null())
            rec.effective_gas_price = quantity_to_u64(*gas_price, "tx.gasPrice");
        if (const auto created = receipt.find("contractAddress");
            created != receipt.end() && !created->is_null())
            rec.created_contract = json_to_address(*created, "receipt.contractAddress");

        out.txs.push_back(std::move(rec));
    }
    std::sort(out.txs.begin(), out.txs.end(),
              [](const BlockTxRecord& a, const BlockTxRecord& b) { return a.tx_index < b.tx_index; });
    return out;
}

void fetch_block_range(const JsonRpcClient& client, std::uint64_t from, std::uint64_t to,
                       const std::function<void(BlockData&&)>& sink) {
    if (to < from) throw ConfigError("empty block range");
    const std::uint64_t count = to - from + 1;

    const std::uint32_t workers = static_cast<std::uint32_t>(
        std::min<std::uint64_t>(client.endpoint().max_concurrent_requests, count));
    std::vector<std::optional<BlockData>> results(count);
    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::uint32_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            while (!failed.load()) {
                const std::uint64_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    results[i] = fetch_block(client, from + i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mutex);
                    if (!error) error = std::current_exception();
                    failed = true;
                    return;
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    if (error) std::rethrow_exception(error);

    for (auto& block : results) sink(std::move(*block));
}

AccessTrace fetch_trace(const JsonRpcClient& client, const TxHash& tx_hash, TraceMode mode,
                        const OpcodeMap& map) {
    const std::string hash_hex = to_hex(tx_hash);
    const json tx = client.call("eth_getTransactionByHash", json::array({hash_hex}));
    if (tx.is_null()) throw NotFoundError("transaction " + hash_hex + " not found");
    if (!tx.contains("blockNumber") || tx.at("blockNumber").is_null())
        throw NotFoundError("transaction " + hash_hex + " is not yet included in a block");

    AccessTrace trace;
    TxContext& ctx = trace.ctx;
    ctx.tx_hash = tx_hash;
    ctx.block_number = quantity_to_u64(tx.at("blockNumber"), "tx.blockNumber");
    ctx.tx_index = static_cast<std::uint32_t>(
        quantity_to_u64(tx.at("transactionIndex"), "tx.transactionIndex"));
    ctx.sender = json_to_address(tx.at("from"), "tx.from");
    if (const auto to = tx.find("to"); to != tx.end() && !to->is_null())
        ctx.recipient = json_to_address(*to, "tx.to");

    const json block = client.call("eth_getBlockByNumber",
                                   json::array({u64_to_quantity(ctx.block_number), false}));
    if (block.is_null())
        throw NotFoundError("block " + std::to_string(ctx.block_number) + " not found");
    ctx.block_producer = json_to_address(block.at("miner"), "block.miner");
    ctx.block_timestamp = quantity_to_u64(block.at("timestamp"), "block.timestamp");

    const json receipt = client.call("eth_getTransactionReceipt", json::array({hash_hex}));
    if (receipt.is_null()) throw NotFoundError("receipt for " + hash_hex + " not found");
    std::optional<Address> receipt_created;
    if (const auto price = receipt.find("effectiveGasPrice");
        price != receipt.end() && !price->is_null())
        ctx.effective_gas_price = quantity_to_u64(*price, "receipt.effectiveGasPrice");
    else if (const auto gas_price = tx.find("gasPrice");
             gas_price != tx.end() && !gas_price->is_null())
        ctx.effective_gas_price = quantity_to_u64(*gas_price, "tx.gasPrice");
    if (const auto created = receipt.find("contractAddress");
        created != receipt.end() && !created->is_null())
        receipt_created = json_to_address(*created, "receipt.contractAddress");

    const Address root_address =
        ctx.recipient ? *ctx.recipient
                      : (receipt_created ? *receipt_created
                                         : throw NotFoundError("creation tx " + hash_hex +
                                                               " has no contract address"));

    const auto run_tracer = [&](const json& tracer_config) -> json {
        if (mode == TraceMode::IBS)
            return client.call("debug_traceTransaction",
                               json::array({hash_hex, tracer_config}));
        if (ctx.block_number == 0)
            throw NotFoundError("transaction " + hash_hex +
                                " is in the genesis block; no prior state exists");
        json call_object = {{"from", to_hex(ctx.sender)}};
        if (ctx.recipient) call_object["to"] = to_hex(*ctx.recipient);
        if (tx.contains("gas")) call_object["gas"] = tx.at("gas");
        if (tx.contains("value")) call_object["value"] = tx.at("value");
        if (tx.contains("input")) call_object["data"] = tx.at("input");
        return client.call(
            "debug_traceCall",
            json::array({call_object, u64_to_quantity(ctx.block_number - 1), tracer_config}));
    };

    RawTraceDocument doc;
    doc.tx_hash = tx_hash;
    try {
        doc.tracer_name = "talscope-access";
        doc.payload = run_tracer(json{{"tracer", access_tracer_source()}});
    } catch (const RpcProtocolError&) {
        // Node rejects custom tracers; fall back to structured opcode logs.
        try {
            doc.tracer_name = "structLogs";
            doc.payload = run_tracer(json::object());
        } catch (const RpcProtocolError& e) {
            throw TracerUnsupportedError("node supports neither custom tracers nor structured logs: " +
                                         std::string(e.what()));
        }
    }

    NormalizedAccesses accesses = normalize_trace_document(doc, map, root_address);
    trace.events = std::move(accesses.events);

    if (receipt_created) ctx.created_contracts.push_back(*receipt_created);
    for (const Address& a : accesses.created_contracts)
        if (std::find(ctx.created_contracts.begin(), ctx.created_contracts.end(), a) ==
            ctx.created_contracts.end())
            ctx.created_contracts.push_back(a);

    trace.state_label = mode == TraceMode::IBS ? StateLabel::IBS : StateLabel::SOB;
    validate_trace(trace);
    return trace;
}

}  // namespace talscope::rpc
