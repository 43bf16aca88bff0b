// talscope: gas accounting toolkit for Ethereum transaction access lists
// Copyright 2026 The talscope Authors.
// SPDX-License-Identifier: Apache-2.0

#include <talscope/codec.hpp>

#include <talscope/errors.hpp>

#include <json.hpp>

namespace talscope {
namespace {

using nlohmann::json;

json parse_json(std::string_view text, const char* what) {
    json doc = json::parse(text, nullptr, false);
    if (doc.is_discarded())
        throw SchemaError("$", std::string("invalid JSON in ") + what);
    return doc;
}

std::string path_index(const std::string& base, std::size_t i) {
    return base + "[" + std::to_string(i) + "]";
}

const json& require_field(const json& obj, const char* name, const std::string& path) {
    const auto it = obj.find(name);
    if (it == obj.end())
        throw SchemaError(path + "." + name, "missing required field");
    return *it;
}

std::string require_string(const json& value, const std::string& path) {
    if (!value.is_string())
        throw SchemaError(path, "expected a string");
    return value.get<std::string>();
}

Address require_address(const json& value, const std::string& path) {
    Address a;
    if (!parse_address(require_string(value, path), a))
        throw SchemaError(path, "expected a 0x-prefixed 20-byte hex address");
    return a;
}

Bytes32 require_bytes32(const json& value, const std::string& path) {
    Bytes32 b;
    if (!parse_bytes32(require_string(value, path), b))
        throw SchemaError(path, "expected a 0x-prefixed 32-byte hex word");
    return b;
}

std::uint64_t require_uint(const json& value, const std::string& path) {
    if (!value.is_number_unsigned())
        throw SchemaError(path, "expected a non-negative integer");
    return value.get<std::uint64_t>();
}

AccessList decode_tal_value(const json& doc, const std::string& base) {
    if (!doc.is_array())
        throw SchemaError(base, "access list must be a JSON array");
    AccessList tal;
    tal.entries.reserve(doc.size());
    for (std::size_t i = 0; i < doc.size(); ++i) {
        const std::string epath = path_index(base, i);
        const json& entry = doc[i];
        if (!entry.is_object())
            throw SchemaError(epath, "access list entry must be an object");
        AccessListEntry out;
        out.address = require_address(require_field(entry, "address", epath), epath + ".address");
        const json& keys = require_field(entry, "storageKeys", epath);
        if (!keys.is_array())
            throw SchemaError(epath + ".storageKeys", "expected an array");
        out.storage_keys.reserve(keys.size());
        for (std::size_t j = 0; j < keys.size(); ++j)
            out.storage_keys.push_back(
                require_bytes32(keys[j], path_index(epath + ".storageKeys", j)));
        tal.entries.push_back(std::move(out));
    }
    return tal;
}

json tal_to_json(const AccessList& tal) {
    json arr = json::array();
    for (const AccessListEntry& entry : tal.entries) {
        json keys = json::array();
        for (const StorageKey& k : entry.storage_keys) keys.push_back(to_hex(k));
        arr.push_back(json{{"address", to_hex(entry.address)}, {"storageKeys", std::move(keys)}});
    }
    return arr;
}

}  // namespace

std::string encode_tal(const AccessList& tal) {
    return tal_to_json(tal).dump();
}

AccessList decode_tal(std::string_view text) {
    return decode_tal_value(parse_json(text, "access list"), "$");
}

std::string encode_trace(const AccessTrace& trace) {
    const TxContext& ctx = trace.ctx;
    json doc;
    doc["txHash"] = to_hex(ctx.tx_hash);
    doc["blockNumber"] = ctx.block_number;
    doc["txIndex"] = ctx.tx_index;
    doc["sender"] = to_hex(ctx.sender);
    doc["recipient"] = ctx.recipient ? json(to_hex(*ctx.recipient)) : json(nullptr);
    doc["blockProducer"] = to_hex(ctx.block_producer);
    json created = json::array();
    for (const Address& a : ctx.created_contracts) created.push_back(to_hex(a));
    doc["createdContracts"] = std::move(created);
    doc["effectiveGasPrice"] = ctx.effective_gas_price;
    if (ctx.block_timestamp) doc["blockTimestamp"] = *ctx.block_timestamp;
    doc["stateLabel"] = to_string(trace.state_label);

    json events = json::array();
    for (const AccessEvent& ev : trace.events) {
        json e;
        e["kind"] = to_string(ev.kind);
        e["address"] = to_hex(ev.address);
        if (ev.key) e["key"] = to_hex(*ev.key);
        e["seq"] = ev.seq;
        events.push_back(std::move(e));
    }
    doc["events"] = std::move(events);
    return doc.dump();
}

AccessTrace decode_trace(std::string_view line) {
    const json doc = parse_json(line, "trace");
    if (!doc.is_object())
        throw SchemaError("$", "trace line must be a JSON object");

    AccessTrace trace;
    TxContext& ctx = trace.ctx;
    ctx.tx_hash = require_bytes32(require_field(doc, "txHash", "$"), "$.txHash");
    ctx.block_number = require_uint(require_field(doc, "blockNumber", "$"), "$.blockNumber");
    ctx.tx_index =
        static_cast<std::uint32_t>(require_uint(require_field(doc, "txIndex", "$"), "$.txIndex"));
    ctx.sender = require_address(require_field(doc, "sender", "$"), "$.sender");
    const json& recipient = require_field(doc, "recipient", "$");
    if (!recipient.is_null()) ctx.recipient = require_address(recipient, "$.recipient");
    ctx.block_producer =
        require_address(require_field(doc, "blockProducer", "$"), "$.blockProducer");
    const json& created = require_field(doc, "createdContracts", "$");
    if (!created.is_array())
        throw SchemaError("$.createdContracts", "expected an array");
    for (std::size_t i = 0; i < created.size(); ++i)
        ctx.created_contracts.push_back(
            require_address(created[i], path_index("$.createdContracts", i)));
    ctx.effective_gas_price =
        require_uint(require_field(doc, "effectiveGasPrice", "$"), "$.effectiveGasPrice");
    if (const auto it = doc.find("blockTimestamp"); it != doc.end() && !it->is_null())
        ctx.block_timestamp = require_uint(*it, "$.blockTimestamp");

    const std::string label = require_string(require_field(doc, "stateLabel", "$"), "$.stateLabel");
    if (label == "sob") trace.state_label = StateLabel::SOB;
    else if (label == "ibs") trace.state_label = StateLabel::IBS;
    else if (label == "declared") trace.state_label = StateLabel::Declared;
    else if (label == "other") trace.state_label = StateLabel::Other;
    else throw SchemaError("$.stateLabel", "expected one of sob|ibs|declared|other");

    const json& events = require_field(doc, "events", "$");
    if (!events.is_array())
        throw SchemaError("$.events", "expected an array");
    trace.events.reserve(events.size());
    for (std::size_t i = 0; i < events.size(); ++i) {
        const std::string epath = path_index("$.events", i);
        const json& e = events[i];
        if (!e.is_object())
            throw SchemaError(epath, "event must be an object");
        AccessEvent ev;
        const std::string kind = require_string(require_field(e, "kind", epath), epath + ".kind");
        if (kind == "address") ev.kind = EventKind::AddressAccess;
        else if (kind == "sload") ev.kind = EventKind::StorageRead;
        else if (kind == "sstore") ev.kind = EventKind::StorageWrite;
        else throw SchemaError(epath + ".kind", "expected one of address|sload|sstore");
        ev.address = require_address(require_field(e, "address", epath), epath + ".address");
        if (const auto it = e.find("key"); it != e.end() && !it->is_null())
            ev.key = require_bytes32(*it, epath + ".key");
        ev.seq = require_uint(require_field(e, "seq", epath), epath + ".seq");
        trace.events.push_back(std::move(ev));
    }

    validate_trace(trace);
    return trace;
}

std::string encode_declared_tal(const DeclaredTal& d) {
    json doc;
    doc["txHash"] = to_hex(d.tx_hash);
    doc["accessList"] = d.tal ? tal_to_json(*d.tal) : json(nullptr);
    return doc.dump();
}

DeclaredTal decode_declared_tal(std::string_view line) {
    const json doc = parse_json(line, "declared TAL");
    if (!doc.is_object())
        throw SchemaError("$", "declared TAL line must be a JSON object");
    DeclaredTal out;
    out.tx_hash = require_bytes32(require_field(doc, "txHash", "$"), "$.txHash");
    const json& tal = require_field(doc, "accessList", "$");
    if (!tal.is_null()) out.tal = decode_tal_value(tal, "$.accessList");
    return out;
}

}  // namespace talscope
