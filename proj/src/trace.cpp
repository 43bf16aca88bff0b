// talscope: gas accounting toolkit for Ethereum transaction access lists
// Copyright 2026 The talscope Authors.
// SPDX-License-Identifier: Apache-2.0

#include <talscope/trace.hpp>

#include <talscope/errors.hpp>

namespace talscope {

const char* to_string(EventKind k) {
    switch (k) {
        case EventKind::AddressAccess: return "address";
        case EventKind::StorageRead: return "sload";
        case EventKind::StorageWrite: return "sstore";
    }
    return "?";
}

bool is_storage_kind(EventKind k) {
    return k == EventKind::StorageRead || k == EventKind::StorageWrite;
}

const char* to_string(StateLabel s) {
    switch (s) {
        case StateLabel::SOB: return "sob";
        case StateLabel::IBS: return "ibs";
        case StateLabel::Declared: return "declared";
        case StateLabel::Other: return "other";
    }
    return "?";
}

const char* to_string(TraceDefect d) {
    switch (d) {
        case TraceDefect::NonMonotonicSeq: return "NonMonotonicSeq";
        case TraceDefect::MissingKey: return "MissingKey";
        case TraceDefect::UnexpectedKey: return "UnexpectedKey";
        case TraceDefect::MalformedAddress: return "MalformedAddress";
        case TraceDefect::ContextInvariant: return "ContextInvariant";
    }
    return "?";
}

TraceError::TraceError(TraceDefect d, std::size_t event_index)
    : Error(std::string("trace invariant violated: ") + to_string(d) +
            (event_index == static_cast<std::size_t>(-1)
                 ? std::string()
                 : " at event " + std::to_string(event_index))),
      defect(d),
      index(event_index) {}

void validate_trace(const AccessTrace& trace) {
    if (!trace.ctx.recipient.has_value() && trace.ctx.created_contracts.empty())
        throw TraceError(TraceDefect::ContextInvariant, static_cast<std::size_t>(-1));

    bool have_prev = false;
    std::uint64_t prev_seq = 0;
    for (std::size_t i = 0; i < trace.events.size(); ++i) {
        const AccessEvent& ev = trace.events[i];
        if (have_prev && ev.seq <= prev_seq)
            throw TraceError(TraceDefect::NonMonotonicSeq, i);
        prev_seq = ev.seq;
        have_prev = true;

        if (is_storage_kind(ev.kind) && !ev.key.has_value())
            throw TraceError(TraceDefect::MissingKey, i);
        if (!is_storage_kind(ev.kind) && ev.key.has_value())
            throw TraceError(TraceDefect::UnexpectedKey, i);
    }
}

WarmSets first_touch_sets(const AccessTrace& trace) {
    WarmSets sets;
    for (const AccessEvent& ev : trace.events) {
        sets.accessed_addresses.insert(ev.address);
        if (ev.key.has_value())
            sets.accessed_storage_keys.insert(SlotId{ev.address, *ev.key});
    }
    return sets;
}

}  // namespace talscope
