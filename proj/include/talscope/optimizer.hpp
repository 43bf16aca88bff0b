// talscope: gas accounting toolkit for Ethereum transaction access lists
// Copyright 2026 The talscope Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <talscope/charge.hpp>

namespace talscope {

/// Gas effect of a TAL relative to running the same trace without one.
/// Negative vs_empty means the TAL saves gas.
struct TalDelta {
    SignedGas vs_empty = 0;
    SignedWei vs_empty_wei = 0;
    GasBreakdown breakdown_with;
    GasBreakdown breakdown_without;
};

/// Computes the gas-optimal TAL for a trace under the fixed-trace model.
///
/// Grouped per accessed address A with accessed key set K(A): the entry
/// (A, K(A)) is emitted iff its net saving is strictly positive, where the
/// address component saves only when A is not auto-warm and the trace
/// contains an address event for A, and each accessed key always saves
/// per_key_saving. Auto-warm addresses therefore need
/// |K(A)| * per_key_saving > access_list_address_cost (25 keys at stock
/// constants); the exactly break-even group is excluded. Entries and keys
/// follow first-touch order; never-accessed atoms are never emitted.
AccessList optimal_tal(const AccessTrace& trace, const GasSchedule& schedule,
                       const ForkConfig& fork);

/// Charges the identical trace twice (with the TAL, with an empty one)
/// and returns the signed difference. Wei uses ctx.effective_gas_price.
TalDelta tal_delta(const AccessTrace& trace, const AccessList& tal,
                   const GasSchedule& schedule, const ForkConfig& fork);

/// Evaluates the TAL generated on one state against the trace executed on
/// another: optimal_tal(gen_trace) priced on exec_trace. With identical
/// traces this is the ideal (IBS) saving; with a start-of-block gen_trace
/// it reproduces the SOB methodology. Throws TxMismatchError when the
/// traces refer to different transactions.
TalDelta cross_state_delta(const AccessTrace& gen_trace, const AccessTrace& exec_trace,
                           const GasSchedule& schedule, const ForkConfig& fork);

}  // namespace talscope
