// talscope: gas accounting toolkit for Ethereum transaction access lists
// Copyright 2026 The talscope Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <talscope/codec.hpp>

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace talscope {

// NDJSON corpus persistence: one canonical trace per line. Loading
// re-validates every line; a SchemaError or TraceError is rethrown as a
// SchemaError carrying the 1-based line number.

void store_corpus(const std::string& path, std::span<const AccessTrace> traces);
std::vector<AccessTrace> load_corpus(const std::string& path);

/// Streaming loader: invokes `sink` per trace in file order without
/// keeping the corpus in memory.
void for_each_trace(const std::string& path,
                    const std::function<void(AccessTrace&&)>& sink);

// Companion NDJSON of declared TALs keyed by tx_hash.
void store_declared_tals(const std::string& path, std::span<const DeclaredTal> tals);
std::vector<DeclaredTal> load_declared_tals(const std::string& path);

}  // namespace talscope
