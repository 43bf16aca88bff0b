// talscope: gas accounting toolkit for Ethereum transaction access lists
// Copyright 2026 The talscope Authors.
// SPDX-License-Identifier: Apache-2.0

#include <talscope/corpus.hpp>

#include <talscope/errors.hpp>

#include <fstream>

namespace talscope {
namespace {

std::ifstream open_for_read(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    return in;
}

std::ofstream open_for_write(const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    return out;
}

template <typename Decode, typename Sink>
void for_each_line(const std::string& path, Decode&& decode, Sink&& sink) {
    std::ifstream in = open_for_read(path);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            sink(decode(line));
        } catch (const SchemaError& e) {
            throw SchemaError(e.where, e.what(), lineno);
        } catch (const TraceError& e) {
            throw SchemaError("$", e.what(), lineno);
        }
    }
    if (in.bad()) throw IoError("I/O error while reading '" + path + "'");
}

}  // namespace

void store_corpus(const std::string& path, std::span<const AccessTrace> traces) {
    std::ofstream out = open_for_write(path);
    for (const AccessTrace& trace : traces) out << encode_trace(trace) << '\n';
    if (!out) throw IoError("I/O error while writing '" + path + "'");
}

std::vector<AccessTrace> load_corpus(const std::string& path) {
    std::vector<AccessTrace> traces;
    for_each_trace(path, [&](AccessTrace&& t) { traces.push_back(std::move(t)); });
    return traces;
}

void for_each_trace(const std::string& path,
                    const std::function<void(AccessTrace&&)>& sink) {
    for_each_line(
        path, [](const std::string& line) { return decode_trace(line); },
        [&](AccessTrace&& t) { sink(std::move(t)); });
}

void store_declared_tals(const std::string& path, std::span<const DeclaredTal> tals) {
    std::ofstream out = open_for_write(path);
    for (const DeclaredTal& d : tals) out << encode_declared_tal(d) << '\n';
    if (!out) throw IoError("I/O error while writing '" + path + "'");
}

std::vector<DeclaredTal> load_declared_tals(const std::string& path) {
    std::vector<DeclaredTal> tals;
    for_each_line(
        path, [](const std::string& line) { return decode_declared_tal(line); },
        [&](DeclaredTal&& d) { tals.push_back(std::move(d)); });
    return tals;
}

}  // namespace talscope
