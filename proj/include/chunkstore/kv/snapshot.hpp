// Copyright 2026 the chunkstore authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <istream>
#include <ostream>
#include <string>

#include <json.hpp>

#include "chunkstore/bytes.hpp"
#include "chunkstore/error.hpp"
#include "chunkstore/kv/store.hpp"

namespace chunkstore::kv {

// Snapshot format: one JSON object per line, one line per write_log entry,
// in log order. Key and byte-string fields are base64 so arbitrary bytes
// survive the text encoding; dump(load(f)) reproduces f byte for byte.
//
//   {"seq":3,"op":"put","pk":"...","sk":"...","attributes":{"Ver":{"s":".."},
//    "Data":{"b":"..."},"Count":{"i":4}},"txn":1}

namespace detail {

inline nlohmann::ordered_json attr_to_json(const AttrValue& v) {
  nlohmann::ordered_json j;
  if (const auto* i = std::get_if<std::int64_t>(&v)) {
    j["i"] = *i;
  } else if (const auto* s = std::get_if<std::string>(&v)) {
    j["s"] = *s;
  } else {
    j["b"] = base64_encode(std::get<Bytes>(v));
  }
  return j;
}

inline AttrValue attr_from_json(const nlohmann::json& j) {
  if (!j.is_object() || j.size() != 1)
    raise(Errc::invalid_argument, "snapshot: malformed attribute value");
  if (j.contains("i")) return j["i"].get<std::int64_t>();
  if (j.contains("s")) return j["s"].get<std::string>();
  if (j.contains("b")) {
    const std::string raw = base64_decode(j["b"].get<std::string>());
    return Bytes::of(raw);
  }
  raise(Errc::invalid_argument, "snapshot: unknown attribute value tag");
}

}  // namespace detail

inline void dump_store(const RegionStore& store, std::ostream& out) {
  for (const LogEntry& e : store.log_since(0)) {
    nlohmann::ordered_json j;
    j["seq"] = e.seq;
    j["op"] = e.op == MutationOp::put ? "put" : "delete";
    j["pk"] = base64_encode(e.item.key.partition_key);
    j["sk"] = base64_encode(e.item.key.sort_key);
    nlohmann::ordered_json attrs = nlohmann::ordered_json::object();
    for (const auto& [name, value] : e.item.attributes)
      attrs[name] = detail::attr_to_json(value);
    j["attributes"] = std::move(attrs);
    j["txn"] = e.txn_first_seq;
    out << j.dump() << '\n';
  }
}

inline RegionStore load_store(std::istream& in, std::string region_id,
                              StoreLimits limits = {}) {
  std::vector<LogEntry> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      raise(Errc::invalid_argument, "snapshot line " + std::to_string(line_no) +
                                        ": " + e.what());
    }
    LogEntry e;
    try {
      e.seq = j.at("seq").get<std::uint64_t>();
      e.txn_first_seq = j.at("txn").get<std::uint64_t>();
      const std::string op = j.at("op").get<std::string>();
      if (op == "put")
        e.op = MutationOp::put;
      else if (op == "delete")
        e.op = MutationOp::del;
      else
        raise(Errc::invalid_argument, "unknown op " + op);
      const std::string pk = base64_decode(j.at("pk").get<std::string>());
      const std::string sk = base64_decode(j.at("sk").get<std::string>());
      if (e.op == MutationOp::put) {
        std::vector<std::pair<std::string, AttrValue>> attrs;
        for (const auto& [name, value] : j.at("attributes").items())
          attrs.emplace_back(name, detail::attr_from_json(value));
        e.item = make_item(pk, sk, std::move(attrs));
      } else {
        e.item.key = ItemKey{pk, sk};
      }
    } catch (const nlohmann::json::exception& ex) {
      raise(Errc::invalid_argument, "snapshot line " + std::to_string(line_no) +
                                        ": " + ex.what());
    }
    entries.push_back(std::move(e));
  }
  return RegionStore::replay(std::move(region_id), limits, entries);
}

}  // namespace chunkstore::kv
