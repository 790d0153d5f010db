// Copyright 2026 the chunkstore authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "chunkstore/bytes.hpp"
#include "chunkstore/error.hpp"

namespace chunkstore::kv {

/// Scalar attribute value: signed integer, UTF-8 string, or raw bytes.
using AttrValue = std::variant<std::int64_t, std::string, Bytes>;

/// Size accounting: key bytes + attribute-name bytes + attribute-value
/// bytes, no per-item overhead constant. Integers count as 8 bytes.
inline std::uint64_t attr_value_size(const AttrValue& v) {
  if (std::holds_alternative<std::int64_t>(v)) return 8;
  if (const auto* s = std::get_if<std::string>(&v)) return s->size();
  return std::get<Bytes>(v).size();
}

struct ItemKey {
  std::string partition_key;
  std::string sort_key;

  friend auto operator<=>(const ItemKey&, const ItemKey&) = default;
};

/// One table item: key plus a flat set of uniquely named attributes, kept
/// sorted by name. Items within a partition order bytewise on sort_key.
struct StoredItem {
  ItemKey key;
  std::vector<std::pair<std::string, AttrValue>> attributes;
  std::uint64_t serialized_size = 0;

  const AttrValue* find(std::string_view name) const {
    auto it = std::lower_bound(
        attributes.begin(), attributes.end(), name,
        [](const auto& a, std::string_view n) { return a.first < n; });
    if (it == attributes.end() || it->first != name) return nullptr;
    return &it->second;
  }

  const std::string* find_string(std::string_view name) const {
    const AttrValue* v = find(name);
    return v ? std::get_if<std::string>(v) : nullptr;
  }
  const Bytes* find_bytes(std::string_view name) const {
    const AttrValue* v = find(name);
    return v ? std::get_if<Bytes>(v) : nullptr;
  }
  std::optional<std::int64_t> find_int(std::string_view name) const {
    const AttrValue* v = find(name);
    if (!v) return std::nullopt;
    if (const auto* i = std::get_if<std::int64_t>(v)) return *i;
    return std::nullopt;
  }

  friend bool operator==(const StoredItem&, const StoredItem&) = default;
};

/// Builds a well-formed item: validates the key, sorts attributes, rejects
/// duplicate names, computes the serialized size.
inline StoredItem make_item(
    std::string partition_key, std::string sort_key,
    std::vector<std::pair<std::string, AttrValue>> attributes) {
  if (partition_key.empty())
    raise(Errc::invalid_argument, "partition_key must be non-empty");
  if (sort_key.empty())
    raise(Errc::invalid_argument, "sort_key must be non-empty");
  std::sort(attributes.begin(), attributes.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  StoredItem item;
  item.serialized_size = partition_key.size() + sort_key.size();
  for (std::size_t i = 0; i < attributes.size(); ++i) {
    const auto& [name, value] = attributes[i];
    if (name.empty())
      raise(Errc::invalid_argument, "attribute name must be non-empty");
    if (i > 0 && name == attributes[i - 1].first)
      raise(Errc::invalid_argument, "duplicate attribute name: " + name);
    item.serialized_size += name.size() + attr_value_size(value);
  }
  item.key = ItemKey{std::move(partition_key), std::move(sort_key)};
  item.attributes = std::move(attributes);
  return item;
}

/// Managed-store constraints the protocol has to respect. Defaults follow
/// the 400 KB item limit plus 100-item / 4 MB transaction bounds of the
/// reference store.
struct StoreLimits {
  std::uint64_t max_item_size = 409'600;
  std::size_t max_transaction_items = 100;
  std::uint64_t max_transaction_bytes = 4'194'304;

  void validate() const {
    if (max_item_size == 0 || max_transaction_items == 0 ||
        max_transaction_bytes == 0)
      raise(Errc::invalid_argument, "store limits must be strictly positive");
    if (max_item_size > max_transaction_bytes)
      raise(Errc::invalid_argument,
            "max_item_size must not exceed max_transaction_bytes");
  }
};

/// Optimistic-lock predicate evaluated atomically against the pre-state of
/// the write that carries it.
struct Condition {
  enum class Kind { none, attribute_absent, attribute_equals };

  Kind kind = Kind::none;
  std::string attribute;
  AttrValue value;

  static Condition none() { return {}; }
  static Condition attribute_absent(std::string name) {
    if (name.empty()) raise(Errc::invalid_argument, "condition attribute empty");
    return Condition{Kind::attribute_absent, std::move(name), {}};
  }
  static Condition attribute_equals(std::string name, AttrValue v) {
    if (name.empty()) raise(Errc::invalid_argument, "condition attribute empty");
    return Condition{Kind::attribute_equals, std::move(name), std::move(v)};
  }

  bool holds(const StoredItem* existing) const {
    switch (kind) {
      case Kind::none:
        return true;
      case Kind::attribute_absent:
        return existing == nullptr || existing->find(attribute) == nullptr;
      case Kind::attribute_equals: {
        if (existing == nullptr) return false;
        const AttrValue* v = existing->find(attribute);
        return v != nullptr && *v == value;
      }
    }
    return false;
  }
};

enum class MutationOp : std::uint8_t { put, del };

/// Append-only mutation record; the replication source. Entries written by
/// one transaction share txn_first_seq so a replicator can re-apply them
/// as a unit and never expose a strict subset.
struct LogEntry {
  std::uint64_t seq = 0;
  std::uint64_t txn_first_seq = 0;
  MutationOp op = MutationOp::put;
  StoredItem item;  // for del, carries the key only
};

/// In-process emulation of one region's key-value table. All operations are
/// linearizable: a single mutex orders every mutation and every read, so a
/// query observes either all or none of a transaction.
class RegionStore {
 public:
  explicit RegionStore(std::string region_id, StoreLimits limits = {})
      : region_id_(std::move(region_id)), limits_(limits) {
    limits_.validate();
  }

  const std::string& region_id() const { return region_id_; }
  const StoreLimits& limits() const { return limits_; }

  /// Unconditional or conditional single-item put. Returns the log sequence
  /// assigned to the mutation.
  std::uint64_t put_item(const StoredItem& item,
                         const Condition& condition = Condition::none()) {
    check_item(item);
    std::lock_guard lock(*mu_);
    const StoredItem* existing = find_locked(item.key);
    if (!condition.holds(existing))
      raise(Errc::condition_failed,
            "condition failed for " + describe(item.key));
    return apply_put_locked(item);
  }

  /// All-or-nothing batch. Conditions are evaluated against the pre-state of
  /// the whole transaction (an item in the batch does not observe earlier
  /// items of the same batch). Returns the contiguous log range applied.
  std::pair<std::uint64_t, std::uint64_t> transact_write(
      std::span<const std::pair<StoredItem, Condition>> batch) {
    if (batch.empty())
      raise(Errc::invalid_argument, "transact_write: empty batch");
    if (batch.size() > limits_.max_transaction_items)
      raise(Errc::batch_limit_exceeded,
            "batch of " + std::to_string(batch.size()) + " items exceeds " +
                std::to_string(limits_.max_transaction_items));
    std::uint64_t total = 0;
    for (const auto& [item, condition] : batch) {
      check_item(item);
      total += item.serialized_size;
    }
    if (total > limits_.max_transaction_bytes)
      raise(Errc::batch_limit_exceeded,
            "batch of " + std::to_string(total) + " bytes exceeds " +
                std::to_string(limits_.max_transaction_bytes));
    for (std::size_t i = 0; i + 1 < batch.size(); ++i)
      for (std::size_t j = i + 1; j < batch.size(); ++j)
        if (batch[i].first.key == batch[j].first.key)
          raise(Errc::invalid_argument,
                "transact_write: duplicate key in batch");

    std::lock_guard lock(*mu_);
    for (const auto& [item, condition] : batch) {
      if (!condition.holds(find_locked(item.key)))
        raise(Errc::condition_failed,
              "condition failed for " + describe(item.key));
    }
    const std::uint64_t first = next_seq_;
    for (const auto& [item, condition] : batch) apply_put_locked(item, first);
    return {first, next_seq_ - 1};
  }

  /// Ascending bytewise scan of one partition, optionally narrowed to sort
  /// keys with the given prefix. Snapshot-consistent with transact_write.
  std::vector<StoredItem> query_partition(
      std::string_view partition_key,
      std::optional<std::string_view> sort_key_prefix = std::nullopt) const {
    if (partition_key.empty())
      raise(Errc::invalid_argument, "partition_key must be non-empty");
    std::vector<StoredItem> out;
    std::lock_guard lock(*mu_);
    auto it = items_.lower_bound(ItemKey{std::string(partition_key), ""});
    for (; it != items_.end() && it->first.partition_key == partition_key;
         ++it) {
      if (sort_key_prefix &&
          it->first.sort_key.compare(0, sort_key_prefix->size(),
                                     *sort_key_prefix) != 0)
        continue;
      out.push_back(it->second);
    }
    return out;
  }

  /// Idempotent delete; a no-op delete is still logged.
  std::uint64_t delete_item(const ItemKey& key) {
    std::lock_guard lock(*mu_);
    items_.erase(key);
    LogEntry e;
    e.seq = next_seq_;
    e.txn_first_seq = next_seq_;
    e.op = MutationOp::del;
    e.item.key = key;
    log_.push_back(std::move(e));
    return next_seq_++;
  }

  std::optional<StoredItem> get_item(const ItemKey& key) const {
    std::lock_guard lock(*mu_);
    const StoredItem* found = find_locked(key);
    if (!found) return std::nullopt;
    return *found;
  }

  std::uint64_t last_seq() const {
    std::lock_guard lock(*mu_);
    return next_seq_ - 1;
  }

  std::size_t item_count() const {
    std::lock_guard lock(*mu_);
    return items_.size();
  }

  /// Log entries with seq > after_seq, in order. The replication feed.
  std::vector<LogEntry> log_since(std::uint64_t after_seq) const {
    std::lock_guard lock(*mu_);
    std::vector<LogEntry> out;
    if (after_seq >= log_.size()) return out;
    out.assign(log_.begin() + static_cast<std::ptrdiff_t>(after_seq),
               log_.end());
    return out;
  }

  std::map<ItemKey, StoredItem> snapshot_items() const {
    std::lock_guard lock(*mu_);
    return items_;
  }

  /// Restores a store from a previously captured log; seq numbering and
  /// transaction grouping are preserved exactly.
  static RegionStore replay(std::string region_id, StoreLimits limits,
                            const std::vector<LogEntry>& entries) {
    RegionStore store(std::move(region_id), limits);
    for (const auto& e : entries) {
      if (e.seq != store.next_seq_)
        raise(Errc::invalid_argument,
              "log replay: expected seq " + std::to_string(store.next_seq_) +
                  ", got " + std::to_string(e.seq));
      if (e.op == MutationOp::put) {
        store.check_item(e.item);
        store.items_[e.item.key] = e.item;
      } else {
        store.items_.erase(e.item.key);
      }
      store.log_.push_back(e);
      ++store.next_seq_;
    }
    return store;
  }

 private:
  static std::string describe(const ItemKey& key) {
    return "(" + key.partition_key + ", " + key.sort_key + ")";
  }

  void check_item(const StoredItem& item) const {
    if (item.key.partition_key.empty() || item.key.sort_key.empty())
      raise(Errc::invalid_argument, "item key components must be non-empty");
    if (item.serialized_size > limits_.max_item_size)
      raise(Errc::item_too_large,
            std::to_string(item.serialized_size) + " bytes exceeds limit of " +
                std::to_string(limits_.max_item_size));
  }

  const StoredItem* find_locked(const ItemKey& key) const {
    auto it = items_.find(key);
    return it == items_.end() ? nullptr : &it->second;
  }

  std::uint64_t apply_put_locked(const StoredItem& item,
                                 std::uint64_t txn_first = 0) {
    items_[item.key] = item;
    LogEntry e;
    e.seq = next_seq_;
    e.txn_first_seq = txn_first == 0 ? next_seq_ : txn_first;
    e.op = MutationOp::put;
    e.item = item;
    log_.push_back(std::move(e));
    return next_seq_++;
  }

  std::string region_id_;
  StoreLimits limits_;
  mutable std::unique_ptr<std::mutex> mu_ = std::make_unique<std::mutex>();
  std::map<ItemKey, StoredItem> items_;
  std::vector<LogEntry> log_;
  std::uint64_t next_seq_ = 1;
};

}  // namespace chunkstore::kv
