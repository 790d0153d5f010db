// Copyright 2026 the chunkstore authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>

#include "chunkstore/bytes.hpp"
#include "chunkstore/error.hpp"
#include "chunkstore/version.hpp"

namespace chunkstore::kv {

/// One region's object bucket. No size limit and no transactions; that
/// asymmetry against RegionStore is the point. Overwrites resolve
/// last-writer-wins on the put stamp, so a delayed stale replication
/// delivery never clobbers a newer object.
class ObjectStoreModel {
 public:
  explicit ObjectStoreModel(std::string region_id)
      : region_id_(std::move(region_id)) {}

  const std::string& region_id() const { return region_id_; }

  void object_put(std::string_view key, Bytes payload,
                  const EntityVersion& stamp) {
    if (key.empty()) raise(Errc::invalid_argument, "object key must be non-empty");
    std::lock_guard lock(*mu_);
    auto [it, inserted] = objects_.try_emplace(std::string(key));
    if (inserted || stamp > it->second.stamp)
      it->second = ObjectRecord{std::move(payload), stamp};
  }

  /// The modeled 404: raises ObjectNotFound when the key has not (yet)
  /// appeared in this region's bucket.
  Bytes object_get(std::string_view key) const {
    if (key.empty()) raise(Errc::invalid_argument, "object key must be non-empty");
    std::lock_guard lock(*mu_);
    auto it = objects_.find(key);
    if (it == objects_.end())
      raise(Errc::object_not_found, "no object at key " + std::string(key));
    return it->second.payload;
  }

  std::optional<Bytes> try_get(std::string_view key) const {
    std::lock_guard lock(*mu_);
    auto it = objects_.find(key);
    if (it == objects_.end()) return std::nullopt;
    return it->second.payload;
  }

  bool contains(std::string_view key) const {
    std::lock_guard lock(*mu_);
    return objects_.count(key) > 0;
  }

  std::size_t object_count() const {
    std::lock_guard lock(*mu_);
    return objects_.size();
  }

  std::map<std::string, std::pair<Bytes, EntityVersion>> snapshot() const {
    std::lock_guard lock(*mu_);
    std::map<std::string, std::pair<Bytes, EntityVersion>> out;
    for (const auto& [k, rec] : objects_) out.emplace(k, std::make_pair(rec.payload, rec.stamp));
    return out;
  }

 private:
  struct ObjectRecord {
    Bytes payload;
    EntityVersion stamp;
  };

  std::string region_id_;
  mutable std::unique_ptr<std::mutex> mu_ = std::make_unique<std::mutex>();
  std::map<std::string, ObjectRecord, std::less<>> objects_;
};

}  // namespace chunkstore::kv
