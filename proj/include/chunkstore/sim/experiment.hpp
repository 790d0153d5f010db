// Copyright 2026 the chunkstore authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <deque>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "chunkstore/baseline/pointer.hpp"
#include "chunkstore/bytes.hpp"
#include "chunkstore/error.hpp"
#include "chunkstore/kv/object_store.hpp"
#include "chunkstore/kv/store.hpp"
#include "chunkstore/protocol/reader.hpp"
#include "chunkstore/protocol/writer.hpp"
#include "chunkstore/rng.hpp"
#include "chunkstore/sim/lag_model.hpp"
#include "chunkstore/sim/percentile.hpp"
#include "chunkstore/version.hpp"

namespace chunkstore::sim {

enum class Pattern { chunked, pointer };

inline constexpr std::string_view to_string(Pattern p) {
  return p == Pattern::chunked ? "chunked" : "pointer";
}

/// When the reader region probes a freshly visible entity. `immediate`
/// issues one read the instant the metadata (or pointer) appears, which is
/// the measurement the error rates are defined over. `retry` re-probes
/// after each failure, modeling application-side backoff.
struct ProbePolicy {
  enum class Kind { immediate, retry };
  Kind kind = Kind::immediate;
  std::uint32_t retries = 0;  // additional attempts after the first
  double interval_seconds = 0.0;

  static ProbePolicy immediate() { return {}; }
  static ProbePolicy retry(std::uint32_t retries, double interval_seconds) {
    return ProbePolicy{Kind::retry, retries, interval_seconds};
  }

  void validate() const {
    if (kind == Kind::retry && (retries == 0 || interval_seconds <= 0))
      raise(Errc::config_error,
            "retry policy needs retries >= 1 and a positive interval");
  }
};

/// One experiment: a two-region active-active deployment, writes arriving
/// Poisson-spaced in the writer region, and two independent replication
/// channels (table write-log vs object bucket).
struct SimConfig {
  std::uint64_t seed = 42;
  double duration_seconds = 1800.0;
  double write_rate_per_second = 55.0;
  std::uint64_t payload_bytes = 1'048'576;
  Pattern pattern = Pattern::chunked;
  LagModel db_lag = LagModel::constant(0.0);
  LagModel object_lag = LagModel::constant(0.0);
  ProbePolicy probe_policy{};
  std::array<std::string, 2> regions{"use1", "usw2"};
  /// false: every write-log entry gets an independent lag draw (log-shipping
  /// jitter); true: one draw per transaction.
  bool db_draw_per_transaction = false;

  void validate() const {
    if (!(duration_seconds > 0))
      raise(Errc::config_error, "duration_seconds must be positive");
    if (!(write_rate_per_second > 0))
      raise(Errc::config_error, "write_rate_per_second must be positive");
    if (payload_bytes > 16ull * 1024 * 1024)
      raise(Errc::config_error, "payload_bytes exceeds the 16 MB entity cap");
    if (regions[0].empty() || regions[1].empty() || regions[0] == regions[1])
      raise(Errc::config_error, "regions must be two distinct names");
    db_lag.validate();
    object_lag.validate();
    probe_policy.validate();
  }
};

struct SimMetrics {
  std::vector<double> ttc_samples_seconds;
  std::uint64_t probe_total = 0;
  std::uint64_t probe_404 = 0;
  double max_ttc_seconds = 0.0;
  /// Per-write (object delivery lag − table delivery lag); zero for the
  /// chunked pattern, which has no object channel. The unclamped average
  /// can be negative when the object usually lands first.
  double avg_lag_delta_seconds = 0.0;
  double avg_lag_delta_clamped_seconds = 0.0;
  double p99_lag_delta_seconds = 0.0;

  double p50() const { return percentile(ttc_samples_seconds, 0.50); }
  double p95() const { return percentile(ttc_samples_seconds, 0.95); }
  double p99() const { return percentile(ttc_samples_seconds, 0.99); }
  double error_rate() const {
    return probe_total == 0
               ? 0.0
               : static_cast<double>(probe_404) / static_cast<double>(probe_total);
  }
};

/// Multi-master conflict resolution: the greater "Ver" wins. Equal versions
/// can only be two forms of the same logical write (a two-phase metadata
/// record and its committed flip); COMMITTED supersedes WRITING, which keeps
/// the merge order-independent.
inline kv::StoredItem lww_merge(const std::optional<kv::StoredItem>& existing,
                                const kv::StoredItem& incoming) {
  const std::string* inc_ver = incoming.find_string(protocol::kAttrVer);
  if (!inc_ver)
    raise(Errc::missing_version_attribute,
          "incoming item has no Ver attribute");
  if (!existing) return incoming;
  const std::string* ex_ver = existing->find_string(protocol::kAttrVer);
  if (!ex_ver)
    raise(Errc::missing_version_attribute,
          "existing item has no Ver attribute");
  if (*inc_ver > *ex_ver) return incoming;
  if (*inc_ver < *ex_ver) return *existing;
  const std::string* inc_status = incoming.find_string(protocol::kAttrStatus);
  if (inc_status && *inc_status == to_string(protocol::EntityStatus::committed))
    return incoming;
  return *existing;
}

namespace detail {

inline std::int64_t to_micros(double seconds) {
  return std::llround(seconds * 1e6);
}
inline double to_seconds(std::int64_t micros) {
  return static_cast<double>(micros) / 1e6;
}

inline std::string writer_id_for_region(const std::string& region) {
  std::string base = region + "----";
  return base.substr(0, 4) + "-a";
}

}  // namespace detail

/// Deterministic single-threaded event loop. Identical (config, seed) yield
/// bitwise-identical metrics. Use run_experiment unless the test needs to
/// inspect the final region state.
class Experiment {
 public:
  explicit Experiment(SimConfig config)
      : cfg_(std::move(config)),
        arrivals_rng_(derive_seed(cfg_.seed, "arrivals")),
        db_rng_(derive_seed(cfg_.seed, "db-lag")),
        object_rng_(derive_seed(cfg_.seed, "object-lag")),
        writer_store_(cfg_.regions[0]),
        reader_store_(cfg_.regions[1]),
        writer_bucket_(cfg_.regions[0]),
        reader_bucket_(cfg_.regions[1]) {
    cfg_.validate();
    Rng payload_rng(derive_seed(cfg_.seed, "payload"));
    Bytes payload = Bytes::build(
        static_cast<std::size_t>(cfg_.payload_bytes),
        [&](std::uint8_t* p, std::size_t n) {
          std::size_t i = 0;
          for (; i + 8 <= n; i += 8) {
            const std::uint64_t w = payload_rng.next_u64();
            std::memcpy(p + i, &w, 8);
          }
          for (std::uint64_t w = payload_rng.next_u64(); i < n; ++i, w >>= 8)
            p[i] = static_cast<std::uint8_t>(w);
        });
    prepared_ = protocol::PreparedPayload::prepare(std::move(payload),
                                                   write_options_.chunking);
  }

  SimMetrics run() {
    schedule_writes();
    while (!events_.empty()) {
      const Event ev = events_.top();
      events_.pop();
      now_ = ev.at_micros;
      switch (ev.kind) {
        case EventKind::local_write: handle_local_write(ev.write_id); break;
        case EventKind::db_deliver: handle_db_deliver(ev.group_id); break;
        case EventKind::object_deliver: handle_object_deliver(ev.write_id); break;
        case EventKind::probe: handle_probe(ev.write_id, ev.attempt); break;
      }
    }
    return finalize_metrics();
  }

  const kv::RegionStore& writer_store() const { return writer_store_; }
  const kv::RegionStore& reader_store() const { return reader_store_; }
  const kv::ObjectStoreModel& writer_bucket() const { return writer_bucket_; }
  const kv::ObjectStoreModel& reader_bucket() const { return reader_bucket_; }

 private:
  enum class EventKind : std::uint8_t {
    local_write,
    db_deliver,
    object_deliver,
    probe
  };

  struct Event {
    std::int64_t at_micros = 0;
    std::uint64_t seq = 0;  // insertion order breaks timestamp ties
    EventKind kind = EventKind::local_write;
    std::uint32_t write_id = 0;
    std::uint32_t group_id = 0;
    std::uint32_t attempt = 0;

    friend bool operator>(const Event& a, const Event& b) {
      if (a.at_micros != b.at_micros) return a.at_micros > b.at_micros;
      return a.seq > b.seq;
    }
  };

  struct TxnGroup {
    std::uint32_t write_id = 0;
    std::vector<kv::LogEntry> entries;
    std::uint32_t remaining = 0;
    bool carries_visibility = false;  // committed metadata or pointer record
  };

  struct WriteTrack {
    std::int64_t t_write = 0;
    std::string entity_id;
    EntityVersion version;
    std::uint32_t pending_groups = 0;
    std::int64_t db_done_at = -1;
    std::int64_t obj_done_at = -1;
    bool has_object = false;
    std::int64_t consistent_at = -1;
    // channel-law instrumentation
    std::int64_t max_db_lag_micros = 0;
    std::int64_t object_lag_micros = 0;
  };

  void push_event(Event ev) {
    ev.seq = next_event_seq_++;
    events_.push(ev);
  }

  void schedule_writes() {
    double t = 0.0;
    std::uint32_t id = 0;
    while (true) {
      t += arrivals_rng_.exponential(cfg_.write_rate_per_second);
      if (t > cfg_.duration_seconds) break;
      Event ev;
      ev.at_micros = detail::to_micros(t);
      ev.kind = EventKind::local_write;
      ev.write_id = id++;
      push_event(ev);
    }
    writes_.resize(id);
  }

  static std::string entity_id_for(std::uint32_t write_id) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "w%08u", write_id);
    return std::string(buf);
  }

  void handle_local_write(std::uint32_t write_id) {
    WriteTrack& track = writes_[write_id];
    track.t_write = now_;
    track.entity_id = entity_id_for(write_id);
    track.version = generate_version(now_ / 1000,
                                     detail::writer_id_for_region(cfg_.regions[0]),
                                     last_version_);
    last_version_ = track.version;

    const std::uint64_t before_seq = writer_store_.last_seq();
    // Draw order is pinned: the pointer pattern draws its object-channel lag
    // first (matching its put-payload-then-put-metadata write order), then
    // the table channel draws follow in log order.
    if (cfg_.pattern == Pattern::chunked) {
      protocol::write_entity(writer_store_, track.entity_id, prepared_,
                             track.version, write_options_);
    } else {
      baseline::write_pointer_entity(writer_store_, writer_bucket_,
                                     track.entity_id, prepared_.payload,
                                     track.version,
                                     write_options_.chunking.checksum_kind);
      const double obj_lag = sample_lag(cfg_.object_lag, object_rng_);
      track.has_object = true;
      track.object_lag_micros = detail::to_micros(obj_lag);
      Event ev;
      ev.at_micros = now_ + track.object_lag_micros;
      ev.kind = EventKind::object_deliver;
      ev.write_id = write_id;
      push_event(ev);
    }

    // Ship the new log entries. Entries of one transaction arrive with
    // independent jitter but apply in the reader region as a unit when the
    // last of them lands; the replication feed never exposes a strict
    // subset of a transaction.
    std::vector<kv::LogEntry> entries = writer_store_.log_since(before_seq);
    std::size_t i = 0;
    while (i < entries.size()) {
      std::size_t j = i;
      while (j < entries.size() &&
             entries[j].txn_first_seq == entries[i].txn_first_seq)
        ++j;
      TxnGroup group;
      group.write_id = write_id;
      group.entries.assign(entries.begin() + static_cast<std::ptrdiff_t>(i),
                           entries.begin() + static_cast<std::ptrdiff_t>(j));
      group.remaining = static_cast<std::uint32_t>(j - i);
      for (const kv::LogEntry& e : group.entries)
        if (is_visibility_item(e)) group.carries_visibility = true;

      const std::uint32_t group_id =
          static_cast<std::uint32_t>(groups_.size());
      if (cfg_.db_draw_per_transaction) {
        group.remaining = 1;
        const std::int64_t lag =
            detail::to_micros(sample_lag(cfg_.db_lag, db_rng_));
        track.max_db_lag_micros = std::max(track.max_db_lag_micros, lag);
        groups_.push_back(std::move(group));
        Event ev;
        ev.at_micros = now_ + lag;
        ev.kind = EventKind::db_deliver;
        ev.write_id = write_id;
        ev.group_id = group_id;
        push_event(ev);
      } else {
        groups_.push_back(std::move(group));
        for (std::size_t k = i; k < j; ++k) {
          const std::int64_t lag =
              detail::to_micros(sample_lag(cfg_.db_lag, db_rng_));
          track.max_db_lag_micros = std::max(track.max_db_lag_micros, lag);
          Event ev;
          ev.at_micros = now_ + lag;
          ev.kind = EventKind::db_deliver;
          ev.write_id = write_id;
          ev.group_id = group_id;
          push_event(ev);
        }
      }
      track.pending_groups++;
      i = j;
    }
  }

  bool is_visibility_item(const kv::LogEntry& e) const {
    if (e.op != kv::MutationOp::put) return false;
    if (cfg_.pattern == Pattern::pointer)
      return e.item.key.sort_key == baseline::kPointerSortKey;
    const std::string* status = e.item.find_string(protocol::kAttrStatus);
    return status != nullptr &&
           *status == to_string(protocol::EntityStatus::committed);
  }

  void apply_entry_to_reader(const kv::LogEntry& e) {
    if (e.op == kv::MutationOp::del) {
      reader_store_.delete_item(e.item.key);
      return;
    }
    std::optional<kv::StoredItem> existing =
        reader_store_.get_item(e.item.key);
    kv::StoredItem winner = lww_merge(existing, e.item);
    if (!existing || !(winner == *existing)) reader_store_.put_item(winner);
  }

  void handle_db_deliver(std::uint32_t group_id) {
    TxnGroup& group = groups_[group_id];
    if (--group.remaining > 0) return;
    for (const kv::LogEntry& e : group.entries) apply_entry_to_reader(e);
    WriteTrack& track = writes_[group.write_id];
    if (--track.pending_groups == 0) track.db_done_at = now_;
    if (group.carries_visibility) {
      Event ev;
      ev.at_micros = now_;
      ev.kind = EventKind::probe;
      ev.write_id = group.write_id;
      ev.attempt = 0;
      push_event(ev);
    }
    group.entries.clear();
    group.entries.shrink_to_fit();
    maybe_complete(group.write_id);
  }

  void handle_object_deliver(std::uint32_t write_id) {
    WriteTrack& track = writes_[write_id];
    reader_bucket_.object_put(
        baseline::object_key_for(track.entity_id, track.version),
        prepared_.payload, track.version);
    track.obj_done_at = now_;
    maybe_complete(write_id);
  }

  void maybe_complete(std::uint32_t write_id) {
    WriteTrack& track = writes_[write_id];
    if (track.consistent_at >= 0 || track.db_done_at < 0) return;
    if (track.has_object && track.obj_done_at < 0) return;
    track.consistent_at = std::max(track.db_done_at, track.obj_done_at);
    const std::int64_t ttc = track.consistent_at - track.t_write;
    // Channel laws, asserted exactly: chunked consistency is the max table
    // delivery lag of the write's own entries; pointer consistency is
    // max(table lag of the pointer record, object delivery lag).
    const std::int64_t expected =
        track.has_object
            ? std::max(track.max_db_lag_micros, track.object_lag_micros)
            : track.max_db_lag_micros;
    if (ttc != expected)
      throw std::logic_error("time-to-consistency deviates from channel law");
    ttc_micros_.push_back(ttc);
    if (track.has_object)
      lag_delta_micros_.push_back(track.object_lag_micros -
                                  track.max_db_lag_micros);
  }

  void handle_probe(std::uint32_t write_id, std::uint32_t attempt) {
    WriteTrack& track = writes_[write_id];
    ++probe_total_;
    bool ok = false;
    try {
      if (cfg_.pattern == Pattern::chunked) {
        protocol::ReadOptions opts;
        opts.verify_chunk_digests = false;  // whole-payload digest suffices
        (void)protocol::read_entity(reader_store_, track.entity_id, opts);
      } else {
        (void)baseline::read_pointer_entity(reader_store_, reader_bucket_,
                                            track.entity_id);
      }
      ok = true;
    } catch (const Error&) {
      ok = false;
    }
    if (!ok) {
      ++probe_404_;
      if (cfg_.probe_policy.kind == ProbePolicy::Kind::retry &&
          attempt < cfg_.probe_policy.retries) {
        Event ev;
        ev.at_micros =
            now_ + detail::to_micros(cfg_.probe_policy.interval_seconds);
        ev.kind = EventKind::probe;
        ev.write_id = write_id;
        ev.attempt = attempt + 1;
        push_event(ev);
      }
    }
  }

  SimMetrics finalize_metrics() {
    SimMetrics m;
    m.ttc_samples_seconds.reserve(ttc_micros_.size());
    for (std::int64_t t : ttc_micros_) {
      const double s = detail::to_seconds(t);
      m.ttc_samples_seconds.push_back(s);
      m.max_ttc_seconds = std::max(m.max_ttc_seconds, s);
    }
    m.probe_total = probe_total_;
    m.probe_404 = probe_404_;
    if (!lag_delta_micros_.empty()) {
      double sum = 0, sum_clamped = 0;
      std::vector<double> deltas;
      deltas.reserve(lag_delta_micros_.size());
      for (std::int64_t d : lag_delta_micros_) {
        const double s = detail::to_seconds(d);
        deltas.push_back(s);
        sum += s;
        sum_clamped += std::max(0.0, s);
      }
      m.avg_lag_delta_seconds = sum / static_cast<double>(deltas.size());
      m.avg_lag_delta_clamped_seconds =
          sum_clamped / static_cast<double>(deltas.size());
      m.p99_lag_delta_seconds = percentile(std::move(deltas), 0.99);
    }
    return m;
  }

  SimConfig cfg_;
  Rng arrivals_rng_;
  Rng db_rng_;
  Rng object_rng_;
  kv::RegionStore writer_store_;
  kv::RegionStore reader_store_;
  kv::ObjectStoreModel writer_bucket_;
  kv::ObjectStoreModel reader_bucket_;
  protocol::WriteOptions write_options_{};
  protocol::PreparedPayload prepared_;
  std::optional<EntityVersion> last_version_;

  std::priority_queue<Event, std::vector<Event>, std::greater<>> events_;
  std::uint64_t next_event_seq_ = 0;
  std::int64_t now_ = 0;
  std::vector<WriteTrack> writes_;
  std::deque<TxnGroup> groups_;
  std::vector<std::int64_t> ttc_micros_;
  std::vector<std::int64_t> lag_delta_micros_;
  std::uint64_t probe_total_ = 0;
  std::uint64_t probe_404_ = 0;
};

inline SimMetrics run_experiment(const SimConfig& config) {
  Experiment experiment(config);
  return experiment.run();
}

}  // namespace chunkstore::sim
