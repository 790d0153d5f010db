// Copyright 2026 the chunkstore authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "chunkstore/baseline/pointer.hpp"

#include <gtest/gtest.h>

#include <random>

namespace chunkstore::baseline {
namespace {

Bytes random_bytes(std::mt19937_64& rng, std::size_t n) {
  return Bytes::build(n, [&](std::uint8_t* p, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i)
      p[i] = static_cast<std::uint8_t>(rng());
  });
}

struct Writer {
  std::int64_t now = 1'700'000'000'000;
  VersionGenerator gen{[this] { return now; }, "use1-a"};
  EntityVersion next() { return gen.next(); }
};

TEST(PointerBaseline, LocalWriteThenRead) {
  std::mt19937_64 rng(113);
  kv::RegionStore store("use1");
  kv::ObjectStoreModel bucket("use1");
  Writer writer;
  Bytes payload = random_bytes(rng, 123'456);

  const auto receipt =
      write_pointer_entity(store, bucket, "e1", payload, writer.next());
  EXPECT_EQ(receipt.chunk_count, 0u);
  EXPECT_EQ(receipt.bytes_written, payload.size());

  const auto read = read_pointer_entity(store, bucket, "e1");
  EXPECT_EQ(read.payload, payload);
  EXPECT_EQ(read.version, receipt.version);
  EXPECT_EQ(read.fallback_depth, 0u);
}

TEST(PointerBaseline, TwoMegabytePayloadIsOneObjectAndOnePointer) {
  std::mt19937_64 rng(127);
  kv::RegionStore store("use1");
  kv::ObjectStoreModel bucket("use1");
  Writer writer;
  Bytes payload = random_bytes(rng, 2'097'152);

  write_pointer_entity(store, bucket, "e1", payload, writer.next());
  EXPECT_EQ(store.item_count(), 1u);  // no chunking
  EXPECT_EQ(bucket.object_count(), 1u);
  EXPECT_EQ(read_pointer_entity(store, bucket, "e1").payload, payload);
}

TEST(PointerBaseline, RewritesUseDistinctObjectKeys) {
  std::mt19937_64 rng(131);
  kv::RegionStore store("use1");
  kv::ObjectStoreModel bucket("use1");
  Writer writer;
  Bytes first = random_bytes(rng, 1'000);
  Bytes second = random_bytes(rng, 2'000);

  const auto r1 = write_pointer_entity(store, bucket, "e1", first, writer.next());
  const auto r2 = write_pointer_entity(store, bucket, "e1", second, writer.next());
  EXPECT_NE(object_key_for("e1", r1.version), object_key_for("e1", r2.version));
  EXPECT_EQ(bucket.object_count(), 2u);
  EXPECT_EQ(store.item_count(), 1u);  // single pointer record, LWW-newest
  const auto read = read_pointer_entity(store, bucket, "e1");
  EXPECT_EQ(read.payload, second);
  EXPECT_EQ(read.version, r2.version);
}

TEST(PointerBaseline, MissingPointerIsEntityNotFound) {
  kv::RegionStore store("usw2");
  kv::ObjectStoreModel bucket("usw2");
  try {
    read_pointer_entity(store, bucket, "ghost");
    FAIL() << "expected EntityNotFound";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::entity_not_found);
  }
}

// The cross-region hazard: pointer replicated, object not yet.
TEST(PointerBaseline, ReplicatedPointerWithoutObjectDangles) {
  std::mt19937_64 rng(137);
  kv::RegionStore writer_store("use1");
  kv::ObjectStoreModel writer_bucket("use1");
  kv::RegionStore reader_store("usw2");
  kv::ObjectStoreModel reader_bucket("usw2");
  Writer writer;
  Bytes payload = random_bytes(rng, 50'000);

  const auto receipt = write_pointer_entity(writer_store, writer_bucket, "e1",
                                            payload, writer.next());

  // table channel delivered, object channel still in flight
  auto pointer_item =
      writer_store.get_item(kv::ItemKey{"e1", std::string(kPointerSortKey)});
  ASSERT_TRUE(pointer_item.has_value());
  reader_store.put_item(*pointer_item);
  try {
    read_pointer_entity(reader_store, reader_bucket, "e1");
    FAIL() << "expected DanglingPointer";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::dangling_pointer);
  }

  // object channel catches up; the read succeeds
  reader_bucket.object_put(object_key_for("e1", receipt.version), payload,
                           receipt.version);
  EXPECT_EQ(read_pointer_entity(reader_store, reader_bucket, "e1").payload,
            payload);
}

// Local safety: within the writing region a read between any two writes
// never dangles, because the object lands before the pointer.
TEST(PointerBaseline, NeverDanglesLocally) {
  std::mt19937_64 rng(139);
  kv::RegionStore store("use1");
  kv::ObjectStoreModel bucket("use1");
  Writer writer;
  for (int i = 0; i < 100; ++i) {
    const std::string id = "e" + std::to_string(rng() % 5);
    Bytes payload = random_bytes(rng, 1 + rng() % 10'000);
    write_pointer_entity(store, bucket, id, payload, writer.next());
    const std::string probe_id = "e" + std::to_string(rng() % 5);
    try {
      read_pointer_entity(store, bucket, probe_id);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::entity_not_found) << "dangled locally";
    }
  }
}

TEST(PointerBaseline, CorruptObjectIsDigestMismatch) {
  std::mt19937_64 rng(149);
  kv::RegionStore store("use1");
  kv::ObjectStoreModel bucket("use1");
  Writer writer;
  Bytes payload = random_bytes(rng, 4'096);
  const auto receipt =
      write_pointer_entity(store, bucket, "e1", payload, writer.next());

  std::string corrupted(payload.view());
  corrupted[17] = static_cast<char>(corrupted[17] ^ 0x08);
  // later stamp so the LWW overwrite wins
  bucket.object_put(object_key_for("e1", receipt.version),
                    Bytes::of(corrupted),
                    EntityVersion{receipt.version.physical_millis + 1, 0,
                                  receipt.version.writer_id});
  try {
    read_pointer_entity(store, bucket, "e1");
    FAIL() << "expected DigestMismatch";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::digest_mismatch);
  }
}

}  // namespace
}  // namespace chunkstore::baseline
