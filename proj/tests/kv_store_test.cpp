// Copyright 2026 the chunkstore authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "chunkstore/kv/store.hpp"

#include <gtest/gtest.h>

#include <atomic>
#include <map>
#include <random>
#include <sstream>
#include <thread>

#include "chunkstore/kv/object_store.hpp"
#include "chunkstore/kv/snapshot.hpp"
#include "chunkstore/version.hpp"

namespace chunkstore::kv {
namespace {

// Item whose serialized size is exactly `total` (pk "p", sk "s", one byte
// attribute named "d").
StoredItem item_of_size(std::uint64_t total, std::string pk = "p",
                        std::string sk = "s") {
  const std::uint64_t overhead = pk.size() + sk.size() + 1;  // + name "d"
  return make_item(std::move(pk), std::move(sk),
                   {{"d", Bytes::build(static_cast<std::size_t>(total - overhead),
                                       [](std::uint8_t* p, std::size_t n) {
                                         std::memset(p, 0x5a, n);
                                       })}});
}

TEST(MakeItem, ComputesSizeAndRejectsBadInput) {
  StoredItem item = make_item("pk", "sk", {{"a", std::int64_t{7}},
                                           {"b", std::string("xyz")},
                                           {"c", Bytes::of("12345")}});
  // 2 + 2 key bytes, names 1+1+1, int 8, string 3, bytes 5
  EXPECT_EQ(item.serialized_size, 2u + 2u + 3u + 8u + 3u + 5u);
  EXPECT_THROW(make_item("", "sk", {}), Error);
  EXPECT_THROW(make_item("pk", "", {}), Error);
  EXPECT_THROW(make_item("pk", "sk", {{"a", std::int64_t{1}},
                                      {"a", std::int64_t{2}}}),
               Error);
  EXPECT_EQ(item_of_size(409'600).serialized_size, 409'600u);
}

TEST(PutItem, ItemSizeBoundary) {
  RegionStore store("use1");
  EXPECT_NO_THROW(store.put_item(item_of_size(409'600)));  // at the limit
  try {
    store.put_item(item_of_size(409'601, "p2"));
    FAIL() << "expected ItemTooLarge";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::item_too_large);
  }
}

TEST(PutItem, ConditionalPuts) {
  RegionStore store("use1");
  StoredItem item = make_item("e", "PTR", {{"Ver", std::string("001")}});
  // attribute_absent passes when the key itself is absent
  store.put_item(item, Condition::attribute_absent("Ver"));
  try {
    store.put_item(item, Condition::attribute_absent("Ver"));
    FAIL() << "expected ConditionFailed";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::condition_failed);
  }
  // equals against present value
  StoredItem newer = make_item("e", "PTR", {{"Ver", std::string("002")}});
  store.put_item(newer,
                 Condition::attribute_equals("Ver", std::string("001")));
  EXPECT_THROW(store.put_item(
                   newer, Condition::attribute_equals("Ver", std::string("001"))),
               Error);
  // equals against a missing key fails
  StoredItem other = make_item("e2", "PTR", {{"Ver", std::string("001")}});
  EXPECT_THROW(store.put_item(
                   other, Condition::attribute_equals("Ver", std::string("001"))),
               Error);
}

TEST(TransactWrite, EnforcesBatchLimits) {
  RegionStore store("use1");

  // 100 items x 350,000 bytes = 35,000,000 > 4,194,304
  std::vector<std::pair<StoredItem, Condition>> batch;
  for (int i = 0; i < 100; ++i)
    batch.emplace_back(item_of_size(350'000, "p", "k" + std::to_string(i)),
                       Condition::none());
  try {
    store.transact_write(batch);
    FAIL() << "expected BatchLimitExceeded";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::batch_limit_exceeded);
  }
  EXPECT_EQ(store.item_count(), 0u);
  EXPECT_EQ(store.last_seq(), 0u);

  // 101 items trips the count limit even when tiny
  std::vector<std::pair<StoredItem, Condition>> many;
  for (int i = 0; i < 101; ++i)
    many.emplace_back(item_of_size(64, "p", "m" + std::to_string(i)),
                      Condition::none());
  EXPECT_THROW(store.transact_write(many), Error);

  // 11 items x 100,000 bytes fits: contiguous log range
  std::vector<std::pair<StoredItem, Condition>> ok;
  for (int i = 0; i < 11; ++i)
    ok.emplace_back(item_of_size(100'000, "p", "n" + std::to_string(i)),
                    Condition::none());
  const auto [first, last] = store.transact_write(ok);
  EXPECT_EQ(first, 1u);
  EXPECT_EQ(last, 11u);
  EXPECT_EQ(store.item_count(), 11u);

  // degenerate single-item batch behaves as put_item
  std::vector<std::pair<StoredItem, Condition>> one;
  one.emplace_back(item_of_size(64, "q", "s"), Condition::none());
  const auto [f2, l2] = store.transact_write(one);
  EXPECT_EQ(f2, l2);
}

TEST(TransactWrite, ConditionFailureAbortsWholeBatch) {
  RegionStore store("use1");
  store.put_item(make_item("e", "a", {{"Ver", std::string("5")}}));
  std::vector<std::pair<StoredItem, Condition>> batch;
  batch.emplace_back(make_item("e", "b", {{"Ver", std::string("6")}}),
                     Condition::none());
  batch.emplace_back(make_item("e", "a", {{"Ver", std::string("6")}}),
                     Condition::attribute_absent("Ver"));
  EXPECT_THROW(store.transact_write(batch), Error);
  EXPECT_FALSE(store.get_item(ItemKey{"e", "b"}).has_value());
  EXPECT_EQ(store.get_item(ItemKey{"e", "a"})->find_string("Ver")[0], "5");
}

TEST(QueryPartition, SortsBytewiseAndFiltersByPrefix) {
  RegionStore store("use1");
  EXPECT_TRUE(store.query_partition("nope").empty());

  store.put_item(make_item("e", "V#x#CHUNK#000002", {}));
  store.put_item(make_item("e", "V#x#CHUNK#000000", {}));
  store.put_item(make_item("e", "V#x#CHUNK#000001", {}));
  store.put_item(make_item("e", "PTR", {}));
  store.put_item(make_item("f", "V#x#CHUNK#000000", {}));

  const auto all = store.query_partition("e");
  ASSERT_EQ(all.size(), 4u);
  EXPECT_EQ(all[0].key.sort_key, "PTR");
  EXPECT_EQ(all[1].key.sort_key, "V#x#CHUNK#000000");
  EXPECT_EQ(all[2].key.sort_key, "V#x#CHUNK#000001");
  EXPECT_EQ(all[3].key.sort_key, "V#x#CHUNK#000002");

  const auto chunks = store.query_partition("e", std::string_view("V#"));
  ASSERT_EQ(chunks.size(), 3u);
  EXPECT_EQ(chunks[0].key.sort_key, "V#x#CHUNK#000000");
  EXPECT_EQ(chunks[2].key.sort_key, "V#x#CHUNK#000002");
}

TEST(DeleteItem, IdempotentAndLogged) {
  RegionStore store("use1");
  store.put_item(make_item("e", "a", {}));
  const auto seq1 = store.delete_item(ItemKey{"e", "a"});
  EXPECT_TRUE(store.query_partition("e").empty());
  const auto seq2 = store.delete_item(ItemKey{"e", "a"});  // absent: no-op
  EXPECT_GT(seq2, seq1);
  const auto seq3 = store.put_item(make_item("e", "a", {}));
  EXPECT_GT(seq3, seq2);
  EXPECT_EQ(store.query_partition("e").size(), 1u);
}

// Log completeness: replaying the write_log from empty reproduces the item
// map exactly.
TEST(WriteLog, ReplayReproducesState) {
  std::mt19937_64 rng(47);
  RegionStore store("use1");
  for (int i = 0; i < 500; ++i) {
    const std::string pk = "p" + std::to_string(rng() % 7);
    const std::string sk = "s" + std::to_string(rng() % 23);
    if (rng() % 4 == 0) {
      store.delete_item(ItemKey{pk, sk});
    } else if (rng() % 3 == 0) {
      std::vector<std::pair<StoredItem, Condition>> batch;
      for (int j = 0; j < 3; ++j)
        batch.emplace_back(
            make_item(pk, sk + "-" + std::to_string(j),
                      {{"v", static_cast<std::int64_t>(rng() % 100)}}),
            Condition::none());
      store.transact_write(batch);
    } else {
      store.put_item(
          make_item(pk, sk, {{"v", static_cast<std::int64_t>(rng() % 100)}}));
    }
  }
  RegionStore replayed =
      RegionStore::replay("use1", store.limits(), store.log_since(0));
  EXPECT_EQ(replayed.snapshot_items(), store.snapshot_items());
  EXPECT_EQ(replayed.last_seq(), store.last_seq());
}

TEST(Snapshot, RoundTripIsByteExact) {
  RegionStore store("use1");
  store.put_item(make_item(
      "e", "V#v#CHUNK#000000",
      {{"Data", Bytes::of(std::string("\x00\x01\xfe\xff", 4))},
       {"Ver", std::string("v")},
       {"Count", std::int64_t{3}}}));
  store.delete_item(ItemKey{"e", "gone"});
  std::vector<std::pair<StoredItem, Condition>> batch;
  batch.emplace_back(make_item("e", "V#v#META", {{"Ver", std::string("v")}}),
                     Condition::none());
  batch.emplace_back(make_item("e", "V#v#CHUNK#000001",
                               {{"Data", Bytes::of("abc")},
                                {"Ver", std::string("v")}}),
                     Condition::none());
  store.transact_write(batch);

  std::ostringstream first;
  dump_store(store, first);
  std::istringstream in(first.str());
  RegionStore loaded = load_store(in, "use1");
  std::ostringstream second;
  dump_store(loaded, second);
  EXPECT_EQ(first.str(), second.str());
  EXPECT_EQ(loaded.snapshot_items(), store.snapshot_items());
}

TEST(Snapshot, RejectsGarbage) {
  std::istringstream in("not json\n");
  EXPECT_THROW(load_store(in, "use1"), Error);
  std::istringstream gap(R"({"seq":2,"op":"put","pk":"cA==","sk":"cw==","attributes":{},"txn":2})"
                         "\n");
  EXPECT_THROW(load_store(gap, "use1"), Error);
}

// Size enforcement holds under any operation sequence.
TEST(StoreInvariants, OversizeNeverObservable) {
  RegionStore store("use1", StoreLimits{1000, 10, 4000});
  std::mt19937_64 rng(53);
  for (int i = 0; i < 300; ++i) {
    const std::uint64_t size = 900 + rng() % 300;  // straddles the limit
    try {
      store.put_item(item_of_size(size, "p", "s" + std::to_string(rng() % 9)));
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), Errc::item_too_large);
    }
  }
  for (const auto& [key, item] : store.snapshot_items())
    EXPECT_LE(item.serialized_size, 1000u);
}

// Exhaustive small-case interleavings: two transactions and a query in
// every relative order; the query sees each transaction fully or not at
// all.
TEST(Atomicity, ExhaustiveSmallInterleavings) {
  auto txn = [](RegionStore& store, int id) {
    std::vector<std::pair<StoredItem, Condition>> batch;
    for (int j = 0; j < 3; ++j)
      batch.emplace_back(
          make_item("e", "t" + std::to_string(id) + "-" + std::to_string(j),
                    {{"txn", static_cast<std::int64_t>(id)}}),
          Condition::none());
    store.transact_write(batch);
  };
  auto check = [](const RegionStore& store) {
    std::map<std::int64_t, int> counts;
    for (const auto& item : store.query_partition("e"))
      counts[*item.find_int("txn")]++;
    for (const auto& [id, n] : counts) EXPECT_EQ(n, 3) << "torn txn " << id;
  };
  // all orders of {T1, T2} with the query at every gap
  for (int query_pos = 0; query_pos <= 2; ++query_pos) {
    for (int first_txn : {1, 2}) {
      RegionStore store("use1");
      int pos = 0;
      if (query_pos == pos++) check(store);
      txn(store, first_txn);
      if (query_pos == pos++) check(store);
      txn(store, first_txn == 1 ? 2 : 1);
      if (query_pos == pos++) check(store);
    }
  }
}

// Randomized concurrent schedules: writers overwrite the same 11 keys in
// transactions tagged with a round number; readers must always see all 11
// keys carrying one single tag.
TEST(Atomicity, ConcurrentWritersAndReaders) {
  RegionStore store("use1");
  constexpr int kWriters = 2;
  constexpr int kRounds = 400;
  std::atomic<bool> done{false};
  std::atomic<std::uint64_t> queries{0};
  std::atomic<std::uint64_t> torn{0};

  std::vector<std::thread> threads;
  for (int w = 0; w < kWriters; ++w) {
    threads.emplace_back([&store, w] {
      for (int round = 0; round < kRounds; ++round) {
        std::vector<std::pair<StoredItem, Condition>> batch;
        for (int j = 0; j < 11; ++j)
          batch.emplace_back(
              make_item("e", "k" + std::to_string(j),
                        {{"tag", static_cast<std::int64_t>(
                                     w * kRounds + round)}}),
              Condition::none());
        store.transact_write(batch);
      }
    });
  }
  std::vector<std::thread> readers;
  for (int r = 0; r < 2; ++r) {
    readers.emplace_back([&] {
      while (!done.load(std::memory_order_relaxed)) {
        const auto items = store.query_partition("e");
        if (items.empty()) continue;
        ++queries;
        if (items.size() != 11) {
          ++torn;
          continue;
        }
        const auto tag = items[0].find_int("tag");
        for (const auto& item : items)
          if (item.find_int("tag") != tag) ++torn;
      }
    });
  }
  for (auto& t : threads) t.join();
  done = true;
  for (auto& t : readers) t.join();
  EXPECT_EQ(torn.load(), 0u);
  EXPECT_GT(queries.load(), 100u);
}

TEST(ObjectStore, PutGetAndLastWriterWins) {
  ObjectStoreModel bucket("use1");
  const EntityVersion v1{1'700'000'000'000, 0, "use1-a"};
  const EntityVersion v2{1'700'000'000'001, 0, "use1-a"};

  bucket.object_put("k", Bytes::of("new"), v2);
  bucket.object_put("k", Bytes::of("stale"), v1);  // late stale delivery
  EXPECT_EQ(bucket.object_get("k").view(), "new");

  bucket.object_put("k", Bytes::of("newest"), EntityVersion{
      1'700'000'000'002, 0, "use1-a"});
  EXPECT_EQ(bucket.object_get("k").view(), "newest");

  // no item-size ceiling in the bucket
  EXPECT_NO_THROW(bucket.object_put(
      "big",
      Bytes::build(1'048'576, [](std::uint8_t* p, std::size_t n) {
        std::memset(p, 1, n);
      }),
      v1));
  EXPECT_EQ(bucket.object_get("big").size(), 1'048'576u);

  try {
    bucket.object_get("missing");
    FAIL() << "expected ObjectNotFound";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::object_not_found);
  }
}

}  // namespace
}  // namespace chunkstore::kv
