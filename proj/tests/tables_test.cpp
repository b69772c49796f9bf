#include <gtest/gtest.h>

#include "fanetsim/tables.hpp"

namespace fanetsim {
namespace {

MsgId id(std::uint32_t node, std::uint64_t seq) { return MsgId{NodeId{node}, seq}; }

TEST(NeighborTable, ExpiresAfterWindow)
{
  NeighborTable t(SimTime::seconds(3));
  t.refresh(NodeId{1}, SimTime::seconds(1));
  EXPECT_TRUE(t.contains(NodeId{1}, SimTime::seconds(4)));
  EXPECT_FALSE(t.contains(NodeId{1}, SimTime::seconds(4) + SimTime::micros(1)));
  t.refresh(NodeId{1}, SimTime::seconds(4));
  t.refresh(NodeId{2}, SimTime::seconds(2));
  EXPECT_EQ(t.neighbors(SimTime::seconds(6)), (std::vector<NodeId>{NodeId{1}}));
  EXPECT_EQ(t.last_seen(NodeId{2}), SimTime::seconds(2));
  EXPECT_FALSE(t.last_seen(NodeId{9}).has_value());
}

TEST(SeenSet, DetectsDuplicatesAndEvictsFifo)
{
  SeenSet s(2);
  EXPECT_TRUE(s.insert(id(0, 1)));
  EXPECT_FALSE(s.insert(id(0, 1)));
  EXPECT_TRUE(s.insert(id(0, 2)));
  EXPECT_TRUE(s.insert(id(0, 3)));
  EXPECT_EQ(s.size(), 2u);
  EXPECT_FALSE(s.contains(id(0, 1)));
  EXPECT_TRUE(s.insert(id(0, 1)));  // forgotten, so accepted again
}

TEST(PendingQueryTable, ConsumeAndExpire)
{
  PendingQueryTable pit(8);
  const auto key = KeyExpr::parse("a/**");
  pit.add(id(0, 1), key, SimTime::seconds(2), NodeId{3}, false);
  pit.add(id(0, 1), key, SimTime::seconds(2), NodeId{4}, false);
  EXPECT_EQ(pit.consume_upstream(id(0, 1)), (std::set<NodeId>{NodeId{3}, NodeId{4}}));
  EXPECT_EQ(pit.find(id(0, 1)), nullptr);
  EXPECT_TRUE(pit.consume_upstream(id(0, 1)).empty());

  pit.add(id(5, 1), key, SimTime::seconds(2), std::nullopt, true);
  EXPECT_TRUE(pit.consume_upstream(id(5, 1)).empty());
  ASSERT_NE(pit.find(id(5, 1)), nullptr);  // local entries survive replies
  EXPECT_TRUE(pit.expire(SimTime::seconds(1)).empty());
  const auto gone = pit.expire(SimTime::seconds(2));
  ASSERT_EQ(gone.size(), 1u);
  EXPECT_EQ(gone[0].id, id(5, 1));
  EXPECT_EQ(gone[0].key, key);
  EXPECT_EQ(pit.size(), 0u);
}

TEST(PendingQueryTable, FullTableEvictsOldest)
{
  PendingQueryTable pit(2);
  const auto key = KeyExpr::parse("a");
  EXPECT_TRUE(pit.add(id(0, 1), key, SimTime::seconds(9), NodeId{1}, false).empty());
  EXPECT_TRUE(pit.add(id(0, 2), key, SimTime::seconds(9), NodeId{1}, false).empty());
  const auto evicted = pit.add(id(0, 3), key, SimTime::seconds(9), NodeId{1}, false);
  ASSERT_EQ(evicted.size(), 1u);
  EXPECT_EQ(evicted[0].id, id(0, 1));
  EXPECT_EQ(pit.size(), 2u);
}

TEST(ContentStore, LruEviction)
{
  ContentStore cs(2);
  cs.store(KeyExpr::parse("a/x"), 10, SimTime::seconds(1), id(0, 1));
  cs.store(KeyExpr::parse("a/y"), 20, SimTime::seconds(2), id(0, 2));
  ASSERT_NE(cs.lookup(KeyExpr::parse("a/x")), nullptr);  // a/x now most recent
  cs.store(KeyExpr::parse("b/z"), 30, SimTime::seconds(3), id(0, 3));
  EXPECT_EQ(cs.size(), 2u);
  EXPECT_EQ(cs.lookup(KeyExpr::parse("a/y")), nullptr);
  const auto hits = cs.match(KeyExpr::parse("**"));
  ASSERT_EQ(hits.size(), 2u);
  EXPECT_EQ(hits[0].key.str(), "b/z");
  EXPECT_EQ(hits[1].key.str(), "a/x");
}

TEST(ContentStore, RestoreReplacesEntry)
{
  ContentStore cs(4);
  cs.store(KeyExpr::parse("k"), 10, SimTime::seconds(1), id(0, 1));
  cs.store(KeyExpr::parse("k"), 99, SimTime::seconds(2), id(0, 2));
  EXPECT_EQ(cs.size(), 1u);
  EXPECT_EQ(cs.lookup(KeyExpr::parse("k"))->payload_bytes, 99);
}

}  // namespace
}  // namespace fanetsim
