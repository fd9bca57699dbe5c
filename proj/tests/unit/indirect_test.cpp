#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace swrr;
using namespace swrr::testing;

namespace {

std::string describe(const IndirectInstance &g) {
  std::string s = "n=" + std::to_string(g.n) + " edges:";
  for (auto [a, b] : g.edges)
    s += " " + std::to_string(a) + ">" + std::to_string(b);
  s += " direct:";
  for (int d : g.direct)
    s += " " + std::to_string(d);
  s += " poisoned:";
  for (int p : g.poisoned)
    s += " " + std::to_string(p);
  return s;
}

IndirectInstance make(int n, std::set<std::pair<int, int>> edges, std::set<int> direct, std::set<int> poisoned = {}) {
  return IndirectInstance{n, std::move(edges), std::move(direct), std::move(poisoned)};
}

} // namespace

TEST(IndirectOracle, LeafUnderDirectCaller) {
  const auto g = make(2, {{0, 1}}, {0});
  EXPECT_EQ(run_mark_indirect(g), (IndirectResult{{1, {0}}}));
}

TEST(IndirectOracle, UncoveredCallerBlocks) {
  // 2 is called by direct 0 and by 1, which nobody calls
  const auto g = make(3, {{0, 2}, {1, 2}}, {0});
  EXPECT_TRUE(run_mark_indirect(g).empty());
}

TEST(IndirectOracle, OptionsAccumulateTransitively) {
  const auto g = make(5, {{0, 2}, {1, 2}, {2, 3}, {1, 4}, {3, 4}}, {0, 1});
  EXPECT_EQ(run_mark_indirect(g), (IndirectResult{{2, {0, 1}}, {3, {0, 1}}, {4, {0, 1}}}));
}

TEST(IndirectOracle, PoisonedNodeAndItsDependents) {
  const auto g = make(3, {{0, 1}, {1, 2}}, {0}, {1});
  EXPECT_TRUE(run_mark_indirect(g).empty());
}

TEST(IndirectOracle, CycleEnteredFromDirect) {
  const auto g = make(3, {{0, 1}, {1, 2}, {2, 1}}, {0});
  EXPECT_EQ(run_mark_indirect(g), (IndirectResult{{1, {0}}, {2, {0}}}));
}

TEST(IndirectOracle, IsolatedCycleIsUnprotected) {
  const auto g = make(3, {{1, 2}, {2, 1}}, {0});
  EXPECT_TRUE(run_mark_indirect(g).empty());
  const auto self = make(1, {{0, 0}}, {});
  EXPECT_TRUE(run_mark_indirect(self).empty());
}

TEST(IndirectOracle, DirectFunctionsStayDirect) {
  const auto g = make(2, {{0, 1}, {1, 0}}, {0, 1});
  EXPECT_TRUE(run_mark_indirect(g).empty());
}

TEST(IndirectOracle, OraclesAgreeWithEachOther) {
  // the three references must coincide wherever they all apply
  for (std::uint64_t seed = 1; seed <= 400; ++seed) {
    const auto g = random_instance(seed, 12, 3.0, true);
    const auto exhaustive = indirect_exhaustive(g);
    ASSERT_EQ(indirect_additive_dag(g, identity_order(g.n)), exhaustive) << describe(g);
    ASSERT_EQ(indirect_removal_rounds(g), exhaustive) << describe(g);
  }
  for (std::uint64_t seed = 1; seed <= 400; ++seed) {
    const auto g = random_instance(seed + 10000, 12, 3.0, false);
    ASSERT_EQ(indirect_removal_rounds(g), indirect_exhaustive(g)) << describe(g);
  }
}

TEST(IndirectOracle, RandomDags) {
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    const auto g = random_instance(seed, 50, 4.0, true);
    ASSERT_EQ(run_mark_indirect(g), indirect_additive_dag(g, identity_order(g.n))) << describe(g);
  }
}

TEST(IndirectOracle, RandomGraphsWithCycles) {
  for (std::uint64_t seed = 1; seed <= 1000; ++seed) {
    const auto g = random_instance(seed + 50000, 50, 4.0, false);
    ASSERT_EQ(run_mark_indirect(g), indirect_removal_rounds(g)) << describe(g);
  }
}

TEST(IndirectOracle, SmallGraphsExhaustive) {
  for (std::uint64_t seed = 1; seed <= 500; ++seed) {
    const auto g = random_instance(seed + 90000, 10, 4.0, false);
    ASSERT_EQ(run_mark_indirect(g), indirect_exhaustive(g)) << describe(g);
  }
}
