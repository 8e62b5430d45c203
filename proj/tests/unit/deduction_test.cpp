#include <gtest/gtest.h>

#include <random>

#include "closure_oracle.hpp"
#include "eolo/deduction.hpp"

namespace eolo {
namespace {

ClusterGraph abc() { return ClusterGraph({"a", "b", "c"}); }

TEST(ClusterGraph, NewGraph) {
  const auto g = abc();
  EXPECT_EQ(g.cluster_count(), 3u);
  EXPECT_EQ(g.clusters(), (std::vector<std::vector<RecordId>>{{"a"}, {"b"}, {"c"}}));
  EXPECT_TRUE(g.nonmatch_edges().empty());
  EXPECT_EQ(ClusterGraph({"a"}).cluster_count(), 1u);
  EXPECT_THROW(ClusterGraph(std::vector<RecordId>{}), InvalidArgument);
  EXPECT_THROW(ClusterGraph({"a", "b", "a"}), InvalidArgument);
}

TEST(ClusterGraph, DirectConflict) {
  auto g = abc();
  ASSERT_EQ(g.assert_label("a", "b", Label::Match), AssertResult::Accepted);
  EXPECT_EQ(g.assert_label("a", "b", Label::NonMatch), AssertResult::Contradiction);
}

TEST(ClusterGraph, PositiveTransitivity) {
  auto g = abc();
  g.assert_label("a", "b", Label::Match);
  g.assert_label("b", "c", Label::Match);
  EXPECT_EQ(g.deduce("a", "c"), Verdict::Match);
  EXPECT_EQ(g.assert_label("a", "c", Label::NonMatch), AssertResult::Contradiction);
  EXPECT_EQ(g.clusters(), (std::vector<std::vector<RecordId>>{{"a", "b", "c"}}));
}

TEST(ClusterGraph, NegativePropagation) {
  auto g = abc();
  g.assert_label("a", "b", Label::Match);
  g.assert_label("b", "c", Label::NonMatch);
  EXPECT_EQ(g.deduce("a", "c"), Verdict::NonMatch);
  EXPECT_EQ(g.assert_label("a", "c", Label::Match), AssertResult::Contradiction);
}

TEST(ClusterGraph, TwoDisequalitiesImplyNothing) {
  auto g = abc();
  g.assert_label("a", "b", Label::NonMatch);
  g.assert_label("a", "c", Label::NonMatch);
  EXPECT_EQ(g.deduce("b", "c"), Verdict::Unknown);
}

TEST(ClusterGraph, ClustersAfterMerges) {
  auto g = abc();
  g.assert_label("a", "b", Label::Match);
  EXPECT_EQ(g.clusters(), (std::vector<std::vector<RecordId>>{{"a", "b"}, {"c"}}));
}

TEST(ClusterGraph, ReflexivityAndSelfAssertions) {
  auto g = abc();
  EXPECT_EQ(g.deduce("a", "a"), Verdict::Match);
  EXPECT_EQ(g.assert_label("a", "a", Label::NonMatch), AssertResult::Contradiction);
  EXPECT_EQ(g.assert_label("a", "a", Label::Match), AssertResult::Accepted);
  EXPECT_EQ(g.assertion_count(), 0u);
}

TEST(ClusterGraph, UnknownRecordsThrow) {
  auto g = abc();
  EXPECT_THROW(g.deduce("a", "z"), InvalidArgument);
  EXPECT_THROW(g.assert_label("z", "a", Label::Match), InvalidArgument);
}

TEST(ClusterGraph, ContradictionLeavesGraphUntouched) {
  auto g = ClusterGraph({"a", "b", "c", "d"});
  g.assert_label("a", "b", Label::Match);
  g.assert_label("c", "d", Label::Match);
  g.assert_label("b", "c", Label::NonMatch);
  const auto clusters = g.clusters();
  const auto edges = g.nonmatch_edges();
  const auto count = g.assertion_count();
  EXPECT_EQ(g.assert_label("a", "d", Label::Match), AssertResult::Contradiction);
  EXPECT_EQ(g.clusters(), clusters);
  EXPECT_EQ(g.nonmatch_edges(), edges);
  EXPECT_EQ(g.assertion_count(), count);
}

TEST(ClusterGraph, EdgesFollowMerges) {
  auto g = ClusterGraph({"a", "b", "c", "d"});
  g.assert_label("c", "d", Label::NonMatch);
  g.assert_label("b", "d", Label::NonMatch);
  g.assert_label("a", "d", Label::Match);
  EXPECT_EQ(g.deduce("a", "c"), Verdict::NonMatch);
  EXPECT_EQ(g.deduce("a", "b"), Verdict::NonMatch);
  g.assert_label("b", "c", Label::Match);
  // Two edges collapse onto one between {a,d} and {b,c}.
  EXPECT_EQ(g.nonmatch_edges(), (std::vector<PairKey>{{"a", "b"}}));
}

TEST(ClusterGraph, IdempotentReassertion) {
  auto g = abc();
  g.assert_label("a", "b", Label::Match);
  g.assert_label("b", "c", Label::NonMatch);
  const auto clusters = g.clusters();
  const auto edges = g.nonmatch_edges();
  EXPECT_EQ(g.assert_label("b", "a", Label::Match), AssertResult::Accepted);
  EXPECT_EQ(g.assert_label("a", "c", Label::NonMatch), AssertResult::Accepted);
  EXPECT_EQ(g.clusters(), clusters);
  EXPECT_EQ(g.nonmatch_edges(), edges);
  EXPECT_EQ(g.assertion_count(), 2u);
}

oracle::Known to_known(Verdict v) {
  switch (v) {
    case Verdict::Match: return oracle::Known::Match;
    case Verdict::NonMatch: return oracle::Known::NonMatch;
    case Verdict::Unknown: return oracle::Known::Unknown;
  }
  return oracle::Known::Unknown;
}

// Random assertion sequences against the brute-force closure: agreement on
// every verdict and every accept/reject decision, plus symmetry and
// monotonicity along the way.
TEST(ClusterGraphProperty, AgreesWithClosureOracle) {
  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<std::size_t> n_dist(1, 6);
  std::uniform_int_distribution<int> coin(0, 1);
  for (int round = 0; round < 3000; ++round) {
    const std::size_t n = n_dist(gen);
    std::vector<RecordId> ids;
    for (std::size_t i = 0; i < n; ++i) ids.push_back(std::string(1, static_cast<char>('a' + i)));
    ClusterGraph g(ids);
    std::vector<oracle::Fact> accepted;
    std::vector<Verdict> settled(n * n, Verdict::Unknown);
    std::uniform_int_distribution<std::size_t> rec(0, n - 1);
    std::uniform_int_distribution<int> len(0, 12);
    const int steps = len(gen);
    for (int s = 0; s < steps; ++s) {
      const auto a = rec(gen);
      const auto b = rec(gen);
      const Label l = coin(gen) ? Label::Match : Label::NonMatch;
      auto trial = accepted;
      trial.push_back({a, b, l});
      const bool contradicts = oracle::Closure(n, trial).contradiction();
      const auto result = g.assert_label(a, b, l);
      ASSERT_EQ(result == AssertResult::Contradiction, contradicts)
          << "round " << round << " step " << s;
      if (!contradicts) accepted = std::move(trial);

      const oracle::Closure closure(n, accepted);
      for (std::size_t x = 0; x < n; ++x) {
        for (std::size_t y = 0; y < n; ++y) {
          const auto v = g.deduce(static_cast<ClusterGraph::Node>(x), static_cast<ClusterGraph::Node>(y));
          ASSERT_EQ(to_known(v), closure.known(x, y));
          ASSERT_EQ(v, g.deduce(static_cast<ClusterGraph::Node>(y), static_cast<ClusterGraph::Node>(x)));
          auto& prev = settled[x * n + y];
          if (prev != Verdict::Unknown) ASSERT_EQ(v, prev);
          prev = v;
        }
      }
    }
  }
}

}  // namespace
}  // namespace eolo
