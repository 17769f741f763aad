#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracles.hpp"

using namespace digapprox;

TEST(ParentSets, FormatAndCanonical) {
  EXPECT_EQ(format_set({}), "{}");
  EXPECT_EQ(canonical({3, 1, 2}), (ParentSet{1, 2, 3}));
  EXPECT_TRUE(contains({1, 4}, 4));
  EXPECT_EQ(set_union({1, 3}, {2, 3}), (ParentSet{1, 2, 3}));
  EXPECT_EQ(with_member({1, 3}, 2), (ParentSet{1, 2, 3}));
}

TEST(ParentSets, Validation) {
  EXPECT_THROW(validate_parent_set(3, 0, {0}), ValidationError);
  EXPECT_THROW(validate_parent_set(3, 0, {3}), ValidationError);
  EXPECT_THROW(validate_parent_set(3, 0, {1, 1}), ValidationError);
  EXPECT_NO_THROW(validate_parent_set(3, 0, {1, 2}));
  EXPECT_THROW(ParentAssignment({{0}, {}}), ValidationError);
}

TEST(Assignment, Accessors) {
  ParentAssignment a({{1}, {}, {0, 1}});
  EXPECT_EQ(a.m(), 3);
  EXPECT_EQ(a.edge_count(), 3u);
  EXPECT_FALSE(a.uniform_degree());
  EXPECT_EQ(a.with(1, {2}).uniform_degree(), std::nullopt);
  EXPECT_EQ(ParentAssignment({{1}, {0}}).uniform_degree(), 1);
  EXPECT_EQ(ParentAssignment::empty(4).edge_count(), 0u);
}

TEST(Cache, EmptySetIsZeroAndMissingThrows) {
  DirectedInfoCache cache(3, 1);
  EXPECT_EQ(cache.value(0, {}), 0.0);
  cache.insert(0, {2}, 0.5);
  EXPECT_TRUE(cache.contains(0, {2}));
  EXPECT_FALSE(cache.contains(0, {1}));
  EXPECT_DOUBLE_EQ(cache.value(0, {2}), 0.5);
  EXPECT_THROW(cache.value(0, {1}), UncachedParentSet);
  EXPECT_THROW(cache.insert(0, {0}, 1.0), ValidationError);
}

TEST(TotalScore, EmptyAssignmentScoresZero) {
  DirectedInfoCache cache(4, 2);
  EXPECT_EQ(total_score(ParentAssignment::empty(4), cache), 0.0);
}

TEST(TotalScore, TwoNodeSum) {
  DirectedInfoCache cache(2, 1);
  cache.insert(0, {1}, 0.3466);
  cache.insert(1, {0}, 0.2027);
  EXPECT_NEAR(total_score(ParentAssignment({{1}, {0}}), cache), 0.5493, 1e-12);
}

TEST(TotalScore, MatchesTermByTermSum) {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const auto cache = oracle::random_cache(5, 2, rng);
    std::vector<ParentSet> parents(5);
    for (NodeId i = 0; i < 5; ++i) {
      const auto options = oracle::subsets(5, i, 2);
      parents[i] = options[rng() % options.size()];
    }
    const ParentAssignment a(parents);
    EXPECT_DOUBLE_EQ(total_score(a, cache), oracle::sum_score(a, cache));
  }
}

TEST(Arborescence, ChainAndDisconnected) {
  EXPECT_TRUE(contains_spanning_arborescence(ParentAssignment({{}, {0}, {1}})));
  EXPECT_TRUE(contains_spanning_arborescence(ParentAssignment({{}, {0}, {1}}), 0));
  EXPECT_FALSE(contains_spanning_arborescence(ParentAssignment({{}, {0}, {1}}), 2));
  EXPECT_FALSE(contains_spanning_arborescence(ParentAssignment({{}, {}, {1}})));
}

TEST(Arborescence, MatchesReachabilityOracle) {
  std::mt19937_64 rng(5);
  std::bernoulli_distribution edge(0.3);
  for (int rep = 0; rep < 500; ++rep) {
    std::vector<ParentSet> parents(5);
    for (NodeId i = 0; i < 5; ++i) {
      for (NodeId j = 0; j < 5; ++j) {
        if (j != i && edge(rng)) parents[i].push_back(j);
      }
    }
    const ParentAssignment a(parents);
    bool any = false;
    for (NodeId r = 0; r < 5; ++r) {
      const bool expected = oracle::reaches_all(a, r);
      EXPECT_EQ(contains_spanning_arborescence(a, r), expected);
      any = any || expected;
    }
    EXPECT_EQ(contains_spanning_arborescence(a), any);
  }
}

TEST(ParentSetIndex, SmallCases) {
  EXPECT_EQ(parent_set_index(4, 0, {}), 0u);
  // K = 1: the remapped member minus one
  EXPECT_EQ(parent_set_index(4, 1, {0}), 0u);
  EXPECT_EQ(parent_set_index(4, 1, {2}), 1u);
  EXPECT_EQ(parent_set_index(4, 1, {3}), 2u);
  EXPECT_EQ(parent_set_index(4, 3, {0, 1}), 0u);
  EXPECT_EQ(parent_set_index(4, 3, {0, 2}), 1u);
  EXPECT_EQ(parent_set_index(4, 3, {1, 2}), 2u);
}

TEST(ParentSetIndex, ExhaustiveBijection) {
  for (int m = 2; m <= 8; ++m) {
    for (int K = 1; K <= std::min(3, m - 1); ++K) {
      for (NodeId i = 0; i < m; ++i) {
        const auto sets = oracle::subsets(m, i, K);
        std::vector<std::uint64_t> seen;
        for (const auto& s : sets) seen.push_back(parent_set_index(m, i, s));
        // lexicographic sets map to 0, 1, 2, ...
        for (std::size_t k = 0; k < seen.size(); ++k) EXPECT_EQ(seen[k], k);
        EXPECT_EQ(seen.size(), binomial(m - 1, K));
      }
    }
  }
}

TEST(ApproximationIndex, SmallCases) {
  const ParentAssignment minimal({{1}, {0}, {0}});
  EXPECT_EQ(approximation_index(3, 1, minimal), 1);
  // per-node indices 1, 0, 1 with base C(2,1) = 2
  const ParentAssignment a({{2}, {0}, {1}});
  EXPECT_EQ(approximation_index(3, 1, a), 6);
  EXPECT_EQ(assignment_count(3, 1), 8);
}

TEST(ApproximationIndex, ExhaustiveBijection) {
  for (int m = 2; m <= 4; ++m) {
    for (int K = 1; K <= std::min(2, m - 1); ++K) {
      std::vector<std::vector<ParentSet>> choices(m);
      for (NodeId i = 0; i < m; ++i) choices[i] = oracle::subsets(m, i, K);
      std::set<BigInt> seen;
      oracle::for_each_assignment(choices, [&](const ParentAssignment& a) {
        const BigInt idx = approximation_index(m, K, a);
        EXPECT_GE(idx, 1);
        EXPECT_LE(idx, assignment_count(m, K));
        seen.insert(idx);
      });
      EXPECT_EQ(BigInt(seen.size()), assignment_count(m, K));
    }
  }
}

TEST(AssignmentKey, ReverseOrderMatchesIndexOrder) {
  const int m = 4, K = 1;
  std::vector<std::vector<ParentSet>> choices(m);
  for (NodeId i = 0; i < m; ++i) choices[i] = oracle::subsets(m, i, K);
  std::vector<ParentAssignment> all;
  oracle::for_each_assignment(choices, [&](const ParentAssignment& a) { all.push_back(a); });
  for (const auto& a : all) {
    for (const auto& b : all) {
      EXPECT_EQ(index_order_less(assignment_key(a, K), assignment_key(b, K)),
                approximation_index(m, K, a) < approximation_index(m, K, b));
    }
  }
  EXPECT_THROW(assignment_key(ParentAssignment({{1, 2}, {0}, {0}}), 1), ValidationError);
}

TEST(Candidates, Counts) {
  EXPECT_EQ(candidate_parent_sets(5, 2, 2).size(), 6u);
  EXPECT_EQ(candidate_parent_sets(5, 2, 0).size(), 1u);
  for (const auto& s : candidate_parent_sets(5, 2, 2)) EXPECT_FALSE(contains(s, 2));
}
