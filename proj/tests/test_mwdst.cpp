#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"

using namespace digapprox;

namespace {

bool is_arborescence(const Arborescence& t, const EdgeWeights& w) {
  const int m = w.m();
  if (static_cast<int>(t.parent.size()) != m || t.parent[t.root]) return false;
  for (NodeId v = 0; v < m; ++v) {
    if (v == t.root) continue;
    if (!t.parent[v] || !w.allowed(*t.parent[v], v)) return false;
    NodeId u = v;
    int steps = 0;
    while (u != t.root && steps++ <= m) u = t.parent[u].value_or(t.root);
    if (u != t.root) return false;
  }
  return true;
}

}  // namespace

TEST(Mwdst, TwoNodes) {
  EdgeWeights w(2);
  w.set(0, 1, 3);
  w.set(1, 0, 1);
  const auto t = max_weight_arborescence(w);
  EXPECT_EQ(t.root, 0);
  EXPECT_EQ(t.parent[1], 0);
  EXPECT_EQ(t.weight, 3.0);
}

TEST(Mwdst, SingleNode) {
  const auto t = max_weight_arborescence(EdgeWeights(1));
  EXPECT_EQ(t.root, 0);
  EXPECT_EQ(t.weight, 0.0);
}

TEST(Mwdst, CycleContraction) {
  EdgeWeights w(3);
  w.set(0, 1, 10);
  w.set(1, 0, 10);
  w.set(0, 2, 1);
  w.set(1, 2, 2);
  w.set(2, 0, 0);
  w.set(2, 1, 0);
  const auto t = max_weight_arborescence(w);
  EXPECT_EQ(t.weight, *oracle::brute_arborescence(w));
  EXPECT_EQ(t.weight, 12.0);
  EXPECT_TRUE(is_arborescence(t, w));
  for (NodeId r = 0; r < 3; ++r) {
    EXPECT_EQ(max_weight_arborescence(w, r).weight, *oracle::brute_arborescence(w, r));
  }
}

TEST(Mwdst, RandomMatricesMatchBruteForce) {
  std::mt19937_64 rng(2024);
  for (int rep = 0; rep < 200; ++rep) {
    const int m = 1 + rep % 6;
    const auto w = oracle::random_weights(m, rng, rep % 3 == 0 ? 0.3 : 0.0);
    const auto expected = oracle::brute_arborescence(w);
    if (!expected) {
      EXPECT_THROW(max_weight_arborescence(w), InfeasibleError);
      continue;
    }
    const auto t = max_weight_arborescence(w);
    EXPECT_EQ(t.weight, *expected) << "m=" << m << " rep=" << rep;
    EXPECT_TRUE(is_arborescence(t, w));
    EXPECT_EQ(t.weight, arborescence_weight(w, t.parent));
  }
}

TEST(Mwdst, FixedRootMatchesBruteForce) {
  std::mt19937_64 rng(77);
  for (int rep = 0; rep < 60; ++rep) {
    const int m = 2 + rep % 5;
    const auto w = oracle::random_weights(m, rng, 0.2);
    const NodeId root = static_cast<NodeId>(rng() % m);
    const auto expected = oracle::brute_arborescence(w, root);
    if (!expected) {
      EXPECT_THROW(max_weight_arborescence(w, root), InfeasibleError);
    } else {
      EXPECT_EQ(max_weight_arborescence(w, root).weight, *expected);
    }
  }
}

TEST(Mwdst, InfeasibleWhenDisconnected) {
  EdgeWeights w(3);
  w.forbid(0, 2);
  w.forbid(1, 2);
  w.forbid(2, 0);
  w.forbid(2, 1);
  EXPECT_THROW(max_weight_arborescence(w), InfeasibleError);
  EXPECT_THROW(max_weight_arborescence(w, 5), ValidationError);
}

TEST(DummyRoot, SingleNode) {
  const auto aug = augment_with_dummy_root(EdgeWeights(1));
  ASSERT_EQ(aug.m(), 2);
  const auto t = max_weight_arborescence(aug, 0);
  EXPECT_EQ(t.parent[1], 0);
  EXPECT_EQ(t.weight, -1.0);
}

TEST(DummyRoot, EqualWeights) {
  EdgeWeights w(3);
  for (NodeId a = 0; a < 3; ++a) {
    for (NodeId b = 0; b < 3; ++b) {
      if (a != b) w.set(a, b, 5);
    }
  }
  EXPECT_EQ(max_weight_arborescence(augment_with_dummy_root(w), 0).weight, 9.0);
}

TEST(DummyRoot, NonnegativeWeightsGiveOneDummyChild) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 100; ++rep) {
    const int m = 1 + rep % 6;
    EdgeWeights w(m);
    for (NodeId a = 0; a < m; ++a) {
      for (NodeId b = 0; b < m; ++b) {
        if (a != b) w.set(a, b, std::round(u(rng) * 32) / 32);
      }
    }
    const auto aug = augment_with_dummy_root(w);
    const auto t = max_weight_arborescence(aug, 0);
    int children = 0;
    for (NodeId v = 1; v <= m; ++v) children += t.parent[v] == 0;
    EXPECT_EQ(children, 1);
    EXPECT_EQ(t.weight, *oracle::brute_arborescence(aug, 0));
  }
}

TEST(DummyRoot, CustomWeightsAndErrors) {
  EdgeWeights w(2);
  const std::vector<double> dummy{-4.0, -2.0};
  const auto aug = augment_with_dummy_root(w, dummy);
  EXPECT_EQ(aug.weight(0, 1), -4.0);
  EXPECT_EQ(aug.weight(0, 2), -2.0);
  EXPECT_FALSE(aug.allowed(1, 0));
  const std::vector<double> wrong{1.0};
  EXPECT_THROW(augment_with_dummy_root(w, wrong), ValidationError);
}
