#include <gtest/gtest.h>

#include "corpus.hpp"
#include "oracles.hpp"
#include "posetest/posetest.hpp"

using namespace posetest;

TEST(HomCount, SmallExamples) {
  EXPECT_EQ(hom_count_exact(chain(2), chain(3)), 3);
  EXPECT_EQ(hom_count_exact(antichain(3), chain(4)), 64);
  EXPECT_EQ(hom_count_exact(chain(4), chain(4)), 1);
  EXPECT_EQ(hom_count_exact(k_hw(2, 2), chain(3)), 7);
  EXPECT_EQ(hom_count_exact(chain(5), chain(4)), 0);
  EXPECT_EQ(hom_count_exact(antichain(0), chain(4)), 1);
}

TEST(HomCount, MatchesFullEnumeration) {
  auto hosts = corpus::random_posets(40, 7, 21);
  auto patterns = corpus::random_posets(40, 4, 22);
  for (std::size_t i = 0; i < hosts.size(); ++i)
    EXPECT_EQ(hom_count_exact(patterns[i], hosts[i]), oracle::hom_count(patterns[i], hosts[i]));
}

TEST(HomCount, BudgetIsEnforced) {
  // An antichain never widens the frontier, so it stays cheap.
  EXPECT_EQ(hom_count_exact(antichain(6), chain(50), 10), BigInt(50) * 50 * 50 * 50 * 50 * 50);
  EXPECT_THROW(hom_count_exact(k_hw(2, 3), chain(50), 10), BudgetError);
}

TEST(HomCount, FewerRelationsNeverFewerMaps) {
  for (const auto& q : corpus::random_posets(30, 5, 4)) {
    auto host = random_mixed(8, 99);
    for (auto cover : q.hasse()) {
      // Dropping a cover can still break transitivity (x < cover.lo < cover.hi).
      std::vector<Edge> doomed{cover};
      Poset weaker;
      try {
        weaker = remove_edges(q, doomed);
      } catch (const TransitivityError&) {
        continue;
      }
      EXPECT_GE(hom_count_exact(weaker, host), hom_count_exact(q, host));
    }
  }
}

TEST(HomCount, DisjointUnionMultiplies) {
  auto host = random_mixed(9, 5);
  auto q1 = chain(2), q2 = k_hw(2, 2);
  // q1 + q2 as a disjoint union: shift q2 by |q1|.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (auto e : q1.edges()) pairs.emplace_back(e.lo, e.hi);
  for (auto e : q2.edges()) pairs.emplace_back(e.lo + 2, e.hi + 2);
  auto sum = Poset::from_relations(6, pairs);
  EXPECT_EQ(density(sum, host), density(q1, host) * density(q2, host));
}

TEST(Density, ExactExamples) {
  EXPECT_EQ(density(chain(2), chain(3)), Rational(1, 3));
  EXPECT_EQ(density(chain(2), union_of_chains(2, 2)), Rational(1, 8));
  EXPECT_LT(density(chain(2), union_of_chains(2, 2)), Rational(1, 4));
  EXPECT_EQ(density(k_hw(2, 2), chain(3)), Rational(7, 81));
  auto d = density_exact(k_hw(2, 2), chain(3));
  EXPECT_EQ(d.count, 7);
  EXPECT_EQ(d.total, 81);
  EXPECT_THROW(density_exact(chain(2), antichain(0)), EmptyPosetError);
}

TEST(Density, MonteCarloDeterministicWithHoeffdingWidth) {
  auto a = density_mc(chain(2), chain(5), 1000, 7);
  auto b = density_mc(chain(2), chain(5), 1000, 7);
  EXPECT_EQ(a.estimate, b.estimate);
  EXPECT_DOUBLE_EQ(a.ci_halfwidth, std::sqrt(std::log(2.0 / 0.05) / 2000.0));
  EXPECT_THROW(density_mc(chain(2), chain(5), 0, 7), ParameterError);
  EXPECT_THROW(density_mc(chain(2), antichain(0), 10, 7), EmptyPosetError);
}

TEST(Density, MonteCarloCoverageOnSmallInstances) {
  // The interval should miss in at most about delta of the seeds.
  const double delta = 0.1;
  const auto p = random_mixed(8, 17);
  const auto q = chain(3);
  const double exact = to_double(density(q, p));
  int misses = 0;
  const int runs = 200;
  for (int s = 0; s < runs; ++s) {
    auto d = density_mc(q, p, 400, static_cast<std::uint64_t>(s), delta);
    if (std::abs(d.estimate - exact) > d.ci_halfwidth) ++misses;
  }
  EXPECT_LE(misses, static_cast<int>(delta * runs));
}

TEST(Containment, SmallExamples) {
  auto e = contains_subposet(chain(3), k_hw(3, 2));
  ASSERT_TRUE(e.has_value());
  EXPECT_TRUE(is_embedding(chain(3), k_hw(3, 2), *e));
  EXPECT_EQ(e->map, (std::vector<std::size_t>{0, 2, 4}));  // lexicographically least
  EXPECT_FALSE(contains_subposet(chain(2), antichain(5)).has_value());
  // Non-induced containment: the two layers map to {0,1} and {2,3}.
  auto k = contains_subposet(k_hw(2, 2), chain(4));
  ASSERT_TRUE(k.has_value());
  EXPECT_EQ(k->map, (std::vector<std::size_t>{0, 1, 2, 3}));
  EXPECT_FALSE(contains_subposet(k_hw(2, 2), chain(3)).has_value());
  // Not necessarily induced: an antichain embeds into a chain.
  EXPECT_TRUE(contains_subposet(antichain(2), chain(2)).has_value());
}

TEST(Containment, AgreesWithInjectiveEnumeration) {
  auto hosts = corpus::random_posets(60, 7, 31);
  auto patterns = corpus::random_posets(60, 4, 32);
  for (std::size_t i = 0; i < hosts.size(); ++i) {
    auto e = contains_subposet(patterns[i], hosts[i]);
    EXPECT_EQ(e.has_value(), oracle::contains(patterns[i], hosts[i]));
    if (e) {
      EXPECT_TRUE(is_embedding(patterns[i], hosts[i], *e));
    }
  }
}

TEST(Containment, EmbeddingCheckRejectsBadMaps) {
  EXPECT_FALSE(is_embedding(chain(2), chain(3), Embedding{{1, 1}}));
  EXPECT_FALSE(is_embedding(chain(2), chain(3), Embedding{{2, 1}}));
  EXPECT_FALSE(is_embedding(chain(2), chain(3), Embedding{{0, 7}}));
  EXPECT_TRUE(is_embedding(chain(2), chain(3), Embedding{{0, 2}}));
}

TEST(DensityInequality, SmallExamples) {
  auto r = check_density_inequality(2, 2, chain(3));
  EXPECT_EQ(r.t_layered, Rational(7, 81));
  EXPECT_EQ(r.t_chain, Rational(1, 3));
  EXPECT_TRUE(r.all_hold());
  auto eq = check_density_inequality(2, 1, random_mixed(7, 3));
  EXPECT_EQ(eq.t_layered, eq.t_chain);
  auto zero = check_density_inequality(3, 2, union_of_chains(3, 2));
  EXPECT_EQ(zero.t_chain, 0);
  EXPECT_TRUE(zero.all_hold());
}

TEST(DensityInequality, HoldsOnCorpus) {
  for (const auto& p : corpus::mixed(60, 10, 41))
    for (std::size_t h : {2, 3})
      for (std::size_t w : {1, 2}) EXPECT_TRUE(check_density_inequality(h, w, p).all_hold());
}
