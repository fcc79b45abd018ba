#include <gtest/gtest.h>

#include <sstream>

#include "corpus.hpp"
#include "oracles.hpp"
#include "posetest/posetest.hpp"

using namespace posetest;

TEST(Bitset, SetOperationsAndScan) {
  Bitset a(130), b(130);
  a.set(0);
  a.set(64);
  a.set(129);
  b.set(64);
  EXPECT_EQ(a.count(), 3u);
  EXPECT_TRUE(b.is_subset_of(a));
  EXPECT_FALSE(a.is_subset_of(b));
  EXPECT_EQ((a - b).to_vector(), (std::vector<std::size_t>{0, 129}));
  EXPECT_EQ(a.find_next(64), 129u);
  EXPECT_EQ(a.find_next(129), Bitset::npos);
  Bitset all(70, true);
  EXPECT_EQ(all.count(), 70u);
  EXPECT_TRUE(Bitset(0).none());
}

TEST(Rational, ParsesFractionsOnly) {
  EXPECT_EQ(parse_rational("3/6"), Rational(1, 2));
  EXPECT_EQ(parse_rational("5"), Rational(5));
  EXPECT_THROW(parse_rational("0.5"), ParameterError);
  EXPECT_THROW(parse_rational("1/0"), ParameterError);
  EXPECT_THROW(parse_rational("x"), ParameterError);
  EXPECT_EQ(to_string(Rational(2, 4)), "1/2");
  EXPECT_EQ(ceil(Rational(7, 2)), 4);
  EXPECT_EQ(floor(Rational(7, 2)), 3);
}

TEST(Rng, DeterministicAndBounded) {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(a.next(), b.next());
  Rng r(7);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_LT(r.uniform_below(3), 3u);
    const double u = r.uniform_real();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  EXPECT_NE(derive_seed(1, 0), derive_seed(1, 1));
  EXPECT_NE(derive_seed(1, 0), derive_seed(2, 0));
}

TEST(Poset, ClosureOfChainPairs) {
  auto p = Poset::from_relations(3, {{0, 1}, {1, 2}});
  EXPECT_EQ(p.edges(), (EdgeList{{0, 1}, {0, 2}, {1, 2}}));
  EXPECT_EQ(p.hasse(), (EdgeList{{0, 1}, {1, 2}}));
}

TEST(Poset, TwoCycleIsRejected) {
  EXPECT_THROW(Poset::from_relations(2, {{0, 1}, {1, 0}}), CycleError);
  EXPECT_THROW(Poset::from_relations(3, {{0, 1}, {1, 2}, {2, 0}}), CycleError);
  EXPECT_THROW(Poset::from_relations(1, {{0, 0}}), CycleError);
}

TEST(Poset, OutOfRangeIndex) {
  try {
    Poset::from_relations(2, {{0, 2}});
    FAIL() << "expected IndexError";
  } catch (const IndexError& e) {
    EXPECT_NE(std::string(e.what()).find('2'), std::string::npos);
  }
}

TEST(Poset, DiamondClosure) {
  auto p = Poset::from_relations(4, {{0, 1}, {0, 2}, {1, 3}, {2, 3}});
  EXPECT_EQ(p.edge_count(), 5u);
  EXPECT_TRUE(p.less(0, 3));
  EXPECT_FALSE(p.comparable(1, 2));
  EXPECT_EQ(height(p), 3u);
  EXPECT_EQ(width(p), 2u);
}

TEST(Poset, FromClosedRejectsNonTransitiveRows) {
  std::vector<Bitset> rows(3, Bitset(3));
  rows[0].set(1);
  rows[1].set(2);
  try {
    Poset::from_closed(rows);
    FAIL() << "expected TransitivityError";
  } catch (const TransitivityError& e) {
    EXPECT_EQ(e.x(), 0u);
    EXPECT_EQ(e.y(), 1u);
    EXPECT_EQ(e.z(), 2u);
  }
}

TEST(Poset, LinearExtensionSmallestIndexFirst) {
  auto p = Poset::from_relations(4, {{3, 0}, {2, 1}});
  EXPECT_EQ(p.linear_extension(), (std::vector<std::size_t>{2, 1, 3, 0}));
  EXPECT_TRUE(is_linear_extension(p, p.linear_extension()));
  std::vector<std::size_t> bad{0, 1, 2, 3};
  EXPECT_FALSE(is_linear_extension(p, bad));
}

TEST(Poset, HeightExamples) {
  EXPECT_EQ(height(chain(5)), 5u);
  EXPECT_EQ(height(k_hw(3, 2)), 3u);
  EXPECT_EQ(height(Poset::from_relations(0, {})), 0u);
  EXPECT_EQ(height(antichain(3)), 1u);
}

TEST(Poset, WidthExamplesWithWitness) {
  EXPECT_EQ(width(antichain(4)), 4u);
  EXPECT_EQ(width(k_hw(3, 2)), 2u);
  EXPECT_EQ(width(union_of_chains(3, 2)), 3u);
  auto p = union_of_chains(3, 2);
  auto wr = width_with_witness(p);
  ASSERT_EQ(wr.antichain.size(), 3u);
  for (auto a : wr.antichain)
    for (auto b : wr.antichain)
      if (a != b) {
        EXPECT_FALSE(p.comparable(a, b));
      }
  EXPECT_EQ(wr.chain_cover.size(), 3u);
}

TEST(Poset, InducedSubposetExamples) {
  std::vector<std::size_t> ends{0, 2}, dup{1, 1}, layer{0, 1};
  EXPECT_EQ(induced_subposet(chain(3), ends), chain(2));
  EXPECT_EQ(induced_subposet(chain(3), dup), antichain(2));
  EXPECT_EQ(induced_subposet(k_hw(2, 2), layer), antichain(2));
  std::vector<std::size_t> bad{5};
  EXPECT_THROW(induced_subposet(chain(3), bad), IndexError);
}

TEST(Poset, RemoveEdgesExamples) {
  try {
    remove_edges(chain(3), {{0, 2}});
    FAIL() << "expected TransitivityError";
  } catch (const TransitivityError& e) {
    EXPECT_EQ(e.x(), 0u);
    EXPECT_EQ(e.y(), 1u);
    EXPECT_EQ(e.z(), 2u);
  }
  auto s = remove_edges(chain(3), {{0, 1}, {0, 2}});
  EXPECT_EQ(s.edges(), (EdgeList{{1, 2}}));
  EXPECT_EQ(remove_edges(k_hw(2, 2), {}), k_hw(2, 2));
  EXPECT_THROW(remove_edges(chain(3), {{2, 0}}), ParameterError);
}

TEST(Poset, EdgeCountAndIsomorphism) {
  EXPECT_EQ(chain(6).edge_count(), 15u);
  EXPECT_EQ(k_hw(2, 2).edge_count(), 4u);
  EXPECT_TRUE(is_isomorphic(chain(3), Poset::from_relations(3, {{2, 1}, {1, 0}})));
  EXPECT_FALSE(is_isomorphic(chain(3), Poset::from_relations(3, {{0, 1}, {0, 2}})));
  EXPECT_FALSE(is_isomorphic(chain(3), chain(4)));
  EXPECT_THROW(is_isomorphic(antichain(11), antichain(11)), OracleLimitError);
}

TEST(PosetProperties, ClosureIdempotentAndExtensionsValid) {
  for (const auto& p : corpus::mixed(150, 20, 11)) {
    EXPECT_EQ(from_edges(p.size(), p.edges()), p);
    EXPECT_EQ(from_edges(p.size(), p.hasse()), p);
    EXPECT_TRUE(is_linear_extension(p, p.linear_extension()));
  }
}

TEST(PosetProperties, MirskyAndDilworthAgainstExhaustiveCovers) {
  for (const auto& p : corpus::random_posets(120, default_limits().cover_max_n, 5)) {
    EXPECT_EQ(height(p), oracle::height(p));
    EXPECT_EQ(height(p), oracle::antichain_cover(p));
    EXPECT_EQ(width(p), oracle::width(p));
    EXPECT_EQ(width(p), oracle::chain_cover(p));
    auto wr = width_with_witness(p);
    std::size_t covered = 0;
    for (const auto& c : wr.chain_cover) {
      covered += c.size();
      for (std::size_t i = 0; i + 1 < c.size(); ++i) EXPECT_TRUE(p.less(c[i], c[i + 1]));
    }
    EXPECT_EQ(covered, p.size());
  }
}

TEST(PosetProperties, FullInducedSubposetIsIsomorphic) {
  for (const auto& p : corpus::random_posets(60, 10, 3)) {
    std::vector<std::size_t> all(p.linear_extension().rbegin(), p.linear_extension().rend());
    EXPECT_TRUE(is_isomorphic(induced_subposet(p, all), p));
  }
}

TEST(PosetIo, ParsesCommentsAndBlankLines) {
  auto p = parse_poset("# diamond\n\nposet n=4\n0 < 1  # left\n0 < 2\n1 < 3\n2 < 3\n");
  EXPECT_EQ(p.edge_count(), 5u);
}

TEST(PosetIo, RoundTripIsByteIdentical) {
  for (const auto& p : corpus::mixed(40, 15, 9)) {
    const auto text = format_poset(p);
    auto q = parse_poset(text);
    EXPECT_EQ(q, p);
    EXPECT_EQ(format_poset(q), text);
  }
}

TEST(PosetIo, ErrorsCarryLineNumbers) {
  auto line_of = [](const std::string& text) -> std::size_t {
    try {
      parse_poset(text, "f.poset");
    } catch (const ParseError& e) {
      EXPECT_EQ(e.source(), "f.poset");
      return e.line();
    }
    return 0;
  };
  EXPECT_EQ(line_of("poset n=3\n0 < 1\n1 - 2\n"), 3u);
  EXPECT_EQ(line_of("poset n=3\n0 < 5\n"), 2u);
  EXPECT_EQ(line_of("# c\nposet x\n"), 2u);
  EXPECT_EQ(line_of("poset n=2\n0 < 1\n1 < 0\n"), 2u);
  EXPECT_EQ(line_of("poset n=2\n1 < 1\n"), 2u);
  try {
    parse_poset("poset n=3\n0 < 1\n1 - 2\n", "f.poset");
  } catch (const ParseError& e) {
    EXPECT_EQ(std::string(e.what()).rfind("f.poset:3: ", 0), 0u);
  }
}

TEST(PosetIo, DotOutputListsCovers) {
  std::ostringstream out;
  write_dot(out, chain(3));
  EXPECT_NE(out.str().find("0 -> 1"), std::string::npos);
  EXPECT_EQ(out.str().find("0 -> 2"), std::string::npos);
}

TEST(OracleLimits, EnvironmentOverrideParses) {
  ::setenv("POSETEST_ORACLE_CAPS", "iso=5,removal_edges=7", 1);
  auto l = OracleLimits::from_env();
  EXPECT_EQ(l.isomorphism_max_n, 5u);
  EXPECT_EQ(l.removal_max_edges, 7u);
  EXPECT_EQ(l.graph_max_n, 16u);
  ::setenv("POSETEST_ORACLE_CAPS", "bogus=1", 1);
  EXPECT_THROW(OracleLimits::from_env(), ParameterError);
  ::unsetenv("POSETEST_ORACLE_CAPS");
}
