#include <gtest/gtest.h>

#include <cmath>

#include "corpus.hpp"
#include "oracles.hpp"
#include "posetest/posetest.hpp"

using namespace posetest;

namespace {

double rejection_rate(const std::function<TestOutcome(std::uint64_t)>& run, int trials) {
  int rejects = 0;
  for (int s = 0; s < trials; ++s) rejects += run(static_cast<std::uint64_t>(s)).rejected() ? 1 : 0;
  return static_cast<double>(rejects) / trials;
}

double sigma(double p, int trials) { return std::sqrt(p * (1 - p) / trials); }

}  // namespace

TEST(Sampling, ModesDraw) {
  Rng rng(1);
  auto with = sample_elements(3, 50, rng, SamplingMode::with_replacement);
  EXPECT_EQ(with.size(), 50u);
  auto without = sample_elements(10, 10, rng, SamplingMode::without_replacement);
  std::sort(without.begin(), without.end());
  for (std::size_t i = 0; i < 10; ++i) EXPECT_EQ(without[i], i);
  EXPECT_THROW(sample_elements(3, 4, rng, SamplingMode::without_replacement), ParameterError);
  EXPECT_THROW(sample_elements(0, 1, rng, SamplingMode::with_replacement), EmptyPosetError);
}

TEST(BasicTest, PatternFreeAlwaysAccepts) {
  for (std::uint64_t s = 0; s < 200; ++s) {
    EXPECT_FALSE(basic_test(union_of_chains(4, 2), chain(3), s).rejected());
    EXPECT_FALSE(basic_test(union_of_chains(3, 3), k_hw(2, 2), s).rejected());
    // Repeated draws must not pose as incomparable elements.
    EXPECT_FALSE(basic_test(chain(2), k_hw(2, 2), s).rejected());
    EXPECT_FALSE(basic_test(chain(1), antichain(3), s).rejected());
  }
}

TEST(BasicTest, ChainInChainRejectsHalfTheTime) {
  // Two draws from two elements: distinct with probability 1/2, and a
  // distinct pair always contains C_2.
  const int trials = 20000;
  const double rate = rejection_rate([](std::uint64_t s) { return basic_test(chain(2), chain(2), s); }, trials);
  EXPECT_NEAR(rate, 0.5, 4 * sigma(0.5, trials));
  EXPECT_GE(rate, 0.25);
}

TEST(BasicTest, NonInducedAntichainSemantics) {
  const int trials = 20000;
  const double rate = rejection_rate([](std::uint64_t s) { return basic_test(chain(2), antichain(2), s); }, trials);
  EXPECT_NEAR(rate, 0.5, 4 * sigma(0.5, trials));
}

// Every injective homomorphism hit by the draws is an embedding among
// distinct samples, so the rate is at least the injective density. For
// chains every homomorphism is injective.
TEST(BasicTest, RejectionAtLeastInjectiveDensity) {
  const int trials = 10000;
  for (std::uint64_t k = 0; k < 4; ++k) {
    auto p = random_mixed(8, 300 + k);
    for (const auto& q : {chain(2), chain(3), k_hw(2, 2)}) {
      const BigInt inj = oracle::injective_hom_count(q, p);
      if (height(q) == q.size()) {
        EXPECT_EQ(inj, hom_count_exact(q, p));
      }
      const double t = to_double(Rational(inj, pow(BigInt(p.size()), static_cast<unsigned>(q.size()))));
      const double rate = rejection_rate([&](std::uint64_t s) { return basic_test(p, q, s); }, trials);
      EXPECT_GE(rate, t - 3 * sigma(t, trials));
    }
  }
}

TEST(BasicTest, WitnessesVerifyAndAreReproducible) {
  auto p = random_mixed(12, 5);
  for (std::uint64_t s = 0; s < 300; ++s) {
    auto a = basic_test(p, chain(2), s);
    auto b = basic_test(p, chain(2), s);
    EXPECT_EQ(a, b);
    EXPECT_EQ(a.witness.has_value(), a.rejected());
    EXPECT_TRUE(verify_witness(a, chain(2), p));
  }
}

TEST(IteratedTest, RepetitionCount) {
  EXPECT_EQ(iteration_count(chain(2), Rational(1, 2)), 16);
  EXPECT_EQ(iteration_count(k_hw(2, 2), Rational(1)), 256);
  EXPECT_EQ(iteration_count(chain(2), Rational(3)), 1);
  EXPECT_THROW(iteration_count(antichain(3), Rational(1, 2)), ParameterError);
}

TEST(IteratedTest, OverflowIsSurfaced) {
  EXPECT_THROW(iterated_basic_test(chain(5), k_hw(3, 3), Rational(1, 10), 1), IterationOverflow);
}

TEST(IteratedTest, OneSidedAndWitnessed) {
  for (std::uint64_t s = 0; s < 50; ++s)
    EXPECT_FALSE(iterated_basic_test(union_of_chains(5, 2), chain(3), Rational(1, 2), s).rejected());
  auto p = sharp_layered(3, 4, Rational(1, 2));
  for (std::uint64_t s = 0; s < 50; ++s) {
    auto o = iterated_basic_test(p, chain(3), Rational(1, 2), s);
    EXPECT_TRUE(verify_witness(o, chain(3), p));
    EXPECT_EQ(o.samples_used, o.sample_trace.size());
  }
}

TEST(IteratedTest, FarInstancesRejectedMoreThanHalf) {
  // sharp_layered(2, 4, 1/2) on 6 elements needs 8 removals, so it is
  // eps-far for every eps < 8/36.
  auto p = sharp_layered(2, 4, Rational(1, 2));
  ASSERT_EQ(min_removal_oracle(p, 2), 8u);
  const Rational eps(1, 5);
  const int trials = 2000;
  const double rate =
      rejection_rate([&](std::uint64_t s) { return iterated_basic_test(p, chain(2), eps, s); }, trials);
  EXPECT_GT(rate, 0.5);
}

TEST(SubposetTest, SampleFormula) {
  EXPECT_EQ(subposet_test_samples(2, Rational(1, 10), 1.0), 39u);
  std::size_t prev = SIZE_MAX;
  for (int k = 1; k <= 20; ++k) {
    auto s = subposet_test_samples(3, Rational(k, 20), 1.0);
    EXPECT_LE(s, prev);
    prev = s;
  }
  EXPECT_LT(subposet_test_samples(2, Rational(1, 4), std::log(2.0)), subposet_test_samples(2, Rational(1, 4), 1.0));
  EXPECT_LE(subposet_test_samples(2, Rational(1, 4), 1.0), subposet_test_samples(2, Rational(1, 4), 2.0));
  EXPECT_THROW(subposet_test_samples(1, Rational(1, 4), 1.0), ParameterError);
  EXPECT_THROW(subposet_test_samples(2, Rational(0), 1.0), ParameterError);
  EXPECT_THROW(subposet_test_samples(2, Rational(1, 4), 0.0), ParameterError);
}

TEST(SubposetTest, ChainHostTwoSamples) {
  const int trials = 20000;
  const std::size_t n = 5;
  const double rate = rejection_rate([&](std::uint64_t s) { return subposet_test(chain(n), 2, 2, s); }, trials);
  const double expected = 1.0 - 1.0 / n;
  EXPECT_NEAR(rate, expected, 4 * sigma(expected, trials));
}

TEST(SubposetTest, ChainFreeAlwaysAccepts) {
  for (const auto& p : corpus::random_posets(50, 25, 7)) {
    const auto h = height(p) + 1;
    for (std::uint64_t s = 0; s < 20; ++s) EXPECT_FALSE(subposet_test(p, h, 30, s).rejected());
  }
}

TEST(SubposetTest, WitnessIsAChainOfTraceSlots) {
  auto p = k_hw(4, 3);
  for (std::uint64_t s = 0; s < 200; ++s) {
    auto o = subposet_test(p, 3, 10, s);
    EXPECT_TRUE(verify_witness(o, chain(3), p));
  }
}

TEST(SubposetTest, WithoutReplacementMode) {
  auto p = chain(4);
  for (std::uint64_t s = 0; s < 50; ++s) {
    auto o = subposet_test(p, 4, 4, s, SamplingMode::without_replacement);
    EXPECT_TRUE(o.rejected());
  }
}

TEST(SubposetTest, LayeredAcceptBoundWithFewSamples) {
  // s <= c/(2 eps) elements miss the bottom layer with probability >= e^-c.
  const Rational eps(1, 4);
  auto p = sharp_layered(2, 8, eps);  // bottom layer of 2 under 8
  const double c = 1.0;
  const auto s = static_cast<std::size_t>(c / (2 * to_double(eps)));
  const int trials = 20000;
  const double accept =
      1.0 - rejection_rate([&](std::uint64_t seed) {
        return subposet_test(p, 2, s, seed, SamplingMode::without_replacement);
      }, trials);
  EXPECT_GE(accept, std::exp(-c) - 2 * sigma(std::exp(-c), trials));
}

TEST(Family, DescriptorComputesHeightAndWidth) {
  auto fam = make_family({k_hw(3, 2), chain(4), k_hw(3, 3), complete_multipartite({1, 4})});
  EXPECT_EQ(fam.h, 2u);
  EXPECT_EQ(fam.w, 4u);
  EXPECT_EQ(fam.representative, 3u);
  EXPECT_TRUE(fam.consistent());
  fam.w = 1;
  EXPECT_FALSE(fam.consistent());
  EXPECT_THROW(make_family({}), ParameterError);
}

TEST(Family, TesterReducesToChains) {
  auto fam = make_family({k_hw(2, 2)});
  EXPECT_EQ(fam.h, 2u);
  EXPECT_EQ(fam.w, 2u);
  for (std::uint64_t s = 0; s < 100; ++s) {
    auto r = family_tester(antichain(30), fam, Rational(1, 4), 1.0, s);
    EXPECT_FALSE(r.outcome.rejected());
    auto same = subposet_test(chain(9), 2, subposet_test_samples(2, Rational(1, 4), 1.0), s);
    EXPECT_EQ(family_tester(chain(9), fam, Rational(1, 4), 1.0, s).outcome, same);
  }
  EXPECT_DOUBLE_EQ(family_tester(antichain(30), fam, Rational(1, 4), 1.0, 0).false_reject_bound,
                   false_reject_bound(2, 2, 30));
  auto bad = make_family({antichain(3)});
  EXPECT_THROW(family_tester(chain(3), bad, Rational(1, 4), 1.0, 0), ParameterError);
}
