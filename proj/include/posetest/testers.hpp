#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "posetest/config.hpp"
#include "posetest/error.hpp"
#include "posetest/generators.hpp"
#include "posetest/homomorphism.hpp"
#include "posetest/poset.hpp"
#include "posetest/rational.hpp"
#include "posetest/removal.hpp"
#include "posetest/rng.hpp"

namespace posetest {

enum class Verdict { accept, reject };

/// Elements are drawn independently with replacement by default; the
/// without-replacement mode draws a uniform subset instead.
enum class SamplingMode { with_replacement, without_replacement };

// Result of one sampling test. sample_trace lists the drawn host elements in
// draw order; the witness maps pattern elements to positions in that trace
// (positions, not elements, because a repeated draw is a separate
// incomparable copy).
struct TestOutcome {
  Verdict verdict = Verdict::accept;
  std::optional<Embedding> witness;
  std::size_t samples_used = 0;
  std::vector<std::size_t> sample_trace;

  bool rejected() const noexcept { return verdict == Verdict::reject; }
  friend bool operator==(const TestOutcome&, const TestOutcome&) = default;
};

/// Checks a reject witness against the host: the stored slot map must embed
/// the pattern into the subposet induced by the whole trace.
inline bool verify_witness(const TestOutcome& outcome, const Poset& pattern, const Poset& host) {
  if (!outcome.rejected()) return !outcome.witness.has_value();
  if (!outcome.witness) return false;
  for (auto e : outcome.sample_trace)
    if (e >= host.size()) return false;
  return is_embedding(pattern, induced_subposet(host, outcome.sample_trace), *outcome.witness);
}

inline std::vector<std::size_t> sample_elements(std::size_t n, std::size_t s, Rng& rng, SamplingMode mode) {
  if (n == 0) throw EmptyPosetError();
  std::vector<std::size_t> out;
  out.reserve(s);
  if (mode == SamplingMode::with_replacement) {
    for (std::size_t i = 0; i < s; ++i) out.push_back(rng.uniform_below(n));
    return out;
  }
  if (s > n) throw ParameterError("cannot draw more distinct elements than the poset has");
  std::vector<std::size_t> pool(n);
  std::iota(pool.begin(), pool.end(), std::size_t{0});
  for (std::size_t i = 0; i < s; ++i) {
    std::swap(pool[i], pool[i + rng.uniform_below(n - i)]);
    out.push_back(pool[i]);
  }
  return out;
}

/// Draws |q| elements and rejects iff q is a (not necessarily induced)
/// subposet of the distinct sampled elements. Never rejects a q-free host.
///
/// Repeated draws are collapsed: incomparable copies of one element could
/// otherwise fake an antichain, e.g. K_{2,2} out of two copies each of a < b.
/// Witness slots point at first occurrences in the trace.
inline TestOutcome basic_test(const Poset& p, const Poset& q, std::uint64_t seed,
                              SamplingMode mode = SamplingMode::with_replacement) {
  if (p.empty()) throw EmptyPosetError();
  Rng rng(seed);
  TestOutcome out;
  out.sample_trace = sample_elements(p.size(), q.size(), rng, mode);
  out.samples_used = out.sample_trace.size();
  std::vector<std::size_t> distinct, first_slot;
  Bitset seen(p.size());
  for (std::size_t i = 0; i < out.sample_trace.size(); ++i) {
    const auto x = out.sample_trace[i];
    if (seen.test(x)) continue;
    seen.set(x);
    distinct.push_back(x);
    first_slot.push_back(i);
  }
  if (auto e = contains_subposet(q, induced_subposet(p, distinct))) {
    for (auto& slot : e->map) slot = first_slot[slot];
    out.verdict = Verdict::reject;
    out.witness = std::move(e);
  }
  return out;
}

/// ceil((2/eps)^(h(q) w(q)^2)) independent repetitions of the basic test.
inline BigInt iteration_count(const Poset& q, const Rational& eps) {
  const std::size_t h = height(q), w = width(q);
  if (h < 2) throw ParameterError("iterated test: the pattern must have height at least 2");
  if (eps <= 0) throw ParameterError("iterated test: eps must be positive");
  return ceil(pow(Rational(2) / eps, static_cast<unsigned>(h * w * w)));
}

/// Repeats basic_test with seeds derive_seed(seed, i) and stops at the first
/// rejection. The trace is the concatenation of every repetition's draws;
/// the witness indexes the final repetition.
inline TestOutcome iterated_basic_test(const Poset& p, const Poset& q, const Rational& eps, std::uint64_t seed,
                                       const OracleLimits& limits = default_limits(),
                                       SamplingMode mode = SamplingMode::with_replacement) {
  const BigInt reps = iteration_count(q, eps);
  if (reps > limits.max_iterations)
    throw IterationOverflow("iterated test needs " + reps.str() + " repetitions, ceiling is " +
                            std::to_string(limits.max_iterations));
  const auto count = reps.convert_to<std::uint64_t>();
  TestOutcome out;
  for (std::uint64_t i = 0; i < count; ++i) {
    auto run = basic_test(p, q, derive_seed(seed, i), mode);
    const std::size_t offset = out.sample_trace.size();
    out.sample_trace.insert(out.sample_trace.end(), run.sample_trace.begin(), run.sample_trace.end());
    out.samples_used += run.samples_used;
    if (run.rejected()) {
      out.verdict = Verdict::reject;
      for (auto& slot : run.witness->map) slot += offset;
      out.witness = std::move(run.witness);
      break;
    }
  }
  return out;
}

/// ceil((4 ln h + 4c + 1) / (2 eps)).
inline std::size_t subposet_test_samples(std::size_t h, double eps, double c) {
  if (h < 2) throw ParameterError("subposet test: h must be at least 2");
  if (!(eps > 0.0)) throw ParameterError("subposet test: eps must be positive");
  if (!(c > 0.0)) throw ParameterError("subposet test: c must be positive");
  return static_cast<std::size_t>(
      std::ceil((4.0 * std::log(static_cast<double>(h)) + 4.0 * c + 1.0) / (2.0 * eps)));
}

inline std::size_t subposet_test_samples(std::size_t h, const Rational& eps, double c) {
  return subposet_test_samples(h, to_double(eps), c);
}

/// Draws s elements and rejects iff the induced sample contains C_h.
inline TestOutcome subposet_test(const Poset& p, std::size_t h, std::size_t s, std::uint64_t seed,
                                 SamplingMode mode = SamplingMode::with_replacement) {
  if (h < 2) throw ParameterError("subposet test: h must be at least 2");
  if (s < 1) throw ParameterError("subposet test: need at least one sample");
  if (p.empty()) throw EmptyPosetError();
  Rng rng(seed);
  TestOutcome out;
  out.sample_trace = sample_elements(p.size(), s, rng, mode);
  out.samples_used = s;
  auto top = longest_chain(induced_subposet(p, out.sample_trace));
  if (top.size() >= h) {
    out.verdict = Verdict::reject;
    out.witness = Embedding{std::vector<std::size_t>(top.begin(), top.begin() + static_cast<std::ptrdiff_t>(h))};
  }
  return out;
}

/// A finite family of forbidden posets with h = min height and w = min
/// width among the members of minimum height.
struct FamilySpec {
  std::vector<Poset> members;
  std::size_t h = 0;
  std::size_t w = 0;
  std::size_t representative = 0;

  bool consistent() const {
    if (members.empty()) return false;
    std::size_t hh = SIZE_MAX, ww = SIZE_MAX;
    for (const auto& m : members) hh = std::min(hh, height(m));
    for (const auto& m : members)
      if (height(m) == hh) ww = std::min(ww, width(m));
    return hh == h && ww == w && representative < members.size() && height(members[representative]) == h &&
           width(members[representative]) == w;
  }
};

inline FamilySpec make_family(std::vector<Poset> members) {
  if (members.empty()) throw ParameterError("a family needs at least one member");
  FamilySpec f;
  f.members = std::move(members);
  f.h = SIZE_MAX;
  for (const auto& m : f.members) f.h = std::min(f.h, height(m));
  f.w = SIZE_MAX;
  for (std::size_t i = 0; i < f.members.size(); ++i) {
    if (height(f.members[i]) != f.h) continue;
    auto wi = width(f.members[i]);
    if (wi < f.w) {
      f.w = wi;
      f.representative = i;
    }
  }
  return f;
}

struct FamilyTestOutcome {
  TestOutcome outcome;
  double false_reject_bound = 0.0;  // probability bound, may exceed 1 for small hosts
  double removal_budget = 0.0;      // pairs to remove to reach C_h-free
};

/// Subposet test for C_{fam.h} with the sample count for (eps, c). Two-sided
/// for the family: a family-free host is rejected only with the reported
/// probability bound.
inline FamilyTestOutcome family_tester(const Poset& p, const FamilySpec& fam, const Rational& eps, double c,
                                       std::uint64_t seed, SamplingMode mode = SamplingMode::with_replacement) {
  if (fam.h < 2) throw ParameterError("family tester: family height must be at least 2");
  FamilyTestOutcome r;
  r.outcome = subposet_test(p, fam.h, subposet_test_samples(fam.h, eps, c), seed, mode);
  r.false_reject_bound = false_reject_bound(fam.h, fam.w, p.size());
  r.removal_budget = indistinguishability_bound(fam.h, fam.w, p.size());
  return r;
}

}  // namespace posetest
