#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "posetest/config.hpp"
#include "posetest/error.hpp"
#include "posetest/generators.hpp"
#include "posetest/homomorphism.hpp"
#include "posetest/poset.hpp"
#include "posetest/rational.hpp"

namespace posetest {

// Rank function with threshold gamma. Elements are visited along the linear
// extension; y gets 1 + the largest k such that at least gamma*n
// predecessors of y have rank k, or 1 if there is no such k.
//
// Every predecessor precedes y in any linear extension, so the ranks do not
// depend on which extension is used.
struct RankAssignment {
  Rational gamma;
  std::vector<std::size_t> ranks;  // indexed by element, values >= 1

  std::size_t max_rank() const noexcept {
    std::size_t m = 0;
    for (auto r : ranks) m = std::max(m, r);
    return m;
  }
  /// histogram[r] = number of elements of rank r (index 0 unused).
  std::vector<std::size_t> histogram() const {
    std::vector<std::size_t> hist(max_rank() + 1, 0);
    for (auto r : ranks) ++hist[r];
    return hist;
  }
  std::size_t count_at_least(std::size_t r) const noexcept {
    std::size_t c = 0;
    for (auto x : ranks) c += x >= r ? 1 : 0;
    return c;
  }
};

inline void check_gamma(const Rational& gamma) {
  if (gamma <= 0 || gamma >= 1) throw ParameterError("gamma must lie strictly between 0 and 1");
}

inline RankAssignment rank_function(const Poset& p, const Rational& gamma) {
  check_gamma(gamma);
  const std::size_t n = p.size();
  RankAssignment ra;
  ra.gamma = gamma;
  ra.ranks.assign(n, 0);
  // count >= gamma*n  <=>  count >= ceil(gamma*n) for integer counts.
  const auto threshold = ceil(gamma * n).convert_to<std::size_t>();
  std::vector<std::size_t> per_rank;
  for (auto y : p.linear_extension()) {
    per_rank.assign(n + 2, 0);
    p.predecessors(y).for_each([&](std::size_t x) { ++per_rank[ra.ranks[x]]; });
    std::size_t r = 1;
    for (std::size_t k = n + 1; k >= 1; --k) {
      if (per_rank[k] >= threshold && per_rank[k] > 0) {
        r = k + 1;
        break;
      }
    }
    ra.ranks[y] = r;
  }
  return ra;
}

// Output of the removal procedures. For edge_removal the two lists are the
// pairs dropped because both ends share a rank and the pairs ending at an
// element of rank >= h. For interval_closeness the "rank" is the 1-based
// interval index, so every removed pair is a same-rank pair.
struct RemovalResult {
  Poset survivor;
  EdgeList removed_same_rank;
  EdgeList removed_high_rank;
  std::size_t h = 0;
  Rational budget_fraction = 0;  // removed / n^2
  std::optional<RankAssignment> ranks;
  std::optional<Rational> density;  // t(C_h, P) or t(Q, P) when it was tested

  std::size_t removed() const noexcept { return removed_same_rank.size() + removed_high_rank.size(); }
};

/// The pattern density was at or above the threshold, so the removal
/// hypothesis does not apply. Not an error.
struct DensityTooHigh {
  Rational density;
  Rational threshold;
};

using RemovalOutcome = std::variant<RemovalResult, DensityTooHigh>;

namespace detail {

inline RemovalResult finish_removal(const Poset& p, EdgeList same, EdgeList high, std::size_t h) {
  RemovalResult r;
  EdgeList all = same;
  all.insert(all.end(), high.begin(), high.end());
  r.survivor = remove_edges(p, all);
  r.removed_same_rank = std::move(same);
  r.removed_high_rank = std::move(high);
  r.h = h;
  const auto n = p.size();
  r.budget_fraction = n == 0 ? Rational(0) : Rational(BigInt(r.removed()), BigInt(n) * n);
  return r;
}

}  // namespace detail

/// Drops (x, y) when r(x) = r(y), otherwise when r(y) >= h. The removal
/// predicate only reads the precomputed ranks, so a single filtering pass
/// over the comparable pairs is enough.
inline RemovalResult edge_removal(const Poset& p, const Rational& gamma, std::size_t h) {
  if (h < 2) throw ParameterError("edge_removal: h must be at least 2");
  auto ranks = rank_function(p, gamma);
  EdgeList same, high;
  for (auto e : p.edges()) {
    if (ranks.ranks[e.lo] == ranks.ranks[e.hi]) same.push_back(e);
    else if (ranks.ranks[e.hi] >= h) high.push_back(e);
  }
  auto r = detail::finish_removal(p, std::move(same), std::move(high), h);
  r.ranks = std::move(ranks);
  return r;
}

/// Runs edge_removal with gamma = eps/2 when t(C_h, P) < (eps/2)^h.
inline RemovalOutcome chain_removal(const Poset& p, const Rational& eps, std::size_t h,
                                    std::uint64_t budget_limit = default_limits().search_budget) {
  if (h < 2) throw ParameterError("chain_removal: h must be at least 2");
  if (eps <= 0) throw ParameterError("chain_removal: eps must be positive");
  const Rational gamma = eps / 2;
  const Rational threshold = pow(gamma, static_cast<unsigned>(h));
  const Rational t = density(chain(h), p, budget_limit);
  if (t >= threshold) return DensityTooHigh{t, threshold};
  // eps >= 2 makes the guarantee vacuous; any gamma in (0, 1) still yields a
  // C_h-free survivor.
  auto r = edge_removal(p, gamma < 1 ? gamma : Rational(1, 2), h);
  r.density = t;
  const auto n = p.size();
  if (Rational(BigInt(r.removed())) > eps * n * n)
    throw std::logic_error("chain_removal exceeded eps*n^2 under the density hypothesis");
  return r;
}

/// Reduces Q-freeness to C_{h(Q)}-freeness: if t(Q, P) < (eps/2)^(h w^2)
/// then t(C_h, P) < (eps/2)^h and chain_removal applies.
inline RemovalOutcome poset_removal(const Poset& p, const Poset& q, const Rational& eps,
                                    std::uint64_t budget_limit = default_limits().search_budget) {
  const std::size_t h = height(q);
  if (h < 2) throw ParameterError("poset_removal: the pattern must have height at least 2");
  if (eps <= 0) throw ParameterError("poset_removal: eps must be positive");
  const std::size_t w = width(q);
  const Rational threshold = pow(eps / 2, static_cast<unsigned>(h * w * w));
  const Rational t = density(q, p, budget_limit);
  if (t >= threshold) return DensityTooHigh{t, threshold};
  auto inner = chain_removal(p, eps, h, budget_limit);
  if (std::holds_alternative<DensityTooHigh>(inner))
    throw std::logic_error("chain density above threshold although pattern density is below it");
  auto r = std::get<RemovalResult>(std::move(inner));
  r.density = t;
  return r;
}

/// Splits the linear extension into h-1 consecutive intervals whose sizes
/// differ by at most one (the larger ones first) and removes every pair
/// inside an interval.
inline RemovalResult interval_closeness(const Poset& p, std::size_t h) {
  if (h < 2) throw ParameterError("interval_closeness: h must be at least 2");
  const std::size_t n = p.size();
  const std::size_t parts = h - 1;
  const std::size_t base = n / parts, extra = n % parts;
  RankAssignment ra;
  ra.gamma = 0;
  ra.ranks.assign(n, 0);
  std::size_t pos = 0;
  for (std::size_t part = 0; part < parts; ++part) {
    std::size_t size = base + (part < extra ? 1 : 0);
    for (std::size_t i = 0; i < size; ++i) ra.ranks[p.linear_extension()[pos++]] = part + 1;
  }
  EdgeList same;
  for (auto e : p.edges())
    if (ra.ranks[e.lo] == ra.ranks[e.hi]) same.push_back(e);
  auto r = detail::finish_removal(p, std::move(same), {}, h);
  r.ranks = std::move(ra);
  return r;
}

struct MinRemoval {
  std::size_t count = 0;
  EdgeList removed;  // one optimal removal set, sorted
};

namespace detail {

// Branch and bound over removal sets. Any transitive C_h-free subrelation
// of the current relation R must drop one pair of every h-chain of R, and
// must drop (x,y) or (y,z) whenever x<y, y<z are in R but (x,z) was
// already dropped. Iterative deepening on the number of removals.
class MinRemovalSearch {
 public:
  MinRemovalSearch(const Poset& p, std::size_t h, std::uint64_t budget_limit)
      : h_(h), rows_(p.successor_rows().begin(), p.successor_rows().end()), budget_(budget_limit) {}

  MinRemoval run(std::size_t upper) {
    for (std::size_t k = 0; k <= upper; ++k) {
      stack_.clear();
      if (search(k)) {
        MinRemoval m;
        m.count = stack_.size();
        m.removed = stack_;
        std::sort(m.removed.begin(), m.removed.end());
        return m;
      }
    }
    throw std::logic_error("minimum removal search failed to reach the empty relation");
  }

 private:
  bool find_chain(std::vector<std::size_t>& chain, const Bitset& cand) {
    if (chain.size() == h_) return true;
    for (auto c = cand.find_first(); c != Bitset::npos; c = cand.find_next(c)) {
      chain.push_back(c);
      if (find_chain(chain, cand & rows_[c])) return true;
      chain.pop_back();
    }
    return false;
  }

  bool find_violation(std::size_t& x, std::size_t& y, std::size_t& z) const {
    for (x = 0; x < rows_.size(); ++x) {
      for (y = rows_[x].find_first(); y != Bitset::npos; y = rows_[x].find_next(y)) {
        z = (rows_[y] - rows_[x]).find_first();
        if (z != Bitset::npos) return true;
      }
    }
    return false;
  }

  bool try_remove(std::size_t a, std::size_t b, std::size_t k) {
    rows_[a].reset(b);
    stack_.push_back({a, b});
    if (search(k - 1)) return true;
    stack_.pop_back();
    rows_[a].set(b);
    return false;
  }

  bool search(std::size_t k) {
    budget_.charge();
    std::vector<std::size_t> chain;
    if (find_chain(chain, Bitset(rows_.size(), true))) {
      if (k == 0) return false;
      for (std::size_t i = 0; i < chain.size(); ++i)
        for (std::size_t j = i + 1; j < chain.size(); ++j)
          if (try_remove(chain[i], chain[j], k)) return true;
      return false;
    }
    std::size_t x = 0, y = 0, z = 0;
    if (find_violation(x, y, z)) {
      if (k == 0) return false;
      return try_remove(x, y, k) || try_remove(y, z, k);
    }
    return true;
  }

  std::size_t h_;
  std::vector<Bitset> rows_;
  EdgeList stack_;
  SearchBudget budget_;
};

}  // namespace detail

/// Minimum number of comparable pairs whose removal leaves a C_h-free
/// poset, with one optimal removal set. Exhaustive; capped by edge count.
inline MinRemoval min_removal_witness(const Poset& p, std::size_t h,
                                      const OracleLimits& limits = default_limits()) {
  if (h < 2) throw ParameterError("min_removal_oracle: h must be at least 2");
  if (height(p) < h) return {};
  const auto edges = p.edge_count();
  if (edges > limits.removal_max_edges)
    throw OracleLimitError("minimum removal oracle limited to " + std::to_string(limits.removal_max_edges) +
                           " comparable pairs, poset has " + std::to_string(edges));
  detail::MinRemovalSearch search(p, h, limits.search_budget);
  return search.run(interval_closeness(p, h).removed());
}

inline std::size_t min_removal_oracle(const Poset& p, std::size_t h,
                                      const OracleLimits& limits = default_limits()) {
  return min_removal_witness(p, h, limits).count;
}

/// Closed form for k disjoint chains of len elements when (h-1) divides
/// len: k (h-1) C(len/(h-1), 2), the Turan number of each clique.
inline BigInt min_removal_union_of_chains(std::size_t k, std::size_t len, std::size_t h) {
  if (h < 2) throw ParameterError("h must be at least 2");
  if (len % (h - 1) != 0) throw ParameterError("chain length must be divisible by h-1");
  BigInt part = len / (h - 1);
  return BigInt(k) * (h - 1) * (part * (part - 1) / 2);
}

/// Closed form eps*w^2 for sharp_layered(h, w, eps): the pairs between the
/// two lowest layers.
inline BigInt min_removal_sharp_layered(std::size_t /*h*/, std::size_t w, const Rational& eps) {
  Rational v = eps * w * w;
  if (!is_integer(v)) throw ParameterError("eps*w^2 is not an integer");
  return numerator(v);
}

/// Edge budget 2 (h^2 w^2 / n)^(1/(h w^2)) n^2 within which every poset on
/// n elements avoiding a pattern of height h and width w becomes C_h-free.
inline double indistinguishability_bound(std::size_t h, std::size_t w, std::size_t n) {
  if (h < 2 || w < 1 || n < 1) throw ParameterError("indistinguishability_bound: need h>=2, w>=1, n>=1");
  const double hw = static_cast<double>(h * w);
  const double nn = static_cast<double>(n);
  return 2.0 * std::pow(hw * hw / nn, 1.0 / static_cast<double>(h * w * w)) * nn * nn;
}

/// Size beyond which the budget above drops below eps n^2:
/// N = h^2 w^2 (eps/2)^(-h w^2).
inline Rational indistinguishability_size(std::size_t h, std::size_t w, const Rational& eps) {
  if (eps <= 0) throw ParameterError("eps must be positive");
  return Rational(BigInt(h * h * w * w)) / pow(eps / 2, static_cast<unsigned>(h * w * w));
}

/// Probability that the C_h tester rejects a pattern-free poset on n
/// elements: every h-chain uses one of the removed pairs.
inline double false_reject_bound(std::size_t h, std::size_t w, std::size_t n) {
  const double pairs = static_cast<double>(h * (h - 1) / 2);
  const double nn = static_cast<double>(n);
  return indistinguishability_bound(h, w, n) / (nn * nn) * pairs;
}

/// Rational upper approximation of (h^2 w^2 / n)^(1/(h w^2)), the gamma at
/// which the pattern-free density hypothesis holds.
inline Rational implied_gamma(std::size_t h, std::size_t w, std::size_t n) {
  const double g = indistinguishability_bound(h, w, n) / (2.0 * static_cast<double>(n) * static_cast<double>(n));
  const BigInt scale = BigInt(1) << 32;
  const BigInt num = BigInt(static_cast<std::uint64_t>(std::ceil(std::ldexp(g, 32)))) + 1;
  return Rational(num, scale);
}

/// edge_removal at implied_gamma (1/2 when that is >= 1, where the budget
/// already exceeds n^2).
inline RemovalResult indistinguishability_removal(const Poset& p, std::size_t h, std::size_t w) {
  Rational gamma = implied_gamma(h, w, p.size());
  if (gamma >= 1) gamma = Rational(1, 2);
  return edge_removal(p, gamma, h);
}

}  // namespace posetest
