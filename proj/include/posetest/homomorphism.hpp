#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "posetest/bitset.hpp"
#include "posetest/config.hpp"
#include "posetest/error.hpp"
#include "posetest/generators.hpp"
#include "posetest/poset.hpp"
#include "posetest/rational.hpp"
#include "posetest/rng.hpp"

namespace posetest {

/// Pattern constraint: the image of `from` must relate to the image of `to`
/// in the host (x -> y means y is in host_out[x], equivalently x is in
/// host_in[y]).
struct PatternArc {
  std::size_t from;
  std::size_t to;
};

/// Node-expansion counter shared by the exponential searches.
class SearchBudget {
 public:
  explicit SearchBudget(std::uint64_t limit) : limit_(limit) {}
  void charge(std::uint64_t units = 1) {
    used_ += units;
    if (used_ > limit_)
      throw BudgetError("search budget of " + std::to_string(limit_) + " expansions exceeded");
  }
  std::uint64_t used() const noexcept { return used_; }

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
};

namespace detail {

struct ImageKeyHash {
  std::size_t operator()(const std::vector<std::uint32_t>& v) const noexcept {
    std::uint64_t h = 0x84222325CBF29CE4ULL ^ v.size();
    for (auto x : v) h = splitmix64(h ^ x);
    return static_cast<std::size_t>(h);
  }
};

}  // namespace detail

// Counts maps f: [k] -> [n] satisfying every arc, exactly.
//
// Pattern vertices are placed in `order`. The state after each step is the
// tuple of images of the "frontier": placed vertices that still have an
// unplaced neighbour. States with equal frontier images are merged, and a
// vertex that leaves the frontier as soon as it is placed contributes a
// popcount factor instead of a branch. The cost is governed by n^(frontier
// width) rather than n^k.
inline BigInt count_homomorphisms(std::size_t k, std::span<const PatternArc> arcs,
                                  std::span<const std::size_t> order,
                                  std::span<const Bitset> host_out, std::span<const Bitset> host_in,
                                  SearchBudget& budget) {
  const std::size_t n = host_out.size();
  if (order.size() != k) throw ParameterError("placement order must list every pattern vertex");
  std::vector<std::size_t> pos(k, Bitset::npos);
  for (std::size_t i = 0; i < k; ++i) {
    if (order[i] >= k || pos[order[i]] != Bitset::npos)
      throw ParameterError("placement order is not a permutation");
    pos[order[i]] = i;
  }

  // constraints[v]: (earlier vertex u, true if img v must be in out[img u]).
  std::vector<std::vector<std::pair<std::size_t, bool>>> constraints(k);
  std::vector<std::size_t> last(k);
  for (std::size_t v = 0; v < k; ++v) last[v] = pos[v];
  for (auto arc : arcs) {
    if (arc.from >= k || arc.to >= k) throw IndexError(std::max(arc.from, arc.to), k);
    if (arc.from == arc.to) throw ParameterError("pattern arc is a loop");
    if (pos[arc.from] < pos[arc.to]) constraints[arc.to].push_back({arc.from, true});
    else constraints[arc.from].push_back({arc.to, false});
    last[arc.from] = std::max(last[arc.from], pos[arc.to]);
    last[arc.to] = std::max(last[arc.to], pos[arc.from]);
  }

  using Key = std::vector<std::uint32_t>;
  std::unordered_map<Key, BigInt, detail::ImageKeyHash> states, next;
  states.emplace(Key{}, BigInt(1));
  std::vector<std::size_t> frontier;
  std::vector<std::size_t> slot_of(k, Bitset::npos);

  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t v = order[i];
    std::vector<std::pair<std::size_t, bool>> slot_constraints;
    for (auto [u, use_out] : constraints[v]) slot_constraints.push_back({slot_of[u], use_out});

    std::vector<std::size_t> kept_slots;
    std::vector<std::size_t> new_frontier;
    for (std::size_t s = 0; s < frontier.size(); ++s)
      if (last[frontier[s]] > i) {
        kept_slots.push_back(s);
        new_frontier.push_back(frontier[s]);
      }
    const bool v_stays = last[v] > i;
    if (v_stays) new_frontier.push_back(v);

    next.clear();
    Bitset cand(n);
    Key key;
    for (const auto& entry : states) {
      const Key& images = entry.first;
      const BigInt& ways = entry.second;
      budget.charge();
      cand.set_all();
      for (auto [slot, use_out] : slot_constraints) {
        cand &= use_out ? host_out[images[slot]] : host_in[images[slot]];
      }
      if (cand.none()) continue;
      key.clear();
      for (auto s : kept_slots) key.push_back(images[s]);
      if (v_stays) {
        key.push_back(0);
        cand.for_each([&](std::size_t c) {
          key.back() = static_cast<std::uint32_t>(c);
          next[key] += ways;
        });
        budget.charge(cand.count());
      } else {
        next[key] += ways * cand.count();
      }
    }
    states.swap(next);
    frontier = std::move(new_frontier);
    std::fill(slot_of.begin(), slot_of.end(), Bitset::npos);
    for (std::size_t s = 0; s < frontier.size(); ++s) slot_of[frontier[s]] = s;
    if (states.empty()) return 0;
  }
  BigInt total = 0;
  for (const auto& entry : states) total += entry.second;
  return total;
}

/// Number of order-preserving maps q -> p (not necessarily injective).
inline BigInt hom_count_exact(const Poset& q, const Poset& p,
                              std::uint64_t budget_limit = default_limits().search_budget) {
  // Covers suffice: the host is transitive, so preserving covers preserves
  // the whole relation.
  std::vector<PatternArc> arcs;
  for (auto e : q.hasse()) arcs.push_back({e.lo, e.hi});
  SearchBudget budget(budget_limit);
  return count_homomorphisms(q.size(), arcs, q.linear_extension(), p.successor_rows(),
                             p.predecessor_rows(), budget);
}

enum class DensityMode { exact, monte_carlo };

// Homomorphism density t(Q, P): probability that a uniform random map is a
// homomorphism. Exact mode stores count / total; Monte Carlo mode stores the
// success fraction with a two-sided Hoeffding half-width
// sqrt(ln(2/delta) / (2 trials)).
struct HomDensity {
  DensityMode mode = DensityMode::exact;
  BigInt count = 0;
  BigInt total = 1;
  double estimate = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double delta = 0.0;
  double ci_halfwidth = 0.0;

  /// Exact mode only.
  Rational value() const { return Rational(count, total); }
};

inline double hoeffding_halfwidth(std::uint64_t trials, double delta) {
  return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(trials)));
}

inline HomDensity make_exact_density(BigInt count, BigInt total) {
  HomDensity d;
  d.mode = DensityMode::exact;
  d.count = std::move(count);
  d.total = std::move(total);
  d.estimate = to_double(d.value());
  return d;
}

inline HomDensity density_exact(const Poset& q, const Poset& p,
                                std::uint64_t budget_limit = default_limits().search_budget) {
  if (p.empty()) throw EmptyPosetError();
  BigInt total = boost::multiprecision::pow(BigInt(p.size()), static_cast<unsigned>(q.size()));
  return make_exact_density(hom_count_exact(q, p, budget_limit), std::move(total));
}

inline Rational density(const Poset& q, const Poset& p,
                        std::uint64_t budget_limit = default_limits().search_budget) {
  return density_exact(q, p, budget_limit).value();
}

/// Trial i draws from Rng(derive_seed(seed, i)).
template <class IsHom>
HomDensity monte_carlo_density(std::size_t k, std::size_t n, std::uint64_t trials, std::uint64_t seed,
                               double delta, IsHom&& is_hom) {
  if (trials == 0) throw ParameterError("Monte Carlo density needs at least one trial");
  if (!(delta > 0.0 && delta < 1.0)) throw ParameterError("delta must lie in (0, 1)");
  HomDensity d;
  d.mode = DensityMode::monte_carlo;
  d.trials = trials;
  d.delta = delta;
  std::vector<std::size_t> image(k);
  for (std::uint64_t t = 0; t < trials; ++t) {
    Rng rng(derive_seed(seed, t));
    for (auto& x : image) x = rng.uniform_below(n);
    if (is_hom(image)) ++d.successes;
  }
  d.estimate = static_cast<double>(d.successes) / static_cast<double>(trials);
  d.ci_halfwidth = hoeffding_halfwidth(trials, delta);
  return d;
}

inline HomDensity density_mc(const Poset& q, const Poset& p, std::uint64_t trials, std::uint64_t seed,
                             double delta = 0.05) {
  if (p.empty()) throw EmptyPosetError();
  auto covers = q.hasse();
  return monte_carlo_density(q.size(), p.size(), trials, seed, delta,
                             [&](const std::vector<std::size_t>& f) {
                               for (auto e : covers)
                                 if (!p.less(f[e.lo], f[e.hi])) return false;
                               return true;
                             });
}

/// Injective order-preserving map; map[x] is the image of pattern element x.
struct Embedding {
  std::vector<std::size_t> map;
  friend bool operator==(const Embedding&, const Embedding&) = default;
};

inline bool is_embedding(const Poset& q, const Poset& p, const Embedding& e) {
  if (e.map.size() != q.size()) return false;
  Bitset used(p.size());
  for (auto y : e.map) {
    if (y >= p.size() || used.test(y)) return false;
    used.set(y);
  }
  for (std::size_t x = 0; x < q.size(); ++x) {
    bool ok = true;
    q.successors(x).for_each([&](std::size_t y) { ok = ok && p.less(e.map[x], e.map[y]); });
    if (!ok) return false;
  }
  return true;
}

// Lexicographically least embedding of q into p, if any.
//
// Pattern elements are placed in index order with images tried in
// increasing order. Candidates are intersected with the successor and
// predecessor rows of already placed neighbours and filtered by chain
// depth: an image needs at least as long a chain above and below it as the
// pattern element has.
inline std::optional<Embedding> contains_subposet(const Poset& q, const Poset& p,
                                                  std::uint64_t budget_limit = default_limits().search_budget) {
  const std::size_t k = q.size();
  const std::size_t n = p.size();
  if (k == 0) return Embedding{};
  if (k > n) return std::nullopt;
  const auto q_up = chain_depth_above(q), q_down = chain_depth_below(q);
  const auto p_up = chain_depth_above(p), p_down = chain_depth_below(p);
  std::vector<Bitset> allowed(k, Bitset(n));
  for (std::size_t v = 0; v < k; ++v) {
    for (std::size_t c = 0; c < n; ++c)
      if (p_up[c] >= q_up[v] && p_down[c] >= q_down[v]) allowed[v].set(c);
    if (allowed[v].none()) return std::nullopt;
  }

  SearchBudget budget(budget_limit);
  Embedding e;
  e.map.assign(k, Bitset::npos);
  Bitset used(n);
  std::function<bool(std::size_t)> place = [&](std::size_t v) -> bool {
    if (v == k) return true;
    budget.charge();
    Bitset cand = allowed[v] - used;
    for (std::size_t u = 0; u < v && cand.any(); ++u) {
      if (q.less(u, v)) cand &= p.successors(e.map[u]);
      else if (q.less(v, u)) cand &= p.predecessors(e.map[u]);
    }
    for (auto c = cand.find_first(); c != Bitset::npos; c = cand.find_next(c)) {
      e.map[v] = c;
      used.set(c);
      if (place(v + 1)) return true;
      used.reset(c);
    }
    e.map[v] = Bitset::npos;
    return false;
  };
  if (place(0)) return e;
  return std::nullopt;
}

/// Exact densities behind the chain -> alternating -> layered inequality
/// t(K_{h x w}) >= t(K_{w,1,w,...})^w >= t(C_h)^{w^2}.
struct DensityInequalityReport {
  std::size_t h = 0;
  std::size_t w = 0;
  Rational t_chain;
  Rational t_alternating;
  Rational t_layered;
  bool alternating_bound = false;  // t_alternating >= t_chain^w
  bool layered_bound = false;      // t_layered >= t_alternating^w
  bool composed_bound = false;     // t_layered >= t_chain^(w^2)
  bool all_hold() const noexcept { return alternating_bound && layered_bound && composed_bound; }
};

inline DensityInequalityReport check_density_inequality(std::size_t h, std::size_t w, const Poset& p,
                                                        std::uint64_t budget_limit = default_limits().search_budget) {
  if (h < 1 || w < 1) throw ParameterError("check_density_inequality: h and w must be positive");
  DensityInequalityReport r;
  r.h = h;
  r.w = w;
  r.t_chain = density(chain(h), p, budget_limit);
  r.t_alternating = density(alternating_layers(h, w), p, budget_limit);
  r.t_layered = density(k_hw(h, w), p, budget_limit);
  const auto wu = static_cast<unsigned>(w);
  r.alternating_bound = r.t_alternating >= pow(r.t_chain, wu);
  r.layered_bound = r.t_layered >= pow(r.t_alternating, wu);
  r.composed_bound = r.t_layered >= pow(r.t_chain, wu * wu);
  return r;
}

}  // namespace posetest
