#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <functional>
#include <limits>
#include <queue>
#include <span>
#include <utility>
#include <vector>

#include "posetest/bitset.hpp"
#include "posetest/config.hpp"
#include "posetest/error.hpp"

namespace posetest {

/// A comparable pair lo < hi.
struct Edge {
  std::size_t lo;
  std::size_t hi;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

using EdgeList = std::vector<Edge>;

// Finite strict partial order on 0..n-1.
//
// The relation is kept transitively closed as two bit matrices (successor
// and predecessor rows), so "edges" always means comparable pairs. Every
// instance carries a fixed linear extension computed by Kahn's algorithm
// with smallest-index-first tie-breaking; it depends only on the relation.
//
// Instances are immutable after construction.
class Poset {
 public:
  Poset() = default;

  /// Transitive closure of the generating pairs.
  static Poset from_relations(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> pairs) {
    std::vector<std::vector<std::size_t>> out(n);
    for (auto [x, y] : pairs) {
      if (x >= n) throw IndexError(x, n);
      if (y >= n) throw IndexError(y, n);
      if (x == y) throw CycleError(x);
      out[x].push_back(y);
    }
    // Kahn over the generating digraph detects cycles.
    std::vector<std::size_t> indeg(n, 0);
    for (std::size_t x = 0; x < n; ++x)
      for (auto y : out[x]) ++indeg[y];
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t x = 0; x < n; ++x)
      if (indeg[x] == 0) ready.push(x);
    std::vector<std::size_t> order;
    order.reserve(n);
    while (!ready.empty()) {
      auto x = ready.top();
      ready.pop();
      order.push_back(x);
      for (auto y : out[x])
        if (--indeg[y] == 0) ready.push(y);
    }
    if (order.size() != n) {
      for (std::size_t x = 0; x < n; ++x)
        if (indeg[x] != 0) throw CycleError(x);
    }
    std::vector<Bitset> succ(n, Bitset(n));
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      for (auto y : out[*it]) {
        succ[*it].set(y);
        succ[*it] |= succ[y];
      }
    }
    return from_closed(std::move(succ));
  }

  static Poset from_relations(std::size_t n, std::initializer_list<std::pair<std::size_t, std::size_t>> pairs) {
    std::vector<std::pair<std::size_t, std::size_t>> v(pairs);
    return from_relations(n, std::span<const std::pair<std::size_t, std::size_t>>(v));
  }

  /// Builds from successor rows that are claimed to be transitively closed.
  /// Throws CycleError / TransitivityError if they are not a strict order.
  static Poset from_closed(std::vector<Bitset> succ) {
    Poset p;
    p.n_ = succ.size();
    for (std::size_t x = 0; x < p.n_; ++x) {
      if (succ[x].size() != p.n_) throw ParameterError("relation row has wrong size");
      if (succ[x].test(x)) throw CycleError(x);
    }
    for (std::size_t x = 0; x < p.n_; ++x) {
      std::size_t bad = Bitset::npos;
      std::size_t via = Bitset::npos;
      succ[x].for_each([&](std::size_t y) {
        if (via != Bitset::npos) return;
        if (succ[y].test(x)) throw CycleError(x);
        if (!succ[y].is_subset_of(succ[x])) {
          via = y;
          bad = (succ[y] - succ[x]).find_first();
        }
      });
      if (via != Bitset::npos) {
        if (bad == x) throw CycleError(x);
        throw TransitivityError(x, via, bad);
      }
    }
    p.succ_ = std::move(succ);
    p.pred_.assign(p.n_, Bitset(p.n_));
    for (std::size_t x = 0; x < p.n_; ++x)
      p.succ_[x].for_each([&](std::size_t y) { p.pred_[y].set(x); });
    p.compute_linear_extension();
    return p;
  }

  std::size_t size() const noexcept { return n_; }
  bool empty() const noexcept { return n_ == 0; }

  /// x < y.
  bool less(std::size_t x, std::size_t y) const noexcept { return succ_[x].test(y); }
  bool comparable(std::size_t x, std::size_t y) const noexcept { return less(x, y) || less(y, x); }

  const Bitset& successors(std::size_t x) const noexcept { return succ_[x]; }
  const Bitset& predecessors(std::size_t x) const noexcept { return pred_[x]; }
  std::span<const Bitset> successor_rows() const noexcept { return succ_; }
  std::span<const Bitset> predecessor_rows() const noexcept { return pred_; }

  const std::vector<std::size_t>& linear_extension() const noexcept { return lin_ext_; }
  /// Index of x within the linear extension.
  std::size_t position(std::size_t x) const noexcept { return position_[x]; }

  std::size_t edge_count() const noexcept {
    std::size_t c = 0;
    for (const auto& row : succ_) c += row.count();
    return c;
  }

  /// All comparable pairs, sorted.
  EdgeList edges() const {
    EdgeList out;
    out.reserve(edge_count());
    for (std::size_t x = 0; x < n_; ++x)
      succ_[x].for_each([&](std::size_t y) { out.push_back({x, y}); });
    return out;
  }

  /// Cover pairs (Hasse diagram), sorted. Display only.
  EdgeList hasse() const {
    EdgeList out;
    for (std::size_t x = 0; x < n_; ++x)
      succ_[x].for_each([&](std::size_t y) {
        if (!succ_[x].intersects(pred_[y])) out.push_back({x, y});
      });
    return out;
  }

  friend bool operator==(const Poset& a, const Poset& b) {
    return a.n_ == b.n_ && a.succ_ == b.succ_;
  }

 private:
  void compute_linear_extension() {
    std::vector<std::size_t> indeg(n_);
    std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> ready;
    for (std::size_t x = 0; x < n_; ++x) {
      indeg[x] = pred_[x].count();
      if (indeg[x] == 0) ready.push(x);
    }
    lin_ext_.clear();
    lin_ext_.reserve(n_);
    while (!ready.empty()) {
      auto x = ready.top();
      ready.pop();
      lin_ext_.push_back(x);
      succ_[x].for_each([&](std::size_t y) {
        if (--indeg[y] == 0) ready.push(y);
      });
    }
    position_.assign(n_, 0);
    for (std::size_t i = 0; i < n_; ++i) position_[lin_ext_[i]] = i;
  }

  std::size_t n_ = 0;
  std::vector<Bitset> succ_;
  std::vector<Bitset> pred_;
  std::vector<std::size_t> lin_ext_;
  std::vector<std::size_t> position_;
};

inline Poset from_edges(std::size_t n, const EdgeList& edges) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(edges.size());
  for (auto e : edges) pairs.emplace_back(e.lo, e.hi);
  return Poset::from_relations(n, pairs);
}

/// True if lin_ext lists every element once and respects the order.
inline bool is_linear_extension(const Poset& p, std::span<const std::size_t> order) {
  if (order.size() != p.size()) return false;
  std::vector<std::size_t> pos(p.size(), std::numeric_limits<std::size_t>::max());
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (order[i] >= p.size() || pos[order[i]] != std::numeric_limits<std::size_t>::max()) return false;
    pos[order[i]] = i;
  }
  for (std::size_t x = 0; x < p.size(); ++x) {
    bool ok = true;
    p.successors(x).for_each([&](std::size_t y) { ok = ok && pos[x] < pos[y]; });
    if (!ok) return false;
  }
  return true;
}

/// Elements of one longest chain, bottom to top.
inline std::vector<std::size_t> longest_chain(const Poset& p) {
  const auto n = p.size();
  if (n == 0) return {};
  std::vector<std::size_t> len(n, 1), back(n, Bitset::npos);
  for (auto y : p.linear_extension()) {
    p.predecessors(y).for_each([&](std::size_t x) {
      if (len[x] + 1 > len[y]) {
        len[y] = len[x] + 1;
        back[y] = x;
      }
    });
  }
  std::size_t top = 0;
  for (std::size_t x = 1; x < n; ++x)
    if (len[x] > len[top]) top = x;
  std::vector<std::size_t> chain;
  for (auto x = top; x != Bitset::npos; x = back[x]) chain.push_back(x);
  std::reverse(chain.begin(), chain.end());
  return chain;
}

/// Maximum number of elements in a chain.
inline std::size_t height(const Poset& p) { return longest_chain(p).size(); }

/// For each element, the number of elements of the longest chain ending
/// (down) or starting (up) at it.
inline std::vector<std::size_t> chain_depth_below(const Poset& p) {
  std::vector<std::size_t> len(p.size(), 1);
  for (auto y : p.linear_extension())
    p.predecessors(y).for_each([&](std::size_t x) { len[y] = std::max(len[y], len[x] + 1); });
  return len;
}

inline std::vector<std::size_t> chain_depth_above(const Poset& p) {
  std::vector<std::size_t> len(p.size(), 1);
  const auto& order = p.linear_extension();
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    p.successors(*it).for_each([&](std::size_t y) { len[*it] = std::max(len[*it], len[y] + 1); });
  return len;
}

struct WidthResult {
  std::size_t width = 0;
  std::vector<std::size_t> antichain;               // a maximum antichain, sorted
  std::vector<std::vector<std::size_t>> chain_cover;  // a minimum chain cover
};

namespace detail {

// Hopcroft-Karp on the split graph: left copy x -- right copy y iff x < y.
// Returns match_left (right partner or npos) and match_right.
inline std::pair<std::vector<std::size_t>, std::vector<std::size_t>> split_matching(const Poset& p) {
  constexpr auto none = Bitset::npos;
  const auto n = p.size();
  std::vector<std::size_t> ml(n, none), mr(n, none), dist(n);
  auto bfs = [&] {
    std::queue<std::size_t> q;
    bool found = false;
    for (std::size_t x = 0; x < n; ++x) {
      if (ml[x] == none) {
        dist[x] = 0;
        q.push(x);
      } else {
        dist[x] = none;
      }
    }
    while (!q.empty()) {
      auto x = q.front();
      q.pop();
      p.successors(x).for_each([&](std::size_t y) {
        if (mr[y] == none) {
          found = true;
        } else if (dist[mr[y]] == none) {
          dist[mr[y]] = dist[x] + 1;
          q.push(mr[y]);
        }
      });
    }
    return found;
  };
  std::function<bool(std::size_t)> dfs = [&](std::size_t x) -> bool {
    for (auto y = p.successors(x).find_first(); y != none; y = p.successors(x).find_next(y)) {
      if (mr[y] == none || (dist[mr[y]] == dist[x] + 1 && dfs(mr[y]))) {
        ml[x] = y;
        mr[y] = x;
        return true;
      }
    }
    dist[x] = none;
    return false;
  };
  while (bfs())
    for (std::size_t x = 0; x < n; ++x)
      if (ml[x] == none) dfs(x);
  return {std::move(ml), std::move(mr)};
}

}  // namespace detail

/// Width via Dilworth/Konig: the minimum chain cover has n - |M| chains
/// for a maximum matching M of the split comparability graph; the
/// complement of a minimum vertex cover yields a maximum antichain.
inline WidthResult width_with_witness(const Poset& p) {
  constexpr auto none = Bitset::npos;
  const auto n = p.size();
  auto [ml, mr] = detail::split_matching(p);

  WidthResult result;
  for (std::size_t x = 0; x < n; ++x) {
    if (mr[x] != none) continue;  // x starts a chain
    std::vector<std::size_t> chain;
    for (auto y = x; y != none; y = ml[y]) chain.push_back(y);
    result.chain_cover.push_back(std::move(chain));
  }
  result.width = result.chain_cover.size();

  // Alternating reachability from unmatched left vertices.
  std::vector<bool> zl(n, false), zr(n, false);
  std::queue<std::size_t> q;
  for (std::size_t x = 0; x < n; ++x)
    if (ml[x] == none) {
      zl[x] = true;
      q.push(x);
    }
  while (!q.empty()) {
    auto x = q.front();
    q.pop();
    p.successors(x).for_each([&](std::size_t y) {
      if (zr[y] || ml[x] == y) return;
      zr[y] = true;
      if (mr[y] != none && !zl[mr[y]]) {
        zl[mr[y]] = true;
        q.push(mr[y]);
      }
    });
  }
  for (std::size_t x = 0; x < n; ++x)
    if (zl[x] && !zr[x]) result.antichain.push_back(x);
  return result;
}

/// Size of the largest antichain.
inline std::size_t width(const Poset& p) { return width_with_witness(p).width; }

/// Subposet on the listed elements; slot i of the result is elems[i]. A
/// repeated element gives copies that are mutually incomparable.
inline Poset induced_subposet(const Poset& p, std::span<const std::size_t> elems) {
  const auto m = elems.size();
  for (auto e : elems)
    if (e >= p.size()) throw IndexError(e, p.size());
  std::vector<Bitset> succ(m, Bitset(m));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (p.less(elems[i], elems[j])) succ[i].set(j);
  return Poset::from_closed(std::move(succ));
}

/// Deletes the listed comparable pairs. Throws TransitivityError naming the
/// lexicographically first violating triple if the result is not an order.
inline Poset remove_edges(const Poset& p, std::span<const Edge> doomed) {
  std::vector<Bitset> succ(p.successor_rows().begin(), p.successor_rows().end());
  for (auto e : doomed) {
    if (e.lo >= p.size()) throw IndexError(e.lo, p.size());
    if (e.hi >= p.size()) throw IndexError(e.hi, p.size());
    if (!p.less(e.lo, e.hi))
      throw ParameterError("pair (" + std::to_string(e.lo) + "," + std::to_string(e.hi) +
                           ") is not in the relation");
    succ[e.lo].reset(e.hi);
  }
  return Poset::from_closed(std::move(succ));
}

inline Poset remove_edges(const Poset& p, std::initializer_list<Edge> doomed) {
  return remove_edges(p, std::span<const Edge>(doomed.begin(), doomed.size()));
}

/// Brute-force isomorphism test by backtracking over bijections.
inline bool is_isomorphic(const Poset& p, const Poset& q, const OracleLimits& limits = default_limits()) {
  if (p.size() != q.size()) return false;
  const auto n = p.size();
  if (n > limits.isomorphism_max_n)
    throw OracleLimitError("isomorphism oracle limited to n <= " + std::to_string(limits.isomorphism_max_n));
  if (p.edge_count() != q.edge_count()) return false;
  auto signature = [](const Poset& r, std::size_t x) {
    return std::pair{r.predecessors(x).count(), r.successors(x).count()};
  };
  std::vector<std::size_t> map(n, Bitset::npos);
  std::vector<bool> used(n, false);
  std::function<bool(std::size_t)> place = [&](std::size_t x) -> bool {
    if (x == n) return true;
    for (std::size_t y = 0; y < n; ++y) {
      if (used[y] || signature(p, x) != signature(q, y)) continue;
      bool ok = true;
      for (std::size_t u = 0; u < x && ok; ++u)
        ok = p.less(u, x) == q.less(map[u], y) && p.less(x, u) == q.less(y, map[u]);
      if (!ok) continue;
      map[x] = y;
      used[y] = true;
      if (place(x + 1)) return true;
      used[y] = false;
    }
    return false;
  };
  return place(0);
}

}  // namespace posetest
