#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "posetest/bitset.hpp"
#include "posetest/config.hpp"
#include "posetest/error.hpp"
#include "posetest/homomorphism.hpp"
#include "posetest/poset.hpp"
#include "posetest/poset_io.hpp"
#include "posetest/rational.hpp"
#include "posetest/removal.hpp"
#include "posetest/testers.hpp"

namespace posetest {

/// Simple undirected graph on 0..n-1 stored as adjacency bit rows.
class Graph {
 public:
  Graph() = default;
  explicit Graph(std::size_t n) : adj_(n, Bitset(n)) {}

  static Graph from_edges(std::size_t n, std::span<const std::pair<std::size_t, std::size_t>> pairs) {
    Graph g(n);
    for (auto [u, v] : pairs) g.add_edge(u, v);
    return g;
  }
  static Graph from_edges(std::size_t n, std::initializer_list<std::pair<std::size_t, std::size_t>> pairs) {
    std::vector<std::pair<std::size_t, std::size_t>> v(pairs);
    return from_edges(n, std::span<const std::pair<std::size_t, std::size_t>>(v));
  }

  void add_edge(std::size_t u, std::size_t v) {
    if (u >= size()) throw IndexError(u, size());
    if (v >= size()) throw IndexError(v, size());
    if (u == v) throw ParameterError("graph loops are not allowed");
    adj_[u].set(v);
    adj_[v].set(u);
  }
  void remove_edge(std::size_t u, std::size_t v) {
    adj_[u].reset(v);
    adj_[v].reset(u);
  }

  std::size_t size() const noexcept { return adj_.size(); }
  bool has_edge(std::size_t u, std::size_t v) const noexcept { return adj_[u].test(v); }
  const Bitset& neighbors(std::size_t u) const noexcept { return adj_[u]; }
  std::span<const Bitset> rows() const noexcept { return adj_; }
  std::size_t degree(std::size_t u) const noexcept { return adj_[u].count(); }

  std::size_t edge_count() const noexcept {
    std::size_t c = 0;
    for (const auto& r : adj_) c += r.count();
    return c / 2;
  }
  /// Undirected edges as (lo, hi) pairs, sorted.
  EdgeList edges() const {
    EdgeList out;
    for (std::size_t u = 0; u < size(); ++u)
      adj_[u].for_each([&](std::size_t v) {
        if (u < v) out.push_back({u, v});
      });
    return out;
  }

  Graph complement() const {
    Graph g(size());
    for (std::size_t u = 0; u < size(); ++u)
      for (std::size_t v = u + 1; v < size(); ++v)
        if (!has_edge(u, v)) g.add_edge(u, v);
    return g;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::vector<Bitset> adj_;
};

inline Graph complete_graph(std::size_t k) {
  Graph g(k);
  for (std::size_t u = 0; u < k; ++u)
    for (std::size_t v = u + 1; v < k; ++v) g.add_edge(u, v);
  return g;
}

inline Graph cycle_graph(std::size_t n) {
  if (n < 3) throw ParameterError("cycle needs at least 3 vertices");
  Graph g(n);
  for (std::size_t u = 0; u < n; ++u) g.add_edge(u, (u + 1) % n);
  return g;
}

/// Subgraph induced by the listed vertices; repeated vertices become
/// non-adjacent copies.
inline Graph induced_subgraph(const Graph& g, std::span<const std::size_t> vertices) {
  Graph s(vertices.size());
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (vertices[i] >= g.size()) throw IndexError(vertices[i], g.size());
    for (std::size_t j = i + 1; j < vertices.size(); ++j)
      if (g.has_edge(vertices[i], vertices[j])) s.add_edge(i, j);
  }
  return s;
}

/// A graph together with, when known, a poset whose comparability graph it
/// is. Operations that need the order structure require the source; no
/// attempt is made to recover an orientation.
struct ComparabilityGraph {
  Graph graph;
  std::optional<Poset> source;

  std::size_t size() const noexcept { return graph.size(); }
};

inline Graph comparability_of(const Poset& p) {
  Graph g(p.size());
  for (auto e : p.edges()) g.add_edge(e.lo, e.hi);
  return g;
}

inline ComparabilityGraph from_poset(const Poset& p) { return {comparability_of(p), p}; }

/// Pairs a graph with a promised source poset; the promise is checked.
inline ComparabilityGraph with_promise(Graph g, const Poset& source) {
  if (!(comparability_of(source) == g))
    throw PromiseError("graph is not the comparability graph of the given poset");
  return {std::move(g), source};
}

// ---------------------------------------------------------------------------
// Cliques, colouring, independence

namespace detail {

// Bron-Kerbosch with Tomita pivoting. Stops as soon as |R| reaches `stop_at`
// (if nonzero); otherwise records the largest clique seen.
class CliqueSearch {
 public:
  CliqueSearch(const Graph& g, std::size_t stop_at, SearchBudget& budget)
      : g_(g), stop_at_(stop_at), budget_(budget) {}

  void run() {
    std::vector<std::size_t> r;
    expand(r, Bitset(g_.size(), true), Bitset(g_.size()));
  }
  const std::vector<std::size_t>& best() const noexcept { return best_; }
  bool done() const noexcept { return stop_at_ != 0 && best_.size() >= stop_at_; }

 private:
  void expand(std::vector<std::size_t>& r, Bitset p, Bitset x) {
    budget_.charge();
    if (r.size() > best_.size()) best_ = r;
    if (done()) return;
    const std::size_t target = stop_at_ != 0 ? stop_at_ : best_.size() + 1;
    if (r.size() + p.count() < target) return;
    if (p.none()) return;
    std::size_t pivot = Bitset::npos, pivot_score = 0;
    auto consider = [&](std::size_t u) {
      auto score = (p & g_.neighbors(u)).count();
      if (pivot == Bitset::npos || score > pivot_score) {
        pivot = u;
        pivot_score = score;
      }
    };
    p.for_each(consider);
    x.for_each(consider);
    Bitset branch = p - g_.neighbors(pivot);
    for (auto v = branch.find_first(); v != Bitset::npos; v = branch.find_next(v)) {
      r.push_back(v);
      expand(r, p & g_.neighbors(v), x & g_.neighbors(v));
      r.pop_back();
      if (done()) return;
      p.reset(v);
      x.set(v);
    }
  }

  const Graph& g_;
  std::size_t stop_at_;
  SearchBudget& budget_;
  std::vector<std::size_t> best_;
};

}  // namespace detail

/// Some clique on k vertices, if one exists.
inline std::optional<std::vector<std::size_t>> find_clique(const Graph& g, std::size_t k,
                                                           std::uint64_t budget_limit = default_limits().search_budget) {
  if (k == 0) return std::vector<std::size_t>{};
  SearchBudget budget(budget_limit);
  detail::CliqueSearch search(g, k, budget);
  search.run();
  if (search.best().size() < k) return std::nullopt;
  auto c = search.best();
  c.resize(k);
  std::sort(c.begin(), c.end());
  return c;
}

inline std::size_t clique_number(const Graph& g, std::uint64_t budget_limit = default_limits().search_budget) {
  SearchBudget budget(budget_limit);
  detail::CliqueSearch search(g, 0, budget);
  search.run();
  return search.best().size();
}

inline void check_graph_cap(const Graph& g, const OracleLimits& limits) {
  if (g.size() > limits.graph_max_n)
    throw OracleLimitError("exact graph algorithms limited to n <= " + std::to_string(limits.graph_max_n));
}

inline std::size_t independence_number_exact(const Graph& g, const OracleLimits& limits = default_limits()) {
  check_graph_cap(g, limits);
  return clique_number(g.complement(), limits.search_budget);
}

/// Exact chromatic number: k-colourability by backtracking in descending
/// degree order for k upward from the clique number.
inline std::size_t chromatic_number_exact(const Graph& g, const OracleLimits& limits = default_limits()) {
  check_graph_cap(g, limits);
  const std::size_t n = g.size();
  if (n == 0) return 0;
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return g.degree(a) > g.degree(b); });
  SearchBudget budget(limits.search_budget);
  std::vector<std::size_t> colour(n, Bitset::npos);
  std::function<bool(std::size_t, std::size_t, std::size_t)> paint = [&](std::size_t i, std::size_t k,
                                                                         std::size_t used) -> bool {
    if (i == n) return true;
    budget.charge();
    const auto v = order[i];
    // A fresh colour is interchangeable with any other unused one.
    for (std::size_t c = 0; c < std::min(k, used + 1); ++c) {
      bool clash = false;
      g.neighbors(v).for_each([&](std::size_t u) { clash = clash || colour[u] == c; });
      if (clash) continue;
      colour[v] = c;
      if (paint(i + 1, k, std::max(used, c + 1))) return true;
    }
    colour[v] = Bitset::npos;
    return false;
  };
  for (std::size_t k = std::max<std::size_t>(1, clique_number(g, limits.search_budget)); k <= n; ++k) {
    std::fill(colour.begin(), colour.end(), Bitset::npos);
    if (paint(0, k, 0)) return k;
  }
  return n;
}

/// For source-backed graphs this is the height of the source (a colouring
/// by longest-chain depth is optimal and chains are cliques), cross-checked
/// by the exact search when the graph is small enough.
inline std::size_t chromatic_number(const ComparabilityGraph& g, const OracleLimits& limits = default_limits()) {
  if (!g.source) return chromatic_number_exact(g.graph, limits);
  const auto h = height(*g.source);
  if (g.size() <= limits.graph_max_n && chromatic_number_exact(g.graph, limits) != h)
    throw std::logic_error("chromatic number disagrees with the height of the source poset");
  return h;
}

/// Width of the source (antichains are exactly the independent sets), with
/// the same cross-check.
inline std::size_t independence_number(const ComparabilityGraph& g, const OracleLimits& limits = default_limits()) {
  if (!g.source) return independence_number_exact(g.graph, limits);
  const auto w = width(*g.source);
  if (g.size() <= limits.graph_max_n && independence_number_exact(g.graph, limits) != w)
    throw std::logic_error("independence number disagrees with the width of the source poset");
  return w;
}

// ---------------------------------------------------------------------------
// Densities and containment

/// Number of edge-preserving maps f -> g.
inline BigInt graph_hom_count(const Graph& f, const Graph& g,
                              std::uint64_t budget_limit = default_limits().search_budget) {
  std::vector<PatternArc> arcs;
  for (auto e : f.edges()) arcs.push_back({e.lo, e.hi});
  std::vector<std::size_t> order(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) order[i] = i;
  SearchBudget budget(budget_limit);
  return count_homomorphisms(f.size(), arcs, order, g.rows(), g.rows(), budget);
}

inline HomDensity graph_density_exact(const Graph& f, const Graph& g,
                                      std::uint64_t budget_limit = default_limits().search_budget) {
  if (g.size() == 0) throw EmptyPosetError();
  BigInt total = boost::multiprecision::pow(BigInt(g.size()), static_cast<unsigned>(f.size()));
  return make_exact_density(graph_hom_count(f, g, budget_limit), std::move(total));
}

inline HomDensity graph_density_mc(const Graph& f, const Graph& g, std::uint64_t trials, std::uint64_t seed,
                                   double delta = 0.05) {
  if (g.size() == 0) throw EmptyPosetError();
  auto edges = f.edges();
  return monte_carlo_density(f.size(), g.size(), trials, seed, delta, [&](const std::vector<std::size_t>& m) {
    for (auto e : edges)
      if (!g.has_edge(m[e.lo], m[e.hi])) return false;
    return true;
  });
}

struct GraphDensityOptions {
  DensityMode mode = DensityMode::exact;
  std::uint64_t trials = 10000;
  std::uint64_t seed = 0;
  double delta = 0.05;
};

inline HomDensity graph_density(const Graph& f, const ComparabilityGraph& g, const GraphDensityOptions& opt = {}) {
  if (opt.mode == DensityMode::exact) return graph_density_exact(f, g.graph);
  return graph_density_mc(f, g.graph, opt.trials, opt.seed, opt.delta);
}

/// Injective edge-preserving map f -> g (a not necessarily induced copy).
inline std::optional<std::vector<std::size_t>> find_subgraph(const Graph& f, const Graph& g,
                                                             std::uint64_t budget_limit = default_limits().search_budget) {
  const std::size_t k = f.size(), n = g.size();
  if (k > n) return std::nullopt;
  SearchBudget budget(budget_limit);
  std::vector<std::size_t> map(k, Bitset::npos);
  Bitset used(n);
  std::function<bool(std::size_t)> place = [&](std::size_t v) -> bool {
    if (v == k) return true;
    budget.charge();
    Bitset cand = Bitset(n, true) - used;
    for (std::size_t u = 0; u < v; ++u)
      if (f.has_edge(u, v)) cand &= g.neighbors(map[u]);
    for (auto c = cand.find_first(); c != Bitset::npos; c = cand.find_next(c)) {
      if (g.degree(c) < f.degree(v)) continue;
      map[v] = c;
      used.set(c);
      if (place(v + 1)) return true;
      used.reset(c);
    }
    return false;
  };
  if (place(0)) return map;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Removal and testing

struct GraphRemovalResult {
  ComparabilityGraph survivor;
  RemovalResult poset_result;
  std::size_t chi = 0;    // chromatic number of the pattern
  std::size_t alpha = 0;  // independence number of the pattern
  Rational density;       // t(F, G)
};

using GraphRemovalOutcome = std::variant<GraphRemovalResult, DensityTooHigh>;

/// If t(F, G) < (eps/2)^(chi(F) alpha(F)^2), removes at most eps n^2 edges
/// so that the survivor is a K_chi(F)-free comparability graph (hence
/// F-free). Works on the source poset; the survivor keeps its source.
inline GraphRemovalOutcome graph_removal(const ComparabilityGraph& g, const Graph& f, const Rational& eps,
                                         const OracleLimits& limits = default_limits()) {
  if (!g.source) throw PromiseError("graph removal needs the source poset of the comparability graph");
  if (f.edge_count() == 0) throw ParameterError("graph removal: the pattern must have an edge");
  if (eps <= 0) throw ParameterError("graph removal: eps must be positive");
  const auto chi = chromatic_number_exact(f, limits);
  const auto alpha = independence_number_exact(f, limits);
  const Rational threshold = pow(eps / 2, static_cast<unsigned>(chi * alpha * alpha));
  const Rational t = graph_density_exact(f, g.graph, limits.search_budget).value();
  if (t >= threshold) return DensityTooHigh{t, threshold};
  auto inner = chain_removal(*g.source, eps, chi, limits.search_budget);
  if (std::holds_alternative<DensityTooHigh>(inner))
    throw std::logic_error("chain density above threshold although graph density is below it");
  GraphRemovalResult r;
  r.poset_result = std::get<RemovalResult>(std::move(inner));
  r.survivor = from_poset(r.poset_result.survivor);
  r.chi = chi;
  r.alpha = alpha;
  r.density = t;
  return r;
}

/// Draws s vertices and rejects iff the induced sample contains K_chi. The
/// witness maps clique positions to trace positions.
inline TestOutcome subgraph_test(const ComparabilityGraph& g, std::size_t chi, std::size_t s, std::uint64_t seed,
                                 SamplingMode mode = SamplingMode::with_replacement) {
  if (chi < 2) throw ParameterError("subgraph test: chi must be at least 2");
  if (s < 1) throw ParameterError("subgraph test: need at least one sample");
  if (g.size() == 0) throw EmptyPosetError();
  Rng rng(seed);
  TestOutcome out;
  out.sample_trace = sample_elements(g.size(), s, rng, mode);
  out.samples_used = s;
  if (auto clique = find_clique(induced_subgraph(g.graph, out.sample_trace), chi)) {
    out.verdict = Verdict::reject;
    out.witness = Embedding{std::move(*clique)};
  }
  return out;
}

/// Same sample count as the poset subposet test with h := chi.
inline TestOutcome subgraph_test(const ComparabilityGraph& g, std::size_t chi, const Rational& eps, double c,
                                 std::uint64_t seed, SamplingMode mode = SamplingMode::with_replacement) {
  return subgraph_test(g, chi, subposet_test_samples(chi, eps, c), seed, mode);
}

inline bool verify_clique_witness(const TestOutcome& outcome, std::size_t chi, const Graph& g) {
  if (!outcome.rejected()) return !outcome.witness.has_value();
  if (!outcome.witness || outcome.witness->map.size() != chi) return false;
  const auto& slots = outcome.witness->map;
  for (auto s : slots)
    if (s >= outcome.sample_trace.size()) return false;
  for (std::size_t i = 0; i < slots.size(); ++i)
    for (std::size_t j = i + 1; j < slots.size(); ++j)
      if (!g.has_edge(outcome.sample_trace[slots[i]], outcome.sample_trace[slots[j]])) return false;
  return true;
}

struct GraphFamilySpec {
  std::vector<Graph> members;
  std::size_t chi = 0;
  std::size_t alpha = 0;
  std::size_t representative = 0;
};

inline GraphFamilySpec make_graph_family(std::vector<Graph> members, const OracleLimits& limits = default_limits()) {
  if (members.empty()) throw ParameterError("a family needs at least one member");
  GraphFamilySpec f;
  f.members = std::move(members);
  std::vector<std::size_t> chis;
  for (const auto& m : f.members) chis.push_back(chromatic_number_exact(m, limits));
  f.chi = *std::min_element(chis.begin(), chis.end());
  f.alpha = SIZE_MAX;
  for (std::size_t i = 0; i < f.members.size(); ++i) {
    if (chis[i] != f.chi) continue;
    auto a = independence_number_exact(f.members[i], limits);
    if (a < f.alpha) {
      f.alpha = a;
      f.representative = i;
    }
  }
  return f;
}

struct GraphFamilyTestOutcome {
  TestOutcome outcome;
  double false_reject_bound = 0.0;
  double removal_budget = 0.0;
};

inline GraphFamilyTestOutcome graph_family_tester(const ComparabilityGraph& g, const GraphFamilySpec& fam,
                                                  const Rational& eps, double c, std::uint64_t seed,
                                                  SamplingMode mode = SamplingMode::with_replacement) {
  if (fam.chi < 2) throw ParameterError("graph family tester: family chromatic number must be at least 2");
  GraphFamilyTestOutcome r;
  r.outcome = subgraph_test(g, fam.chi, eps, c, seed, mode);
  r.false_reject_bound = false_reject_bound(fam.chi, fam.alpha, g.size());
  r.removal_budget = indistinguishability_bound(fam.chi, fam.alpha, g.size());
  return r;
}

// ---------------------------------------------------------------------------
// Text format: "graph n=<N>" then lines "a -- b".

inline Graph read_graph(std::istream& in, const std::string& source = "<input>") {
  auto file = io_detail::read_pairs(in, source, "graph", "--");
  return Graph::from_edges(file.n, file.pairs);
}

inline Graph parse_graph(const std::string& text, const std::string& source = "<string>") {
  std::istringstream in(text);
  return read_graph(in, source);
}

inline Graph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return read_graph(in, path);
}

inline void write_graph(std::ostream& out, const Graph& g) {
  out << "graph n=" << g.size() << '\n';
  for (auto e : g.edges()) out << e.lo << " -- " << e.hi << '\n';
}

}  // namespace posetest
