#pragma once

#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "posetest/error.hpp"
#include "posetest/poset.hpp"
#include "posetest/rational.hpp"
#include "posetest/rng.hpp"

// Named poset families. Layered constructions number elements layer-major,
// bottom layer first.

namespace posetest {

inline Poset antichain(std::size_t n) { return Poset::from_closed(std::vector<Bitset>(n, Bitset(n))); }

inline Poset chain(std::size_t h) {
  std::vector<Bitset> succ(h, Bitset(h));
  for (std::size_t x = 0; x < h; ++x)
    for (std::size_t y = x + 1; y < h; ++y) succ[x].set(y);
  return Poset::from_closed(std::move(succ));
}

/// Stacked antichains of the given sizes; x < y iff layer(x) < layer(y).
inline Poset complete_multipartite(std::span<const std::size_t> widths) {
  std::size_t n = 0;
  for (auto w : widths) {
    if (w == 0) throw ParameterError("complete_multipartite: layer width must be positive");
    n += w;
  }
  std::vector<Bitset> succ(n, Bitset(n));
  std::size_t start = 0;
  for (auto w : widths) {
    for (std::size_t x = start; x < start + w; ++x)
      for (std::size_t y = start + w; y < n; ++y) succ[x].set(y);
    start += w;
  }
  return Poset::from_closed(std::move(succ));
}

inline Poset complete_multipartite(std::initializer_list<std::size_t> widths) {
  return complete_multipartite(std::span<const std::size_t>(widths.begin(), widths.size()));
}

/// h layers of width w.
inline Poset k_hw(std::size_t h, std::size_t w) {
  std::vector<std::size_t> widths(h, w);
  return complete_multipartite(widths);
}

/// h layers alternating w, 1, w, 1, ... starting with w at the bottom.
inline Poset alternating_layers(std::size_t h, std::size_t w) {
  std::vector<std::size_t> widths(h);
  for (std::size_t i = 0; i < h; ++i) widths[i] = (i % 2 == 0) ? w : 1;
  return complete_multipartite(widths);
}

/// k disjoint chains of len elements; chain i holds i*len .. i*len+len-1.
inline Poset union_of_chains(std::size_t k, std::size_t len) {
  if (k == 0 || len == 0) throw ParameterError("union_of_chains: k and len must be positive");
  const auto n = k * len;
  std::vector<Bitset> succ(n, Bitset(n));
  for (std::size_t c = 0; c < k; ++c)
    for (std::size_t i = 0; i < len; ++i)
      for (std::size_t j = i + 1; j < len; ++j) succ[c * len + i].set(c * len + j);
  return Poset::from_closed(std::move(succ));
}

/// Complete multipartite poset with a bottom layer of eps*w elements under
/// h-1 layers of w elements.
inline Poset sharp_layered(std::size_t h, std::size_t w, const Rational& eps) {
  if (h < 2) throw ParameterError("sharp_layered: h must be at least 2");
  if (w < 1) throw ParameterError("sharp_layered: w must be positive");
  Rational bottom = eps * w;
  if (!is_integer(bottom) || bottom <= 0)
    throw ParameterError("sharp_layered: eps*w = " + to_string(bottom) + " is not a positive integer");
  std::vector<std::size_t> widths(h, w);
  widths[0] = numerator(bottom).convert_to<std::size_t>();
  return complete_multipartite(widths);
}

inline void check_probability(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ParameterError("probability must lie in [0, 1]");
}

/// Elements get uniform random layers; each upward cross-layer pair is kept
/// with probability p; the result is the transitive closure.
inline Poset random_layered(std::size_t n, std::size_t layers, double p, std::uint64_t seed) {
  check_probability(p);
  if (layers < 1) throw ParameterError("random_layered: need at least one layer");
  Rng rng(seed);
  std::vector<std::size_t> layer(n);
  for (auto& l : layer) l = rng.uniform_below(layers);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      if (layer[x] < layer[y] && rng.bernoulli(p)) pairs.emplace_back(x, y);
  return Poset::from_relations(n, pairs);
}

/// Random permutation as hidden total order; each forward pair is kept with
/// probability p; the result is the transitive closure.
inline Poset random_closure(std::size_t n, double p, std::uint64_t seed) {
  check_probability(p);
  Rng rng(seed);
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[rng.uniform_below(i)]);
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.bernoulli(p)) pairs.emplace_back(perm[i], perm[j]);
  return Poset::from_relations(n, pairs);
}

/// Corpus helper: alternates between the two random models with a random
/// edge probability so both sparse and dense posets show up.
inline Poset random_mixed(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  const double p = rng.uniform_real();
  const auto inner = rng.next();
  if (rng.uniform_below(2) == 0) return random_closure(n, p * p, inner);
  return random_layered(n, 1 + rng.uniform_below(6), p, inner);
}

enum class GeneratorKind {
  chain,
  antichain,
  multipartite,
  k_hw,
  union_of_chains,
  sharp_layered,
  random_layered,
  random_closure,
};

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::chain;
  std::size_t n = 0;       // chain/antichain size, random sizes
  std::size_t h = 0;       // layers for k_hw, sharp_layered
  std::size_t w = 0;       // layer width
  std::size_t k = 0;       // number of chains
  std::size_t len = 0;     // chain length
  std::size_t layers = 1;  // random_layered
  std::vector<std::size_t> widths;
  Rational eps = 0;
  double p = 0.0;
  std::uint64_t seed = 0;
};

inline GeneratorKind parse_generator_kind(const std::string& name) {
  if (name == "chain") return GeneratorKind::chain;
  if (name == "antichain") return GeneratorKind::antichain;
  if (name == "multipartite") return GeneratorKind::multipartite;
  if (name == "k_hw" || name == "khw") return GeneratorKind::k_hw;
  if (name == "union_of_chains") return GeneratorKind::union_of_chains;
  if (name == "sharp_layered") return GeneratorKind::sharp_layered;
  if (name == "random_layered") return GeneratorKind::random_layered;
  if (name == "random_closure") return GeneratorKind::random_closure;
  throw ParameterError("unknown generator kind '" + name + "'");
}

inline Poset generate(const GeneratorSpec& spec) {
  switch (spec.kind) {
    case GeneratorKind::chain: return chain(spec.n);
    case GeneratorKind::antichain: return antichain(spec.n);
    case GeneratorKind::multipartite: return complete_multipartite(spec.widths);
    case GeneratorKind::k_hw: return k_hw(spec.h, spec.w);
    case GeneratorKind::union_of_chains: return union_of_chains(spec.k, spec.len);
    case GeneratorKind::sharp_layered: return sharp_layered(spec.h, spec.w, spec.eps);
    case GeneratorKind::random_layered: return random_layered(spec.n, spec.layers, spec.p, spec.seed);
    case GeneratorKind::random_closure: return random_closure(spec.n, spec.p, spec.seed);
  }
  throw ParameterError("unhandled generator kind");
}

}  // namespace posetest
