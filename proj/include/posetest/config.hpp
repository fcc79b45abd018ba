#pragma once

#include <cstddef>
#include <cstdint>
#include <cstdlib>
#include <sstream>
#include <string>

#include "posetest/error.hpp"

namespace posetest {

/// Size caps for the exhaustive oracles and search budgets.
struct OracleLimits {
  std::size_t isomorphism_max_n = 10;
  std::size_t cover_max_n = 8;
  std::size_t removal_max_edges = 20;
  std::size_t graph_max_n = 16;
  std::uint64_t search_budget = 2'000'000'000ULL;
  std::uint64_t max_iterations = 10'000'000ULL;

  /// Defaults overridden by POSETEST_ORACLE_CAPS, a comma-separated list
  /// of key=value with keys iso, cover, removal_edges, graph, budget,
  /// iterations.
  static OracleLimits from_env() {
    OracleLimits limits;
    const char* env = std::getenv("POSETEST_ORACLE_CAPS");
    if (env == nullptr) return limits;
    std::stringstream in(env);
    std::string item;
    while (std::getline(in, item, ',')) {
      if (item.empty()) continue;
      auto eq = item.find('=');
      if (eq == std::string::npos)
        throw ParameterError("POSETEST_ORACLE_CAPS: expected key=value, got '" + item + "'");
      std::string key = item.substr(0, eq);
      std::uint64_t value = 0;
      try {
        value = std::stoull(item.substr(eq + 1));
      } catch (const std::exception&) {
        throw ParameterError("POSETEST_ORACLE_CAPS: bad value for '" + key + "'");
      }
      if (key == "iso") limits.isomorphism_max_n = value;
      else if (key == "cover") limits.cover_max_n = value;
      else if (key == "removal_edges") limits.removal_max_edges = value;
      else if (key == "graph") limits.graph_max_n = value;
      else if (key == "budget") limits.search_budget = value;
      else if (key == "iterations") limits.max_iterations = value;
      else throw ParameterError("POSETEST_ORACLE_CAPS: unknown key '" + key + "'");
    }
    return limits;
  }
};

inline const OracleLimits& default_limits() {
  static const OracleLimits limits = OracleLimits::from_env();
  return limits;
}

}  // namespace posetest
