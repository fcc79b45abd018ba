#pragma once

#include <charconv>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "posetest/comparability.hpp"
#include "posetest/config.hpp"
#include "posetest/error.hpp"
#include "posetest/generators.hpp"
#include "posetest/homomorphism.hpp"
#include "posetest/poset.hpp"
#include "posetest/poset_io.hpp"
#include "posetest/rational.hpp"
#include "posetest/removal.hpp"
#include "posetest/rng.hpp"
#include "posetest/testers.hpp"

namespace posetest {

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "density-inequality", "chain-removal",      "sharpness-2-2", "sharpness-2-4",
      "subposet-detection", "family-false-reject", "closeness",
  };
  return names;
}

/// key=value configuration. Grid keys (h, w, eps, c, n) may repeat or hold
/// comma-separated lists; an absent grid key falls back to the experiment's
/// default list.
struct ExperimentConfig {
  std::string experiment;
  std::vector<std::size_t> h, w, n;
  std::vector<Rational> eps;
  std::vector<double> c;
  std::uint64_t trials = 100;
  std::optional<std::uint64_t> seed;
  std::string output;
  std::string source = "<config>";
};

namespace exp_detail {

inline std::vector<std::string_view> split_list(std::string_view v) {
  std::vector<std::string_view> out;
  while (true) {
    auto pos = v.find(',');
    out.push_back(io_detail::trim(v.substr(0, pos)));
    if (pos == std::string_view::npos) break;
    v.remove_prefix(pos + 1);
  }
  return out;
}

inline std::uint64_t parse_u64(std::string_view s, const std::string& src, std::size_t line, std::string_view key) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty())
    throw ConfigError(src, line, std::string(key) + ": expected a non-negative integer, got '" + std::string(s) + "'");
  return v;
}

/// "ln2" or a decimal; c is a real parameter, unlike eps.
inline double parse_c(std::string_view s, const std::string& src, std::size_t line) {
  if (s == "ln2") return std::log(2.0);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || s.empty() || !(v > 0.0) || !std::isfinite(v))
    throw ConfigError(src, line, "c: expected a positive number or 'ln2', got '" + std::string(s) + "'");
  return v;
}

}  // namespace exp_detail

inline double parse_c_value(std::string_view s) { return exp_detail::parse_c(s, "<argument>", 0); }

inline ExperimentConfig read_experiment_config(std::istream& in, const std::string& source = "<config>") {
  ExperimentConfig cfg;
  cfg.source = source;
  std::string raw;
  std::size_t lineno = 0;
  bool have_experiment = false, have_trials = false, have_output = false;
  while (std::getline(in, raw)) {
    ++lineno;
    auto body = io_detail::strip_comment(raw);
    if (body.empty()) continue;
    auto eq = body.find('=');
    if (eq == std::string_view::npos) throw ConfigError(source, lineno, "expected 'key = value'");
    auto key = io_detail::trim(body.substr(0, eq));
    auto value = io_detail::trim(body.substr(eq + 1));
    if (value.empty()) throw ConfigError(source, lineno, std::string(key) + ": missing value");
    auto once = [&](bool& seen) {
      if (seen) throw ConfigError(source, lineno, std::string(key) + " given more than once");
      seen = true;
    };
    if (key == "experiment") {
      once(have_experiment);
      cfg.experiment = std::string(value);
      bool known = false;
      for (const auto& name : experiment_names()) known = known || name == cfg.experiment;
      if (!known) throw ConfigError(source, lineno, "unknown experiment '" + cfg.experiment + "'");
    } else if (key == "trials") {
      once(have_trials);
      cfg.trials = exp_detail::parse_u64(value, source, lineno, key);
      if (cfg.trials == 0) throw ConfigError(source, lineno, "trials must be at least 1");
    } else if (key == "seed") {
      if (cfg.seed) throw ConfigError(source, lineno, "seed given more than once");
      cfg.seed = exp_detail::parse_u64(value, source, lineno, key);
    } else if (key == "output") {
      once(have_output);
      cfg.output = std::string(value);
    } else if (key == "h" || key == "w" || key == "n") {
      auto& list = key == "h" ? cfg.h : key == "w" ? cfg.w : cfg.n;
      for (auto item : exp_detail::split_list(value)) {
        auto v = exp_detail::parse_u64(item, source, lineno, key);
        if (v == 0) throw ConfigError(source, lineno, std::string(key) + " must be positive");
        list.push_back(static_cast<std::size_t>(v));
      }
    } else if (key == "eps") {
      for (auto item : exp_detail::split_list(value)) {
        try {
          auto e = parse_rational(std::string(item));
          if (e <= 0) throw ParameterError("eps must be positive");
          cfg.eps.push_back(e);
        } catch (const ParameterError& err) {
          throw ConfigError(source, lineno, std::string("eps: ") + err.what());
        }
      }
    } else if (key == "c") {
      for (auto item : exp_detail::split_list(value)) cfg.c.push_back(exp_detail::parse_c(item, source, lineno));
    } else {
      throw ConfigError(source, lineno, "unknown key '" + std::string(key) + "'");
    }
  }
  const std::size_t end = lineno == 0 ? 1 : lineno;
  if (!have_experiment) throw ConfigError(source, end, "missing key 'experiment'");
  if (!cfg.seed) throw ConfigError(source, end, "missing key 'seed' (seeds are mandatory)");
  return cfg;
}

inline ExperimentConfig parse_experiment_config(const std::string& text, const std::string& source = "<string>") {
  std::istringstream in(text);
  return read_experiment_config(in, source);
}

inline ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path, 0, "cannot open file");
  return read_experiment_config(in, path);
}

/// One CSV row. Fields that do not apply to an experiment are left empty.
struct CsvRow {
  std::string experiment;
  std::optional<std::size_t> h, w;
  std::optional<Rational> eps;
  std::optional<double> c;
  std::size_t n = 0;
  std::uint64_t trials = 0;
  double observed = 0.0;
  double bound = 0.0;
  bool pass = false;
};

inline constexpr std::string_view csv_header = "experiment,h,w,eps_num,eps_den,c,n,trials,observed,bound,pass";

/// Shortest round-trip representation, locale independent.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc{}) throw std::logic_error("to_chars failed");
  return std::string(buf, ptr);
}

inline std::string format_csv_row(const CsvRow& r) {
  std::string s = r.experiment;
  auto field = [&](const std::string& v) {
    s += ',';
    s += v;
  };
  field(r.h ? std::to_string(*r.h) : "");
  field(r.w ? std::to_string(*r.w) : "");
  field(r.eps ? numerator(*r.eps).str() : "");
  field(r.eps ? denominator(*r.eps).str() : "");
  field(r.c ? format_double(*r.c) : "");
  field(std::to_string(r.n));
  field(std::to_string(r.trials));
  field(format_double(r.observed));
  field(format_double(r.bound));
  field(r.pass ? "true" : "false");
  return s;
}

namespace exp_detail {

// By value: the fallback is usually a temporary inside a range-for.
template <class T>
std::vector<T> or_default(const std::vector<T>& given, std::vector<T> fallback) {
  return given.empty() ? fallback : given;
}

inline double binomial_sigma(double p, std::uint64_t trials) {
  return std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
}

inline bool chain_free(const Poset& p, std::size_t h) { return height(p) < h; }

// A survivor is re-validated from scratch, not just trusted.
inline bool survivor_valid(const Poset& s) {
  try {
    std::vector<Bitset> rows(s.successor_rows().begin(), s.successor_rows().end());
    (void)Poset::from_closed(std::move(rows));
    return true;
  } catch (const Error&) {
    return false;
  }
}

struct Runner {
  const ExperimentConfig& cfg;
  const OracleLimits& limits;
  std::vector<CsvRow> rows;
  std::uint64_t grid_index = 0;

  std::uint64_t next_seed() { return derive_seed(*cfg.seed, grid_index++); }

  CsvRow row() const {
    CsvRow r;
    r.experiment = cfg.experiment;
    r.trials = cfg.trials;
    return r;
  }

  // Failures of the three density inequalities over random posets.
  void density_inequality() {
    for (auto h : or_default(cfg.h, {2, 3}))
      for (auto w : or_default(cfg.w, {1, 2}))
        for (auto n : or_default(cfg.n, {10})) {
          const auto seed = next_seed();
          std::uint64_t failures = 0;
          for (std::uint64_t t = 0; t < cfg.trials; ++t) {
            auto p = random_mixed(n, derive_seed(seed, t));
            if (!check_density_inequality(h, w, p, limits.search_budget).all_hold()) ++failures;
          }
          auto r = row();
          r.h = h, r.w = w, r.n = n;
          r.observed = static_cast<double>(failures);
          r.bound = 0.0;
          r.pass = failures == 0;
          rows.push_back(r);
        }
  }

  // Largest removed fraction among posets meeting the density hypothesis.
  void chain_removal_grid() {
    for (auto h : or_default(cfg.h, {2, 3}))
      for (const auto& eps : or_default(cfg.eps, {Rational(1, 2)}))
        for (auto n : or_default(cfg.n, {12})) {
          const auto seed = next_seed();
          double worst = 0.0;
          bool ok = true;
          for (std::uint64_t t = 0; t < cfg.trials; ++t) {
            auto p = random_mixed(n, derive_seed(seed, t));
            auto out = chain_removal(p, eps, h, limits.search_budget);
            if (auto* res = std::get_if<RemovalResult>(&out)) {
              worst = std::max(worst, to_double(res->budget_fraction));
              ok = ok && res->budget_fraction <= eps && chain_free(res->survivor, h) && survivor_valid(res->survivor);
            }
          }
          auto r = row();
          r.h = h, r.eps = eps, r.n = n;
          r.observed = worst;
          r.bound = to_double(eps);
          r.pass = ok;
          rows.push_back(r);
        }
  }

  // Union of 1/eps chains: density below eps^(h-1)/h!, and the brute-force
  // minimum matches the closed form when the instance is small enough.
  void union_sharpness() {
    for (auto h : or_default(cfg.h, {2, 3}))
      for (const auto& eps : or_default(cfg.eps, {Rational(1, 2), Rational(1, 3)})) {
        if (numerator(eps) != 1) throw ConfigError(cfg.source, 0, "sharpness-2-2: eps must be 1/k, got " + to_string(eps));
        const auto k = denominator(eps).convert_to<std::size_t>();
        std::vector<std::size_t> sizes = cfg.n;
        if (sizes.empty()) sizes = {k * h * (h - 1), 2 * k * h * (h - 1)};
        for (auto n : sizes) {
          (void)next_seed();
          if (n % k != 0 || (n / k) % (h - 1) != 0)
            throw ConfigError(cfg.source, 0,
                              "sharpness-2-2: n=" + std::to_string(n) + " is not k*(h-1)*m for eps=" + to_string(eps));
          const auto len = n / k;
          auto p = union_of_chains(k, len);
          const Rational t = density(chain(h), p, limits.search_budget);
          Rational factorial = 1;
          for (std::size_t i = 2; i <= h; ++i) factorial *= i;
          const Rational bound = pow(eps, static_cast<unsigned>(h - 1)) / factorial;
          bool ok = t < bound;
          if (p.edge_count() <= limits.removal_max_edges)
            ok = ok && BigInt(min_removal_oracle(p, h, limits)) == min_removal_union_of_chains(k, len, h);
          auto r = row();
          r.h = h, r.eps = eps, r.n = n;
          r.trials = 1;
          r.observed = to_double(t);
          r.bound = to_double(bound);
          r.pass = ok;
          rows.push_back(r);
        }
      }
  }

  // Layered construction: accept rate with floor(c/(2 eps)) samples against
  // e^-c, plus the brute-force minimum against eps w^2 when small.
  void layered_sharpness() {
    for (auto h : or_default(cfg.h, {2}))
      for (auto w : or_default(cfg.w, {2, 4}))
        for (const auto& eps : or_default(cfg.eps, {Rational(1, 2)}))
          for (double c : or_default(cfg.c, {0.5, 1.0, 1.5})) {
            const auto seed = next_seed();
            if (!(c < to_double(eps * w))) continue;  // outside the construction's range
            auto p = sharp_layered(h, w, eps);
            bool ok = true;
            if (p.edge_count() <= limits.removal_max_edges)
              ok = BigInt(min_removal_oracle(p, h, limits)) == min_removal_sharp_layered(h, w, eps);
            const auto s = static_cast<std::size_t>(std::floor(c / (2.0 * to_double(eps))));
            auto r = row();
            r.h = h, r.w = w, r.eps = eps, r.c = c, r.n = p.size();
            r.bound = std::exp(-c);
            if (s == 0) {
              // An empty sample never contains C_h.
              r.trials = 0;
              r.observed = 1.0;
            } else {
              std::uint64_t accepts = 0;
              for (std::uint64_t t = 0; t < cfg.trials; ++t)
                if (!subposet_test(p, h, s, derive_seed(seed, t), SamplingMode::without_replacement).rejected())
                  ++accepts;
              r.observed = static_cast<double>(accepts) / static_cast<double>(cfg.trials);
              ok = ok && r.observed >= r.bound - 2.0 * binomial_sigma(r.bound, cfg.trials);
            }
            r.pass = ok;
            rows.push_back(r);
          }
  }

  // Rejection rate on the layered construction at its certified farness.
  void subposet_detection() {
    for (auto h : or_default(cfg.h, {2, 3}))
      for (auto w : or_default(cfg.w, {4}))
        for (const auto& eps : or_default(cfg.eps, {Rational(1, 2)}))
          for (double c : or_default(cfg.c, {std::log(2.0), 1.0, 2.0})) {
            const auto seed = next_seed();
            auto p = sharp_layered(h, w, eps);
            const Rational far = eps / ((eps + (h - 1)) * (eps + (h - 1)));
            const auto s = subposet_test_samples(h, far, c);
            std::uint64_t rejects = 0;
            for (std::uint64_t t = 0; t < cfg.trials; ++t)
              if (subposet_test(p, h, s, derive_seed(seed, t)).rejected()) ++rejects;
            auto r = row();
            r.h = h, r.w = w, r.eps = far, r.c = c, r.n = p.size();
            r.observed = static_cast<double>(rejects) / static_cast<double>(cfg.trials);
            r.bound = 1.0 - std::exp(-c);
            r.pass = r.observed >= r.bound - 3.0 * binomial_sigma(r.bound, cfg.trials);
            rows.push_back(r);
          }
  }

  // Family {K_{h x w}} against a pattern-free union of (h+2)-chains.
  void family_false_reject() {
    for (auto h : or_default(cfg.h, {3}))
      for (auto w : or_default(cfg.w, {2}))
        for (const auto& eps : or_default(cfg.eps, {Rational(1, 4)}))
          for (double c : or_default(cfg.c, {1.0}))
            for (auto n : or_default(cfg.n, {40, 80, 160, 320})) {
              const auto seed = next_seed();
              if (w < 2) throw ConfigError(cfg.source, 0, "family-false-reject: w must be at least 2");
              const auto len = h + 2;
              if (n < len) throw ConfigError(cfg.source, 0, "family-false-reject: n too small");
              auto fam = make_family({k_hw(h, w)});
              auto p = union_of_chains(n / len, len);
              std::uint64_t rejects = 0;
              double bound = 0.0;
              for (std::uint64_t t = 0; t < cfg.trials; ++t) {
                auto out = family_tester(p, fam, eps, c, derive_seed(seed, t));
                if (out.outcome.rejected()) ++rejects;
                bound = std::min(1.0, out.false_reject_bound);
              }
              auto r = row();
              r.h = h, r.w = w, r.eps = eps, r.c = c, r.n = p.size();
              r.observed = static_cast<double>(rejects) / static_cast<double>(cfg.trials);
              r.bound = bound;
              r.pass = r.observed <= bound + 3.0 * binomial_sigma(std::min(bound, 0.5), cfg.trials);
              rows.push_back(r);
            }
  }

  // Worst ratio of removed pairs to n^2/(2h-2) + n/2 over random posets.
  void closeness() {
    for (auto h : or_default(cfg.h, {2, 3, 4, 5, 6}))
      for (auto n : or_default(cfg.n, {50})) {
        const auto seed = next_seed();
        const double budget = static_cast<double>(n) * static_cast<double>(n) / static_cast<double>(2 * h - 2) +
                              static_cast<double>(n) / 2.0;
        double worst = 0.0;
        bool ok = true;
        for (std::uint64_t t = 0; t < cfg.trials; ++t) {
          auto p = random_mixed(n, derive_seed(seed, t));
          auto res = interval_closeness(p, h);
          worst = std::max(worst, static_cast<double>(res.removed()) / budget);
          // Integer form of removed <= n^2/(2h-2) + n/2.
          ok = ok && res.removed() * 2 * (2 * h - 2) <= 2 * n * n + n * (2 * h - 2) && chain_free(res.survivor, h);
        }
        auto r = row();
        r.h = h, r.n = n;
        r.observed = worst;
        r.bound = 1.0;
        r.pass = ok;
        rows.push_back(r);
      }
  }
};

}  // namespace exp_detail

/// Runs the configured grid and returns the rows in grid order.
inline std::vector<CsvRow> run_experiment_rows(const ExperimentConfig& cfg,
                                               const OracleLimits& limits = default_limits()) {
  if (!cfg.seed) throw ConfigError(cfg.source, 0, "missing key 'seed' (seeds are mandatory)");
  if (cfg.trials == 0) throw ConfigError(cfg.source, 0, "trials must be at least 1");
  exp_detail::Runner run{cfg, limits, {}, 0};
  const auto& e = cfg.experiment;
  if (e == "density-inequality") run.density_inequality();
  else if (e == "chain-removal") run.chain_removal_grid();
  else if (e == "sharpness-2-2") run.union_sharpness();
  else if (e == "sharpness-2-4") run.layered_sharpness();
  else if (e == "subposet-detection") run.subposet_detection();
  else if (e == "family-false-reject") run.family_false_reject();
  else if (e == "closeness") run.closeness();
  else throw ConfigError(cfg.source, 0, "unknown experiment '" + e + "'");
  if (run.rows.empty()) throw ConfigError(cfg.source, 0, "experiment grid is empty");
  return run.rows;
}

inline std::string format_csv(const std::vector<CsvRow>& rows) {
  std::string out(csv_header);
  out += '\n';
  for (const auto& r : rows) {
    out += format_csv_row(r);
    out += '\n';
  }
  return out;
}

/// Writes next to the target and renames, so a failed run never leaves a
/// partial file behind.
inline void write_file_atomically(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".partial";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError(path, 0, "cannot open output for writing");
    out << content;
    out.flush();
    if (!out) {
      out.close();
      std::error_code ec;
      fs::remove(tmp, ec);
      throw ConfigError(path, 0, "write failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp, ec);
    throw ConfigError(path, 0, "cannot rename output into place");
  }
}

/// Runs the experiment and writes the CSV to cfg.output; returns the rows.
inline std::vector<CsvRow> run_experiment(const ExperimentConfig& cfg, const OracleLimits& limits = default_limits()) {
  if (cfg.output.empty()) throw ConfigError(cfg.source, 0, "missing key 'output'");
  auto rows = run_experiment_rows(cfg, limits);
  write_file_atomically(cfg.output, format_csv(rows));
  return rows;
}

}  // namespace posetest
