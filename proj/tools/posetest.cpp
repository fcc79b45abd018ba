// Command-line front end: gen | density | remove | test | experiment.
// Exit codes: 0 accept/success, 1 reject, 2 error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "posetest/posetest.hpp"

namespace pt = posetest;
using nlohmann::ordered_json;

namespace {

constexpr int kAccept = 0;
constexpr int kReject = 1;
constexpr int kError = 2;

// Errors without a file location use this pseudo source.
const char* const kArgs = "<args>";

std::vector<std::size_t> parse_index_list(const std::string& s, const std::string& what) {
  std::vector<std::size_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t v = 0;
    if (!pt::io_detail::parse_index(pt::io_detail::trim(item), v))
      throw pt::ParseError(kArgs, 0, what + ": bad number '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw pt::ParseError(kArgs, 0, what + ": empty list");
  return out;
}

// chain:h, antichain:n, khw:h,w, multipartite:a,b,..., or a poset file.
pt::Poset parse_pattern(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const auto kind = spec.substr(0, colon);
    const auto args = parse_index_list(spec.substr(colon + 1), "--pattern " + kind);
    if (kind == "multipartite") return pt::complete_multipartite(args);
    const std::size_t arity = kind == "khw" ? 2 : 1;
    if ((kind == "chain" || kind == "antichain" || kind == "khw") && args.size() != arity)
      throw pt::ParseError(kArgs, 0, "--pattern " + kind + " takes " + std::to_string(arity) + " argument(s)");
    if (kind == "chain") return pt::chain(args[0]);
    if (kind == "antichain") return pt::antichain(args[0]);
    if (kind == "khw") return pt::k_hw(args[0], args[1]);
    throw pt::ParseError(kArgs, 0, "unknown pattern kind '" + kind + "'");
  }
  return pt::load_poset(spec);
}

// complete:k, cycle:n, comparability of a named poset (chain:h, khw:h,w), or a graph file.
pt::Graph parse_graph_pattern(const std::string& spec) {
  auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const auto kind = spec.substr(0, colon);
    if (kind == "complete" || kind == "cycle") {
      const auto args = parse_index_list(spec.substr(colon + 1), "--pattern " + kind);
      if (args.size() != 1) throw pt::ParseError(kArgs, 0, "--pattern " + kind + " takes 1 argument");
      return kind == "complete" ? pt::complete_graph(args[0]) : pt::cycle_graph(args[0]);
    }
    return pt::comparability_of(parse_pattern(spec));
  }
  return pt::load_graph(spec);
}

pt::Rational parse_eps(const std::string& s, const std::string& flag) {
  try {
    auto e = pt::parse_rational(s);
    if (e <= 0) throw pt::ParameterError("must be positive");
    return e;
  } catch (const pt::ParameterError& err) {
    throw pt::ParseError(kArgs, 0, flag + ": " + err.what());
  }
}

pt::SamplingMode parse_sampling(const std::string& s) {
  if (s == "with") return pt::SamplingMode::with_replacement;
  if (s == "without") return pt::SamplingMode::without_replacement;
  throw pt::ParseError(kArgs, 0, "--sampling must be 'with' or 'without'");
}

void emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  pt::write_file_atomically(path, text);
}

std::string json_rational(const pt::Rational& r) { return pt::to_string(r); }

// ---------------------------------------------------------------------------

struct GenArgs {
  std::string kind;
  std::size_t n = 0, h = 0, w = 0, k = 0, len = 0, layers = 1;
  std::string widths, eps = "0", output, format = "poset";
  double p = 0.5;
  std::uint64_t seed = 0;
};

int run_gen(const GenArgs& a) {
  pt::GeneratorSpec spec;
  spec.kind = pt::parse_generator_kind(a.kind);
  spec.n = a.n, spec.h = a.h, spec.w = a.w, spec.k = a.k, spec.len = a.len, spec.layers = a.layers;
  spec.p = a.p, spec.seed = a.seed;
  if (!a.widths.empty()) spec.widths = parse_index_list(a.widths, "--widths");
  if (spec.kind == pt::GeneratorKind::sharp_layered) spec.eps = parse_eps(a.eps, "--eps");
  auto p = pt::generate(spec);
  std::ostringstream out;
  if (a.format == "dot") pt::write_dot(out, p);
  else if (a.format == "graph") pt::write_graph(out, pt::comparability_of(p));
  else pt::write_poset(out, p);
  emit(a.output, out.str());
  return kAccept;
}

// ---------------------------------------------------------------------------

struct DensityArgs {
  std::string host, pattern, mode = "exact";
  std::uint64_t trials = 10000, seed = 0;
  double delta = 0.05;
  bool comparability = false;
};

int run_density(const DensityArgs& a) {
  const bool exact = a.mode == "exact";
  if (!exact && a.mode != "mc") throw pt::ParseError(kArgs, 0, "--mode must be 'exact' or 'mc'");
  auto host = pt::load_poset(a.host);
  pt::HomDensity d;
  if (a.comparability) {
    auto f = parse_graph_pattern(a.pattern);
    auto g = pt::comparability_of(host);
    d = exact ? pt::graph_density_exact(f, g, pt::default_limits().search_budget)
              : pt::graph_density_mc(f, g, a.trials, a.seed, a.delta);
  } else {
    auto q = parse_pattern(a.pattern);
    d = exact ? pt::density_exact(q, host) : pt::density_mc(q, host, a.trials, a.seed, a.delta);
  }
  ordered_json j;
  j["pattern"] = a.pattern;
  j["host"] = a.host;
  j["graph"] = a.comparability;
  if (exact) {
    j["mode"] = "exact";
    j["count"] = d.count.str();
    j["total"] = d.total.str();
    j["value"] = json_rational(d.value());
    j["estimate"] = d.estimate;
  } else {
    j["mode"] = "mc";
    j["trials"] = d.trials;
    j["successes"] = d.successes;
    j["estimate"] = d.estimate;
    j["delta"] = d.delta;
    j["ci_halfwidth"] = d.ci_halfwidth;
    j["seed"] = a.seed;
  }
  std::cout << j.dump() << '\n';
  return kAccept;
}

// ---------------------------------------------------------------------------

struct RemoveArgs {
  std::string host, mode = "rank", gamma, eps, pattern, output;
  std::size_t h = 0;
};

ordered_json removal_stats(const pt::RemovalResult& r, std::size_t n) {
  ordered_json j;
  j["n"] = n;
  j["h"] = r.h;
  j["removed"] = r.removed();
  j["removed_same_rank"] = r.removed_same_rank.size();
  j["removed_high_rank"] = r.removed_high_rank.size();
  j["budget_fraction"] = json_rational(r.budget_fraction);
  if (r.ranks) {
    if (r.ranks->gamma != 0) j["gamma"] = json_rational(r.ranks->gamma);
    j["rank_histogram"] = r.ranks->histogram();
  }
  if (r.density) j["density"] = json_rational(*r.density);
  j["survivor_height"] = pt::height(r.survivor);
  return j;
}

int run_remove(const RemoveArgs& a) {
  auto p = pt::load_poset(a.host);
  ordered_json stats;
  stats["mode"] = a.mode;
  std::optional<pt::Poset> survivor;
  if (a.mode == "rank") {
    if (!a.gamma.empty() == (!a.eps.empty()))
      throw pt::ParseError(kArgs, 0, "--mode rank needs exactly one of --gamma or --eps");
    std::optional<pt::RemovalOutcome> outcome;
    if (!a.gamma.empty()) {
      if (a.h == 0) throw pt::ParseError(kArgs, 0, "--gamma needs --h");
      const auto gamma = parse_eps(a.gamma, "--gamma");
      pt::check_gamma(gamma);
      outcome = pt::edge_removal(p, gamma, a.h);
    } else if (!a.pattern.empty()) {
      outcome = pt::poset_removal(p, parse_pattern(a.pattern), parse_eps(a.eps, "--eps"));
    } else {
      if (a.h == 0) throw pt::ParseError(kArgs, 0, "--eps needs --h or --pattern");
      outcome = pt::chain_removal(p, parse_eps(a.eps, "--eps"), a.h);
    }
    if (auto* too_high = std::get_if<pt::DensityTooHigh>(&*outcome)) {
      stats["applied"] = false;
      stats["density"] = json_rational(too_high->density);
      stats["threshold"] = json_rational(too_high->threshold);
      std::cout << stats.dump() << '\n';
      return kAccept;
    }
    const auto& r = std::get<pt::RemovalResult>(*outcome);
    stats["applied"] = true;
    stats.update(removal_stats(r, p.size()));
    survivor = r.survivor;
  } else if (a.mode == "interval") {
    if (a.h == 0) throw pt::ParseError(kArgs, 0, "--mode interval needs --h");
    auto r = pt::interval_closeness(p, a.h);
    stats.update(removal_stats(r, p.size()));
    survivor = r.survivor;
  } else if (a.mode == "oracle") {
    if (a.h == 0) throw pt::ParseError(kArgs, 0, "--mode oracle needs --h");
    auto m = pt::min_removal_witness(p, a.h);
    stats["n"] = p.size();
    stats["h"] = a.h;
    stats["removed"] = m.count;
    ordered_json pairs = ordered_json::array();
    for (auto e : m.removed) pairs.push_back({e.lo, e.hi});
    stats["removal_set"] = pairs;
    survivor = pt::remove_edges(p, m.removed);
  } else {
    throw pt::ParseError(kArgs, 0, "--mode must be rank, interval or oracle");
  }
  if (!a.output.empty()) emit(a.output, pt::format_poset(*survivor));
  std::cout << stats.dump() << '\n';
  return kAccept;
}

// ---------------------------------------------------------------------------

struct TestArgs {
  std::string host, mode = "subposet", pattern, eps = "1/2", c = "1", sampling = "with", promise_source, csv;
  std::vector<std::string> family;
  std::size_t h = 0, samples = 0;
  std::uint64_t seed = 0, trials = 1;
  bool comparability = false;
};

std::string verdict_name(const pt::TestOutcome& o) { return o.rejected() ? "reject" : "accept"; }

int run_test(const TestArgs& a) {
  const auto mode = parse_sampling(a.sampling);
  const double c = pt::parse_c_value(a.c);
  const auto eps = parse_eps(a.eps, "--eps");

  std::function<pt::TestOutcome(std::uint64_t)> trial;
  std::optional<double> false_reject;

  if (a.comparability) {
    pt::ComparabilityGraph g;
    if (!a.promise_source.empty()) g = pt::with_promise(pt::load_graph(a.host), pt::load_poset(a.promise_source));
    else g = pt::from_poset(pt::load_poset(a.host));
    if (a.mode == "subposet") {
      std::size_t chi = a.h;
      if (chi == 0) {
        if (a.pattern.empty()) throw pt::ParseError(kArgs, 0, "--mode subposet needs --h or --pattern");
        chi = pt::chromatic_number_exact(parse_graph_pattern(a.pattern));
      }
      const auto s = a.samples ? a.samples : pt::subposet_test_samples(chi, eps, c);
      trial = [=](std::uint64_t seed) { return pt::subgraph_test(g, chi, s, seed, mode); };
    } else if (a.mode == "family") {
      if (a.family.empty()) throw pt::ParseError(kArgs, 0, "--mode family needs --family");
      std::vector<pt::Graph> members;
      for (const auto& f : a.family) members.push_back(parse_graph_pattern(f));
      auto fam = pt::make_graph_family(std::move(members));
      false_reject = pt::false_reject_bound(fam.chi, fam.alpha, g.size());
      trial = [=](std::uint64_t seed) { return pt::graph_family_tester(g, fam, eps, c, seed, mode).outcome; };
    } else {
      throw pt::ParseError(kArgs, 0, "--comparability supports --mode subposet or family");
    }
  } else {
    auto p = pt::load_poset(a.host);
    if (a.mode == "basic" || a.mode == "iterated") {
      if (a.pattern.empty()) throw pt::ParseError(kArgs, 0, "--mode " + a.mode + " needs --pattern");
      auto q = parse_pattern(a.pattern);
      if (a.mode == "basic") trial = [=](std::uint64_t seed) { return pt::basic_test(p, q, seed, mode); };
      else
        trial = [=](std::uint64_t seed) {
          return pt::iterated_basic_test(p, q, eps, seed, pt::default_limits(), mode);
        };
    } else if (a.mode == "subposet") {
      std::size_t h = a.h;
      if (h == 0) {
        if (a.pattern.empty()) throw pt::ParseError(kArgs, 0, "--mode subposet needs --h or --pattern");
        h = pt::height(parse_pattern(a.pattern));
      }
      const auto s = a.samples ? a.samples : pt::subposet_test_samples(h, eps, c);
      trial = [=](std::uint64_t seed) { return pt::subposet_test(p, h, s, seed, mode); };
    } else if (a.mode == "family") {
      if (a.family.empty()) throw pt::ParseError(kArgs, 0, "--mode family needs --family");
      std::vector<pt::Poset> members;
      for (const auto& f : a.family) members.push_back(parse_pattern(f));
      auto fam = pt::make_family(std::move(members));
      false_reject = pt::false_reject_bound(fam.h, fam.w, p.size());
      trial = [=](std::uint64_t seed) { return pt::family_tester(p, fam, eps, c, seed, mode).outcome; };
    } else {
      throw pt::ParseError(kArgs, 0, "--mode must be basic, iterated, subposet or family");
    }
  }

  if (a.trials == 0) throw pt::ParseError(kArgs, 0, "--trials must be at least 1");
  if (a.trials == 1) {
    auto o = trial(a.seed);
    ordered_json j;
    j["verdict"] = verdict_name(o);
    j["seed"] = a.seed;
    j["samples_used"] = o.samples_used;
    j["sample_trace"] = o.sample_trace;
    if (o.witness) j["witness"] = o.witness->map;
    if (false_reject) j["false_reject_bound"] = *false_reject;
    std::cout << j.dump() << '\n';
    return o.rejected() ? kReject : kAccept;
  }
  // Repeated trials: trial i runs with derive_seed(seed, i).
  std::string rows = "seed,verdict,samples_used\n";
  std::uint64_t rejects = 0;
  for (std::uint64_t i = 0; i < a.trials; ++i) {
    const auto seed = pt::derive_seed(a.seed, i);
    auto o = trial(seed);
    rejects += o.rejected() ? 1 : 0;
    rows += std::to_string(seed) + ',' + verdict_name(o) + ',' + std::to_string(o.samples_used) + '\n';
  }
  if (a.csv.empty()) {
    std::cout << rows;
  } else {
    pt::write_file_atomically(a.csv, rows);
    ordered_json j;
    j["trials"] = a.trials;
    j["rejects"] = rejects;
    j["rejection_rate"] = static_cast<double>(rejects) / static_cast<double>(a.trials);
    if (false_reject) j["false_reject_bound"] = *false_reject;
    std::cout << j.dump() << '\n';
  }
  return rejects > 0 ? kReject : kAccept;
}

// ---------------------------------------------------------------------------

struct ExperimentArgs {
  std::string config, output;
};

int run_experiment_cmd(const ExperimentArgs& a) {
  auto cfg = pt::load_experiment_config(a.config);
  if (!a.output.empty()) cfg.output = a.output;
  if (cfg.output.empty()) throw pt::ConfigError(a.config, 0, "no output path (set 'output' or pass --output)");
  auto rows = pt::run_experiment(cfg);
  std::size_t failed = 0;
  for (const auto& r : rows) failed += r.pass ? 0 : 1;
  ordered_json j;
  j["experiment"] = cfg.experiment;
  j["output"] = cfg.output;
  j["rows"] = rows.size();
  j["failed"] = failed;
  std::cout << j.dump() << '\n';
  return kAccept;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Property testing and removal for finite posets"};
  app.require_subcommand(1);
  // --h is the chain length, so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "Generate a named or random poset");
  g->add_option("kind", gen.kind,
                "chain | antichain | multipartite | k_hw | union_of_chains | sharp_layered | random_layered | "
                "random_closure")
      ->required();
  g->add_option("--n", gen.n, "Element count (chain, antichain, random kinds)");
  g->add_option("--h", gen.h, "Number of layers");
  g->add_option("--w", gen.w, "Layer width");
  g->add_option("--k", gen.k, "Number of chains");
  g->add_option("--len", gen.len, "Chain length");
  g->add_option("--layers", gen.layers, "Layers for random_layered");
  g->add_option("--widths", gen.widths, "Comma-separated layer widths for multipartite");
  g->add_option("--eps", gen.eps, "Rational a/b for sharp_layered");
  g->add_option("--p", gen.p, "Edge probability for random kinds");
  g->add_option("--seed", gen.seed, "Seed for random kinds");
  g->add_option("-o,--output", gen.output, "Output file (default stdout)");
  g->add_option("--format", gen.format, "poset | dot | graph")->check(CLI::IsMember({"poset", "dot", "graph"}));

  DensityArgs den;
  auto* d = app.add_subcommand("density", "Homomorphism density t(Q, P)");
  d->add_option("host", den.host, "Host poset file")->required();
  d->add_option("--pattern", den.pattern, "chain:h | khw:h,w | antichain:n | multipartite:a,b,.. | file")->required();
  d->add_option("--mode", den.mode, "exact | mc");
  d->add_option("--trials", den.trials, "Monte Carlo trials");
  d->add_option("--seed", den.seed, "Monte Carlo seed");
  d->add_option("--delta", den.delta, "Monte Carlo confidence parameter");
  d->add_flag("--comparability", den.comparability,
              "Graph density of a graph pattern (complete:k, cycle:n, file) in the host's comparability graph");

  RemoveArgs rem;
  auto* r = app.add_subcommand("remove", "Remove relation pairs to reach C_h-freeness");
  r->add_option("host", rem.host, "Poset file")->required();
  r->add_option("--mode", rem.mode, "rank | interval | oracle")->check(CLI::IsMember({"rank", "interval", "oracle"}));
  r->add_option("--h", rem.h, "Forbidden chain length");
  r->add_option("--gamma", rem.gamma, "Rank threshold a/b (rank mode, no density test)");
  r->add_option("--eps", rem.eps, "Budget a/b (rank mode, density-gated)");
  r->add_option("--pattern", rem.pattern, "Forbidden poset for the density-gated reduction");
  r->add_option("-o,--output", rem.output, "Write the survivor poset here");

  TestArgs tst;
  auto* t = app.add_subcommand("test", "Run a sampling tester");
  t->add_option("host", tst.host, "Poset file (or graph file with --promise-source)")->required();
  t->add_option("--mode", tst.mode, "basic | iterated | subposet | family")
      ->check(CLI::IsMember({"basic", "iterated", "subposet", "family"}));
  t->add_option("--pattern", tst.pattern, "Forbidden pattern spec or file");
  t->add_option("--family", tst.family, "Family member specs or files")->expected(1, -1);
  t->add_option("--h", tst.h, "Chain length (subposet mode) or clique size with --comparability");
  t->add_option("--samples", tst.samples, "Override the sample count");
  t->add_option("--eps", tst.eps, "Farness a/b");
  t->add_option("--c", tst.c, "Confidence parameter (number or ln2)");
  t->add_option("--seed", tst.seed, "Seed");
  t->add_option("--trials", tst.trials, "Independent trials; more than one prints seed,verdict,samples_used rows");
  t->add_option("--csv", tst.csv, "Write per-trial rows here instead of stdout");
  t->add_option("--sampling", tst.sampling, "with | without replacement")->check(CLI::IsMember({"with", "without"}));
  t->add_flag("--comparability", tst.comparability, "Test the comparability graph instead of the poset");
  t->add_option("--promise-source", tst.promise_source, "Poset file whose comparability graph the host graph is");

  ExperimentArgs ex;
  auto* e = app.add_subcommand("experiment", "Run an experiment config and write CSV");
  e->add_option("config", ex.config, "key=value config file")->required();
  e->add_option("-o,--output", ex.output, "CSV output path (overrides the config)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& err) {
    const int code = app.exit(err);
    return code == 0 ? 0 : kError;
  }

  try {
    if (*g) return run_gen(gen);
    if (*d) return run_density(den);
    if (*r) return run_remove(rem);
    if (*t) return run_test(tst);
    if (*e) return run_experiment_cmd(ex);
  } catch (const pt::ParseError& err) {
    std::cerr << err.what() << '\n';
    return kError;
  } catch (const std::exception& err) {
    std::cerr << kArgs << ":0: " << err.what() << '\n';
    return kError;
  }
  return kError;
}
