#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "posetest/posetest.hpp"

using namespace posetest;
namespace fs = std::filesystem;

namespace {

std::size_t error_line(const std::string& text) {
  try {
    parse_experiment_config(text, "exp.cfg");
  } catch (const ConfigError& e) {
    EXPECT_EQ(e.source(), "exp.cfg");
    return e.line();
  }
  ADD_FAILURE() << "expected ConfigError for:\n" << text;
  return 0;
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / "posetest_experiment_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(ExperimentConfig, ParsesGridListsAndRepeats) {
  auto cfg = parse_experiment_config(
      "# grid\nexperiment = subposet-detection\nh = 2\nh = 3\nc = ln2, 1\neps = 1/2\ntrials = 50\nseed = 9\n"
      "output = out.csv\n");
  EXPECT_EQ(cfg.experiment, "subposet-detection");
  EXPECT_EQ(cfg.h, (std::vector<std::size_t>{2, 3}));
  ASSERT_EQ(cfg.c.size(), 2u);
  EXPECT_DOUBLE_EQ(cfg.c[0], std::log(2.0));
  EXPECT_EQ(cfg.eps, (std::vector<Rational>{Rational(1, 2)}));
  EXPECT_EQ(cfg.trials, 50u);
  EXPECT_EQ(*cfg.seed, 9u);
  EXPECT_EQ(cfg.output, "out.csv");
}

TEST(ExperimentConfig, DiagnosticsPointAtTheLine) {
  EXPECT_EQ(error_line("experiment = closeness\nseed = 1\nbogus = 3\n"), 3u);
  EXPECT_EQ(error_line("experiment = closeness\neps = 0.5\nseed = 1\n"), 2u);
  EXPECT_EQ(error_line("experiment = closeness\neps = 1/0\nseed = 1\n"), 2u);
  EXPECT_EQ(error_line("experiment = nope\nseed = 1\n"), 1u);
  EXPECT_EQ(error_line("experiment = closeness\nseed = 1\ntrials = 0\n"), 3u);
  EXPECT_EQ(error_line("experiment = closeness\nseed = 1\nseed = 2\n"), 3u);
  EXPECT_EQ(error_line("experiment = closeness\nh = two\nseed = 1\n"), 2u);
  EXPECT_EQ(error_line("experiment = closeness\nno equals sign\n"), 2u);
  EXPECT_EQ(error_line("experiment = closeness\nc = -1\nseed = 1\n"), 2u);
  // Seed is mandatory.
  EXPECT_EQ(error_line("experiment = closeness\ntrials = 3\n"), 2u);
}

TEST(ExperimentCsv, RowFormatting) {
  CsvRow r;
  r.experiment = "closeness";
  r.h = 3;
  r.eps = Rational(2, 4);
  r.c = 0.5;
  r.n = 10;
  r.trials = 4;
  r.observed = 0.25;
  r.bound = 1;
  r.pass = true;
  EXPECT_EQ(format_csv_row(r), "closeness,3,,1,2,0.5,10,4,0.25,1,true");
  EXPECT_EQ(std::string(csv_header), "experiment,h,w,eps_num,eps_den,c,n,trials,observed,bound,pass");
}

TEST(Experiments, EachRunsAndPassesAtSmallScale) {
  const std::vector<std::pair<std::string, std::string>> configs{
      {"density-inequality", "n = 8\ntrials = 20\n"},
      {"chain-removal", "n = 10\ntrials = 20\n"},
      {"sharpness-2-2", ""},
      {"sharpness-2-4", "trials = 2000\n"},
      {"subposet-detection", "trials = 1000\n"},
      {"family-false-reject", "n = 40\nn = 80\ntrials = 200\n"},
      {"closeness", "n = 30\ntrials = 10\n"},
  };
  for (const auto& [name, extra] : configs) {
    auto cfg = parse_experiment_config("experiment = " + name + "\nseed = 2024\n" + extra);
    auto rows = run_experiment_rows(cfg);
    EXPECT_FALSE(rows.empty()) << name;
    for (const auto& r : rows) {
      EXPECT_EQ(r.experiment, name);
      EXPECT_TRUE(r.pass) << name << ": " << format_csv_row(r);
    }
  }
}

TEST(Experiments, DeterministicCsv) {
  auto cfg = parse_experiment_config("experiment = subposet-detection\nseed = 5\ntrials = 300\n");
  EXPECT_EQ(format_csv(run_experiment_rows(cfg)), format_csv(run_experiment_rows(cfg)));
  auto other = cfg;
  other.seed = 6;
  EXPECT_NE(format_csv(run_experiment_rows(cfg)), format_csv(run_experiment_rows(other)));
}

TEST(Experiments, WritesAtomically) {
  const auto out = scratch("closeness.csv");
  fs::remove(out);
  auto cfg = parse_experiment_config("experiment = closeness\nseed = 1\nn = 12\ntrials = 3\n");
  cfg.output = out.string();
  auto rows = run_experiment(cfg);
  const auto text = slurp(out);
  EXPECT_EQ(text, format_csv(rows));
  EXPECT_EQ(text.rfind("experiment,h,w,", 0), 0u);
  EXPECT_FALSE(fs::exists(out.string() + ".partial"));
}

TEST(Experiments, FailedRunLeavesNoFile) {
  const auto out = scratch("broken.csv");
  fs::remove(out);
  // n = 7 is not a multiple of (h-1)/eps for the union construction.
  auto cfg = parse_experiment_config("experiment = sharpness-2-2\nseed = 1\nh = 3\neps = 1/2\nn = 7\n");
  cfg.output = out.string();
  EXPECT_THROW(run_experiment(cfg), ConfigError);
  EXPECT_FALSE(fs::exists(out));
  EXPECT_FALSE(fs::exists(out.string() + ".partial"));
}
