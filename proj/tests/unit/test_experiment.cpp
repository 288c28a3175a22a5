#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "hpol/errors.hpp"
#include "hpol/experiment.hpp"
#include "hpol/registry.hpp"
#include "hpol/verify.hpp"

using namespace hpol;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = fs::temp_directory_path() / ("hpol-test-" + name);
  fs::remove_all(dir);
  return dir;
}

ExperimentConfig small_rotation(const fs::path& out) {
  return ExperimentConfig::parse("system = rotation\nparam.a = 0.3\nn = 8,16,32,64,128\nburn_in = 16\neps = 0.25,0.125\n"
                                 "grid.uniform = 256\noutput = " +
                                 out.string() + "\n");
}

}  // namespace

TEST(Registry, EverySystemBuilds) {
  for (const auto& spec : registered_systems()) {
    BuiltSystem b = build_system(spec.id);
    EXPECT_FALSE(b.system.id().empty()) << spec.id;
    EXPECT_FALSE(b.n_schedule.empty()) << spec.id;
    EXPECT_FALSE(b.eps_schedule.empty()) << spec.id;
  }
  EXPECT_THROW(find_system("foo"), UnknownSystem);
  EXPECT_THROW(build_system("rotation", {{"b", 1.0}}), ConfigError);
  EXPECT_THROW(base_lift("annulus-type1"), NotApplicable);
  EXPECT_NEAR(base_lift("suspension-rotation", {{"a", 0.4}})(0.1), 0.5, 1e-15);
}

TEST(ExperimentConfig, RoundTrip) {
  ExperimentConfig c = ExperimentConfig::parse(
      "# comment\nsystem = arnold\nparam.b = 0.2\nparam.a = 0.05\nn = 8, 16, 32, 64\neps = 0.3, 0.1\n"
      "grid.seeds = 4\nburn_in = 0\nchecks = deviation, strip-area\ncheck_instances = 3\nseed = 7\n"
      "expect.lo = 0\nexpect.hi = 0.1\noutput = out/x\n");
  EXPECT_EQ(c.system, "arnold");
  EXPECT_EQ(c.params.at("a"), 0.05);
  EXPECT_EQ(c.checks.size(), 2u);
  ExperimentConfig back = ExperimentConfig::parse(c.serialize());
  EXPECT_EQ(back, c);
  EXPECT_EQ(back.serialize(), c.serialize());

  ExperimentConfig odd;
  odd.system = "rotation";
  odd.params["a"] = 0.1 + 0.2;
  odd.eps_schedule = {1.0 / 3.0};
  EXPECT_EQ(ExperimentConfig::parse(odd.serialize()), odd);
}

TEST(ExperimentConfig, MalformedInputIsAConfigError) {
  for (const char* text : {
           "",                                     // no system
           "system = rotation\nfoo = 1\n",         // unknown key
           "system = rotation\nsystem = sine\n",   // duplicate
           "system = rotation\nn = 8, x\n",        // not a number
           "system = rotation\nn = 16, 8\n",       // decreasing
           "system = rotation\neps = 0.1, 0.2\n",  // increasing
           "system = rotation\neps = 2, 0.5\n",    // eps > 1
           "system = rotation\ngrid.width = 3\n",  // unknown grid key
           "system = rotation\nchecks = nope\n",   // unknown lemma
           "system = rotation\nseed = 1.5\n",      // non-integer
           "system = rotation\nn = 8,16,32,64\n",  // three horizons after burn-in
           "system rotation\n",                    // no '='
       }) {
    EXPECT_THROW(ExperimentConfig::parse(std::string(text)).validate(), ConfigError) << text;
  }
}

TEST(RunExperiment, UnknownSystemWritesNothing) {
  fs::path dir = fresh_dir("unknown");
  ExperimentConfig c = ExperimentConfig::parse("system = foo\noutput = " + dir.string() + "\n");
  EXPECT_THROW(run_experiment(c), UnknownSystem);
  EXPECT_FALSE(fs::exists(dir));
}

TEST(RunExperiment, OutputsAndDeterminism) {
  fs::path dir = fresh_dir("rotation");
  ExperimentConfig c = small_rotation(dir);
  RunResult r = run_experiment(c);
  EXPECT_TRUE(r.ok());
  EXPECT_LE(r.estimate.headline, 0.05);
  ASSERT_EQ(r.files.size(), 3u);

  std::istringstream csv(slurp(dir / "counts.csv"));
  std::string line;
  std::size_t rows = 0;
  std::getline(csv, line);
  EXPECT_EQ(line.rfind("system_id,n,eps", 0), 0u);
  while (std::getline(csv, line)) ++rows;
  EXPECT_EQ(rows, c.n_schedule.size() * c.eps_schedule.size());
  EXPECT_NE(slurp(dir / "curves.svg").find("<svg"), std::string::npos);

  std::string first_counts = slurp(dir / "counts.csv");
  std::string first_summary = slurp(dir / "summary.txt");
  run_experiment(c);
  EXPECT_EQ(slurp(dir / "counts.csv"), first_counts);
  EXPECT_EQ(slurp(dir / "summary.txt"), first_summary);
  for (const auto& e : fs::directory_iterator(dir)) EXPECT_NE(e.path().extension(), ".tmp");
  fs::remove_all(dir);
}

TEST(RunExperiment, BoundChecksAreWritten) {
  fs::path dir = fresh_dir("checks");
  ExperimentConfig c = small_rotation(dir);
  c.checks = {"l1-comparison", "deviation"};
  c.check_instances = 5;
  RunResult r = run_experiment(c);
  EXPECT_TRUE(r.bounds_ok);
  EXPECT_EQ(r.bounds.size(), 10u);
  EXPECT_TRUE(fs::exists(dir / "bounds.csv"));
  fs::remove_all(dir);
}

TEST(RunExperiment, FailedExpectationIsReported) {
  fs::path dir = fresh_dir("expect");
  ExperimentConfig c = small_rotation(dir);
  c.expect_lo = 0.5;
  c.expect_hi = 1.0;
  RunResult r = run_experiment(c);
  EXPECT_FALSE(r.expectation_ok);
  EXPECT_FALSE(r.ok());
  fs::remove_all(dir);
}

TEST(Verify, SuiteNames) {
  EXPECT_THROW(verify(""), ConfigError);
  EXPECT_THROW(verify("nope"), ConfigError);
  EXPECT_EQ(suite_names().size(), 4u);
}

TEST(Verify, MakeCheckMargins) {
  VerifyCheck in = make_check("x", 0.3, 0.0, 1.0);
  EXPECT_TRUE(in.passed);
  EXPECT_NEAR(in.margin, 0.3, 1e-15);
  VerifyCheck out = make_check("y", 1.2, 0.0, 1.0);
  EXPECT_FALSE(out.passed);
  EXPECT_NEAR(out.margin, -0.2, 1e-15);
}

TEST(Verify, BoundInstancesHoldAndAreReproducible) {
  for (const auto& lemma : bound_lemmas()) {
    auto a = bound_instances(lemma, 4, 3);
    auto b = bound_instances(lemma, 4, 3);
    ASSERT_EQ(a.size(), 4u) << lemma;
    for (std::size_t i = 0; i < a.size(); ++i) {
      EXPECT_TRUE(a[i].holds) << lemma << " " << i;
      EXPECT_EQ(a[i].lhs, b[i].lhs);
    }
  }
  EXPECT_THROW(bound_instances("nope", 1), ConfigError);
}
