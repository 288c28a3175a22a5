#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hpol/entropy.hpp"
#include "hpol/planarflows.hpp"
#include "hpol/registry.hpp"

namespace hpol {

/// Plain-text `key = value` experiment description. Keys:
///   system              registered system id (required)
///   param.<name>        system parameter
///   n, eps              comma-separated schedules, n increasing and eps
///                       decreasing (default: the system's)
///   grid.<field>        uniform | seeds | seed_depth | transversal | refine
///   burn_in, budget     estimation options
///   checks              comma-separated bound-ledger lemmas
///   check_instances     randomized instances per lemma
///   seed                random seed of the bound checks
///   expect.lo, expect.hi  headline range (default: the system's, if any)
///   output              output directory
/// Blank lines and lines starting with '#' are ignored.
struct ExperimentConfig {
  std::string system;
  Params params;
  std::vector<double> n_schedule;
  std::vector<double> eps_schedule;
  std::map<std::string, double> grid;
  double burn_in = 32;
  double budget = 6.0e10;
  std::vector<std::string> checks;
  std::size_t check_instances = 20;
  unsigned seed = 1;
  std::optional<double> expect_lo;
  std::optional<double> expect_hi;
  std::string output = "hpol-out";

  /// Throws ConfigError on unknown keys, malformed values or non-monotone
  /// schedules.
  static ExperimentConfig parse(std::istream& in);
  static ExperimentConfig parse(const std::string& text);
  static ExperimentConfig load(const std::filesystem::path& path);
  /// Canonical text; parse(serialize()) == *this.
  std::string serialize() const;
  void validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

struct RunResult {
  EntropyEstimate estimate;
  std::vector<BoundCheck> bounds;
  std::optional<std::pair<double, double>> expected;
  bool sandwich_ok = true;
  bool expectation_ok = true;
  bool bounds_ok = true;
  std::vector<std::filesystem::path> files;

  bool ok() const { return sandwich_ok && expectation_ok && bounds_ok; }
};

/// Builds the system, estimates h_pol and runs the requested bound checks,
/// then writes counts.csv, summary.txt, curves.svg and (with checks)
/// bounds.csv into config.output. Files are written to a temporary name and
/// renamed; nothing is written if the system cannot be built.
RunResult run_experiment(const ExperimentConfig& config);

/// Summary as `key = value` lines: headline, cap, per-eps slopes, checks.
void write_summary(std::ostream& os, const ExperimentConfig& config, const RunResult& result);
/// Log-log plot of the separated counts against the horizon, one curve per eps.
void write_curves_svg(std::ostream& os, const EntropyEstimate& estimate);

/// Writes `text` to `path` through a temporary file in the same directory.
void write_file_atomic(const std::filesystem::path& path, const std::string& text);

}  // namespace hpol
