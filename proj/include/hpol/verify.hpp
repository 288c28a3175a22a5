#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "hpol/planarflows.hpp"
#include "hpol/separation.hpp"

namespace hpol {

/// Lemmas with randomized bound instances: l1-comparison, deviation,
/// strip-diameter, strip-area.
const std::vector<std::string>& bound_lemmas();

/// `count` random instances of one lemma, reproducible from `seed`. Throws
/// ConfigError for unknown lemma names.
std::vector<BoundCheck> bound_instances(std::string_view lemma, std::size_t count, unsigned seed = 1);

/// Strip cover of the sine-lift suspension at eps for each T: one row per T
/// with lhs = cardinality and rhs = the affine bound.
std::vector<BoundCheck> strip_cover_checks(double eps = 0.5, const std::vector<double>& horizons = {5, 10, 20});

struct VerifyCheck {
  std::string name;
  double value = 0;
  double lo = 0;
  double hi = 0;
  /// Distance to the nearest end of [lo, hi]; negative outside.
  double margin = 0;
  bool passed = false;
  std::string detail;
};

/// value must lie in [lo, hi].
VerifyCheck make_check(std::string name, double value, double lo, double hi, std::string detail = {});

struct VerifyReport {
  std::string suite;
  std::vector<VerifyCheck> checks;
  std::vector<BoundCheck> bounds;
  std::vector<SeparationReport> reports;
  double seconds = 0;

  bool passed() const;
};

/// circle | suspension | bounds | torus
const std::vector<std::string>& suite_names();

struct VerifyOptions {
  unsigned seed = 1;
  std::size_t instances = 20;
};

/// Throws ConfigError for an empty or unknown suite name.
VerifyReport verify(std::string_view suite, const VerifyOptions& opts = {});

/// One `check name value lo hi margin PASS|FAIL` line per check, then
/// `suite <name> passed|failed <n_pass>/<n>`.
void write_verify_report(std::ostream& os, const VerifyReport& report);

}  // namespace hpol
