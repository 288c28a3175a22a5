#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "hpol/dynsystem.hpp"

namespace hpol {

/// Orbit of a seed point tabulated at integer times [min_time, min_time + size).
struct SeedOrbit {
  Point seed;
  long min_time = 0;
  std::vector<Point> values;

  const Point& at(long time) const { return values[static_cast<std::size_t>(time - min_time)]; }
  long max_time() const { return min_time + static_cast<long>(values.size()) - 1; }
};

/// A sample point is either a plain point or the image of a seed at a given
/// time (`seed >= 0`). Orbit-coded points keep full accuracy for backward
/// iterates whose coordinates underflow or collapse in double precision.
struct SamplePoint {
  Point pos;
  int seed = -1;
  double offset = 0.0;
};

struct Sample {
  std::vector<SamplePoint> points;
  std::vector<SeedOrbit> seeds;
  /// Largest gap of the uniform part in the base metric.
  double spacing = 0.0;
  std::string policy;

  std::size_t size() const noexcept { return points.size(); }
};

/// How the finite sample of phase space is built.
///  - `uniform`: circle -> total points; 2-D spaces -> points per axis.
///    Zero derives the count from the smallest radius (spacing eps/4).
///  - `seeds`, `seed_depth`: backward orbits x, f^-1 x, ..., f^-depth x of
///    `seeds` points; depth 0 means the largest horizon.
///  - `seed_points`: explicit seeds overriding the evenly spaced ones.
///  - `transversal`: radial segments (annulus/torus) refined to spacing
///    eps_min / (transversal_refine * n_max), resolving shear at horizon n_max.
struct GridPolicy {
  std::size_t uniform = 0;
  std::size_t seeds = 0;
  std::size_t seed_depth = 0;
  std::size_t transversal = 0;
  double transversal_refine = 2.0;
  /// Explicit seed positions; when empty, `seeds` evenly spaced ones are used.
  std::vector<Point> seed_points;

  std::string describe() const;
};

Sample make_sample(const DynSystem& sys, const GridPolicy& policy, double eps_min, std::size_t n_max);

/// Plain uniform sample (no seeds), mostly for tests.
Sample uniform_sample(SpaceKind space, std::size_t per_axis);

enum class CountMethod { Greedy, ExactSmall };
enum class SandwichStatus { Unknown, Holds, Violated };

std::string_view to_string(CountMethod m);
std::string_view to_string(SandwichStatus s);

struct SeparationReport {
  std::string system_id;
  double n = 0;  // horizon (iterations for maps, time for flows)
  double eps = 0;
  std::size_t sep_count = 0;  // best (n, eps)-separated subset of the sample found
  std::size_t net_count = 0;  // best eps-net of the sample found
  std::size_t grid_size = 0;
  CountMethod method = CountMethod::Greedy;
  SandwichStatus sandwich = SandwichStatus::Unknown;
};

struct CountOptions {
  CountMethod method = CountMethod::Greedy;
  /// Upper bound on horizon-samples x |grid|.
  double budget = 6.0e10;
  std::size_t exact_limit = 2000;
  /// Memory cap for cached trajectories of retained points.
  std::size_t cache_bytes = std::size_t{512} << 20;
  /// Flow time step; 0 picks 0.05 eps / speed bound.
  double flow_dt = 0.0;
};

/// Two points count as eps-separated when d >= eps * (1 - kSeparationSlack);
/// the slack absorbs representation error of grid coordinates. Nets use the
/// complementary open-ball predicate so packing/covering duality is exact.
inline constexpr double kSeparationSlack = 1e-12;

/// d_n(x, y) = max_{0<=k<n} d(f^k x, f^k y) for maps; for flows the max over
/// sampled times in [0, T] with step `dt` (0 = 1e-2 / speed bound).
double dyn_dist(const DynSystem& sys, double horizon, Point x, Point y, double dt = 0.0);

/// Counts separated points and net centers on a sample. Two greedy passes
/// (ascending and descending sample order) are run; `sep_count` is the larger
/// separated set, `net_count` the smaller of the two covers (each greedy
/// separated set is also a net of the sample). Hence, on a shared sample,
/// S(n, 2eps) <= G(n, eps) <= S(n, eps) holds by construction.
SeparationReport count_separated(const DynSystem& sys, double horizon, double eps, const Sample& sample,
                                 const CountOptions& opts = {});

/// Same counts for several radii at once; trajectories are shared between
/// radii whenever they use the same time grid.
std::vector<SeparationReport> count_separated(const DynSystem& sys, double horizon, const std::vector<double>& eps,
                                              const Sample& sample, const CountOptions& opts = {});

/// Fill the sandwich status of reports computed on the same sample.
void mark_sandwich(std::vector<SeparationReport>& reports);

/// Exact maximum (n, eps)-separated subset of a small sample (branch and bound).
std::size_t exact_max_separated(const DynSystem& sys, double horizon, double eps, const Sample& sample,
                                const CountOptions& opts = {});

}  // namespace hpol
