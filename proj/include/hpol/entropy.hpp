#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "hpol/separation.hpp"

namespace hpol {

struct SlopeRow {
  double eps = 0;
  double slope = 0;
  double intercept = 0;
  double residual = 0;  // rms residual of the log-log fit
  std::size_t n_used = 0;
};

struct EntropyEstimate {
  std::string system_id;
  std::vector<double> n_schedule;
  std::vector<double> eps_schedule;
  std::vector<SlopeRow> rows;
  /// max over rows of the fitted slope, clamped to [0, cap].
  double headline = 0;
  /// Largest slope the sample can express over the fit window.
  double cap = 0;
  /// Counts reached the sample size or the slope hit the cap.
  bool saturated = false;
  std::string grid_policy;
  std::vector<SeparationReport> reports;
};

struct EstimateOptions {
  /// Horizons below this are counted but excluded from the fit.
  double burn_in = 32;
  CountOptions count;
};

/// {start, start*ratio, ...} up to and including `stop`.
std::vector<double> geometric_schedule(double start, double stop, double ratio = 2.0);

/// Per-eps least-squares slope of log S against log n. One sample is built
/// from the smallest eps and the largest horizon and shared by every cell.
EntropyEstimate estimate_hpol(const DynSystem& sys, const std::vector<double>& n_schedule,
                              const std::vector<double>& eps_schedule, const GridPolicy& policy,
                              const EstimateOptions& opts = {});

/// Columns: system_id,n,eps,sep_count,net_count,method,grid_size
void write_counts_csv(std::ostream& os, const std::vector<SeparationReport>& reports, bool header = true);

}  // namespace hpol
