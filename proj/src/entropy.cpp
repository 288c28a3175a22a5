#include "hpol/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "hpol/errors.hpp"
#include "hpol/numerics.hpp"

namespace hpol {

std::vector<double> geometric_schedule(double start, double stop, double ratio) {
  if (!(start > 0) || !(ratio > 1) || stop < start) throw ConfigError("geometric_schedule: bad parameters");
  std::vector<double> out;
  for (double v = start; v <= stop * (1 + 1e-12); v *= ratio) out.push_back(v);
  return out;
}

namespace {

void validate(const std::vector<double>& n_schedule, const std::vector<double>& eps_schedule) {
  if (n_schedule.empty() || eps_schedule.empty()) throw ConfigError("empty schedule");
  for (std::size_t i = 0; i < n_schedule.size(); ++i) {
    if (!(n_schedule[i] > 0)) throw ConfigError("n-schedule entries must be positive");
    if (i && !(n_schedule[i] > n_schedule[i - 1])) throw ConfigError("n-schedule must be strictly increasing");
  }
  for (std::size_t i = 0; i < eps_schedule.size(); ++i) {
    if (!(eps_schedule[i] > 0)) throw ConfigError("eps-schedule entries must be positive");
    if (i && !(eps_schedule[i] < eps_schedule[i - 1])) throw ConfigError("eps-schedule must be strictly decreasing");
  }
}

}  // namespace

EntropyEstimate estimate_hpol(const DynSystem& sys, const std::vector<double>& n_schedule,
                              const std::vector<double>& eps_schedule, const GridPolicy& policy,
                              const EstimateOptions& opts) {
  validate(n_schedule, eps_schedule);
  std::vector<double> fit_n;
  for (double n : n_schedule)
    if (n >= opts.burn_in) fit_n.push_back(n);
  if (fit_n.size() < 4) throw EstimationError("fewer than 4 horizons left after burn-in");

  EntropyEstimate est;
  est.system_id = sys.id();
  est.n_schedule = n_schedule;
  est.eps_schedule = eps_schedule;
  est.grid_policy = policy.describe();

  const double n_max = n_schedule.back();
  Sample sample = make_sample(sys, policy, eps_schedule.back(), static_cast<std::size_t>(std::ceil(n_max)));
  est.cap = std::log(static_cast<double>(sample.size())) / std::log(fit_n.back() / fit_n.front());

  for (double n : n_schedule) {
    auto row = count_separated(sys, n, eps_schedule, sample, opts.count);
    est.reports.insert(est.reports.end(), row.begin(), row.end());
  }
  mark_sandwich(est.reports);

  double best = 0;
  for (std::size_t j = 0; j < eps_schedule.size(); ++j) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < n_schedule.size(); ++i) {
      if (n_schedule[i] < opts.burn_in) continue;
      const auto& r = est.reports[i * eps_schedule.size() + j];
      if (r.sep_count >= sample.size()) est.saturated = true;
      lx.push_back(std::log(n_schedule[i]));
      ly.push_back(std::log(static_cast<double>(r.sep_count)));
    }
    auto fit = num::least_squares(lx, ly);
    est.rows.push_back({eps_schedule[j], fit.slope, fit.intercept, fit.rms_residual, lx.size()});
    best = std::max(best, fit.slope);
  }
  if (best >= est.cap) est.saturated = true;
  est.headline = std::clamp(best, 0.0, est.cap);
  return est;
}

void write_counts_csv(std::ostream& os, const std::vector<SeparationReport>& reports, bool header) {
  if (header) os << "system_id,n,eps,sep_count,net_count,method,grid_size\n";
  for (const auto& r : reports) {
    os << r.system_id << ',' << r.n << ',' << r.eps << ',' << r.sep_count << ',' << r.net_count << ','
       << to_string(r.method) << ',' << r.grid_size << '\n';
  }
}

}  // namespace hpol
