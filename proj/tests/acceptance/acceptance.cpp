// Acceptance run: one PASS/FAIL line per criterion. With arguments, only the
// listed criteria (1-10) run. Exit status is nonzero if any line fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "hpol/circlemaps.hpp"
#include "hpol/registry.hpp"
#include "hpol/verify.hpp"

using namespace hpol;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Suites are run once and shared between criteria.
class Suites {
 public:
  const VerifyReport& get(const std::string& name) {
    auto it = cache_.find(name);
    if (it == cache_.end()) {
      VerifyOptions opts;
      opts.instances = 20;
      it = cache_.emplace(name, verify(name, opts)).first;
    }
    return it->second;
  }

 private:
  std::map<std::string, VerifyReport> cache_;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Checks of `rep` whose names start with `prefix`; all must pass.
Outcome checks_with_prefix(const VerifyReport& rep, const std::string& prefix) {
  Outcome o{true, ""};
  std::size_t k = 0;
  for (const auto& c : rep.checks) {
    if (c.name.rfind(prefix, 0) != 0) continue;
    ++k;
    o.pass = o.pass && c.passed;
    o.detail += (o.detail.empty() ? "" : " ") + c.name + "=" + fmt("%.4g", c.value) + (c.passed ? "" : "!");
  }
  if (k == 0) return {false, "no checks named " + prefix};
  return o;
}

Outcome rotation_numbers() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(20);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0;
  for (int i = 0; i < 20; ++i) {
    const double a = u(rng);
    worst = std::max(worst, std::fabs(rotation_number(rotation_lift(a)).value - a));
  }
  bool powers = true;
  std::size_t pairs = 0;
  std::vector<CircleLift> lifts = {sine_lift(), arnold_lift(0.25, 0.1), arnold_lift(0.1, 0.05),
                                   arnold_lift(0.618, 0.12)};
  for (const auto& f : lifts) {
    const RotationNumber r = rotation_number(f);
    for (long m : {2L, 3L, 5L, -1L, -2L}) {
      const RotationNumber rm = rotation_number(power_lift(f, m));
      const double md = static_cast<double>(m);
      const double lo = md > 0 ? md * r.lo : md * r.hi;
      const double hi = md > 0 ? md * r.hi : md * r.lo;
      powers = powers && rm.hi >= lo && rm.lo <= hi;
      ++pairs;
    }
  }
  const double secs = seconds_since(t0);
  return {worst <= 1e-9 && powers && secs < 10,
          "max|rho(T_a)-a|=" + fmt("%.2g", worst) + " over 20 a; power brackets " + (powers ? "agree" : "DISAGREE") +
              " on " + std::to_string(pairs) + " pairs; " + fmt("%.1fs", secs)};
}

// Re-derives the sandwich inequalities from the counts; reports of one
// estimate are contiguous and share a sample.
Outcome sandwich(Suites& suites) {
  std::size_t total = 0, checked = 0, bad = 0;
  for (const auto& name : {"circle", "suspension", "torus"}) {
    const auto& reps = suites.get(name).reports;
    std::size_t begin = 0;
    while (begin < reps.size()) {
      std::size_t end = begin;
      while (end < reps.size() && reps[end].system_id == reps[begin].system_id) ++end;
      std::map<std::pair<double, double>, const SeparationReport*> cell;
      for (std::size_t i = begin; i < end; ++i) cell[{reps[i].n, reps[i].eps}] = &reps[i];
      for (std::size_t i = begin; i < end; ++i) {
        const auto& r = reps[i];
        ++total;
        bool ok = r.net_count <= r.sep_count && r.sandwich != SandwichStatus::Violated;
        auto wide = cell.find({r.n, 2 * r.eps});
        if (wide != cell.end()) {
          ++checked;
          ok = ok && wide->second->sep_count <= r.net_count;
        }
        if (!ok) ++bad;
      }
      begin = end;
    }
  }
  return {total > 0 && bad == 0, std::to_string(total) + " reports, " + std::to_string(checked) +
                                     " with S(n,2eps) available, " + std::to_string(bad) + " violations"};
}

Outcome circle_headlines(Suites& suites) {
  const auto& rep = suites.get("circle");
  bool schedules = true;
  for (const auto& id : {"rotation", "sine", "denjoy"}) {
    BuiltSystem b = build_system(id);
    schedules = schedules && b.n_schedule.back() >= 4096 && b.eps_schedule.back() <= 1.0 / 256 &&
                b.grid.uniform >= 10000;
  }
  Outcome o = checks_with_prefix(rep, "headline/");
  o.pass = o.pass && schedules && rep.seconds < 3 * 300;
  o.detail += "; n<=4096, eps>=2^-8, grid 1e4: " + std::string(schedules ? "yes" : "NO") + "; " +
              fmt("%.0fs for three systems", rep.seconds);
  return o;
}

Outcome wandering_lower_bound(Suites& suites) {
  const double eps0 = 1.0 / 32;
  const std::set<std::string> ids = {build_system("sine").system.id(), build_system("denjoy").system.id()};
  std::size_t cells = 0, bad = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& r : suites.get("circle").reports) {
    if (!ids.contains(r.system_id) || r.eps != eps0) continue;
    ++cells;
    worst = std::min(worst, static_cast<double>(r.sep_count) / r.n);
    if (static_cast<double>(r.sep_count) < r.n) ++bad;
  }
  return {cells > 0 && bad == 0, std::to_string(cells) + " cells of sine and denjoy at eps=2^-5, min S/n=" + fmt("%.3g", worst)};
}

// Lower bound for the minimal cover of the grid by sets of d_n-diameter eps:
// grid points pairwise more than eps apart.
std::size_t greedy_oracle(const std::function<double(double)>& f, double a, double b, double eps, std::size_t n,
                          bool circle) {
  const std::size_t grid = 10000;
  std::vector<std::vector<double>> orbits(grid + 1, std::vector<double>(n));
  for (std::size_t i = 0; i <= grid; ++i) {
    orbits[i][0] = a + (b - a) * static_cast<double>(i) / static_cast<double>(grid);
    for (std::size_t k = 1; k < n; ++k) orbits[i][k] = f(orbits[i][k - 1]);
  }
  auto dist = [&](std::size_t i, std::size_t j) {
    double best = 0;
    for (std::size_t k = 0; k < n; ++k) {
      double d = std::fabs(orbits[i][k] - orbits[j][k]);
      if (circle) {
        d = std::fmod(d, 1.0);
        d = std::min(d, 1.0 - d);
      }
      best = std::max(best, d);
    }
    return best;
  };
  std::vector<std::size_t> kept{0};
  for (std::size_t i = 1; i <= grid; ++i) {
    if (dist(kept.back(), i) > eps) kept.push_back(i);
  }
  if (circle) {
    while (kept.size() > 1 && dist(kept.back(), kept.front()) <= eps) kept.pop_back();
  }
  return kept.size();
}

Outcome constructive_covers() {
  const double eps = 0.1;
  bool ok = true;
  std::string detail;
  auto check = [&](const std::string& name, const std::function<double(double)>& f, double a, double b, bool circle,
                   const std::vector<std::size_t>& horizons, const std::function<CoverSet(std::size_t)>& build) {
    std::optional<CoverConstants> first;
    bool same = true, within = true, small = true, above = true;
    for (std::size_t n : horizons) {
      CoverSet c = build(n);
      if (first) {
        same = same && c.constants.c == first->c && c.constants.d == first->d && c.constants.kappa == first->kappa;
      } else {
        first = c.constants;
      }
      within = within && static_cast<double>(c.size()) <= c.constants.bound(static_cast<double>(n));
      for (const auto& p : c.pieces) small = small && sampled_diameter(f, p.lo, p.hi, n) <= eps * (1 + 1e-9);
      above = above && c.size() >= greedy_oracle(f, a, b, eps, n, circle);
    }
    ok = ok && same && within && small && above;
    detail += (detail.empty() ? "" : "; ") + name + (same && within && small && above ? " ok" : " FAILED") + " n<=" +
              std::to_string(horizons.back());
  };
  const std::vector<std::size_t> deep = {25, 50, 100};
  IntervalMap logistic{[](double x) { return x + 0.5 * x * (1 - x); }, 0.0, 1.0, {}};
  check("interval", logistic.f, 0.0, 1.0, false, deep, [&](std::size_t n) { return interval_cover(logistic, eps, n); });
  for (const auto& lift : {sine_lift(), arnold_lift(0.0, 0.15)}) {
    auto f = [lift](double x) { return lift(x); };
    check(lift.name(), f, 0.0, 1.0, true, deep, [&](std::size_t n) { return periodic_circle_cover(lift, eps, n); });
  }
  // Period two: G = F^2 - 1 loses x below 1e-16 at the repellers, which caps
  // the resolvable horizon near 35.
  const CircleLift half = half_turn_lift();
  const CircleLift g = power_lift(half, 2);
  check("half-turn", [g](double x) { return g(x) - 1.0; }, 0.0, 1.0, true, {8, 16, 32},
        [&](std::size_t n) { return periodic_circle_cover(half, eps, n); });
  return {ok, detail + " (eps=0.1; oracle grid 1e4)"};
}

Outcome strip_cover_and_headline(Suites& suites) {
  Outcome a = checks_with_prefix(suites.get("bounds"), "strip-cover/");
  Outcome b = checks_with_prefix(suites.get("suspension"), "headline/");
  return {a.pass && b.pass, a.detail + " " + b.detail};
}

Outcome torus(Suites& suites) {
  const auto& rep = suites.get("torus");
  Outcome a = checks_with_prefix(rep, "headline/");
  Outcome b = checks_with_prefix(rep, "flow-vs-time-one/");
  return {a.pass && b.pass && rep.seconds < 600, a.detail + " " + b.detail + "; " + fmt("%.0fs", rep.seconds)};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  Suites suites;
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"rotation-numbers", rotation_numbers},
      {"sandwich", [&] { return sandwich(suites); }},
      {"circle-headlines", [&] { return circle_headlines(suites); }},
      {"wandering-lower-bound", [&] { return wandering_lower_bound(suites); }},
      {"constructive-covers", constructive_covers},
      {"suspension-exactness", [&] { return checks_with_prefix(suites.get("suspension"), ""); }},
      {"bounds-ledger", [&] { return checks_with_prefix(suites.get("bounds"), "bound/"); }},
      {"strip-cover", [&] { return strip_cover_and_headline(suites); }},
      {"torus-flows", [&] { return torus(suites); }},
      {"conjugacy-residual", [&] { return checks_with_prefix(suites.get("torus"), "conjugacy/"); }},
  };

  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.contains(id)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    all = all && o.pass;
    std::printf("criterion %2d %-22s %s  %s\n", id, criteria[i].first.c_str(), o.pass ? "PASS" : "FAIL",
                o.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
