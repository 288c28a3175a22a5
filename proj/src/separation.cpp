#include "hpol/separation.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include "hpol/errors.hpp"

namespace hpol {

std::string_view to_string(CountMethod m) { return m == CountMethod::Greedy ? "greedy" : "exact-small"; }

std::string_view to_string(SandwichStatus s) {
  switch (s) {
    case SandwichStatus::Unknown: return "unknown";
    case SandwichStatus::Holds: return "holds";
    case SandwichStatus::Violated: return "violated";
  }
  return "?";
}

std::string GridPolicy::describe() const {
  std::ostringstream os;
  os << "uniform=" << uniform << ";seeds=" << seeds << ";seed_depth=" << seed_depth
     << ";transversal=" << transversal << ";refine=" << transversal_refine;
  for (const auto& p : seed_points) os << ";seed=" << p.x << ':' << p.y;
  return os.str();
}

namespace {

double fold_half(double x) { return x - std::floor(x + 0.5); }

SeedOrbit tabulate(const DynSystem& sys, Point seed, long depth, long forward) {
  SeedOrbit orbit;
  orbit.seed = seed;
  orbit.min_time = -depth;
  orbit.values.resize(static_cast<std::size_t>(depth + forward + 1));
  auto idx = [&](long t) { return static_cast<std::size_t>(t + depth); };
  if (sys.has_power()) {
    for (long t = -depth; t <= forward; ++t) orbit.values[idx(t)] = sys.eval(static_cast<double>(t), seed);
    return orbit;
  }
  orbit.values[idx(0)] = seed;
  if (forward > 0) sys.orbit(seed, static_cast<std::size_t>(forward + 1), &orbit.values[idx(0)]);
  for (long t = -1; t >= -depth; --t) orbit.values[idx(t)] = sys.step_back(orbit.values[idx(t + 1)]);
  return orbit;
}

}  // namespace

Sample uniform_sample(SpaceKind space, std::size_t per_axis) {
  if (per_axis < 2) throw ConfigError("uniform_sample: need at least two points per axis");
  Sample s;
  const double u = static_cast<double>(per_axis);
  switch (space) {
    case SpaceKind::Circle:
      for (std::size_t i = 0; i < per_axis; ++i) s.points.push_back({{static_cast<double>(i) / u, 0.0}});
      s.spacing = 1.0 / u;
      break;
    case SpaceKind::Annulus:
      for (std::size_t i = 0; i < per_axis; ++i)
        for (std::size_t j = 0; j < per_axis; ++j)
          s.points.push_back({{static_cast<double>(i) / u, static_cast<double>(j) / (u - 1.0)}});
      s.spacing = 1.0 / (u - 1.0);
      break;
    case SpaceKind::Torus:
      for (std::size_t i = 0; i < per_axis; ++i)
        for (std::size_t j = 0; j < per_axis; ++j)
          s.points.push_back({{static_cast<double>(i) / u, static_cast<double>(j) / u}});
      s.spacing = 1.0 / u;
      break;
    case SpaceKind::Plane: throw ConfigError("uniform_sample: planar strips are not sampled globally");
  }
  s.policy = "uniform=" + std::to_string(per_axis);
  return s;
}

Sample make_sample(const DynSystem& sys, const GridPolicy& policy, double eps_min, std::size_t n_max) {
  if (!(eps_min > 0)) throw ConfigError("make_sample: eps must be positive");
  const SpaceKind space = sys.space();
  std::size_t per_axis = policy.uniform;
  if (per_axis == 0) {
    per_axis = static_cast<std::size_t>(std::ceil(4.0 / eps_min));
    if (space == SpaceKind::Annulus) ++per_axis;
  }
  Sample s = uniform_sample(space, per_axis);
  s.policy = policy.describe();

  if (policy.transversal > 0) {
    if (space == SpaceKind::Circle) throw ConfigError("make_sample: transversals need a 2-D phase space");
    auto count = static_cast<std::size_t>(std::ceil(policy.transversal_refine * static_cast<double>(n_max) / eps_min)) + 1;
    for (std::size_t l = 0; l < policy.transversal; ++l) {
      double theta = (static_cast<double>(l) + 0.5) / static_cast<double>(policy.transversal);
      for (std::size_t j = 0; j < count; ++j) {
        double r = static_cast<double>(j) / static_cast<double>(count - 1);
        if (space == SpaceKind::Torus && j + 1 == count) break;
        s.points.push_back({{theta, r}});
      }
    }
  }

  std::vector<Point> seeds = policy.seed_points;
  if (seeds.empty()) {
    const double m = static_cast<double>(policy.seeds);
    for (std::size_t i = 0; i < policy.seeds; ++i) {
      const double a = (static_cast<double>(i) + 0.5) / m;
      switch (space) {
        case SpaceKind::Circle: seeds.push_back({a - 0.5, 0.0}); break;
        case SpaceKind::Annulus: seeds.push_back({static_cast<double>(i) / m, 0.5}); break;
        default: seeds.push_back({static_cast<double>(i) / m, a}); break;
      }
    }
  }
  if (!seeds.empty()) {
    if (!sys.invertible()) throw ConfigError("make_sample: orbit seeds need an invertible system");
    const long depth = static_cast<long>(policy.seed_depth ? policy.seed_depth : n_max);
    const long forward = static_cast<long>(std::max<std::size_t>(n_max, 1)) - 1;
    for (const Point& seed : seeds) {
      s.seeds.push_back(tabulate(sys, seed, depth, forward));
      const int sid = static_cast<int>(s.seeds.size()) - 1;
      for (long j = 0; j <= depth; ++j) {
        s.points.push_back({s.seeds.back().at(-j), sid, static_cast<double>(-j)});
      }
    }
  }

  if (space == SpaceKind::Circle) {
    // Cyclic order on the cut circle [-1/2, 1/2). Orbit-coded points whose
    // positions coincide numerically are ordered by their later iterates,
    // which a lift of an orientation-preserving homeomorphism preserves.
    struct Keyed {
      SamplePoint p;
      double key;
      double shift;
    };
    std::vector<Keyed> keyed;
    keyed.reserve(s.points.size());
    for (const auto& p : s.points) {
      double key = fold_half(p.pos.x);
      keyed.push_back({p, key, key - p.pos.x});
    }
    auto later_less = [&](const Keyed& a, const Keyed& b) {
      if (a.p.seed < 0 || b.p.seed < 0) return false;
      const auto& sa = s.seeds[static_cast<std::size_t>(a.p.seed)];
      const auto& sb = s.seeds[static_cast<std::size_t>(b.p.seed)];
      long ta = static_cast<long>(a.p.offset);
      long tb = static_cast<long>(b.p.offset);
      for (long k = 1; ta + k <= sa.max_time() && tb + k <= sb.max_time(); ++k) {
        double va = sa.at(ta + k).x + a.shift;
        double vb = sb.at(tb + k).x + b.shift;
        if (va != vb) return va < vb;
      }
      return false;
    };
    std::stable_sort(keyed.begin(), keyed.end(), [&](const Keyed& a, const Keyed& b) {
      if (a.key != b.key) return a.key < b.key;
      return later_less(a, b);
    });
    s.points.clear();
    for (auto& k : keyed) {
      k.p.pos.x = k.key;
      s.points.push_back(k.p);
    }
  }
  return s;
}

namespace {

/// Lazily extended trajectories of sample points on the counting time grid.
class TrajectoryStore {
 public:
  TrajectoryStore(const DynSystem& sys, const Sample& sample, std::size_t steps, double dt, std::size_t cap)
      : sys_(sys), sample_(sample), steps_(steps), dt_(dt), cap_(cap), data_(sample.size()) {
    is_map_ = sys.kind() == DynSystem::Kind::Map;
    if (is_map_) {
      for (const auto& p : sample.points) {
        if (p.seed < 0) continue;
        const auto& so = sample.seeds[static_cast<std::size_t>(p.seed)];
        if (static_cast<long>(p.offset) + static_cast<long>(steps) - 1 > so.max_time()) {
          throw ConfigError("sample orbit tables are shorter than the requested horizon");
        }
      }
    }
  }

  /// Trajectory of sample point i on steps [0, upto); the base metric
  /// ignores the integer sheet of angular coordinates.
  const Point* span(std::size_t i, std::size_t upto) {
    const SamplePoint& sp = sample_.points[i];
    if (is_map_ && sp.seed >= 0) {
      const auto& so = sample_.seeds[static_cast<std::size_t>(sp.seed)];
      return &so.at(static_cast<long>(sp.offset));
    }
    auto& traj = data_[i];
    if (upto > traj.size()) extend(i, upto - 1);
    return traj.data();
  }

  void release(std::size_t i) {
    bytes_ -= data_[i].capacity() * sizeof(Point);
    std::vector<Point>().swap(data_[i]);
  }

  bool over_cap() const { return bytes_ > cap_; }

 private:
  void extend(std::size_t i, std::size_t k) {
    auto& traj = data_[i];
    const SamplePoint& sp = sample_.points[i];
    std::size_t target = std::min(steps_, std::max({k + 1, 2 * traj.size(), std::size_t{16}}));
    std::size_t old = traj.size();
    bytes_ -= traj.capacity() * sizeof(Point);
    traj.resize(target);
    if (is_map_) {
      if (old == 0) {
        sys_.orbit(sp.pos, target, traj.data());
      } else {
        buf_.resize(target - old + 1);
        sys_.orbit(traj[old - 1], buf_.size(), buf_.data());
        std::copy(buf_.begin() + 1, buf_.end(), traj.begin() + static_cast<std::ptrdiff_t>(old));
      }
    } else {
      Point base = sp.seed >= 0 ? sample_.seeds[static_cast<std::size_t>(sp.seed)].seed : sp.pos;
      for (std::size_t j = old; j < target; ++j) {
        traj[j] = sys_.eval(static_cast<double>(j) * dt_ + sp.offset, base);
      }
    }
    bytes_ += traj.capacity() * sizeof(Point);
  }

  const DynSystem& sys_;
  const Sample& sample_;
  std::size_t steps_;
  double dt_;
  std::size_t cap_;
  bool is_map_ = true;
  std::vector<std::vector<Point>> data_;
  std::vector<Point> buf_;
  std::size_t bytes_ = 0;
};

struct Horizon {
  std::size_t steps = 0;
  double dt = 1.0;
};

Horizon resolve_horizon(const DynSystem& sys, double horizon, double eps, double flow_dt) {
  if (!(horizon > 0)) throw DomainError("horizon must be positive");
  if (sys.kind() == DynSystem::Kind::Map) {
    if (horizon != std::floor(horizon)) throw DomainError("map horizons must be integers");
    return {static_cast<std::size_t>(horizon), 1.0};
  }
  double dt = flow_dt > 0 ? flow_dt : sys.flow_time_step(eps);
  auto m = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
  m = std::max<std::size_t>(m, 1);
  return {m + 1, horizon / static_cast<double>(m)};
}

class Counter {
 public:
  Counter(const DynSystem& sys, const Sample& sample, Horizon h, const CountOptions& opts)
      : sys_(sys), h_(h), store_(sys, sample, h.steps, h.dt, opts.cache_bytes) {}

  bool separated(std::size_t a, std::size_t b, double thresh) {
    const SpaceKind space = sys_.space();
    std::size_t done = 0;
    std::size_t chunk = 16;
    while (done < h_.steps) {
      const std::size_t upto = std::min(h_.steps, done + chunk);
      const Point* ta = store_.span(a, upto);
      const Point* tb = store_.span(b, upto);
      if (space == SpaceKind::Circle) {
        for (std::size_t k = done; k < upto; ++k) {
          double t = ta[k].x - tb[k].x;
          t -= static_cast<double>(static_cast<long long>(t + (t >= 0 ? 0.5 : -0.5)));
          if (std::fabs(t) >= thresh) return true;
        }
      } else {
        for (std::size_t k = done; k < upto; ++k) {
          if (base_dist_unchecked(space, ta[k], tb[k]) >= thresh) return true;
        }
      }
      done = upto;
      chunk *= 2;
    }
    return false;
  }

  TrajectoryStore& store() { return store_; }

 private:
  const DynSystem& sys_;
  Horizon h_;
  TrajectoryStore store_;
};

double threshold(double eps) { return eps * (1.0 - kSeparationSlack); }

bool use_circle_fast_path(const DynSystem& sys, double eps) {
  auto lip = sys.circle_lipschitz();
  // With lip * eps <= 1 - eps the lifted gap of two points cannot jump from
  // below eps to above 1 - eps in one step, so separation from the nearest
  // retained neighbour on each side decides separation from all of them.
  return lip && sys.space() == SpaceKind::Circle && sys.kind() == DynSystem::Kind::Map &&
         *lip * eps <= 1.0 - eps;
}

// The greedy passes below run one independent greedy selection per radius
// over the same ordered sample, so each candidate trajectory is computed once.

std::vector<std::size_t> greedy_circle(Counter& c, const std::vector<double>& eps,
                                       const std::vector<std::size_t>& order) {
  const std::size_t m = eps.size();
  std::vector<std::size_t> count(m, 0), first(m, 0), last(m, 0);
  auto referenced = [&](std::size_t idx) {
    for (std::size_t e = 0; e < m; ++e)
      if (count[e] && (first[e] == idx || last[e] == idx)) return true;
    return false;
  };
  for (std::size_t idx : order) {
    for (std::size_t e = 0; e < m; ++e) {
      if (count[e] == 0) {
        first[e] = last[e] = idx;
        count[e] = 1;
        continue;
      }
      const double th = threshold(eps[e]);
      bool ok = c.separated(last[e], idx, th) && (first[e] == last[e] || c.separated(idx, first[e], th));
      if (ok) {
        std::size_t old = last[e];
        last[e] = idx;
        ++count[e];
        if (!referenced(old)) c.store().release(old);
      }
    }
    if (!referenced(idx)) c.store().release(idx);
  }
  return count;
}

class CellIndex {
 public:
  CellIndex(SpaceKind space, double eps) : space_(space) {
    ang_cells_ = std::max<long>(1, static_cast<long>(std::floor(1.0 / eps)));
    width_ = 1.0 / static_cast<double>(ang_cells_);
    lin_width_ = eps;
  }

  std::pair<long, long> cell(Point p) const {
    Point c = canonical(space_, p);
    switch (space_) {
      case SpaceKind::Circle: return {ax(c.x), 0};
      case SpaceKind::Annulus: return {ax(c.x), static_cast<long>(std::floor(c.y / lin_width_))};
      case SpaceKind::Torus: return {ax(c.x), ax(c.y)};
      case SpaceKind::Plane:
        return {static_cast<long>(std::floor(c.x / lin_width_)), static_cast<long>(std::floor(c.y / lin_width_))};
    }
    return {0, 0};
  }

  void insert(Point p, std::size_t idx) { cells_[key(cell(p))].push_back(idx); }

  template <class F>
  void for_neighbors(Point p, F&& f) const {
    auto [cx, cy] = cell(p);
    std::int64_t seen[9];
    int nseen = 0;
    for (long dx = -1; dx <= 1; ++dx) {
      for (long dy = -1; dy <= 1; ++dy) {
        if (space_ == SpaceKind::Circle && dy != 0) continue;
        long x = cx + dx;
        long y = cy + dy;
        if (space_ != SpaceKind::Plane) x = wrap(x);
        if (space_ == SpaceKind::Torus) y = wrap(y);
        auto k = key({x, y});
        if (std::find(seen, seen + nseen, k) != seen + nseen) continue;
        seen[nseen++] = k;
        auto it = cells_.find(k);
        if (it == cells_.end()) continue;
        for (std::size_t idx : it->second) f(idx);
      }
    }
  }

 private:
  long ax(double v) const { return std::min(ang_cells_ - 1, static_cast<long>(std::floor(v / width_))); }
  long wrap(long v) const { return ((v % ang_cells_) + ang_cells_) % ang_cells_; }
  static std::int64_t key(std::pair<long, long> c) {
    return (static_cast<std::int64_t>(c.first) << 32) ^ static_cast<std::int64_t>(static_cast<std::uint32_t>(c.second));
  }

  SpaceKind space_;
  long ang_cells_;
  double width_;
  double lin_width_;
  std::unordered_map<std::int64_t, std::vector<std::size_t>> cells_;
};

std::vector<std::size_t> greedy_generic(Counter& c, const DynSystem& sys, const Sample& sample,
                                        const std::vector<double>& eps, const std::vector<std::size_t>& order) {
  const std::size_t m = eps.size();
  std::vector<CellIndex> index;
  for (double e : eps) index.emplace_back(sys.space(), e);
  std::vector<std::size_t> count(m, 0);
  std::vector<std::uint8_t> held(sample.size(), 0);  // number of radii retaining the point
  std::vector<std::size_t> retained;
  std::vector<std::pair<double, std::size_t>> near;
  for (std::size_t idx : order) {
    const Point p = sample.points[idx].pos;
    for (std::size_t e = 0; e < m; ++e) {
      const double th = threshold(eps[e]);
      near.clear();
      index[e].for_neighbors(p, [&](std::size_t r) {
        double d = base_dist_unchecked(sys.space(), p, sample.points[r].pos);
        if (d < th) near.emplace_back(d, r);
      });
      std::sort(near.begin(), near.end());
      bool ok = true;
      for (const auto& nr : near) {
        if (!c.separated(nr.second, idx, th)) {
          ok = false;
          break;
        }
      }
      if (ok) {
        index[e].insert(p, idx);
        if (held[idx]++ == 0) retained.push_back(idx);
        ++count[e];
      }
    }
    if (!held[idx]) {
      c.store().release(idx);
    } else if (c.store().over_cap()) {
      for (std::size_t r : retained) c.store().release(r);
    }
  }
  return count;
}

std::vector<std::size_t> greedy_pass(Counter& c, const DynSystem& sys, const Sample& sample,
                                     const std::vector<double>& eps, bool ascending) {
  std::vector<std::size_t> order(sample.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (!ascending) std::reverse(order.begin(), order.end());
  std::vector<double> fast, slow;
  for (double e : eps) (use_circle_fast_path(sys, e) ? fast : slow).push_back(e);
  std::vector<std::size_t> fast_counts, slow_counts;
  if (!fast.empty()) fast_counts = greedy_circle(c, fast, order);
  if (!slow.empty()) slow_counts = greedy_generic(c, sys, sample, slow, order);
  std::vector<std::size_t> out;
  std::size_t fi = 0, si = 0;
  for (double e : eps) out.push_back(use_circle_fast_path(sys, e) ? fast_counts[fi++] : slow_counts[si++]);
  return out;
}

void check_inputs(const DynSystem& sys, double eps, const Sample& sample, Horizon h, const CountOptions& opts) {
  if (!(eps > 0)) throw DomainError("eps must be positive");
  if (sample.size() == 0) throw ConfigError("empty sample");
  if (sample.spacing > 0.25 * eps * (1.0 + 1e-9)) {
    throw ConfigError("sample too coarse: spacing " + std::to_string(sample.spacing) + " > eps/4");
  }
  if (static_cast<double>(h.steps) * static_cast<double>(sample.size()) > opts.budget) {
    throw BudgetError("horizon x grid size exceeds the counting budget");
  }
  (void)sys;
}

}  // namespace

double dyn_dist(const DynSystem& sys, double horizon, Point x, Point y, double dt) {
  if (!(horizon > 0)) throw DomainError("dyn_dist: horizon must be positive");
  double best = base_dist(sys.space(), x, y);
  if (sys.kind() == DynSystem::Kind::Map) {
    if (horizon != std::floor(horizon)) throw DomainError("dyn_dist: map horizons must be integers");
    auto n = static_cast<std::size_t>(horizon);
    std::vector<Point> ox(n), oy(n);
    sys.orbit(x, n, ox.data());
    sys.orbit(y, n, oy.data());
    for (std::size_t k = 0; k < n; ++k) best = std::max(best, base_dist_unchecked(sys.space(), ox[k], oy[k]));
    return best;
  }
  if (dt <= 0) dt = 1e-2 / sys.speed_bound();
  auto m = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9)));
  for (std::size_t i = 0; i <= m; ++i) {
    double t = horizon * static_cast<double>(i) / static_cast<double>(m);
    best = std::max(best, base_dist_unchecked(sys.space(), sys.eval(t, x), sys.eval(t, y)));
  }
  return best;
}

std::vector<SeparationReport> count_separated(const DynSystem& sys, double horizon, const std::vector<double>& eps,
                                              const Sample& sample, const CountOptions& opts) {
  if (eps.empty()) return {};
  // Radii share one time grid only when it does not depend on eps.
  if (sys.kind() == DynSystem::Kind::Flow && opts.flow_dt <= 0 && eps.size() > 1) {
    std::vector<SeparationReport> out;
    for (double e : eps) out.push_back(count_separated(sys, horizon, e, sample, opts));
    return out;
  }
  Horizon h = resolve_horizon(sys, horizon, eps.front(), opts.flow_dt);
  for (double e : eps) check_inputs(sys, e, sample, h, opts);
  Counter c(sys, sample, h, opts);
  std::vector<std::size_t> up = greedy_pass(c, sys, sample, eps, true);
  std::vector<std::size_t> down = greedy_pass(c, sys, sample, eps, false);
  std::vector<SeparationReport> out;
  for (std::size_t i = 0; i < eps.size(); ++i) {
    SeparationReport rep;
    rep.system_id = sys.id();
    rep.n = horizon;
    rep.eps = eps[i];
    rep.grid_size = sample.size();
    rep.method = opts.method;
    rep.sep_count = std::max(up[i], down[i]);
    rep.net_count = std::min(up[i], down[i]);
    if (opts.method == CountMethod::ExactSmall) {
      rep.sep_count = std::max(rep.sep_count, exact_max_separated(sys, horizon, eps[i], sample, opts));
    }
    out.push_back(rep);
  }
  return out;
}

SeparationReport count_separated(const DynSystem& sys, double horizon, double eps, const Sample& sample,
                                 const CountOptions& opts) {
  return count_separated(sys, horizon, std::vector<double>{eps}, sample, opts).front();
}

void mark_sandwich(std::vector<SeparationReport>& reports) {
  for (auto& r : reports) {
    bool any = false;
    bool ok = r.net_count <= r.sep_count;
    for (const auto& o : reports) {
      if (o.system_id != r.system_id || o.n != r.n || o.grid_size != r.grid_size) continue;
      if (std::fabs(o.eps - 2.0 * r.eps) > 1e-12 * r.eps) continue;
      any = true;
      ok = ok && o.sep_count <= r.net_count;
    }
    r.sandwich = !ok ? SandwichStatus::Violated : (any ? SandwichStatus::Holds : SandwichStatus::Unknown);
  }
}

namespace {

/// Maximum independent set by branch and bound, per connected component.
class MisSolver {
 public:
  MisSolver(const std::vector<std::vector<std::size_t>>& adj, double node_budget)
      : adj_(adj), budget_(node_budget) {}

  std::size_t solve() {
    const std::size_t n = adj_.size();
    std::vector<int> comp(n, -1);
    std::size_t total = 0;
    for (std::size_t s = 0; s < n; ++s) {
      if (comp[s] >= 0) continue;
      std::vector<std::size_t> members{s};
      comp[s] = 1;
      for (std::size_t i = 0; i < members.size(); ++i) {
        for (std::size_t v : adj_[members[i]]) {
          if (comp[v] < 0) {
            comp[v] = 1;
            members.push_back(v);
          }
        }
      }
      total += solve_component(members);
    }
    return total;
  }

 private:
  std::size_t solve_component(const std::vector<std::size_t>& members) {
    if (members.size() == 1) return 1;
    best_ = 0;
    std::vector<char> alive(adj_.size(), 0);
    for (std::size_t v : members) alive[v] = 1;
    branch(members, alive, 0);
    return best_;
  }

  void branch(std::vector<std::size_t> cand, std::vector<char>& alive, std::size_t current) {
    if (++nodes_ > budget_) throw BudgetError("exact-small: branch-and-bound node budget exhausted");
    // Drop vertices already removed; take isolated vertices greedily.
    std::vector<std::size_t> live;
    for (std::size_t v : cand)
      if (alive[v]) live.push_back(v);
    std::vector<std::size_t> removed;
    bool progress = true;
    while (progress) {
      progress = false;
      for (std::size_t v : live) {
        if (!alive[v]) continue;
        std::size_t deg = 0;
        for (std::size_t u : adj_[v]) deg += alive[u];
        if (deg <= 1) {  // degree 0/1: v belongs to some maximum set
          ++current;
          alive[v] = 0;
          removed.push_back(v);
          for (std::size_t u : adj_[v]) {
            if (alive[u]) {
              alive[u] = 0;
              removed.push_back(u);
            }
          }
          progress = true;
        }
      }
    }
    std::vector<std::size_t> rest;
    for (std::size_t v : live)
      if (alive[v]) rest.push_back(v);
    if (rest.empty()) {
      best_ = std::max(best_, current);
    } else if (current + bound(rest, alive) > best_) {
      std::size_t pivot = rest.front();
      std::size_t pdeg = 0;
      for (std::size_t v : rest) {
        std::size_t d = 0;
        for (std::size_t u : adj_[v]) d += alive[u];
        if (d > pdeg) {
          pdeg = d;
          pivot = v;
        }
      }
      // Include pivot.
      std::vector<std::size_t> gone{pivot};
      alive[pivot] = 0;
      for (std::size_t u : adj_[pivot]) {
        if (alive[u]) {
          alive[u] = 0;
          gone.push_back(u);
        }
      }
      branch(rest, alive, current + 1);
      for (std::size_t v : gone) alive[v] = 1;
      // Exclude pivot.
      alive[pivot] = 0;
      branch(rest, alive, current);
      alive[pivot] = 1;
    }
    for (std::size_t v : removed) alive[v] = 1;
  }

  // Greedy clique cover: an independent set meets each clique at most once.
  std::size_t bound(const std::vector<std::size_t>& rest, const std::vector<char>& alive) const {
    std::vector<std::vector<std::size_t>> cliques;
    for (std::size_t v : rest) {
      bool placed = false;
      for (auto& q : cliques) {
        bool all = true;
        for (std::size_t u : q) {
          if (std::find(adj_[v].begin(), adj_[v].end(), u) == adj_[v].end()) {
            all = false;
            break;
          }
        }
        if (all) {
          q.push_back(v);
          placed = true;
          break;
        }
      }
      if (!placed) cliques.push_back({v});
    }
    (void)alive;
    return cliques.size();
  }

  const std::vector<std::vector<std::size_t>>& adj_;
  double budget_;
  double nodes_ = 0;
  std::size_t best_ = 0;
};

}  // namespace

std::size_t exact_max_separated(const DynSystem& sys, double horizon, double eps, const Sample& sample,
                                const CountOptions& opts) {
  if (sample.size() > opts.exact_limit) {
    throw BudgetError("exact-small: sample larger than " + std::to_string(opts.exact_limit) + " points");
  }
  Horizon h = resolve_horizon(sys, horizon, eps, opts.flow_dt);
  check_inputs(sys, eps, sample, h, opts);
  Counter c(sys, sample, h, opts);
  const double th = threshold(eps);
  const std::size_t n = sample.size();
  std::vector<std::vector<std::size_t>> adj(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (!c.separated(i, j, th)) {
        adj[i].push_back(j);
        adj[j].push_back(i);
      }
    }
  }
  MisSolver solver(adj, 2e7);
  return solver.solve();
}

}  // namespace hpol
