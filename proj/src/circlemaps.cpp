#include "hpol/circlemaps.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "hpol/errors.hpp"
#include "hpol/numerics.hpp"

namespace hpol {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

CircleLift CircleLift::closed_form(std::string name, Fn f, double disp_lo, double disp_hi, std::optional<double> lip,
                                   std::optional<double> inv_lip) {
  if (!f) throw InvalidInput("closed_form: empty evaluator");
  if (!(disp_lo <= disp_hi)) throw InvalidInput("closed_form: displacement bounds out of order");
  CircleLift l;
  l.name_ = std::move(name);
  l.repr_ = Repr::ClosedForm;
  l.f_ = std::move(f);
  l.disp_lo_ = disp_lo;
  l.disp_hi_ = disp_hi;
  l.lip_ = lip;
  l.inv_lip_ = inv_lip;
  return l;
}

CircleLift CircleLift::interpolated(std::string name, std::vector<double> knots, std::vector<double> values) {
  if (knots.size() != values.size() || knots.size() < 2) throw InvalidInput("interpolated: need matching knot lists");
  if (knots.front() != 0.0 || knots.back() != 1.0) throw InvalidInput("interpolated: knots must span [0, 1]");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i] > knots[i - 1]) || !(values[i] > values[i - 1])) {
      throw InvalidLift("interpolated: knots and values must be strictly increasing");
    }
  }
  if (std::fabs(values.back() - values.front() - 1.0) > 1e-12) throw InvalidLift("interpolated: values must close up by 1");
  double lo = values[0] - knots[0], hi = lo, lip = 0, ilip = 0;
  for (std::size_t i = 0; i < knots.size(); ++i) {
    lo = std::min(lo, values[i] - knots[i]);
    hi = std::max(hi, values[i] - knots[i]);
    if (i) {
      double slope = (values[i] - values[i - 1]) / (knots[i] - knots[i - 1]);
      lip = std::max(lip, slope);
      ilip = std::max(ilip, 1.0 / slope);
    }
  }
  auto f = [k = std::move(knots), v = std::move(values)](double x) {
    double j = std::floor(x);
    double u = x - j;
    auto it = std::upper_bound(k.begin(), k.end(), u);
    std::size_t i = std::clamp<std::size_t>(static_cast<std::size_t>(it - k.begin()), 1, k.size() - 1);
    double t = (u - k[i - 1]) / (k[i] - k[i - 1]);
    return j + v[i - 1] + t * (v[i] - v[i - 1]);
  };
  CircleLift l = closed_form(std::move(name), f, lo, hi, lip, ilip);
  l.repr_ = Repr::Interpolated;
  return l;
}

double CircleLift::inverse(double y, double tol) const {
  if (inv_) return inv_(y);
  const double pad = 1e-9 * (1.0 + std::fabs(y));
  double lo = y - disp_hi_ - pad;
  double hi = y - disp_lo_ + pad;
  while (f_(lo) > y) lo -= 1.0;
  while (f_(hi) < y) hi += 1.0;
  return num::bisect_increasing(f_, y, lo, hi, tol, 4000);
}

double CircleLift::iterate(double x, long k) const {
  if (denjoy_) return denjoy_->apply(x, k * denjoy_step_);
  for (long i = 0; i < k; ++i) x = f_(x);
  for (long i = 0; i > k; --i) x = inverse(x, 0.0);
  return x;
}

void CircleLift::validate(std::size_t samples, double tol) const {
  if (repr_ == Repr::Interpolated) tol = std::max(tol, 1e-6);
  double prev = f_(-1e-3);
  for (std::size_t i = 0; i <= samples; ++i) {
    double x = static_cast<double>(i) / static_cast<double>(samples);
    double v = f_(x);
    if (!std::isfinite(v) || !(v > prev)) throw InvalidLift(name_ + ": lift is not strictly increasing near x=" + std::to_string(x));
    if (std::fabs(f_(x + 1.0) - v - 1.0) > tol) throw InvalidLift(name_ + ": F(x+1) != F(x)+1 at x=" + std::to_string(x));
    prev = v;
  }
}

CircleLift rotation_lift(double a) {
  if (!std::isfinite(a)) throw DomainError("rotation_lift: non-finite angle");
  CircleLift l = CircleLift::closed_form("rotation(" + std::to_string(a) + ")", [a](double x) { return x + a; }, a, a,
                                         1.0, 1.0);
  return l;
}

CircleLift arnold_lift(double b, double a) {
  if (!(std::fabs(a) < 1.0 / kTwoPi)) throw DomainError("arnold_lift: need |a| < 1/(2 pi) for a homeomorphism");
  return CircleLift::closed_form(
      "arnold(" + std::to_string(b) + "," + std::to_string(a) + ")",
      [a, b](double x) { return x + b + a * std::sin(kTwoPi * x); }, b - std::fabs(a), b + std::fabs(a),
      1.0 + kTwoPi * std::fabs(a), 1.0 / (1.0 - kTwoPi * std::fabs(a)));
}

CircleLift sine_lift() { return arnold_lift(0.0, 0.1); }

CircleLift half_turn_lift(double a) {
  if (!(std::fabs(a) < 1.0 / (2.0 * kTwoPi))) throw DomainError("half_turn_lift: need |a| < 1/(4 pi)");
  double lip = 1.0 + 2.0 * kTwoPi * std::fabs(a);
  return CircleLift::closed_form(
      "half_turn(" + std::to_string(a) + ")", [a](double x) { return x + 0.5 + a * std::sin(2.0 * kTwoPi * x); },
      0.5 - std::fabs(a), 0.5 + std::fabs(a), lip, 1.0 / (1.0 - 2.0 * kTwoPi * std::fabs(a)));
}

CircleLift conjugated_rotation_lift(double a, double s) {
  if (!(std::fabs(s) < 1.0 / kTwoPi)) throw DomainError("conjugated_rotation_lift: h must be a homeomorphism");
  auto h = [s](double x) { return x + s * std::sin(kTwoPi * x); };
  auto h_inv = [h, s](double y) { return num::bisect_increasing(h, y, y - std::fabs(s) - 1e-9, y + std::fabs(s) + 1e-9, 0.0); };
  double lh = 1.0 + kTwoPi * std::fabs(s);
  double lhi = 1.0 / (1.0 - kTwoPi * std::fabs(s));
  return CircleLift::closed_form(
      "conj_rotation(" + std::to_string(a) + "," + std::to_string(s) + ")",
      [h, h_inv, a](double x) { return h(h_inv(x) + a); }, a - 2 * std::fabs(s), a + 2 * std::fabs(s), lh * lhi, lh * lhi);
}

RotationNumber rotation_number(const CircleLift& lift, std::size_t max_iter, double tol, long q_max) {
  if (max_iter < 1000) throw DomainError("rotation_number: max_iter must be at least 1000");
  lift.validate();
  RotationNumber r;
  r.iterations = max_iter;
  const double n = static_cast<double>(max_iter);
  double x = lift.iterate(0.0, static_cast<long>(max_iter));
  double k = std::floor(x);
  // Rounding in the long orbit is far below 1/N; pad so the bracket stays valid.
  const double pad = 1e-12 * (1.0 + std::fabs(x) / n);
  r.value = x / n;
  r.lo = k / n - pad;
  r.hi = (k + 1.0) / n + pad;

  constexpr int kScan = 1000;
  // ys[i] = F^q(i / kScan), advanced one step per q; the Denjoy model has
  // exact powers.
  std::vector<double> ys(kScan + 1);
  for (int i = 0; i <= kScan; ++i) ys[static_cast<std::size_t>(i)] = static_cast<double>(i) / kScan;
  for (long q = 1; q <= q_max && !r.rational; ++q) {
    for (int i = 0; i <= kScan; ++i) {
      double& y = ys[static_cast<std::size_t>(i)];
      y = lift.denjoy() ? lift.iterate(static_cast<double>(i) / kScan, q) : lift(y);
    }
    const long p = std::lround(static_cast<double>(q) * r.value);
    double prev = 0;
    for (int i = 0; i <= kScan; ++i) {
      double xi = static_cast<double>(i) / kScan;
      double g = ys[static_cast<std::size_t>(i)] - static_cast<double>(p) - xi;
      if (std::fabs(g) <= tol || (i > 0 && (g > 0) != (prev > 0))) {
        r.rational = true;
        r.p = p;
        r.q = q;
        break;
      }
      prev = g;
    }
  }
  if (r.rational) r.value = static_cast<double>(r.p) / static_cast<double>(r.q);
  return r;
}

CircleLift power_lift(const CircleLift& lift, long m) {
  if (m == 0) throw DomainError("power_lift: m must be nonzero");
  CircleLift l = lift;
  l.name_ = lift.name() + "^" + std::to_string(m);
  const long am = std::labs(m);
  if (lift.denjoy_) {
    l.denjoy_step_ = lift.denjoy_step_ * m;
    auto model = lift.denjoy_;
    long step = l.denjoy_step_;
    l.f_ = [model, step](double x) { return model->apply(x, step); };
    l.inv_ = [model, step](double y) { return model->apply(y, -step); };
  } else {
    l.f_ = [lift, m](double x) { return lift.iterate(x, m); };
    l.inv_ = [lift, m](double y) { return lift.iterate(y, -m); };
  }
  double lo = m > 0 ? lift.disp_lo() : -lift.disp_hi();
  double hi = m > 0 ? lift.disp_hi() : -lift.disp_lo();
  l.disp_lo_ = static_cast<double>(am) * lo;
  l.disp_hi_ = static_cast<double>(am) * hi;
  auto pw = [am](std::optional<double> v) -> std::optional<double> {
    if (!v) return std::nullopt;
    return std::pow(*v, static_cast<double>(am));
  };
  l.lip_ = pw(m > 0 ? lift.lipschitz() : lift.inverse_lipschitz());
  l.inv_lip_ = pw(m > 0 ? lift.inverse_lipschitz() : lift.lipschitz());
  return l;
}

PeriodicStructure periodic_structure(const CircleLift& lift, long q_max, double tol, std::size_t samples) {
  RotationNumber rot = rotation_number(lift, 100000, tol, q_max);
  if (!rot.rational) throw NotApplicable("periodic_structure: rotation number is not flagged rational");
  PeriodicStructure ps;
  ps.p = rot.p;
  ps.q = rot.q;
  const long p = rot.p, q = rot.q;
  auto g = [&](double x) { return lift.iterate(x, q) - static_cast<double>(p) - x; };

  const std::size_t n = samples;
  std::vector<double> gv(n);
  for (std::size_t i = 0; i < n; ++i) gv[i] = g(static_cast<double>(i) / static_cast<double>(n));
  auto is_zero = [&](std::size_t i) { return std::fabs(gv[i % n]) <= tol; };

  std::size_t start = n;
  for (std::size_t i = 0; i < n; ++i) {
    if (!is_zero(i)) {
      start = i;
      break;
    }
  }
  if (start == n) {
    ps.everything_periodic = true;
    ps.fixed.push_back({0.0, 1.0});
    return ps;
  }

  // Walk once around the circle from a non-fixed sample; clusters are runs of
  // zero samples and isolated sign changes.
  auto xs = [&](std::size_t i) { return static_cast<double>(i) / static_cast<double>(n); };
  std::vector<std::pair<double, double>> clusters;
  for (std::size_t j = 1; j <= n; ++j) {
    std::size_t i = start + j;
    if (is_zero(i)) {
      double lo = xs(i);
      while (j + 1 <= n && is_zero(start + j + 1)) ++j;
      clusters.push_back({lo, xs(start + j)});
    } else {
      double g0 = gv[(i - 1) % n], g1 = gv[i % n];
      if (!is_zero(i - 1) && (g0 > 0) != (g1 > 0)) {
        double root = num::bisect_root(g, xs(i - 1), xs(i), 0.0);
        clusters.push_back({root, root});
      }
    }
  }
  if (clusters.empty()) throw NotApplicable("periodic_structure: no periodic points found on the sample");
  ps.fixed = clusters;
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    double lo = clusters[k].second;
    double hi = k + 1 < clusters.size() ? clusters[k + 1].first : clusters.front().first + 1.0;
    if (!(hi > lo)) continue;
    double mid = 0.5 * (lo + hi);
    ps.components.push_back({lo, hi, g(mid) > 0 ? 1 : -1});
  }
  for (auto& c : ps.fixed) {
    double shift = std::floor(c.first);
    c.first -= shift;
    c.second -= shift;
  }
  std::sort(ps.fixed.begin(), ps.fixed.end());
  return ps;
}

GridPolicy default_circle_grid(const CircleLift& lift) {
  GridPolicy g;
  g.uniform = 10000;
  g.seeds = 4;
  if (const auto& model = lift.denjoy()) {
    auto [left, len] = model->interval(0);
    for (double s : {0.25, 0.5, 0.75}) g.seed_points.push_back({left + s * len, 0.0});
    g.seed_points.push_back({model->encode({0.5, 0, -1.0}), 0.0});
  }
  return g;
}

DynSystem circle_system(const CircleLift& lift, const std::string& id) {
  const std::string name = id.empty() ? lift.name() : id;
  if (const auto& model = lift.denjoy_) {
    const long step = lift.denjoy_step_;
    auto sys = DynSystem::map(
        name, SpaceKind::Circle, [model, step](Point p) { return Point{model->apply(p.x, step), 0.0}; },
        [model, step](Point p) { return Point{model->apply(p.x, -step), 0.0}; });
    sys.with_power([model, step](long k, Point p) { return Point{model->apply(p.x, k * step), 0.0}; });
    sys.with_orbit([model, step](Point start, std::size_t count, Point* out) {
      auto c = model->decode(start.x);
      out[0] = start;
      for (std::size_t i = 1; i < count; ++i) {
        c = model->shift(c, step);
        out[i] = {model->encode(c), 0.0};
      }
    });
    sys.with_circle_order(std::pow(model->lipschitz(), static_cast<double>(std::labs(step))));
    return sys;
  }
  auto sys = DynSystem::map(
      name, SpaceKind::Circle, [lift](Point p) { return Point{lift(p.x), 0.0}; },
      [lift](Point p) { return Point{lift.inverse(p.x, 0.0), 0.0}; });
  if (auto lip = lift.lipschitz()) sys.with_circle_order(*lip);
  return sys;
}

CircleEstimate hpol_map(const CircleLift& lift, const CircleSchedules& schedules, const EstimateOptions& opts) {
  CircleEstimate out;
  out.rotation = rotation_number(lift);
  DynSystem sys = circle_system(lift);
  GridPolicy grid = schedules.grid ? *schedules.grid : default_circle_grid(lift);
  out.estimate = estimate_hpol(sys, schedules.n, schedules.eps, grid, opts);
  if (out.rotation.rational) {
    PeriodicStructure ps = periodic_structure(lift);
    out.classification = ps.everything_periodic ? "rotation-like" : "rational-non-rotation";
  } else {
    out.classification = out.estimate.headline < 0.5 ? "rotation-like" : "irrational-non-rotation";
  }
  return out;
}

}  // namespace hpol
