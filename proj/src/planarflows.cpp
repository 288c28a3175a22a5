#include "hpol/planarflows.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <ostream>
#include <sstream>

#include "hpol/errors.hpp"
#include "hpol/numerics.hpp"

namespace hpol {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kNormStep = 1e-3;

// Largest speed in the sup norm, which bounds how far a point moves per unit time.
double sup_speed(const BoundConstants& k) { return std::max({k.mu_M, k.max_x2, 1e-300}); }

struct Hypotheses {
  GapNorms norms;
  std::string violated;  // empty when all hold
};

// Gap norms on [a, b + mu_M T], which contains the abscissas reached from
// [a, b] within time T; `width` is the distance between the two verticals.
Hypotheses check_hypotheses(const BoundConstants& k, double a, double b, double width, const GraphOrbit& phi,
                            const GraphOrbit& psi, double T, double eps) {
  Hypotheses h;
  h.norms = gap_norms(phi, psi, a, b + k.mu_M * T, 2.0 * k.p);
  if (!(h.norms.min > 0)) {
    h.violated = "psi > phi";
  } else if (!(h.norms.sup + h.norms.sup_error < eps / 3.0)) {
    h.violated = "C0 gap < eps/3";
  } else if (!(h.norms.l1 + h.norms.l1_error <= k.c1 * eps)) {
    h.violated = "L1 gap <= c1 eps";
  } else if (!(width <= k.c0 * eps * (1.0 + 1e-12))) {
    h.violated = "|x - x'| <= c0 eps";
  }
  return h;
}

// Sampled sup-norm diameter of the evolved domain over the time window.
double sampled_diameter(const PlanarField& field, const BoundConstants& k, double x, double x2,
                        const GraphOrbit& phi, const GraphOrbit& psi, double T, double eps, std::size_t grid) {
  grid = std::max<std::size_t>(grid, 2);
  const double dt = 0.05 * eps / sup_speed(k);
  std::vector<std::vector<Point>> paths;
  paths.reserve(grid * grid);
  for (std::size_t i = 0; i < grid; ++i) {
    double xi = x + (x2 - x) * static_cast<double>(i) / static_cast<double>(grid - 1);
    double lo = phi(xi);
    double hi = psi(xi);
    for (std::size_t j = 0; j < grid; ++j) {
      double y = lo + (hi - lo) * static_cast<double>(j) / static_cast<double>(grid - 1);
      paths.push_back(field.trajectory({xi, y}, T, dt));
    }
  }
  double diam = 0;
  for (std::size_t s = 0; s < paths.front().size(); ++s) {
    double xmin = paths[0][s].x, xmax = xmin, ymin = paths[0][s].y, ymax = ymin;
    for (const auto& path : paths) {
      xmin = std::min(xmin, path[s].x);
      xmax = std::max(xmax, path[s].x);
      ymin = std::min(ymin, path[s].y);
      ymax = std::max(ymax, path[s].y);
    }
    diam = std::max({diam, xmax - xmin, ymax - ymin});
  }
  return diam;
}

}  // namespace

std::vector<Point> PlanarField::trajectory(Point p, double T, double dt) const {
  if (!(dt > 0) || !(T >= 0)) throw DomainError("trajectory: need dt > 0 and T >= 0");
  auto n = static_cast<std::size_t>(std::ceil(T / dt));
  std::vector<Point> out;
  out.reserve(n + 1);
  if (unit_speed && orbit_through) {
    GraphOrbit g = orbit_through(p, p.x, p.x + T);
    for (std::size_t i = 0; i <= n; ++i) {
      double t = std::min(T, static_cast<double>(i) * dt);
      out.push_back({p.x + t, g(p.x + t)});
    }
    return out;
  }
  out.push_back(p);
  double t = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    double next = std::min(T, static_cast<double>(i) * dt);
    p = flow(next - t, p);
    t = next;
    out.push_back(p);
  }
  return out;
}

PlanarField suspension_field(const SuspensionFlow& s) {
  PlanarField f;
  f.name = "suspension:" + s.isotopy().name();
  f.vf = [s](Point p) { return s.field(p); };
  f.flow = [s](double t, Point p) { return s.flow(t, p); };
  f.orbit_through = [s](Point p, double lo, double hi) {
    double y0 = s.flow(-p.x, p).y;
    return s.orbit_graph(y0, lo - 1.0, hi + 1.0);
  };
  if (!s.isotopy().degree_one()) {
    f.y_origin = s.isotopy().domain_lo();
    f.period_y = s.isotopy().domain_hi() - s.isotopy().domain_lo();
  }
  f.unit_speed = true;
  return f;
}

PlanarField sheared_field(double a, double b, double step) {
  if (!(std::fabs(a) < 1.0)) throw DomainError("sheared_field: need |a| < 1");
  if (!(step > 0)) throw DomainError("sheared_field: step must be positive");
  PlanarField f;
  std::ostringstream name;
  name << "sheared:" << a << "," << b;
  f.name = name.str();
  f.vf = [a, b](Point p) {
    return std::array<double, 2>{1.0 + a * std::sin(kTwoPi * p.y), b * std::cos(kTwoPi * p.x)};
  };
  f.flow = [vf = f.vf, step](double t, Point p) {
    if (t == 0.0) return p;
    auto n = static_cast<long>(std::ceil(std::fabs(t) / step));
    double h = t / static_cast<double>(n);
    num::Field2 rhs = [&vf](double, std::array<double, 2> z) { return vf({z[0], z[1]}); };
    std::array<double, 2> z{p.x, p.y};
    for (long i = 0; i < n; ++i) z = num::rk4_step(rhs, 0.0, z, h);
    return Point{z[0], z[1]};
  };
  f.orbit_through = [vf = f.vf](Point p, double lo, double hi) {
    PlanarField tmp;
    tmp.vf = vf;
    return integrate_orbit_graph(tmp, p, lo - 0.1, hi + 0.1);
  };
  return f;
}

GraphOrbit integrate_orbit_graph(const PlanarField& field, Point start, double x_lo, double x_hi, double h) {
  if (!(h > 0)) throw DomainError("integrate_orbit_graph: step must be positive");
  x_lo = std::min(x_lo, start.x);
  x_hi = std::max(x_hi, start.x);
  auto vf = field.vf;
  auto slope = [vf](double x, double y) {
    auto v = vf({x, y});
    return v[1] / v[0];
  };
  auto left = static_cast<long>(std::ceil((start.x - x_lo) / h));
  auto right = static_cast<long>(std::ceil((x_hi - start.x) / h));
  struct Table {
    double x0, h;
    std::vector<double> y, d;
  };
  auto tab = std::make_shared<Table>();
  tab->x0 = start.x - static_cast<double>(left) * h;
  tab->h = h;
  tab->y.assign(static_cast<std::size_t>(left + right + 1), 0.0);
  tab->d.assign(tab->y.size(), 0.0);
  auto rk = [&](double x, double y, double s) {
    double k1 = slope(x, y);
    double k2 = slope(x + 0.5 * s, y + 0.5 * s * k1);
    double k3 = slope(x + 0.5 * s, y + 0.5 * s * k2);
    double k4 = slope(x + s, y + s * k3);
    return y + s / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4);
  };
  auto idx0 = static_cast<std::size_t>(left);
  tab->y[idx0] = start.y;
  for (std::size_t i = idx0 + 1; i < tab->y.size(); ++i) {
    double x = tab->x0 + static_cast<double>(i - 1) * h;
    tab->y[i] = rk(x, tab->y[i - 1], h);
  }
  for (std::size_t i = idx0; i-- > 0;) {
    double x = tab->x0 + static_cast<double>(i + 1) * h;
    tab->y[i] = rk(x, tab->y[i + 1], -h);
  }
  for (std::size_t i = 0; i < tab->y.size(); ++i) tab->d[i] = slope(tab->x0 + static_cast<double>(i) * h, tab->y[i]);
  auto phi = [tab, rk](double x) {
    double u = (x - tab->x0) / tab->h;
    auto last = static_cast<double>(tab->y.size() - 1);
    if (u < 0 || u > last) {
      // Outside the table: continue the integration from the nearest end.
      bool below = u < 0;
      std::size_t i = below ? 0 : tab->y.size() - 1;
      double xi = tab->x0 + static_cast<double>(i) * tab->h;
      double y = tab->y[i];
      auto n = static_cast<long>(std::ceil(std::fabs(x - xi) / tab->h));
      double s = (x - xi) / static_cast<double>(n);
      for (long j = 0; j < n; ++j) {
        y = rk(xi, y, s);
        xi += s;
      }
      return y;
    }
    auto i = static_cast<std::size_t>(std::min(std::floor(u), last - 1));
    double s = u - static_cast<double>(i);
    double h = tab->h;
    double y0 = tab->y[i], y1 = tab->y[i + 1], d0 = tab->d[i] * h, d1 = tab->d[i + 1] * h;
    double s2 = s * s, s3 = s2 * s;
    return (2 * s3 - 3 * s2 + 1) * y0 + (s3 - 2 * s2 + s) * d0 + (-2 * s3 + 3 * s2) * y1 + (s3 - s2) * d1;
  };
  return GraphOrbit::analytic(phi);
}

double BoundConstants::c_eps(double eps) const { return 1.0 / std::min(c1 * eps, eps * eps / 18.0); }

BoundConstants bound_constants(const PlanarField& field, std::size_t grid) {
  if (grid < 2) throw ConfigError("bound_constants: grid too small");
  BoundConstants k;
  k.mu_m = std::numeric_limits<double>::infinity();
  k.mu_M = -k.mu_m;
  const double fd = 1e-6;
  const double y_top = field.y_origin + field.period_y;
  for (std::size_t i = 0; i < grid; ++i) {
    for (std::size_t j = 0; j < grid; ++j) {
      Point q{field.period_x * static_cast<double>(i) / static_cast<double>(grid),
              field.y_origin + field.period_y * static_cast<double>(j) / static_cast<double>(grid)};
      auto v = field.vf(q);
      k.mu_m = std::min(k.mu_m, v[0]);
      k.mu_M = std::max(k.mu_M, v[0]);
      k.max_x2 = std::max(k.max_x2, std::fabs(v[1]));
      k.p = std::max(k.p, std::fabs(v[1] / v[0]));
      double gx = (field.vf({q.x + fd, q.y})[0] - field.vf({q.x - fd, q.y})[0]) / (2 * fd);
      // One-sided at the edges of a non-periodic ordinate range.
      double y_up = std::min(q.y + fd, y_top);
      double y_dn = std::max(q.y - fd, field.y_origin);
      double gy = (field.vf({q.x, y_up})[0] - field.vf({q.x, y_dn})[0]) / (y_up - y_dn);
      k.kappa = std::max(k.kappa, std::hypot(gx, gy));
    }
  }
  if (!(k.mu_m > 0)) throw InvalidInput("bound_constants: X1 must be positive (mu_m > 0)");
  k.C = k.kappa * k.mu_M / (k.mu_m * k.mu_m);
  k.alpha = k.mu_M / k.mu_m;
  k.beta = std::max({1.0, k.mu_M, k.max_x2});
  k.c0 = 1.0 / (9.0 * k.beta * k.alpha);
  k.c1 = k.C > 0 ? 1.0 / (9.0 * k.beta * k.C) : std::numeric_limits<double>::infinity();
  // With horizontal orbits any slope bound works; 1/4 keeps the area constant 1/2.
  k.nu = k.p > 0 ? 1.0 / (4.0 * k.p) : 1.0;
  return k;
}

void write_bound_checks_csv(std::ostream& os, const std::vector<BoundCheck>& rows, bool header) {
  if (header) os << "lemma,lhs,rhs,margin,error,holds,params\n";
  auto old = os.precision(12);
  for (const auto& r : rows) {
    os << r.lemma << ',' << r.lhs << ',' << r.rhs << ',' << r.margin << ',' << r.error << ','
       << (r.holds ? "true" : "false") << ",\"" << r.params << "\"\n";
  }
  os.precision(old);
}

L1Comparison l1_compare(const std::function<double(double)>& f, const std::function<double(double)>& g, double lo,
                        double hi, double x0, double t) {
  if (!(lo < hi) || x0 < lo || x0 > hi) throw DomainError("l1_compare: need lo < hi and x0 in [lo, hi]");
  L1Comparison r;
  r.m = std::numeric_limits<double>::infinity();
  r.M = -r.m;
  const int samples = 4000;
  for (int i = 0; i <= samples; ++i) {
    double x = lo + (hi - lo) * i / samples;
    double a = f(x), b = g(x);
    r.m = std::min({r.m, a, b});
    r.M = std::max({r.M, a, b});
    r.sup = std::max(r.sup, std::fabs(a - b));
  }
  if (!(r.m > 0)) throw PreconditionError("l1_compare: fields must be bounded below by m > 0");
  auto diff = [&](double x) { return std::fabs(f(x) - g(x)); };
  r.l1 = num::integrate_adaptive(diff, lo, hi, 1e-13);
  if (!(std::max(r.l1, r.sup) < r.m)) {
    throw PreconditionError("l1_compare: max(||f-g||_L1, ||f-g||_inf) must be below m");
  }
  auto primitive = [&](const std::function<double(double)>& h, double x) {
    return num::integrate_adaptive([&](double u) { return 1.0 / h(u); }, x0, x, 1e-13);
  };
  double f_lo = primitive(f, lo), f_hi = primitive(f, hi);
  double g_lo = primitive(g, lo), g_hi = primitive(g, hi);
  if (t < std::max(f_lo, g_lo) || t > std::min(f_hi, g_hi)) {
    throw WindowError("l1_compare: t outside the common solution window");
  }
  auto solve = [&](const std::function<double(double)>& h) {
    return num::bisect_increasing([&](double x) { return primitive(h, x); }, t, lo, hi, 1e-14);
  };
  double gamma = solve(f);
  double eta = solve(g);
  r.lhs = std::fabs(gamma - eta);
  r.rhs = r.M / (r.m * r.m) * r.l1;
  r.error = 1e-10;
  r.holds = r.lhs <= r.rhs + r.error;
  return r;
}

GapNorms gap_norms(const GraphOrbit& phi, const GraphOrbit& psi, double a, double b, double slope_bound, double h) {
  if (!(b >= a)) throw DomainError("gap_norms: need a <= b");
  GapNorms n;
  auto steps = std::max<long>(2, static_cast<long>(std::ceil((b - a) / h)));
  if (steps % 2) ++steps;
  double step = (b - a) / static_cast<double>(steps);
  double fine = 0, coarse = 0;
  n.min = std::numeric_limits<double>::infinity();
  for (long i = 0; i <= steps; ++i) {
    double x = a + step * static_cast<double>(i);
    double gap = psi(x) - phi(x);
    n.sup = std::max(n.sup, std::fabs(gap));
    n.min = std::min(n.min, gap);
    double w = (i == 0 || i == steps) ? 0.5 : 1.0;
    fine += w * std::fabs(gap);
    if (i % 2 == 0) coarse += ((i == 0 || i == steps) ? 0.5 : 1.0) * std::fabs(gap);
  }
  fine *= step;
  coarse *= 2 * step;
  n.l1 = fine;
  n.l1_error = std::fabs(fine - coarse) / 3.0 + 1e-15 * (b - a);
  n.sup_error = 0.5 * slope_bound * step;
  return n;
}

DeviationReport deviation(const PlanarField& field, const BoundConstants& k, double x0, const GraphOrbit& phi,
                          const GraphOrbit& psi, double T, std::size_t samples) {
  if (!(k.mu_m > 0)) throw InvalidInput("deviation: X1 must be positive (mu_m > 0)");
  if (!(T > 0)) throw DomainError("deviation: need T > 0");
  samples = std::max<std::size_t>(samples, 2);
  DeviationReport r;
  double a = phi(x0), b = psi(x0);
  double ref = field.flow(T, {x0, a}).x;
  for (std::size_t i = 1; i < samples; ++i) {
    double y = a + (b - a) * static_cast<double>(i) / static_cast<double>(samples - 1);
    r.measured = std::max(r.measured, std::fabs(field.flow(T, {x0, y}).x - ref));
  }
  GapNorms n = gap_norms(phi, psi, x0, x0 + k.mu_M * T, 2.0 * k.p);
  r.l1 = n.l1;
  r.bound = k.C * n.l1;
  r.error = k.C * n.l1_error + 1e-9;
  r.holds = r.measured <= r.bound + r.error;
  return r;
}

DiameterCheck strip_diameter_check(const PlanarField& field, const BoundConstants& k, double x, double x2,
                                   const GraphOrbit& phi, const GraphOrbit& psi, double T, double eps,
                                   std::size_t grid) {
  if (!(eps > 0) || !(T > 0)) throw DomainError("strip_diameter_check: need eps > 0 and T > 0");
  if (x2 < x) std::swap(x, x2);
  Hypotheses h = check_hypotheses(k, x, x2, x2 - x, phi, psi, T, eps);
  if (!h.violated.empty()) throw PreconditionError("strip_diameter_check: hypothesis fails: " + h.violated);
  DiameterCheck r;
  r.diameter = sampled_diameter(field, k, x, x2, phi, psi, T, eps, grid);
  r.holds = r.diameter <= eps;
  return r;
}

double strip_area(const GraphOrbit& phi, const GraphOrbit& psi, double T) {
  if (!(T >= 0)) throw DomainError("strip_area: need T >= 0");
  return num::trapezoid([&](double x) { return psi(x) - phi(x); }, 0.0, T, kNormStep).value;
}

AreaCheck area_lower_bound_check(const BoundConstants& k, const GraphOrbit& phi, const GraphOrbit& psi, double T) {
  GapNorms n = gap_norms(phi, psi, 0.0, T, 2.0 * k.p);
  if (!(n.min > 0)) throw PreconditionError("area_lower_bound_check: need psi > phi");
  if (T < k.nu * n.sup) throw PreconditionError("area_lower_bound_check: T below nu ||psi - phi||");
  AreaCheck r;
  auto q = num::trapezoid([&](double x) { return psi(x) - phi(x); }, 0.0, T, kNormStep);
  r.area = q.value;
  r.area_error = q.error + 1e-15 * T;
  r.sup_gap = n.sup;
  r.bound = 0.5 * n.sup * n.sup;
  r.holds = r.area + r.area_error >= r.bound;
  return r;
}

double suspension_orbit_integral(const SuspensionFlow& s, double y, double T) {
  if (!(T >= 0)) throw DomainError("suspension_orbit_integral: need T >= 0");
  const Isotopy& iso = s.isotopy();
  double cells = std::floor(T);
  double rest = T - cells;
  double sum = 0;
  double z = y;
  for (long j = 0; j < static_cast<long>(cells); ++j) {
    double fz = iso.base(z);
    // The bump integrates to 1/2 over a cell.
    sum += 0.5 * (z + fz);
    z = fz;
  }
  if (rest > 0) sum += rest * z + SmoothBump::integral(rest) * (iso.base(z) - z);
  return sum;
}

StripCover strip_cover(const SuspensionFlow& s, double eps, double T, const StripCoverOptions& opts) {
  if (!s.isotopy().degree_one()) throw PreconditionError("strip_cover: needs the suspension of a circle lift");
  if (!(eps > 0 && eps < 1)) throw PreconditionError("strip_cover: need eps in (0, 1)");
  PlanarField field = suspension_field(s);
  StripCover c;
  c.eps = eps;
  c.T = T;
  c.constants = bound_constants(field);
  const BoundConstants& k = c.constants;
  if (!(T > k.nu)) throw PreconditionError("strip_cover: need T > 1/(4p)");
  const double target = std::min(k.c1 * eps, eps * eps / 18.0);
  c.strip_area_target = target;

  auto area = [&](double y) { return suspension_orbit_integral(s, y, T); };
  const double top = area(1.0);
  c.y.push_back(0.0);
  double current = area(0.0);
  while (top - current > target * (1.0 + 1e-9)) {
    double lo = c.y.back();
    double goal = current + target;
    if (!(area(1.0) >= goal)) throw NumericError("strip_cover: equal-area search fails to bracket");
    double y = num::bisect_increasing(area, goal, lo, 1.0, 0.0);
    if (!(y > lo)) throw NumericError("strip_cover: equal-area search made no progress");
    c.y.push_back(y);
    current = area(y);
  }
  c.y.push_back(1.0);

  const double pieces_exact = 1.0 / (k.c0 * eps);
  auto pieces = static_cast<std::size_t>(std::ceil(pieces_exact * (1.0 - 1e-12)));
  for (std::size_t j = 0; j <= pieces; ++j) c.x_cuts.push_back(static_cast<double>(j) / static_cast<double>(pieces));
  const std::size_t strips = c.y.size() - 1;
  for (std::size_t i = 0; i < strips; ++i) {
    for (std::size_t j = 0; j < pieces; ++j) c.domains.push_back({i, c.x_cuts[j], c.x_cuts[j + 1]});
  }
  const double ce = k.c_eps(eps);
  c.bound = ce / (k.c0 * eps) * T + pieces_exact + 1.0;
  c.product_bound = (ce * T + 1.0) * (pieces_exact + 1.0);

  if (opts.check_stride > 0) {
    std::size_t cached_strip = strips;
    GraphOrbit lower, upper;
    bool strip_ok = false;
    for (std::size_t d = 0; d < c.domains.size(); d += opts.check_stride) {
      const StripDomain& dom = c.domains[d];
      if (dom.strip != cached_strip) {
        cached_strip = dom.strip;
        lower = s.orbit_graph(c.y[dom.strip], -1.0, T + 2.0);
        upper = s.orbit_graph(c.y[dom.strip + 1], -1.0, T + 2.0);
        // The hypotheses over [0, 1 + T] cover every domain of the strip.
        Hypotheses h = check_hypotheses(k, 0.0, 1.0, 1.0 / static_cast<double>(pieces), lower, upper, T, eps);
        strip_ok = h.violated.empty();
        if (!strip_ok) {
          ++c.hypothesis_failures;
        }
      }
      ++c.checked;
      if (!strip_ok) continue;
      double diam = sampled_diameter(field, k, dom.x_lo, dom.x_hi, lower, upper, T, eps, opts.check_grid);
      c.max_diameter = std::max(c.max_diameter, diam);
      if (diam <= eps) ++c.passed;
    }
  }

  // Quasi-random points of the fundamental domain, located by pulling back
  // to the section x = 0 where the strips are ordered by y.
  c.coverage_samples = opts.coverage_samples;
  const double g1 = 0.7548776662466927, g2 = 0.5698402909980532;
  for (std::size_t i = 0; i < opts.coverage_samples; ++i) {
    double x = std::fmod(0.5 + g1 * static_cast<double>(i + 1), 1.0);
    double v = std::fmod(0.5 + g2 * static_cast<double>(i + 1), 1.0);
    double y = s.flow(x, {0.0, v}).y;
    double y0 = s.flow(-x, {x, y}).y;
    auto it = std::upper_bound(c.y.begin(), c.y.end(), y0);
    bool found = false;
    if (it != c.y.begin() && it != c.y.end()) {
      auto strip = static_cast<std::size_t>(it - c.y.begin()) - 1;
      auto j = std::min(pieces - 1, static_cast<std::size_t>(x * static_cast<double>(pieces)));
      const StripDomain& dom = c.domains[strip * pieces + j];
      double lo = s.flow(x, {0.0, c.y[strip]}).y;
      double hi = s.flow(x, {0.0, c.y[strip + 1]}).y;
      found = dom.strip == strip && x >= dom.x_lo && x <= dom.x_hi && y >= lo - 1e-12 && y <= hi + 1e-12;
    } else if (y0 == c.y.back()) {
      found = true;
    }
    if (!found) ++c.coverage_misses;
  }
  return c;
}

}  // namespace hpol
