#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include "hpol/errors.hpp"
#include "hpol/numerics.hpp"
#include "hpol/planarflows.hpp"

using namespace hpol;

namespace {

constexpr double kPi = std::numbers::pi;

// Independent RK4 solution of x' = v(x) from x0 up to time t.
double solve_ode(const std::function<double(double)>& v, double x0, double t) {
  const int n = 20000;
  double h = t / n, x = x0;
  for (int i = 0; i < n; ++i) {
    double k1 = v(x), k2 = v(x + 0.5 * h * k1), k3 = v(x + 0.5 * h * k2), k4 = v(x + h * k3);
    x += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  return x;
}

SuspensionFlow quad_suspension() {
  return SuspensionFlow(Isotopy::of_interval("quad", [](double x) { return x + 0.3 * x * (1 - x); }, 0.0, 1.0));
}

}  // namespace

TEST(L1Compare, EqualFieldsGiveZero) {
  auto f = [](double x) { return 1.0 + 0.5 * std::sin(kPi * x) * std::sin(kPi * x); };
  auto r = l1_compare(f, f, 0.0, 1.0, 0.2, 0.3);
  EXPECT_EQ(r.lhs, 0.0);
  EXPECT_EQ(r.rhs, 0.0);
  EXPECT_TRUE(r.holds);
}

TEST(L1Compare, ConstantFields) {
  auto f = [](double) { return 1.0; };
  auto g = [](double) { return 1.1; };
  for (double t : {0.1, 0.5, 0.9}) {
    auto r = l1_compare(f, g, 0.0, 1.0, 0.0, t);
    EXPECT_NEAR(r.lhs, 0.1 * t, 1e-12);
    EXPECT_NEAR(r.rhs, 0.11, 1e-12);
    EXPECT_TRUE(r.holds);
  }
  // eta reaches 1 at t = 1/1.1.
  EXPECT_THROW(l1_compare(f, g, 0.0, 1.0, 0.0, 0.95), WindowError);
}

TEST(L1Compare, SineSquaredAgainstOdeOracle) {
  auto f = [](double x) { return 1.0 + 0.5 * std::sin(kPi * x) * std::sin(kPi * x); };
  auto g = [&](double x) { return f(x) + 0.05; };
  auto r = l1_compare(f, g, 0.0, 1.0, 0.0, 0.5);
  EXPECT_NEAR(r.m, 1.0, 1e-12);
  EXPECT_NEAR(r.M, 1.55, 1e-12);
  EXPECT_NEAR(r.rhs, 1.55 * 0.05, 1e-10);
  EXPECT_NEAR(r.lhs, std::fabs(solve_ode(f, 0.0, 0.5) - solve_ode(g, 0.0, 0.5)), 1e-9);
  EXPECT_TRUE(r.holds);
}

TEST(L1Compare, HypothesisViolation) {
  auto f = [](double) { return 1.0; };
  auto g = [](double) { return 2.5; };
  EXPECT_THROW(l1_compare(f, g, 0.0, 1.0, 0.0, 0.1), PreconditionError);
}

TEST(BoundConstants, RecomputedFromField) {
  const double a = 0.3, b = 0.2;
  auto k = bound_constants(sheared_field(a, b));
  EXPECT_NEAR(k.mu_m, 1 - a, 1e-9);
  EXPECT_NEAR(k.mu_M, 1 + a, 1e-9);
  EXPECT_NEAR(k.kappa, 2 * kPi * a, 1e-6);
  EXPECT_NEAR(k.C, k.kappa * k.mu_M / (k.mu_m * k.mu_m), 1e-15);
  EXPECT_NEAR(k.alpha, (1 + a) / (1 - a), 1e-9);
  EXPECT_NEAR(k.beta, 1 + a, 1e-9);
  EXPECT_NEAR(k.c0, 1 / (9 * k.beta * k.alpha), 1e-15);
  EXPECT_NEAR(k.c1, 1 / (9 * k.beta * k.C), 1e-15);
  EXPECT_NEAR(k.nu, 1 / (4 * k.p), 1e-15);
  EXPECT_NEAR(k.c_eps(0.5), 1 / std::min(k.c1 * 0.5, 0.25 / 18), 1e-9);

  auto ks = bound_constants(suspension_field(quad_suspension()));
  EXPECT_EQ(ks.mu_m, 1.0);
  EXPECT_EQ(ks.mu_M, 1.0);
  EXPECT_EQ(ks.kappa, 0.0);
  EXPECT_EQ(ks.C, 0.0);
  EXPECT_TRUE(std::isinf(ks.c1));
}

TEST(OrbitGraph, IntegratedGraphFollowsTheFlow) {
  auto field = sheared_field(0.3, 0.2);
  auto g = integrate_orbit_graph(field, {0.0, 0.4}, -1.0, 3.0);
  for (double t : {-0.7, 0.4, 1.3, 2.2}) {
    Point p = field.flow(t, {0.0, 0.4});
    EXPECT_NEAR(g(p.x), p.y, 1e-8);
  }
}

TEST(Deviation, SuspensionAndShearedFields) {
  auto s = quad_suspension();
  auto field = suspension_field(s);
  auto k = bound_constants(field);
  auto phi = s.orbit_graph(0.1, -1, 8);
  auto psi = s.orbit_graph(0.2, -1, 8);
  auto r = deviation(field, k, 0.0, phi, psi, 5.0);
  EXPECT_EQ(r.measured, 0.0);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(deviation(field, k, 0.0, phi, phi, 5.0).measured, 0.0);

  auto sh = sheared_field(0.3, 0.2);
  auto ksh = bound_constants(sh);
  auto lo = integrate_orbit_graph(sh, {0.0, 0.3}, -1, 8);
  auto hi = integrate_orbit_graph(sh, {0.0, 0.33}, -1, 8);
  auto d = deviation(sh, ksh, 0.25, lo, hi, 3.0);
  EXPECT_GT(d.measured, 0.0);
  EXPECT_TRUE(d.holds);
  EXPECT_LT(d.measured, d.bound);

  BoundConstants bad = ksh;
  bad.mu_m = 0;
  EXPECT_THROW(deviation(sh, bad, 0.0, lo, hi, 1.0), InvalidInput);
}

TEST(StripDiameter, DegenerateAndViolatedHypotheses) {
  SuspensionFlow s(Isotopy::of_lift(sine_lift()));
  auto field = suspension_field(s);
  auto k = bound_constants(field);
  auto psi = s.orbit_graph(0.3, -1, 10);
  auto phi = GraphOrbit::analytic([psi](double x) { return psi(x) - 1e-9; });
  auto r = strip_diameter_check(field, k, 0.4, 0.4, phi, psi, 5.0, 0.25);
  EXPECT_TRUE(r.holds);
  EXPECT_LT(r.diameter, 1e-6);
  // Verticals farther apart than c0 eps.
  EXPECT_THROW(strip_diameter_check(field, k, 0.0, 0.5, phi, psi, 5.0, 0.25), PreconditionError);

  auto sh = sheared_field(0.3, 0.2);
  auto ksh = bound_constants(sh);
  auto lo = integrate_orbit_graph(sh, {0.0, 0.3}, -1, 6);
  auto near = integrate_orbit_graph(sh, {0.0, 0.3 + 1e-4}, -1, 6);
  auto far = integrate_orbit_graph(sh, {0.0, 0.3 + 0.05}, -1, 6);
  EXPECT_TRUE(strip_diameter_check(sh, ksh, 0.1, 0.1 + ksh.c0 * 0.5, lo, near, 2.0, 0.5).holds);
  EXPECT_THROW(strip_diameter_check(sh, ksh, 0.1, 0.1 + ksh.c0 * 0.5, lo, far, 2.0, 0.5), PreconditionError);
}

TEST(StripArea, ConstantGapAndSuspensionPairs) {
  SuspensionFlow id(Isotopy::of_lift(rotation_lift(0.0)));
  auto k0 = bound_constants(suspension_field(id));
  EXPECT_EQ(k0.p, 0.0);
  auto phi = id.orbit_graph(0.2, -1, 12);
  auto psi = id.orbit_graph(0.25, -1, 12);
  EXPECT_NEAR(strip_area(phi, psi, 10.0), 0.5, 1e-12);
  auto c = area_lower_bound_check(k0, phi, psi, 10.0);
  EXPECT_TRUE(c.holds);
  EXPECT_NEAR(c.bound, 0.5 * 0.05 * 0.05, 1e-15);

  SuspensionFlow s(Isotopy::of_lift(sine_lift()));
  auto k = bound_constants(suspension_field(s));
  auto lo = s.orbit_graph(0.1, -1, 12);
  auto hi = s.orbit_graph(0.3, -1, 12);
  double exact = suspension_orbit_integral(s, 0.3, 10.0) - suspension_orbit_integral(s, 0.1, 10.0);
  EXPECT_NEAR(strip_area(lo, hi, 10.0), exact, 1e-6);
  EXPECT_NEAR(suspension_orbit_integral(s, 0.1, 2.5),
              num::trapezoid([&](double x) { return lo(x); }, 0.0, 2.5, 1e-4).value, 1e-7);
  EXPECT_TRUE(area_lower_bound_check(k, lo, hi, 10.0).holds);
  EXPECT_THROW(area_lower_bound_check(k, lo, hi, 1e-3), PreconditionError);
}

TEST(StripCover, IdentityBaseGivesRectangles) {
  SuspensionFlow id(Isotopy::of_lift(rotation_lift(0.0)));
  auto c = strip_cover(id, 0.9, 5.0);
  ASSERT_GE(c.y.size(), 3u);
  double width = c.strip_area_target / 5.0;
  for (std::size_t i = 1; i + 1 < c.y.size(); ++i) EXPECT_NEAR(c.y[i] - c.y[i - 1], width, 1e-12);
  EXPECT_EQ(c.passed, c.checked);
  EXPECT_EQ(c.checked, c.domains.size());
  EXPECT_EQ(c.coverage_misses, 0u);
  EXPECT_LE(static_cast<double>(c.domains.size()), c.bound);
}

TEST(StripCover, SineSuspension) {
  SuspensionFlow s(Isotopy::of_lift(sine_lift()));
  auto c = strip_cover(s, 0.5, 5.0);
  EXPECT_EQ(c.hypothesis_failures, 0u);
  EXPECT_EQ(c.passed, c.domains.size());
  EXPECT_EQ(c.coverage_misses, 0u);
  EXPECT_EQ(c.coverage_samples, 10000u);
  EXPECT_LE(static_cast<double>(c.domains.size()), c.bound);
  EXPECT_LE(static_cast<double>(c.domains.size()), c.product_bound);
  for (std::size_t i = 1; i < c.x_cuts.size(); ++i) {
    EXPECT_LE(c.x_cuts[i] - c.x_cuts[i - 1], c.constants.c0 * 0.5 * (1 + 1e-12));
  }
  // Affine growth in T: the strip count scales with T.
  auto c2 = strip_cover(s, 0.5, 10.0, {0, 3, 0});
  EXPECT_NEAR(static_cast<double>(c2.y.size() - 1) / static_cast<double>(c.y.size() - 1), 2.0, 0.01);
}

TEST(StripCover, AtLeastTheSeparatedCount) {
  // A set whose points are pairwise more than eps apart in d_T meets every
  // domain of diameter <= eps at most once.
  SuspensionFlow s(Isotopy::of_lift(sine_lift()));
  const double eps = 0.5, T = 5.0;
  auto c = strip_cover(s, eps, T, {0, 3, 0});
  const int g = 24;
  const double dt = 0.01;
  std::vector<std::vector<Point>> paths;
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      double x = (i + 0.5) / g, y = s.flow(x, {0.0, (j + 0.5) / g}).y;
      std::vector<Point> path;
      for (double t = 0; t <= T; t += dt) path.push_back(s.flow(t, {x, y}));
      paths.push_back(path);
    }
  }
  auto circ = [](double d) {
    d = std::fabs(std::fmod(d, 1.0));
    return std::min(d, 1.0 - d);
  };
  std::vector<std::size_t> kept;
  for (std::size_t a = 0; a < paths.size(); ++a) {
    bool separated = true;
    for (std::size_t b : kept) {
      double d = 0;
      for (std::size_t k = 0; k < paths[a].size(); ++k) {
        d = std::max({d, circ(paths[a][k].x - paths[b][k].x), circ(paths[a][k].y - paths[b][k].y)});
      }
      if (d <= eps) {
        separated = false;
        break;
      }
    }
    if (separated) kept.push_back(a);
  }
  EXPECT_GE(c.domains.size(), kept.size());
}

TEST(StripCover, Preconditions) {
  SuspensionFlow s(Isotopy::of_lift(sine_lift()));
  EXPECT_THROW(strip_cover(s, 0.5, 0.1), PreconditionError);
  EXPECT_THROW(strip_cover(s, 1.5, 5.0), PreconditionError);
  EXPECT_THROW(strip_cover(quad_suspension(), 0.5, 5.0), PreconditionError);
}

TEST(BoundLedger, CsvRows) {
  std::ostringstream os;
  write_bound_checks_csv(os, {{"l1-comparison", 0.1, 0.2, 0.1, 1e-10, true, "t=0.5"}});
  EXPECT_EQ(os.str(), "lemma,lhs,rhs,margin,error,holds,params\nl1-comparison,0.1,0.2,0.1,1e-10,true,\"t=0.5\"\n");
}
