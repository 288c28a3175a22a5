#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "hpol/errors.hpp"
#include "hpol/numerics.hpp"
#include "hpol/suspension.hpp"

using namespace hpol;

namespace {

SuspensionFlow sine_suspension() { return SuspensionFlow(Isotopy::of_lift(sine_lift())); }

Isotopy logistic_like(double c) {
  return Isotopy::of_interval("quad", [c](double x) { return x + c * x * (1.0 - x); }, 0.0, 1.0);
}

}  // namespace

TEST(SmoothBump, EndpointsAndShape) {
  EXPECT_EQ(SmoothBump::value(-0.25), 0.0);
  EXPECT_EQ(SmoothBump::value(0.2), 0.0);
  EXPECT_EQ(SmoothBump::value(0.8), 1.0);
  EXPECT_EQ(SmoothBump::value(1.25), 1.0);
  EXPECT_DOUBLE_EQ(SmoothBump::value(0.5), 0.5);
  double prev = 0;
  for (int i = 0; i <= 1000; ++i) {
    double v = SmoothBump::value(0.25 + 0.5 * i / 1000.0);
    EXPECT_GE(v, prev);
    prev = v;
  }
}

TEST(SmoothBump, DerivativeAndIntegralMatchNumerics) {
  for (int i = 1; i < 100; ++i) {
    double t = i / 100.0;
    double h = 1e-6;
    double fd = (SmoothBump::value(t + h) - SmoothBump::value(t - h)) / (2 * h);
    EXPECT_NEAR(SmoothBump::derivative(t), fd, 1e-6);
    EXPECT_LE(SmoothBump::derivative(t), SmoothBump::kMaxDerivative + 1e-12);
    double q = num::integrate_adaptive([](double s) { return SmoothBump::value(s); }, 0.0, t, 1e-13);
    EXPECT_NEAR(SmoothBump::integral(t), q, 1e-10);
  }
  EXPECT_DOUBLE_EQ(SmoothBump::integral(1.0), 0.5);
}

TEST(Isotopy, EndpointsAndMidpoint) {
  auto iso = logistic_like(0.5);
  for (double x : {0.0, 0.1, 0.4, 0.9}) {
    EXPECT_EQ(iso.eval(0.0, x), x);
    EXPECT_DOUBLE_EQ(iso.eval(1.0, x), x + 0.5 * x * (1 - x));
  }
  // eta(1/2) = 1/2 and f(0.4) = 0.52.
  EXPECT_NEAR(iso.eval(0.5, 0.4), 0.46, 1e-15);
}

TEST(Isotopy, InverseRoundTrip) {
  auto iso = Isotopy::of_lift(sine_lift());
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 1000; ++i) {
    double t = u(rng);
    double x = u(rng);
    EXPECT_NEAR(iso.inverse(t, iso.eval(t, x)), x, 1e-12);
  }
}

TEST(Isotopy, RejectsNonIncreasingBase) {
  EXPECT_THROW(Isotopy::of_interval("fold", [](double x) { return x - 2.0 * x * (1.0 - x); }, 0.0, 1.0),
               InvalidInput);
  EXPECT_THROW(Isotopy::of_interval("shift", [](double x) { return 0.5 * x + 0.1; }, 0.0, 1.0), InvalidInput);
}

TEST(SuspensionFlow, TimeOneFromSectionIsTheBaseMap) {
  auto s = sine_suspension();
  auto f = sine_lift();
  for (int i = 0; i < 1000; ++i) {
    double y = -1.0 + 3.0 * i / 1000.0;
    Point p = s.flow(1.0, {0.0, y});
    EXPECT_EQ(p.x, 1.0);
    EXPECT_NEAR(p.y, f(y), 1e-12);
    Point q = s.flow(0.0, {0.3, y});
    EXPECT_NEAR(q.y, y, 1e-12);
  }
}

TEST(SuspensionFlow, FlowProperty) {
  auto s = sine_suspension();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> ut(-3.0, 3.0);
  std::uniform_real_distribution<double> up(-1.0, 2.0);
  double worst = 0;
  for (int i = 0; i < 1000; ++i) {
    double t = ut(rng);
    double r = ut(rng);
    Point p{up(rng), up(rng)};
    Point a = s.flow(t + r, p);
    Point b = s.flow(t, s.flow(r, p));
    EXPECT_EQ(s.flow(t, p).x, p.x + t);
    worst = std::max({worst, std::fabs(a.x - b.x), std::fabs(a.y - b.y)});
  }
  EXPECT_LE(worst, 1e-9);
}

TEST(SuspensionFlow, AgreesWithIntegrator) {
  auto s = sine_suspension();
  for (double y : {-0.3, 0.0, 0.25, 0.7}) {
    Point exact = s.flow(0.5, {0.0, y});
    Point rk = s.integrate(0.5, {0.0, y});
    EXPECT_NEAR(exact.y, s.isotopy().eval(0.5, y), 1e-12);
    EXPECT_NEAR(rk.y, exact.y, 1e-6);
  }
  Point p{0.37, 0.2};
  EXPECT_NEAR(s.integrate(2.6, p).y, s.flow(2.6, p).y, 1e-6);
  EXPECT_NEAR(s.integrate(-1.4, p).y, s.flow(-1.4, p).y, 1e-6);
}

TEST(SuspensionFlow, FieldIsPeriodicAndBounded) {
  auto s = sine_suspension();
  for (int i = 0; i < 200; ++i) {
    Point p{i / 200.0, std::sin(i * 1.0)};
    auto v = s.field(p);
    auto w = s.field({p.x + 3.0, p.y});
    EXPECT_EQ(v[0], 1.0);
    EXPECT_NEAR(v[1], w[1], 1e-12);
    EXPECT_LE(std::fabs(v[1]), s.x2_bound());
  }
}

TEST(SuspensionFlow, PoincareReturn) {
  auto s = sine_suspension();
  auto f = sine_lift();
  auto once = s.poincare_return(1);
  auto thrice = s.poincare_return(3);
  for (int i = 0; i < 1000; ++i) {
    double y = i / 1000.0;
    EXPECT_NEAR(once(y), f(y), 1e-12);
    EXPECT_NEAR(thrice(y), f(f(f(y))), 1e-9);
  }
  SuspensionFlow id(Isotopy::of_lift(rotation_lift(0.0)));
  EXPECT_DOUBLE_EQ(id.poincare_return(2)(0.3), 0.3);
  EXPECT_THROW(s.poincare_return(0), DomainError);
}

TEST(SuspensionFlow, OrbitGraphs) {
  auto s = sine_suspension();
  auto f = sine_lift();
  auto g = s.orbit_graph(0.2);
  auto h = s.orbit_graph(1.2);
  double y = 0.2;
  for (int n = 0; n <= 10; ++n) {
    EXPECT_NEAR(g(n), y, 1e-12);
    y = f(y);
  }
  for (int i = -50; i < 500; ++i) {
    double x = i / 37.0;
    EXPECT_NEAR(h(x), g(x) + 1.0, 1e-12);
    EXPECT_NEAR(s.flow(x, {0.0, 0.2}).y, g(x), 1e-12);
  }
  SuspensionFlow id(Isotopy::of_lift(rotation_lift(0.0)));
  auto c = id.orbit_graph(0.4);
  for (double x : {-2.5, 0.0, 0.3, 7.9}) EXPECT_EQ(c(x), 0.4);
}

TEST(SuspensionFlow, IntervalBase) {
  SuspensionFlow s(logistic_like(0.3));
  Point p = s.flow(1.0, {0.0, 0.1});
  EXPECT_NEAR(p.y, 0.1 + 0.3 * 0.1 * 0.9, 1e-12);
  Point q = s.flow(-2.25, s.flow(2.25, {0.6, 0.5}));
  EXPECT_NEAR(q.y, 0.5, 1e-12);
  EXPECT_THROW(suspension_time_one(s, "x"), InvalidInput);
}

TEST(SuspensionFlow, TimeOneSystemOrbit) {
  auto s = sine_suspension();
  auto sys = suspension_time_one(s, "susp");
  std::vector<Point> orbit(20);
  Point start{0.45, 0.3};
  sys.orbit(start, orbit.size(), orbit.data());
  for (std::size_t k = 0; k < orbit.size(); ++k) {
    Point q = s.flow(static_cast<double>(k), start);
    EXPECT_NEAR(orbit[k].x, q.x, 1e-12);
    EXPECT_NEAR(orbit[k].y, q.y, 1e-10);
  }
  EXPECT_NEAR(sys.step_back(sys.step(start)).y, start.y, 1e-12);
}
