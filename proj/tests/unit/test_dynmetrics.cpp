#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hpol/errors.hpp"
#include "hpol/numerics.hpp"
#include "hpol/separation.hpp"

using namespace hpol;

namespace {

DynSystem rotation(double a) {
  return DynSystem::map("rot", SpaceKind::Circle, [a](Point p) { return Point{p.x + a, 0}; },
                        [a](Point p) { return Point{p.x - a, 0}; })
      .with_circle_order(1.0);
}

double sine_lift(double x) { return x + 0.1 * std::sin(2 * std::numbers::pi * x); }

DynSystem sine_system() {
  auto inv = [](Point p) {
    double y = p.x;
    return Point{num::bisect_increasing([](double x) { return sine_lift(x); }, y, y - 0.2, y + 0.2, 0.0), 0};
  };
  return DynSystem::map("sine", SpaceKind::Circle, [](Point p) { return Point{sine_lift(p.x), 0}; }, inv)
      .with_circle_order(1.0 + 0.2 * std::numbers::pi);
}

}  // namespace

TEST(BaseDist, CircleWrapsAround) {
  EXPECT_NEAR(base_dist(SpaceKind::Circle, {0.1, 0}, {0.9, 0}), 0.2, 1e-15);
  EXPECT_EQ(base_dist(SpaceKind::Circle, {0.37, 0}, {0.37, 0}), 0.0);
}

TEST(BaseDist, AnnulusIsProductMax) {
  EXPECT_NEAR(base_dist(SpaceKind::Annulus, {0.1, 0.2}, {0.9, 0.5}), 0.3, 1e-15);
}

TEST(BaseDist, OutsideAnnulusThrows) {
  EXPECT_THROW(base_dist(SpaceKind::Annulus, {0.1, 1.5}, {0.1, 0.5}), DomainError);
  EXPECT_THROW(base_dist(SpaceKind::Circle, {NAN, 0}, {0.1, 0}), DomainError);
}

TEST(DynDist, SingleStepIsBaseDistance) {
  auto sys = sine_system();
  EXPECT_DOUBLE_EQ(dyn_dist(sys, 1, {0.25, 0}, {0.3, 0}), base_dist(SpaceKind::Circle, {0.25, 0}, {0.3, 0}));
}

TEST(DynDist, IsometryKeepsDistance) {
  auto sys = rotation(0.3);
  EXPECT_NEAR(dyn_dist(sys, 50, {0, 0}, {0.25, 0}), 0.25, 1e-12);
}

TEST(DynDist, SineLiftTwoSteps) {
  auto sys = sine_system();
  double x = 0.25, y = 0.30;
  double d1 = circle_dist(sine_lift(x), sine_lift(y));
  double expect = std::max(circle_dist(x, y), d1);
  EXPECT_DOUBLE_EQ(dyn_dist(sys, 2, {x, 0}, {y, 0}), expect);
}

TEST(DynDist, NonPositiveHorizonThrows) {
  EXPECT_THROW(dyn_dist(rotation(0.1), 0, {0, 0}, {0.1, 0}), DomainError);
}

TEST(CountSeparated, IdentityOnUniformGrid) {
  auto sys = rotation(0.0);
  auto sample = uniform_sample(SpaceKind::Circle, 1000);
  auto rep = count_separated(sys, 1, 0.1, sample);
  EXPECT_EQ(rep.sep_count, 10u);
  EXPECT_LE(rep.net_count, rep.sep_count);
}

TEST(CountSeparated, CoarseGridRejected) {
  auto sample = uniform_sample(SpaceKind::Circle, 100);
  EXPECT_THROW(count_separated(rotation(0.1), 1, 0.02, sample), ConfigError);
}

TEST(CountSeparated, BudgetEnforced) {
  auto sample = uniform_sample(SpaceKind::Circle, 1000);
  CountOptions opts;
  opts.budget = 1e4;
  EXPECT_THROW(count_separated(rotation(0.1), 100, 0.1, sample, opts), BudgetError);
}

TEST(CountSeparated, WanderingLowerBound) {
  auto sys = sine_system();
  GridPolicy policy;
  policy.uniform = 2000;
  policy.seeds = 4;
  auto sample = make_sample(sys, policy, 0.125, 256);
  for (double n : {8.0, 32.0, 128.0, 256.0}) {
    auto rep = count_separated(sys, n, 0.125, sample);
    EXPECT_GE(static_cast<double>(rep.sep_count), n) << "n=" << n;
  }
}

TEST(CountSeparated, SandwichOnSharedSample) {
  auto sys = sine_system();
  GridPolicy policy;
  policy.uniform = 2000;
  policy.seeds = 4;
  auto sample = make_sample(sys, policy, 0.0625, 128);
  std::vector<SeparationReport> reps;
  for (double n : {16.0, 128.0})
    for (double eps : {0.0625, 0.125, 0.25}) reps.push_back(count_separated(sys, n, eps, sample));
  mark_sandwich(reps);
  for (const auto& r : reps) {
    EXPECT_NE(r.sandwich, SandwichStatus::Violated);
    EXPECT_LE(r.net_count, r.sep_count);
  }
}

TEST(CountSeparated, GenericPathMatchesFastPathOnRotation) {
  auto fast = rotation(0.3);
  auto slow = DynSystem::map("rot", SpaceKind::Circle, [](Point p) { return Point{p.x + 0.3, 0}; });
  auto sample = uniform_sample(SpaceKind::Circle, 400);
  EXPECT_EQ(count_separated(fast, 20, 0.05, sample).sep_count, count_separated(slow, 20, 0.05, sample).sep_count);
}

TEST(ExactSmall, AgreesWithGreedyOnCircleRotation) {
  auto sys = rotation(0.3);
  auto sample = uniform_sample(SpaceKind::Circle, 200);
  EXPECT_EQ(exact_max_separated(sys, 5, 0.1, sample), 10u);
}

TEST(ExactSmall, LargeSampleRejected) {
  auto sample = uniform_sample(SpaceKind::Circle, 3000);
  EXPECT_THROW(exact_max_separated(rotation(0.1), 1, 0.1, sample), BudgetError);
}
