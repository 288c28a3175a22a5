#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hpol/errors.hpp"
#include "hpol/torusflows.hpp"

using namespace hpol;

namespace {

constexpr double kPi = std::numbers::pi;

// Type III field whose angular speed depends on theta:
// tau(r) = 1 / ((1 + r) sqrt(1 - a^2)).
AnnulusField wobbly_field(double a) {
  return custom_field(
      "wobbly", [a](Point p) { return std::array<double, 2>{(1 + p.y) * (1 + a * std::sin(2 * kPi * p.x)), 0.0}; },
      2.0 * (1 + a));
}

}  // namespace

TEST(ModelField, Families) {
  EXPECT_EQ(type_one_field().family, ZoneFamily::TypeI);
  EXPECT_EQ(type_two_field().family, ZoneFamily::TypeII);
  EXPECT_EQ(action_angle_field(0.5, 1.0).family, ZoneFamily::TypeIII);
  EXPECT_GT(min_field_norm(type_two_field()), 0.7);
  EXPECT_THROW(action_angle_field(0.0, 1.0), ConstructionError);
  EXPECT_THROW(custom_field("leaky", [](Point p) { return std::array<double, 2>{1.0, 0.1 + p.y}; }, 1.0),
               ConstructionError);
}

TEST(Integrate, ClosedFormsAndBoundaries) {
  auto f3 = action_angle_field(0.5, 1.0);
  Point p = integrate(f3, 1.0, {0.0, 0.5});
  EXPECT_NEAR(p.x, 1.0, 1e-12);
  EXPECT_EQ(p.y, 0.5);
  ActionAngleFlow twist{[](double r) { return r; }};
  EXPECT_EQ(twist(1.0, {0.0, 0.5}).x, 0.5);

  for (const auto& f : {type_one_field(), type_two_field()}) {
    for (double r : {0.0, 0.05, 0.3, 0.5, 0.8, 0.999, 1.0}) {
      for (double t : {-1.7, 0.4, 1.0, 2.3}) {
        Point a = integrate(f, t, {0.2, r});
        Point b = f.exact(t, {0.2, r});
        EXPECT_NEAR(a.x, b.x, 1e-9) << f.name << " r=" << r << " t=" << t;
        EXPECT_NEAR(a.y, b.y, 1e-9) << f.name << " r=" << r << " t=" << t;
      }
    }
  }
  auto f1 = type_one_field();
  for (double t : {0.3, 5.0, 11.5}) {
    Point b = integrate(f1, t, {0.7, 0.0});
    EXPECT_NEAR(b.x, 0.7 + t, 1e-9);
    EXPECT_LE(std::fabs(b.y), 1e-9);
    EXPECT_LE(std::fabs(integrate(f1, t, {0.7, 1.0}).y - 1.0), 1e-9);
  }
}

TEST(Integrate, TypeTwoInteriorRisesToTheOuterCircle) {
  auto f = type_two_field();
  Point z{0.1, 0.02};
  double prev = z.y;
  for (int i = 0; i < 40; ++i) {
    z = integrate(f, 0.25, z);
    EXPECT_GT(z.y, prev - 1e-15);
    prev = z.y;
  }
  EXPECT_GT(prev, 1.0 - 1e-6);
}

TEST(Integrate, FlowPropertyAndBudget) {
  auto f = wobbly_field(0.4);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i) {
    Point z{u(rng), u(rng)};
    double s = 2 * u(rng) - 1;
    double t = 2 * u(rng) - 1;
    Point a = integrate(f, s + t, z);
    Point b = integrate(f, t, integrate(f, s, z));
    EXPECT_LE(base_dist(SpaceKind::Annulus, a, b), 1e-6);
  }
  auto g = type_one_field();
  g.max_steps = 100;
  EXPECT_THROW(integrate(g, 1.0, {0.0, 0.5}), BudgetError);
  EXPECT_THROW(integrate(g, 0.01, {0.0, 1.5}), DomainError);
}

TEST(ClassifyZone, ModelFields) {
  auto one = classify_zone(type_one_field());
  EXPECT_EQ(one.type, ZoneFamily::TypeI);
  EXPECT_NEAR(one.alpha_minus, 1.0, 1e-9);
  EXPECT_NEAR(one.alpha_plus, 1.0, 1e-9);
  auto two = classify_zone(type_two_field());
  EXPECT_EQ(two.type, ZoneFamily::TypeII);
  EXPECT_NEAR(two.alpha_minus, 1.0, 1e-9);
  EXPECT_NEAR(two.alpha_plus, -1.0, 1e-9);
  EXPECT_EQ(classify_zone(action_angle_field(0.7, 0.0)).type, ZoneFamily::TypeIII);
  EXPECT_EQ(classify_zone(action_angle_field(-0.5, 2.0)).type, ZoneFamily::TypeIII);
  EXPECT_EQ(classify_zone(wobbly_field(0.5)).type, ZoneFamily::TypeIII);
}

TEST(ClassifyZone, InvariantUnderRescaling) {
  for (const auto& f : {type_one_field(), type_two_field(), wobbly_field(0.3)}) {
    auto base = classify_zone(f).type;
    for (double c : {0.3, 2.5}) EXPECT_EQ(classify_zone(f.scaled(c)).type, base) << f.name << " c=" << c;
  }
}

TEST(ClassifyZone, SlowBoundaryIsUnclassified) {
  auto f = custom_field(
      "slow", [](Point p) { return std::array<double, 2>{1e-7 + p.y, std::sin(kPi * p.y)}; }, 1.1);
  EXPECT_THROW(classify_zone(f), UnclassifiedError);
}

TEST(ReturnTime, Profiles) {
  auto rigid = return_time_profile(action_angle_field(2.0, 0.0), 11);
  for (std::size_t i = 0; i < rigid.r.size(); ++i) {
    EXPECT_NEAR(rigid.tau[i], 0.5, 1e-8);
    EXPECT_NEAR(rigid.omega[i], 2.0, 1e-7);
  }
  auto twist = return_time_profile(action_angle_field(1.0, 1.0), 100);
  for (std::size_t i = 0; i < twist.r.size(); ++i) {
    EXPECT_NEAR(twist.tau[i], 1.0 / (1.0 + twist.r[i]), 1e-6);
    EXPECT_GT(twist.tau[i], 0.0);
    if (i > 0) EXPECT_LT(std::fabs(twist.tau[i] - twist.tau[i - 1]), 0.02);
  }
  auto wobbly = return_time_profile(wobbly_field(0.5), 21);
  for (std::size_t i = 0; i < wobbly.r.size(); ++i) {
    EXPECT_NEAR(wobbly.tau[i], 1.0 / ((1 + wobbly.r[i]) * std::sqrt(0.75)), 1e-6);
  }
  auto backwards = return_time_profile(action_angle_field(-1.0, 0.0), 3);
  EXPECT_NEAR(backwards.omega[1], -1.0, 1e-7);
  EXPECT_THROW(return_time_profile(type_one_field()), PreconditionError);
}

TEST(Conjugacy, RigidRotationIsIdentity) {
  auto chi = action_angle_conjugacy(action_angle_field(0.7, 0.0));
  for (double th : {0.0, 0.1, 0.55, 0.9}) {
    Point c = chi({th, 0.3});
    EXPECT_NEAR(c.x, th, 1e-8);
    EXPECT_EQ(c.y, 0.3);
  }
  EXPECT_LE(chi.residual(200).residual, 1e-8);
}

TEST(Conjugacy, TwistResidual) {
  auto chi = action_angle_conjugacy(action_angle_field(1.0, 1.0));
  auto rep = chi.residual(1000);
  EXPECT_EQ(rep.samples, 1000u);
  EXPECT_LE(rep.residual, 1e-5);
}

TEST(Conjugacy, NonUniformSpeed) {
  auto chi = action_angle_conjugacy(wobbly_field(0.5));
  EXPECT_NEAR(chi.omega(0.4), 1.4 * std::sqrt(0.75), 1e-7);
  // chi straightens the angle: it is not the identity off the section.
  EXPECT_GT(std::fabs(chi({0.2, 0.4}).x - 0.2), 0.01);
  EXPECT_LE(chi.residual(300).residual, 1e-5);
  EXPECT_THROW(action_angle_conjugacy(type_two_field()), PreconditionError);
}

TEST(NormalForm, ClosedForm) {
  auto psi = normal_form_flow(0.3, 2.0, 1);
  Point z{0.25, 0.08};
  EXPECT_EQ(psi(0.0, z).x, z.x);
  EXPECT_EQ(psi(0.0, z).y, z.y);
  EXPECT_DOUBLE_EQ(psi(1.5, z).y, 0.08 * std::exp(-3.0));
  EXPECT_DOUBLE_EQ(psi(1.5, z).x, 0.25 + 0.45);
  EXPECT_DOUBLE_EQ(psi.to_annulus(z).y, 0.92);
  EXPECT_DOUBLE_EQ(normal_form_flow(0.3, 2.0, -1).to_annulus(z).y, 0.08);
  EXPECT_THROW(normal_form_flow(0.3, 0.0, 1), DomainError);
}

TEST(NormalForm, ContractingCollarCountsDoNotGrow) {
  auto psi = normal_form_flow(0.37, 0.5, -1);
  auto sys = DynSystem::map(
      "collar", SpaceKind::Annulus, [psi](Point p) { return psi(1.0, p); },
      [psi](Point p) { return psi(-1.0, p); });
  const double delta = 0.05;
  for (double n : {1.0, 7.0, 50.0}) {
    EXPECT_NEAR(dyn_dist(sys, n, {0.1, 0.06}, {0.15, 0.06}), delta, 1e-12);
  }

  Sample collar;
  for (int i = 0; i < 40; ++i)
    for (int j = 0; j <= 10; ++j) collar.points.push_back({{i / 40.0, 0.01 * j}});
  std::size_t first = count_separated(sys, 4, 0.05, collar).sep_count;
  for (double n : {16.0, 64.0, 256.0}) EXPECT_EQ(count_separated(sys, n, 0.05, collar).sep_count, first);
}

TEST(FlowEntropy, RigidRotationHasNoGrowth) {
  FlowEntropyOptions o;
  o.n_schedule = geometric_schedule(8, 256);
  o.eps_schedule = {0.25, 0.125};
  auto est = hpol_flow(action_angle_field(0.618, 0.0), o);
  EXPECT_LE(est.headline, 0.05);
  auto direct = hpol_time_one(action_angle_time_one({[](double) { return 0.618; }}, "rot"), o);
  EXPECT_EQ(direct.headline, est.headline);
}
