#include "hpol/torusflows.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "hpol/errors.hpp"
#include "hpol/geometry.hpp"

namespace hpol {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kClamp = 1e-12;

double clamp_r(double r) {
  if (r < 0.0 && r > -kClamp) return 0.0;
  if (r > 1.0 && r < 1.0 + kClamp) return 1.0;
  return std::clamp(r, 0.0, 1.0);
}

Point rk4(const AnnulusField& f, Point z, double h) {
  auto k1 = f.vf(z);
  auto k2 = f.vf({z.x + 0.5 * h * k1[0], z.y + 0.5 * h * k1[1]});
  auto k3 = f.vf({z.x + 0.5 * h * k2[0], z.y + 0.5 * h * k2[1]});
  auto k4 = f.vf({z.x + h * k3[0], z.y + h * k3[1]});
  return {z.x + h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
          clamp_r(z.y + h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]))};
}

/// log tan(pi r / 2), evaluated from the nearer boundary.
double log_tan_half(double r) {
  if (r <= 0.0) return -std::numeric_limits<double>::infinity();
  if (r >= 1.0) return std::numeric_limits<double>::infinity();
  if (r <= 0.5) return std::log(std::tan(0.5 * kPi * r));
  return -std::log(std::tan(0.5 * kPi * (1.0 - r)));
}

/// Inverse of log_tan_half.
double from_log_tan_half(double s) {
  if (s <= 0.0) return 2.0 / kPi * std::atan(std::exp(s));
  return 1.0 - 2.0 / kPi * std::atan(std::exp(-s));
}

double softplus(double a) { return a > 0.0 ? a + std::log1p(std::exp(-a)) : std::log1p(std::exp(a)); }

/// r-component of the flow of dr/dt = sin(pi r): tan(pi r / 2) grows like e^{pi t}.
double sine_radial_flow(double t, double r) {
  double s = log_tan_half(r);
  if (std::isinf(s)) return r <= 0.0 ? 0.0 : 1.0;
  return from_log_tan_half(s + kPi * t);
}

void check_nonvanishing(const AnnulusField& f) {
  double m = min_field_norm(f);
  if (!(m > 0.0)) throw ConstructionError(f.name + ": field vanishes on the sample");
}

struct Crossing {
  double time = 0;
  Point at;
  int direction = 0;  // +1 if theta increased through the section
};

/// Integrates from z in the direction of `sign` (time +-1) until theta meets
/// `target(theta0)`. Crossings are located by bisecting the step length.
template <class Hit, class Target>
Crossing find_crossing(const AnnulusField& f, Point z, int sign, double budget, double tol, Hit hit,
                       Target target) {
  const double h = sign * f.step;
  double t = 0.0;
  Point cur = z;
  const auto max_steps = static_cast<long long>(std::min(f.max_steps, std::ceil(budget / f.step)));
  for (long long i = 0; i < max_steps; ++i) {
    Point next = rk4(f, cur, h);
    if (hit(cur.x, next.x)) {
      const double goal = target(cur.x, next.x);
      const double up = next.x > cur.x ? 1.0 : -1.0;
      double lo = 0.0;
      double hi = f.step;
      Point at = next;
      while (hi - lo > tol) {
        double mid = 0.5 * (lo + hi);
        Point p = rk4(f, cur, sign * mid);
        if (up * (p.x - goal) >= 0.0) {
          hi = mid;
          at = p;
        } else {
          lo = mid;
        }
      }
      return {t + hi, {goal, at.y}, static_cast<int>(up)};
    }
    cur = next;
    t += f.step;
  }
  throw BudgetError(f.name + ": no section crossing within the time budget");
}

}  // namespace

std::string_view to_string(ZoneFamily f) {
  switch (f) {
    case ZoneFamily::TypeI: return "I";
    case ZoneFamily::TypeII: return "II";
    case ZoneFamily::TypeIII: return "III";
    case ZoneFamily::Custom: return "custom";
  }
  return "?";
}

AnnulusField AnnulusField::scaled(double c) const {
  if (!(c > 0)) throw DomainError("AnnulusField::scaled: factor must be positive");
  AnnulusField g = *this;
  g.name = name + "*" + std::to_string(c);
  g.vf = [v = vf, c](Point p) {
    auto w = v(p);
    return std::array<double, 2>{c * w[0], c * w[1]};
  };
  if (c != 1.0) g.exact = {};
  g.speed_bound = c * speed_bound;
  return g;
}

double min_field_norm(const AnnulusField& field, std::size_t grid) {
  double m = std::numeric_limits<double>::infinity();
  const auto g = static_cast<double>(grid);
  for (std::size_t i = 0; i < grid; ++i) {
    for (std::size_t j = 0; j < grid; ++j) {
      auto v = field.vf({static_cast<double>(i) / g, static_cast<double>(j) / (g - 1.0)});
      m = std::min(m, std::hypot(v[0], v[1]));
    }
  }
  return m;
}

AnnulusField type_one_field() {
  AnnulusField f;
  f.name = "type1";
  f.family = ZoneFamily::TypeI;
  f.vf = [](Point p) { return std::array<double, 2>{1.0, std::sin(kPi * p.y)}; };
  f.exact = [](double t, Point p) { return Point{p.x + t, sine_radial_flow(t, p.y)}; };
  check_nonvanishing(f);
  return f;
}

AnnulusField type_two_field() {
  AnnulusField f;
  f.name = "type2";
  f.family = ZoneFamily::TypeII;
  f.vf = [](Point p) { return std::array<double, 2>{std::cos(kPi * p.y), std::sin(kPi * p.y)}; };
  // With w = tan^2(pi r / 2) = e^{2s}: cos(pi r) = (1 - w) / (1 + w) and w
  // grows like e^{2 pi t}, so theta gains t - log((1 + w_t) / (1 + w_0)) / pi.
  f.exact = [](double t, Point p) {
    double s = log_tan_half(p.y);
    if (s == std::numeric_limits<double>::infinity()) return Point{p.x - t, 1.0};
    if (s == -std::numeric_limits<double>::infinity()) return Point{p.x + t, 0.0};
    double gain = t - (softplus(2.0 * (s + kPi * t)) - softplus(2.0 * s)) / kPi;
    return Point{p.x + gain, from_log_tan_half(s + kPi * t)};
  };
  check_nonvanishing(f);
  return f;
}

AnnulusField type_three_field(std::function<double(double)> omega, std::string name) {
  AnnulusField f;
  f.name = std::move(name);
  f.family = ZoneFamily::TypeIII;
  f.vf = [omega](Point p) { return std::array<double, 2>{omega(p.y), 0.0}; };
  f.exact = [omega](double t, Point p) { return Point{p.x + t * omega(p.y), p.y}; };
  double bound = 0;
  for (int j = 0; j <= 200; ++j) bound = std::max(bound, std::fabs(omega(j / 200.0)));
  f.speed_bound = std::max(bound, 1e-3);
  check_nonvanishing(f);
  return f;
}

AnnulusField action_angle_field(double c0, double c1) {
  std::string name = c1 == 0.0 ? "rigid(" + std::to_string(c0) + ")"
                               : "twist(" + std::to_string(c0) + "," + std::to_string(c1) + ")";
  return type_three_field([c0, c1](double r) { return c0 + c1 * r; }, name);
}

AnnulusField custom_field(std::string name, std::function<std::array<double, 2>(Point)> vf, double speed_bound) {
  AnnulusField f;
  f.name = std::move(name);
  f.vf = std::move(vf);
  f.speed_bound = speed_bound;
  for (int i = 0; i < 200; ++i) {
    double th = i / 200.0;
    if (std::fabs(f.vf({th, 0.0})[1]) > 1e-12 || std::fabs(f.vf({th, 1.0})[1]) > 1e-12) {
      throw ConstructionError(f.name + ": boundary circles are not invariant");
    }
  }
  check_nonvanishing(f);
  return f;
}

Point integrate(const AnnulusField& field, double t, Point z) {
  if (!(z.y >= 0.0 && z.y <= 1.0)) throw DomainError(field.name + ": point outside the annulus");
  if (t == 0.0) return z;
  const double n = std::ceil(std::fabs(t) / field.step - 1e-9);
  if (n > field.max_steps) throw BudgetError(field.name + ": integration exceeds the step budget");
  const auto steps = static_cast<long long>(std::max(n, 1.0));
  const double h = t / static_cast<double>(steps);
  for (long long i = 0; i < steps; ++i) z = rk4(field, z, h);
  return z;
}

Point evolve(const AnnulusField& field, double t, Point z) {
  return field.exact ? field.exact(t, z) : integrate(field, t, z);
}

double first_return_time(const AnnulusField& field, Point z, double budget, double tol) {
  const double x0 = z.x;
  auto hit = [x0](double, double b) { return std::fabs(b - x0) >= 1.0; };
  auto target = [x0](double, double b) { return b > x0 ? x0 + 1.0 : x0 - 1.0; };
  return find_crossing(field, z, 1, budget, tol, hit, target).time;
}

ZoneType classify_zone(const AnnulusField& field, const ClassifyOptions& opts) {
  ZoneType z;
  z.alpha_minus = integrate(field, opts.boundary_time, {0.0, 0.0}).x / opts.boundary_time;
  z.alpha_plus = integrate(field, opts.boundary_time, {0.0, 1.0}).x / opts.boundary_time;

  bool periodic = true;
  for (std::size_t i = 1; i <= opts.interior_samples; ++i) {
    double r = static_cast<double>(i) / static_cast<double>(opts.interior_samples + 1);
    try {
      double tau = first_return_time(field, {0.0, r}, opts.return_budget);
      double drift = std::fabs(integrate(field, tau, {0.0, r}).y - r);
      z.max_return_drift = std::max(z.max_return_drift, drift);
      if (drift > opts.tol) periodic = false;
    } catch (const BudgetError&) {
      periodic = false;
      z.max_return_drift = std::numeric_limits<double>::infinity();
    }
  }
  if (periodic) {
    z.type = ZoneFamily::TypeIII;
    return z;
  }
  if (std::fabs(z.alpha_minus) < opts.tol || std::fabs(z.alpha_plus) < opts.tol) {
    throw UnclassifiedError(field.name + ": boundary rotation speed too small to classify");
  }
  z.type = z.alpha_minus * z.alpha_plus > 0 ? ZoneFamily::TypeI : ZoneFamily::TypeII;
  return z;
}

namespace {

void require_type_three(const AnnulusField& field) {
  if (classify_zone(field).type != ZoneFamily::TypeIII) {
    throw PreconditionError(field.name + ": not foliated by periodic orbits");
  }
}

/// Signed frequency 1/tau of the periodic orbit through (0, r).
double signed_frequency(const AnnulusField& field, double r) {
  auto hit = [](double, double b) { return std::fabs(b) >= 1.0; };
  auto target = [](double, double b) { return b > 0 ? 1.0 : -1.0; };
  Crossing c = find_crossing(field, {0.0, r}, 1, 64.0, 1e-10, hit, target);
  return c.direction / c.time;
}

}  // namespace

ReturnProfile return_time_profile(const AnnulusField& field, std::size_t samples) {
  if (samples < 2) throw DomainError("return_time_profile: need at least two samples");
  require_type_three(field);
  ReturnProfile p;
  for (std::size_t i = 0; i < samples; ++i) {
    double r = static_cast<double>(i) / static_cast<double>(samples - 1);
    double w = signed_frequency(field, r);
    p.r.push_back(r);
    p.tau.push_back(1.0 / std::fabs(w));
    p.omega.push_back(w);
  }
  return p;
}

ActionAngleConjugacy::ActionAngleConjugacy(AnnulusField field) : field_(std::move(field)) {}

double ActionAngleConjugacy::omega(double r) const { return signed_frequency(field_, r); }

ActionAngleFlow ActionAngleConjugacy::model() const {
  return {[self = *this](double r) { return self.omega(r); }};
}

Point ActionAngleConjugacy::operator()(Point z) const {
  if (z.x == std::floor(z.x)) return {0.0, z.y};
  auto hit = [](double a, double b) { return std::floor(a) != std::floor(b) || b == std::floor(b); };
  auto target = [](double a, double b) { return b < a ? std::floor(a) : std::floor(b); };
  Crossing c;
  try {
    c = find_crossing(field_, z, -1, 64.0, 1e-10, hit, target);
  } catch (const BudgetError& e) {
    throw NumericError(std::string("action-angle chart: ") + e.what());
  }
  return {c.time * omega(c.at.y), c.at.y};
}

ConjugacyReport ActionAngleConjugacy::residual(std::size_t samples, double t_max, unsigned seed) const {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ActionAngleFlow psi = model();
  ConjugacyReport rep;
  for (std::size_t i = 0; i < samples; ++i) {
    double t = t_max * u(rng);
    Point z{u(rng), u(rng)};
    Point lhs = (*this)(integrate(field_, t, z));
    Point rhs = psi(t, (*this)(z));
    rep.residual = std::max(rep.residual, base_dist(SpaceKind::Annulus, lhs, rhs));
  }
  rep.samples = samples;
  return rep;
}

ActionAngleConjugacy action_angle_conjugacy(const AnnulusField& field) {
  require_type_three(field);
  return ActionAngleConjugacy(field);
}

Point NormalFormFlow::operator()(double t, Point z) const { return {z.x + t * alpha, z.y * std::exp(-t * beta)}; }

Point NormalFormFlow::to_annulus(Point z) const { return {z.x, sign > 0 ? 1.0 - z.y : z.y}; }

NormalFormFlow normal_form_flow(double alpha, double beta, int sign) {
  if (!(beta > 0)) throw DomainError("normal_form_flow: beta must be positive");
  return {alpha, beta, sign >= 0 ? 1 : -1};
}

DynSystem annulus_time_one(const AnnulusField& field) {
  if (field.exact) {
    auto phi = field.exact;
    DynSystem sys = DynSystem::map(
        field.name + "/time1", SpaceKind::Annulus, [phi](Point p) { return phi(1.0, p); },
        [phi](Point p) { return phi(-1.0, p); });
    sys.with_power([phi](long k, Point p) { return phi(static_cast<double>(k), p); });
    return sys;
  }
  return DynSystem::map(
      field.name + "/time1", SpaceKind::Annulus, [field](Point p) { return integrate(field, 1.0, p); },
      [field](Point p) { return integrate(field, -1.0, p); });
}

DynSystem annulus_flow(const AnnulusField& field) {
  DynSystem::FlowFn phi = field.exact;
  if (!phi) phi = [field](double t, Point p) { return integrate(field, t, p); };
  return DynSystem::flow(field.name, SpaceKind::Annulus, phi, field.speed_bound);
}

DynSystem action_angle_time_one(const ActionAngleFlow& psi, const std::string& id) {
  DynSystem sys = DynSystem::map(
      id, SpaceKind::Annulus, [psi](Point p) { return psi(1.0, p); }, [psi](Point p) { return psi(-1.0, p); });
  sys.with_power([psi](long k, Point p) { return psi(static_cast<double>(k), p); });
  return sys;
}

namespace {

FlowEntropyOptions with_defaults(FlowEntropyOptions opts) {
  if (opts.n_schedule.empty()) opts.n_schedule = geometric_schedule(8, 256);
  if (opts.policy.transversal == 0 && opts.policy.seeds == 0 && opts.policy.uniform == 0) {
    opts.policy.seeds = 16;
    opts.policy.transversal = 2;
  }
  return opts;
}

}  // namespace

EntropyEstimate hpol_time_one(const DynSystem& time_one, const FlowEntropyOptions& opts) {
  auto o = with_defaults(opts);
  return estimate_hpol(time_one, o.n_schedule, o.eps_schedule, o.policy, o.estimate);
}

EntropyEstimate hpol_flow(const AnnulusField& field, const FlowEntropyOptions& opts) {
  return hpol_time_one(annulus_time_one(field), opts);
}

EntropyEstimate hpol_flow_real_time(const AnnulusField& field, const FlowEntropyOptions& opts) {
  auto o = with_defaults(opts);
  return estimate_hpol(annulus_flow(field), o.n_schedule, o.eps_schedule, o.policy, o.estimate);
}

}  // namespace hpol
