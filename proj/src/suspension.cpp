#include "hpol/suspension.hpp"

#include <cmath>
#include <utility>

#include "hpol/errors.hpp"
#include "hpol/numerics.hpp"

namespace hpol {

namespace {

double snap(double x) {
  double r = std::nearbyint(x);
  return std::fabs(x - r) <= kSectionSnap ? r : x;
}

double chart(double t) {
  if (t >= -0.25 && t <= 1.25) return t;
  return t - std::floor(t);
}

}  // namespace

double SmoothBump::value(double t) {
  if (t <= 0.25) return 0.0;
  if (t >= 0.75) return 1.0;
  double u = 2.0 * t - 0.5;
  return u * u * u * (10.0 + u * (-15.0 + 6.0 * u));
}

double SmoothBump::derivative(double t) {
  if (t <= 0.25 || t >= 0.75) return 0.0;
  double u = 2.0 * t - 0.5;
  double v = u * (1.0 - u);
  return 60.0 * v * v;
}

double SmoothBump::integral(double t) {
  if (t <= 0.25) return 0.0;
  if (t >= 0.75) return t - 0.5;
  double u = 2.0 * t - 0.5;
  double u4 = u * u * u * u;
  return 0.5 * u4 * (2.5 + u * (-3.0 + u));
}

Isotopy Isotopy::of_lift(const CircleLift& lift) {
  try {
    lift.validate();
  } catch (const InvalidLift& e) {
    throw InvalidInput(std::string("Isotopy: base map is not an increasing lift: ") + e.what());
  }
  Isotopy iso;
  iso.name_ = lift.name();
  iso.f_ = [lift](double x) { return lift(x); };
  iso.finv_ = [lift](double y) { return lift.inverse(y, 0.0); };
  iso.lift_ = lift;
  iso.dlo_ = lift.disp_lo();
  iso.dhi_ = lift.disp_hi();
  iso.degree_one_ = true;
  return iso;
}

Isotopy Isotopy::of_interval(std::string name, Fn f, double a, double b, Fn inverse) {
  if (!f || !(a < b)) throw InvalidInput("Isotopy: need a map and an interval a < b");
  const int samples = 1000;
  double prev = f(a);
  double dlo = prev - a;
  double dhi = dlo;
  for (int i = 1; i <= samples; ++i) {
    double x = a + (b - a) * i / samples;
    double v = f(x);
    if (!(v > prev)) throw InvalidInput("Isotopy: base map '" + name + "' is not increasing");
    prev = v;
    dlo = std::min(dlo, v - x);
    dhi = std::max(dhi, v - x);
  }
  double tol = 1e-12 * (1.0 + std::fabs(a) + std::fabs(b));
  if (std::fabs(f(a) - a) > tol || std::fabs(f(b) - b) > tol) {
    throw InvalidInput("Isotopy: base map '" + name + "' does not preserve the interval");
  }
  Isotopy iso;
  iso.name_ = std::move(name);
  iso.f_ = std::move(f);
  iso.finv_ = std::move(inverse);
  iso.lo_ = a;
  iso.hi_ = b;
  iso.dlo_ = dlo;
  iso.dhi_ = dhi;
  return iso;
}

void Isotopy::check_point(double y) const {
  double tol = 1e-12 * (1.0 + std::fabs(y));
  if (!std::isfinite(y) || y < lo_ - tol || y > hi_ + tol) {
    throw DomainError("Isotopy '" + name_ + "': point outside the domain");
  }
}

double Isotopy::base_inverse(double y) const {
  if (finv_) return finv_(y);
  check_point(y);
  return num::bisect_increasing(f_, y, lo_, hi_, 0.0);
}

double Isotopy::iterate(double y, long k) const {
  if (lift_) return lift_->iterate(y, k);
  check_point(y);
  for (long i = 0; i < k; ++i) y = f_(y);
  for (long i = 0; i > k; --i) y = base_inverse(y);
  return y;
}

double Isotopy::eval(double t, double x) const {
  double e = SmoothBump::value(chart(t));
  if (e == 0.0) return x;
  if (e == 1.0) return f_(x);
  return (1.0 - e) * x + e * f_(x);
}

double Isotopy::inverse(double t, double y, double tol) const {
  double e = SmoothBump::value(chart(t));
  if (e == 0.0) return y;
  if (e == 1.0) return base_inverse(y);
  double lo = lo_;
  double hi = hi_;
  if (degree_one_) {
    // f_t(x) - x lies between e dlo and e dhi.
    double pad = 1e-12 * (1.0 + std::fabs(y));
    lo = y - e * dhi_ - pad;
    hi = y - e * dlo_ + pad;
  } else {
    check_point(y);
  }
  auto ft = [this, e](double x) { return (1.0 - e) * x + e * f_(x); };
  return num::bisect_increasing(ft, y, lo, hi, tol);
}

double Isotopy::time_derivative(double t, double x) const {
  double d = SmoothBump::derivative(chart(t));
  return d == 0.0 ? 0.0 : d * (f_(x) - x);
}

GraphOrbit GraphOrbit::analytic(std::function<double(double)> phi) {
  GraphOrbit g;
  g.phi_ = std::move(phi);
  return g;
}

double GraphOrbit::operator()(double x) const {
  if (provenance_ == Provenance::Analytic) return phi_(x);
  x = snap(x);
  double n = std::floor(x);
  auto j = static_cast<long>(n);
  double z;
  auto idx = j - first_;
  if (idx >= 0 && idx < static_cast<long>(iterates_.size())) {
    z = iterates_[static_cast<std::size_t>(idx)];
  } else {
    z = iso_->iterate(y0_, j);
  }
  return iso_->eval(x - n, z);
}

SuspensionFlow::SuspensionFlow(Isotopy iso) : iso_(std::make_shared<const Isotopy>(std::move(iso))) {}

Point SuspensionFlow::flow(double t, Point p) const {
  double x0 = snap(p.x);
  double n0 = std::floor(x0);
  double y0 = iso_->inverse(x0 - n0, p.y);
  double x1 = p.x + t;
  double xs = snap(x1);
  double n1 = std::floor(xs);
  double z = iso_->iterate(y0, static_cast<long>(n1 - n0));
  return {x1, iso_->eval(xs - n1, z)};
}

std::array<double, 2> SuspensionFlow::field(Point p) const {
  double x = snap(p.x);
  double s = x - std::floor(x);
  if (SmoothBump::derivative(s) == 0.0) return {1.0, 0.0};
  double w = iso_->inverse(s, p.y);
  return {1.0, iso_->time_derivative(s, w)};
}

double SuspensionFlow::x2_bound() const noexcept {
  return SmoothBump::kMaxDerivative * iso_->max_displacement();
}

std::function<double(double)> SuspensionFlow::poincare_return(long m) const {
  if (m < 1) throw DomainError("poincare_return: need m >= 1");
  SuspensionFlow self = *this;
  return [self, m](double y) { return self.flow(static_cast<double>(m), {0.0, y}).y; };
}

GraphOrbit SuspensionFlow::orbit_graph(double y0, double x_lo, double x_hi) const {
  GraphOrbit g;
  g.provenance_ = GraphOrbit::Provenance::Suspension;
  g.iso_ = iso_;
  g.y0_ = y0;
  if (x_hi < x_lo) std::swap(x_lo, x_hi);
  auto first = static_cast<long>(std::floor(x_lo));
  auto last = static_cast<long>(std::floor(x_hi)) + 1;
  first = std::min(first, 0L);
  last = std::max(last, 0L);
  g.first_ = first;
  g.iterates_.resize(static_cast<std::size_t>(last - first + 1));
  auto at = [&](long j) -> double& { return g.iterates_[static_cast<std::size_t>(j - first)]; };
  at(0) = y0;
  for (long j = 1; j <= last; ++j) at(j) = iso_->base(at(j - 1));
  for (long j = -1; j >= first; --j) at(j) = iso_->base_inverse(at(j + 1));
  return g;
}

Point SuspensionFlow::integrate(double t, Point p, double h) const {
  if (t == 0.0) return p;
  auto n = static_cast<long>(std::ceil(std::fabs(t) / h));
  double step = t / static_cast<double>(n);
  num::Field2 rhs = [this](double, std::array<double, 2> z) { return field({z[0], z[1]}); };
  std::array<double, 2> z{p.x, p.y};
  for (long i = 0; i < n; ++i) z = num::rk4_step(rhs, 0.0, z, step);
  return {z[0], z[1]};
}

DynSystem suspension_flow_system(const SuspensionFlow& s, const std::string& id) {
  if (!s.isotopy().degree_one()) throw InvalidInput("suspension on the torus needs a circle lift");
  double speed = std::max(1.0, s.x2_bound());
  return DynSystem::flow(id, SpaceKind::Torus, [s](double t, Point p) { return s.flow(t, p); }, speed);
}

DynSystem suspension_time_one(const SuspensionFlow& s, const std::string& id) {
  if (!s.isotopy().degree_one()) throw InvalidInput("suspension on the torus needs a circle lift");
  auto sys = DynSystem::map(
      id, SpaceKind::Torus, [s](Point p) { return s.flow(1.0, p); },
      [s](Point p) { return s.flow(-1.0, p); });
  sys.with_orbit([s](Point start, std::size_t count, Point* out) {
    const Isotopy& iso = s.isotopy();
    double x = snap(start.x);
    double frac = x - std::floor(x);
    double z = iso.inverse(frac, start.y);
    for (std::size_t k = 0; k < count; ++k) {
      out[k] = {start.x + static_cast<double>(k), iso.eval(frac, z)};
      z = iso.base(z);
    }
  });
  sys.with_power([s](long k, Point p) { return s.flow(static_cast<double>(k), p); });
  return sys;
}

}  // namespace hpol
