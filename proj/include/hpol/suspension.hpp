#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hpol/circlemaps.hpp"
#include "hpol/dynsystem.hpp"

namespace hpol {

/// Quintic smoothstep cutoff: 0 up to 1/4, 1 from 3/4, C^2 in between.
/// Arguments outside the chart [-1/4, 5/4] are clamped to the constant parts.
struct SmoothBump {
  static double value(double t);
  static double derivative(double t);
  /// Integral of the bump from 0 to t, for t in [0, 1].
  static double integral(double t);
  /// max |eta'| = 15/4.
  static constexpr double kMaxDerivative = 3.75;
};

/// f_t = (1 - eta(t)) id + eta(t) f for an increasing base map f.
class Isotopy {
 public:
  using Fn = std::function<double(double)>;

  /// Degree-one lift of a circle homeomorphism.
  static Isotopy of_lift(const CircleLift& lift);
  /// Increasing self-map of [a, b] fixing both endpoints. Throws InvalidInput
  /// if f is not increasing or does not preserve [a, b].
  static Isotopy of_interval(std::string name, Fn f, double a, double b, Fn inverse = {});

  const std::string& name() const noexcept { return name_; }
  bool degree_one() const noexcept { return degree_one_; }
  double domain_lo() const noexcept { return lo_; }
  double domain_hi() const noexcept { return hi_; }

  double base(double x) const { return f_(x); }
  double base_inverse(double y) const;
  /// f^k(y), k of either sign.
  double iterate(double y, long k) const;

  /// f_t(x); t outside the chart [-1/4, 5/4] is first reduced mod 1.
  double eval(double t, double x) const;
  /// f_t^{-1}(y) by bisection; tol = 0 bisects to adjacent doubles.
  double inverse(double t, double y, double tol = 0.0) const;
  /// d/dt f_t(x) = eta'(t) (f(x) - x).
  double time_derivative(double t, double x) const;
  /// Bound on |f(x) - x| over the domain.
  double max_displacement() const noexcept { return std::max(std::fabs(dlo_), std::fabs(dhi_)); }

 private:
  void check_point(double y) const;

  std::string name_;
  Fn f_;
  Fn finv_;
  std::optional<CircleLift> lift_;
  double lo_ = -std::numeric_limits<double>::infinity();
  double hi_ = std::numeric_limits<double>::infinity();
  double dlo_ = 0;
  double dhi_ = 0;
  bool degree_one_ = false;
};

/// Function x -> y whose graph is a flow orbit. Suspension orbits cache the
/// integer iterates f^j(y0) for j in [first, last].
class GraphOrbit {
 public:
  enum class Provenance { Suspension, Analytic };

  static GraphOrbit analytic(std::function<double(double)> phi);

  double operator()(double x) const;
  Provenance provenance() const noexcept { return provenance_; }
  /// For suspension orbits: the ordinate at abscissa 0.
  double start() const noexcept { return y0_; }

 private:
  friend class SuspensionFlow;

  Provenance provenance_ = Provenance::Analytic;
  std::function<double(double)> phi_;
  std::shared_ptr<const Isotopy> iso_;
  double y0_ = 0;
  long first_ = 0;
  std::vector<double> iterates_;
};

/// The suspension field (1, X2(x, y)) on the plane, 1-periodic in x, with the
/// exact flow phi^t(x, y) = (x + t, f_{x+t} o f_x^{-1}(y)).
class SuspensionFlow {
 public:
  explicit SuspensionFlow(Isotopy iso);

  const Isotopy& isotopy() const noexcept { return *iso_; }

  Point flow(double t, Point p) const;
  std::array<double, 2> field(Point p) const;
  /// Bound on |X2|: max|eta'| times the maximal displacement of f.
  double x2_bound() const noexcept;

  /// y -> second coordinate of flow(m, (0, y)); m >= 1.
  std::function<double(double)> poincare_return(long m) const;

  /// Orbit through (0, y0) as a graph; integer iterates are cached on the
  /// abscissa window [x_lo, x_hi].
  GraphOrbit orbit_graph(double y0, double x_lo = -1.0, double x_hi = 64.0) const;

  /// Fixed-step RK4 integration of the field; the oracle for `flow`.
  Point integrate(double t, Point p, double h = 1e-3) const;

 private:
  std::shared_ptr<const Isotopy> iso_;
};

/// Abscissas within this distance of an integer are treated as on the section.
inline constexpr double kSectionSnap = 1e-14;

/// The suspension of a circle lift as a flow on the torus.
DynSystem suspension_flow_system(const SuspensionFlow& s, const std::string& id);
/// Its time-one map, with a single isotopy inversion per orbit.
DynSystem suspension_time_one(const SuspensionFlow& s, const std::string& id);

}  // namespace hpol
