#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

#include "hpol/suspension.hpp"

namespace hpol {

/// A bounded Lipschitz field (X1, X2) on the plane with X1 > 0, periodic in
/// both coordinates with the given periods. Its orbits are graphs over x.
struct PlanarField {
  std::string name;
  std::function<std::array<double, 2>(Point)> vf;
  std::function<Point(double, Point)> flow;
  /// Graph of the orbit through p, accurate at least on [x_lo, x_hi].
  std::function<GraphOrbit(Point p, double x_lo, double x_hi)> orbit_through;
  /// Box [0, period_x] x [y_origin, y_origin + period_y] on which the
  /// field constants are sampled.
  double period_x = 1.0;
  double period_y = 1.0;
  double y_origin = 0.0;
  /// X1 is identically 1, so phi^t moves the abscissa by exactly t.
  bool unit_speed = false;

  /// Positions at times 0, dt, 2 dt, ..., and exactly T.
  std::vector<Point> trajectory(Point p, double T, double dt) const;
};

PlanarField suspension_field(const SuspensionFlow& s);
/// X = (1 + a sin(2 pi y), b cos(2 pi x)), |a| < 1, integrated with RK4.
PlanarField sheared_field(double a, double b, double step = 1e-3);

/// Graph of the orbit of `field` through (x0, y0), tabulated by integrating
/// dy/dx = X2/X1 with RK4 on [x_lo, x_hi] and read by cubic Hermite
/// interpolation.
GraphOrbit integrate_orbit_graph(const PlanarField& field, Point start, double x_lo, double x_hi,
                                 double h = 1e-3);

/// Field constants entering the comparison bounds, recomputed from samples.
struct BoundConstants {
  double mu_m = 0;   // min X1
  double mu_M = 0;   // max X1
  double kappa = 0;  // Lipschitz constant of X1 (sampled max |grad X1|)
  double C = 0;      // kappa mu_M / mu_m^2
  double alpha = 0;  // max X1 / min X1
  double beta = 0;   // max(1, max X1, max |X2|)
  double c0 = 0;     // 1 / (9 beta alpha)
  double c1 = 0;     // 1 / (9 beta C); infinite when C = 0
  double p = 0;      // max |X2 / X1|
  double nu = 0;     // 1 / (4p)
  double max_x2 = 0;

  /// 1 / min(c1 eps, eps^2 / 18).
  double c_eps(double eps) const;
};

BoundConstants bound_constants(const PlanarField& field, std::size_t grid = 256);

/// One line of the bound-check ledger.
struct BoundCheck {
  std::string lemma;
  double lhs = 0;
  double rhs = 0;
  double margin = 0;  // rhs - lhs
  double error = 0;   // discretisation error allowance
  bool holds = false;
  std::string params;
};

/// Columns: lemma,lhs,rhs,margin,error,holds,params
void write_bound_checks_csv(std::ostream& os, const std::vector<BoundCheck>& rows, bool header = true);

struct L1Comparison {
  double lhs = 0;  // |gamma(t) - eta(t)|
  double rhs = 0;  // (M / m^2) ||f - g||_{L1(I)}
  double m = 0;
  double M = 0;
  double l1 = 0;
  double sup = 0;
  double error = 0;
  bool holds = false;
};

/// Solutions of x' = f(x), x' = g(x) from x0, compared at time t. gamma and
/// eta are the inverses of the primitives of 1/f and 1/g vanishing at x0.
/// Throws PreconditionError when max(||f-g||_L1, ||f-g||_inf) >= m and
/// WindowError when t is outside both solution windows.
L1Comparison l1_compare(const std::function<double(double)>& f, const std::function<double(double)>& g,
                        double lo, double hi, double x0, double t);

struct DeviationReport {
  double measured = 0;
  double bound = 0;  // C ||psi - phi||_{L1([x0, x0 + mu_M T])}
  double l1 = 0;
  double error = 0;
  bool holds = false;
};

/// Spread in x after time T of the vertical segment between phi(x0) and
/// psi(x0), maximised over `samples` points of the segment.
DeviationReport deviation(const PlanarField& field, const BoundConstants& k, double x0, const GraphOrbit& phi,
                          const GraphOrbit& psi, double T, std::size_t samples = 33);

/// Sup and L1 norms of psi - phi on [a, b] (step 1e-3) with error allowances.
struct GapNorms {
  double sup = 0;
  double sup_error = 0;
  double l1 = 0;
  double l1_error = 0;
  double min = 0;
};
GapNorms gap_norms(const GraphOrbit& phi, const GraphOrbit& psi, double a, double b, double slope_bound,
                   double h = 1e-3);

struct DiameterCheck {
  double diameter = 0;  // sampled d_T diameter, sup norm on the plane
  bool holds = false;
};

/// Region bounded by the verticals at x, x' and the graphs phi < psi. The
/// three smallness hypotheses are re-verified first (PreconditionError),
/// then a grid of the domain is evolved to time T.
DiameterCheck strip_diameter_check(const PlanarField& field, const BoundConstants& k, double x, double x2,
                                   const GraphOrbit& phi, const GraphOrbit& psi, double T, double eps,
                                   std::size_t grid = 4);

struct AreaCheck {
  double area = 0;
  double area_error = 0;
  double sup_gap = 0;  // ||psi - phi||_{C0([0,T])}
  double bound = 0;    // sup_gap^2 / 2
  bool holds = false;
};

/// Area of the strip between phi and psi over [0, T] by the trapezoid rule.
double strip_area(const GraphOrbit& phi, const GraphOrbit& psi, double T);
/// A >= ||psi - phi||^2 / 2; throws PreconditionError if T < nu ||psi - phi||.
AreaCheck area_lower_bound_check(const BoundConstants& k, const GraphOrbit& phi, const GraphOrbit& psi, double T);

struct StripDomain {
  std::size_t strip = 0;
  double x_lo = 0;
  double x_hi = 0;
};

struct StripCover {
  double eps = 0;
  double T = 0;
  BoundConstants constants;
  double strip_area_target = 0;  // min(c1 eps, eps^2 / 18)
  std::vector<double> y;         // y_0 = 0 < y_1 < ... , last = 1
  std::vector<double> x_cuts;    // 0 = x_0 < ... = 1, spacing <= c0 eps
  std::vector<StripDomain> domains;
  /// (c_eps / (c0 eps)) T + 1/(c0 eps) + 1
  double bound = 0;
  /// (c_eps T + 1)(1/(c0 eps) + 1): strips times pieces per strip.
  double product_bound = 0;
  std::size_t checked = 0;
  std::size_t passed = 0;
  /// Strips whose gap norms violate the smallness hypotheses.
  std::size_t hypothesis_failures = 0;
  double max_diameter = 0;
  std::size_t coverage_samples = 0;
  std::size_t coverage_misses = 0;
};

struct StripCoverOptions {
  /// Check every k-th domain with strip_diameter_check (0 = none).
  std::size_t check_stride = 1;
  std::size_t check_grid = 3;
  std::size_t coverage_samples = 10000;
};

/// Cover of the fundamental domain between the orbits of (0,0) and (0,1) and
/// the verticals x = 0, 1 by domains of d_T diameter below eps: equal-area
/// strips cut by verticals spaced at most c0 eps.
StripCover strip_cover(const SuspensionFlow& s, double eps, double T, const StripCoverOptions& opts = {});

/// Integral of the suspension orbit through (0, y) over [0, T], exact per cell.
double suspension_orbit_integral(const SuspensionFlow& s, double y, double T);

}  // namespace hpol
