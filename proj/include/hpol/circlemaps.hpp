#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hpol/dynsystem.hpp"
#include "hpol/entropy.hpp"

namespace hpol {

class DenjoyModel;

/// Lift F of an orientation-preserving circle homeomorphism:
/// F continuous, strictly increasing, F(x + 1) = F(x) + 1.
class CircleLift {
 public:
  enum class Repr { ClosedForm, Interpolated, Denjoy };
  using Fn = std::function<double(double)>;

  /// `disp_lo <= F(x) - x <= disp_hi` brackets inverses; `lip` bounds F',
  /// `inv_lip` bounds (F^-1)'.
  static CircleLift closed_form(std::string name, Fn f, double disp_lo, double disp_hi,
                                std::optional<double> lip = {}, std::optional<double> inv_lip = {});
  /// Piecewise-linear lift through (knots[i], values[i]), knots spanning [0,1]
  /// with values[last] = values[0] + 1.
  static CircleLift interpolated(std::string name, std::vector<double> knots, std::vector<double> values);

  const std::string& name() const noexcept { return name_; }
  Repr repr() const noexcept { return repr_; }
  double operator()(double x) const { return f_(x); }
  /// Inverse by bisection to `tol`; tol = 0 bisects down to adjacent doubles.
  double inverse(double y, double tol = 1e-12) const;
  double iterate(double x, long k) const;

  std::optional<double> lipschitz() const noexcept { return lip_; }
  std::optional<double> inverse_lipschitz() const noexcept { return inv_lip_; }
  double disp_lo() const noexcept { return disp_lo_; }
  double disp_hi() const noexcept { return disp_hi_; }
  const std::shared_ptr<const DenjoyModel>& denjoy() const noexcept { return denjoy_; }

  /// Checks monotonicity and the degree-one law on `samples` points;
  /// throws InvalidLift.
  void validate(std::size_t samples = 1000, double tol = 1e-10) const;

 private:
  friend CircleLift denjoy_lift(double rho, std::size_t truncation);
  friend CircleLift power_lift(const CircleLift& lift, long m);
  friend DynSystem circle_system(const CircleLift& lift, const std::string& id);

  std::string name_;
  Repr repr_ = Repr::ClosedForm;
  Fn f_;
  Fn inv_;  // exact inverse when available
  double disp_lo_ = -1;
  double disp_hi_ = 1;
  std::optional<double> lip_;
  std::optional<double> inv_lip_;
  std::shared_ptr<const DenjoyModel> denjoy_;
  long denjoy_step_ = 1;  // power of the Denjoy model this lift represents
};

// Families. All parameters are checked; out-of-range values throw DomainError.
CircleLift rotation_lift(double a);
/// x + b + a sin(2 pi x), |a| < 1/(2 pi). The sine-lift is arnold_lift(0, 0.1).
CircleLift arnold_lift(double b, double a);
CircleLift sine_lift();
/// T_{1/2} o S with S(x) = x + a sin(4 pi x): rotation number 1/2, no fixed points.
CircleLift half_turn_lift(double a = 0.05);
/// h o T_a o h^-1 with h(x) = x + s sin(2 pi x).
CircleLift conjugated_rotation_lift(double a, double s = 0.05);

struct RotationNumber {
  double value = 0;
  double lo = 0;  // rigorous bracket up to rounding
  double hi = 0;
  std::size_t iterations = 0;
  bool rational = false;
  long p = 0;
  long q = 0;
};

/// F^N(0)/N with N = max_iter. If F^N(0) lies in [k, k+1) then
/// N rho is in [k, k+1], which gives the bracket of width 1/N. Rationals
/// p/q, q <= q_max, are flagged when F^q - p - id has a sampled zero.
RotationNumber rotation_number(const CircleLift& lift, std::size_t max_iter = 100000, double tol = 1e-9,
                               long q_max = 64);

/// F^m; negative m composes the inverse.
CircleLift power_lift(const CircleLift& lift, long m);

struct ArcComponent {
  double lo = 0;  // lifted endpoints, lo < hi <= lo + 1
  double hi = 0;
  int sign = 0;   // sign of F^q - p - id on (lo, hi)
};

struct PeriodicStructure {
  long p = 0;
  long q = 1;
  /// Clusters of the sampled zero set of F^q - p - id, as [lo, hi] in [0,1).
  std::vector<std::pair<double, double>> fixed;
  std::vector<ArcComponent> components;
  bool everything_periodic = false;
};

PeriodicStructure periodic_structure(const CircleLift& lift, long q_max = 64, double tol = 1e-9,
                                     std::size_t samples = 20000);

/// Continuous increasing self-map of [a, b].
struct IntervalMap {
  std::function<double(double)> f;
  double a = 0;
  double b = 1;
  /// Optional exact inverse; bisection otherwise.
  std::function<double(double)> inverse;

  double apply(double x) const { return f(x); }
  double invert(double y) const;
};

struct CoverPiece {
  double lo = 0;
  double hi = 0;
  std::string tag;  // I0-tail, I1, J, pullback, Bk, single
};

struct CoverConstants {
  std::size_t p = 0;
  std::size_t q = 0;
  std::size_t n0 = 0;
  double alpha = 0;
  double c = 0;  // slope of the cardinality bound
  double d = 0;  // offset
  std::size_t kappa = 0;
  double bound(double n) const { return c * n + d + static_cast<double>(kappa); }
};

struct CoverSet {
  std::vector<CoverPiece> pieces;
  double n = 0;
  double eps = 0;
  CoverConstants constants;
  std::size_t size() const noexcept { return pieces.size(); }
};

/// Cover of [a, b] by at most n p + q + 2 intervals of d_n-diameter <= eps,
/// for f fixing a and b with f - id of constant sign on (a, b).
CoverSet interval_cover(const IntervalMap& map, double eps, std::size_t n);

/// Cover of the circle for a lift with rational rotation number p/q, in the
/// dynamical metric of G = F^q - p. For q > 1, G is evaluated by composition
/// and resolves pullbacks only to about 1e-16, so horizons beyond
/// log(eps / 1e-16) / log Lip(G) give pieces whose true width is not
/// representable.
CoverSet periodic_circle_cover(const CircleLift& lift, double eps, std::size_t n, std::size_t max_components = 10000);

/// Sampled d_n-diameter of an interval under a monotone map: max over k < n
/// of the spread of `samples` points.
double sampled_diameter(const std::function<double(double)>& f, double lo, double hi, std::size_t n,
                        std::size_t samples = 17);

/// Denjoy-type homeomorphism: the orbit {m rho} of the rotation is blown up
/// into intervals I_m of length c/(|m|+2)^2, |m| <= K, and I_m is mapped
/// affinely onto I_{m+1}. Lengths beyond K are folded into the Cantor part.
class DenjoyModel {
 public:
  DenjoyModel(double rho, std::size_t truncation);

  struct Coord {
    double theta = 0;  // Cantor coordinate (lifted); for interval points the anchor m rho
    long m = 0;
    double s = -1;     // offset in [0, 1] inside I_m; negative for Cantor points
    bool in_interval() const { return s >= 0; }
  };

  double rho() const noexcept { return rho_; }
  long truncation() const noexcept { return k_; }
  double length(long m) const;
  /// Sum of inserted lengths |m| <= K plus the folded tail is 1/2.
  double cantor_slope() const noexcept { return alpha_; }

  Coord decode(double x) const;
  double encode(const Coord& c) const;
  Coord shift(Coord c, long k) const;
  double apply(double x, long k = 1) const { return encode(shift(decode(x), k)); }
  /// Lifted left endpoint and length of I_m.
  std::pair<double, double> interval(long m) const;
  /// Upper bound for the lift's Lipschitz constant.
  double lipschitz() const;

 private:
  double anchor(long m) const;  // {m rho} in [0, 1)
  double left_value(double theta_frac) const;

  double rho_;
  long k_;
  double c_;
  double alpha_;
  std::vector<double> sorted_anchor_;
  std::vector<long> sorted_index_;
  std::vector<double> prefix_;  // prefix_[i] = sum of lengths of sorted entries < i
  std::vector<double> left_;    // left endpoint of the i-th sorted interval in [0, 1)
  std::vector<std::size_t> pos_;  // sorted position of index m, at m + K
};

CircleLift denjoy_lift(double rho, std::size_t truncation = std::size_t{1} << 15);
double golden_rotation();

/// Circle map DynSystem of a lift, with exact inverse and circle order.
DynSystem circle_system(const CircleLift& lift, const std::string& id = {});

struct CircleEstimate {
  EntropyEstimate estimate;
  RotationNumber rotation;
  std::string classification;  // rotation-like | rational-non-rotation | irrational-non-rotation
};

/// 10^4 uniform points plus backward orbits of four seeds. Denjoy lifts get
/// their seeds inside the wandering interval I_0.
GridPolicy default_circle_grid(const CircleLift& lift);

struct CircleSchedules {
  std::vector<double> n = geometric_schedule(8, 4096);
  std::vector<double> eps = {0.125, 0.0625, 0.03125, 0.015625, 0.0078125, 0.00390625};
  std::optional<GridPolicy> grid;  // default_circle_grid(lift) when unset
};

CircleEstimate hpol_map(const CircleLift& lift, const CircleSchedules& schedules = {},
                        const EstimateOptions& opts = {});

}  // namespace hpol
