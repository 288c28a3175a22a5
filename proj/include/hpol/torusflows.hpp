#pragma once

#include <array>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "hpol/dynsystem.hpp"
#include "hpol/entropy.hpp"

namespace hpol {

enum class ZoneFamily { TypeI, TypeII, TypeIII, Custom };
std::string_view to_string(ZoneFamily f);

/// Nonvanishing field (Theta, R) on T x [0,1] with both boundary circles
/// invariant. Points are (theta, r).
struct AnnulusField {
  std::string name;
  ZoneFamily family = ZoneFamily::Custom;
  std::function<std::array<double, 2>(Point)> vf;
  /// Closed-form flow when known; integrate() never uses it.
  DynSystem::FlowFn exact;
  double step = 1e-3;
  /// Largest number of RK4 steps a single integrate() call may take.
  double max_steps = 1e8;
  /// Bound on |Theta| and |R|.
  double speed_bound = 1.0;

  /// The field scaled by c > 0; the closed form is dropped unless c = 1.
  AnnulusField scaled(double c) const;
};

/// Smallest field norm on a grid x grid sample of the annulus.
double min_field_norm(const AnnulusField& field, std::size_t grid = 200);

/// Type I: (1, sin pi r). Type II: (cos pi r, sin pi r). Type III: (omega(r), 0).
/// Throws ConstructionError if the field vanishes on the 200 x 200 sample.
AnnulusField type_one_field();
AnnulusField type_two_field();
AnnulusField type_three_field(std::function<double(double)> omega, std::string name = "type3");
/// Type III with omega = c0 + c1 r.
AnnulusField action_angle_field(double c0, double c1);
/// Wraps an arbitrary field, checking boundary invariance and nonvanishing.
AnnulusField custom_field(std::string name, std::function<std::array<double, 2>(Point)> vf, double speed_bound);

/// Fixed-step RK4 (step field.step, last step shortened to land on t), with
/// r clamped to [0, 1] after every step. Throws BudgetError past max_steps.
Point integrate(const AnnulusField& field, double t, Point z);
/// Closed form if available, otherwise integrate().
Point evolve(const AnnulusField& field, double t, Point z);

struct ZoneType {
  ZoneFamily type = ZoneFamily::Custom;
  double alpha_minus = 0;  // rotation speed of the boundary at r = 0
  double alpha_plus = 0;   // at r = 1
  double max_return_drift = 0;  // largest |r(return) - r| on the interior sample
};

struct ClassifyOptions {
  double tol = 1e-6;
  std::size_t interior_samples = 9;
  /// Boundary rotation numbers are averaged over this time.
  double boundary_time = 16.0;
  /// Time allowed for an interior point to return to its section.
  double return_budget = 64.0;
};

/// Type III if every sampled interior point returns to theta = 0 at the same
/// r; otherwise type I or II by the sign of alpha_plus * alpha_minus.
/// Throws UnclassifiedError when a boundary speed is below tol.
ZoneType classify_zone(const AnnulusField& field, const ClassifyOptions& opts = {});

/// First return time to theta = theta(z) + k, k = +-1, by RK4 with the
/// crossing step bisected down to `tol`. Throws BudgetError after `budget`.
double first_return_time(const AnnulusField& field, Point z, double budget = 64.0, double tol = 1e-8);

struct ReturnProfile {
  std::vector<double> r;
  std::vector<double> tau;
  std::vector<double> omega;  // 1 / tau, signed by the direction of rotation
};

/// Return times of the points (0, r_i), r_i evenly spaced in [0, 1].
/// Throws PreconditionError unless the field classifies as type III.
ReturnProfile return_time_profile(const AnnulusField& field, std::size_t samples = 101);

/// psi^t(theta, r) = (theta + t omega(r), r).
struct ActionAngleFlow {
  std::function<double(double)> omega;
  Point operator()(double t, Point z) const { return {z.x + t * omega(z.y), z.y}; }
};

struct ConjugacyReport {
  double residual = 0;  // max dist(chi(phi^t z), psi^t(chi z)) over the sample
  std::size_t samples = 0;
};

/// chi(z) = psi^{t_z}(0, r*), where phi^{-t_z}(z) = (0, r*) is the last
/// section crossing before z. It conjugates the field's flow to the
/// action-angle flow with omega = 1/tau.
class ActionAngleConjugacy {
 public:
  explicit ActionAngleConjugacy(AnnulusField field);

  Point operator()(Point z) const;
  double omega(double r) const;
  ActionAngleFlow model() const;
  const AnnulusField& field() const noexcept { return field_; }

  /// Residual over `samples` random (t, z), t in [0, t_max].
  ConjugacyReport residual(std::size_t samples = 1000, double t_max = 2.0, unsigned seed = 1) const;

 private:
  AnnulusField field_;
};

/// Throws PreconditionError unless the field classifies as type III.
ActionAngleConjugacy action_angle_conjugacy(const AnnulusField& field);

/// psi^t(theta, rho) = (theta + t alpha, rho e^{-t beta}) on a boundary
/// collar, rho the distance to the boundary circle: r = rho for sign < 0,
/// r = 1 - rho for sign > 0.
struct NormalFormFlow {
  double alpha = 0;
  double beta = 1;
  int sign = 1;

  Point operator()(double t, Point z) const;
  Point to_annulus(Point z) const;
};
/// Throws DomainError unless beta > 0.
NormalFormFlow normal_form_flow(double alpha, double beta, int sign);

/// Time-one map of the field on the annulus, closed form when available.
DynSystem annulus_time_one(const AnnulusField& field);
/// The flow itself, for counting at real horizons.
DynSystem annulus_flow(const AnnulusField& field);
/// Time-one map of an action-angle flow; omega may vanish.
DynSystem action_angle_time_one(const ActionAngleFlow& psi, const std::string& id);

struct FlowEntropyOptions {
  std::vector<double> n_schedule;  // empty: 8, 16, ..., 256
  std::vector<double> eps_schedule = {0.25, 0.125, 0.0625};
  /// Default: 16 backward seed orbits plus 2 radial transversals.
  GridPolicy policy;
  EstimateOptions estimate;
};

/// Polynomial entropy of the flow through its time-one map.
EntropyEstimate hpol_flow(const AnnulusField& field, const FlowEntropyOptions& opts = {});
/// Estimate for any time-one map on the annulus.
EntropyEstimate hpol_time_one(const DynSystem& time_one, const FlowEntropyOptions& opts = {});
/// Same estimate, counting the flow itself at real horizons.
EntropyEstimate hpol_flow_real_time(const AnnulusField& field, const FlowEntropyOptions& opts = {});

}  // namespace hpol
