#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hpol/geometry.hpp"

namespace hpol {

/// A discrete map or a flow on one of the supported phase spaces, exposed
/// through point evaluation only. Coordinates are kept in lifted form (angles
/// are not reduced mod 1); the base metric takes care of the identification.
class DynSystem {
 public:
  enum class Kind { Map, Flow };

  using StepFn = std::function<Point(Point)>;
  using FlowFn = std::function<Point(double, Point)>;
  /// Writes `count` consecutive iterates starting with `start` itself.
  using OrbitFn = std::function<void(Point start, std::size_t count, Point* out)>;
  /// Exact k-fold iterate (closed-form time-k maps), k of either sign.
  using PowerFn = std::function<Point(long k, Point)>;

  static DynSystem map(std::string id, SpaceKind space, StepFn forward, StepFn backward = {});
  static DynSystem flow(std::string id, SpaceKind space, FlowFn phi, double speed_bound);

  const std::string& id() const noexcept { return id_; }
  Kind kind() const noexcept { return kind_; }
  SpaceKind space() const noexcept { return space_; }
  bool invertible() const noexcept { return kind_ == Kind::Flow || static_cast<bool>(backward_); }

  /// eval(0, x) = x. Maps require an integral time (negative needs an inverse).
  Point eval(double time, Point p) const;
  Point step(Point p) const { return forward_(p); }
  Point step_back(Point p) const;

  /// Iterates 0..count-1 of a map; uses the specialised orbit routine if set.
  void orbit(Point start, std::size_t count, Point* out) const;

  /// Sampling step for flow metrics d_T: bounded velocity keeps intermediate
  /// times within eps/2 of the sampled maximum.
  double flow_time_step(double eps) const;
  double speed_bound() const noexcept { return speed_bound_; }

  // Optional structure used by the counting core.
  DynSystem& with_orbit(OrbitFn fn);
  DynSystem& with_power(PowerFn fn);
  bool has_power() const noexcept { return static_cast<bool>(power_); }
  /// Declares that the map is (the lift of) an orientation-preserving circle
  /// homeomorphism with the given Lipschitz bound on the lift.
  DynSystem& with_circle_order(double lipschitz);
  std::optional<double> circle_lipschitz() const noexcept { return circle_lip_; }

 private:
  std::string id_;
  Kind kind_ = Kind::Map;
  SpaceKind space_ = SpaceKind::Circle;
  StepFn forward_;
  StepFn backward_;
  FlowFn flow_;
  OrbitFn orbit_;
  PowerFn power_;
  double speed_bound_ = 1.0;
  std::optional<double> circle_lip_;
};

}  // namespace hpol
