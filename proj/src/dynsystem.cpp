#include "hpol/dynsystem.hpp"

#include <cmath>
#include <utility>

#include "hpol/errors.hpp"

namespace hpol {

DynSystem DynSystem::map(std::string id, SpaceKind space, StepFn forward, StepFn backward) {
  if (!forward) throw InvalidInput("DynSystem::map: forward step required");
  DynSystem s;
  s.id_ = std::move(id);
  s.kind_ = Kind::Map;
  s.space_ = space;
  s.forward_ = std::move(forward);
  s.backward_ = std::move(backward);
  return s;
}

DynSystem DynSystem::flow(std::string id, SpaceKind space, FlowFn phi, double speed_bound) {
  if (!phi) throw InvalidInput("DynSystem::flow: flow evaluator required");
  if (!(speed_bound > 0)) throw InvalidInput("DynSystem::flow: speed bound must be positive");
  DynSystem s;
  s.id_ = std::move(id);
  s.kind_ = Kind::Flow;
  s.space_ = space;
  s.flow_ = std::move(phi);
  s.speed_bound_ = speed_bound;
  // The time-one map doubles as the discrete step.
  s.forward_ = [f = s.flow_](Point p) { return f(1.0, p); };
  s.backward_ = [f = s.flow_](Point p) { return f(-1.0, p); };
  return s;
}

Point DynSystem::step_back(Point p) const {
  if (!backward_) throw DomainError("DynSystem '" + id_ + "': no inverse available");
  return backward_(p);
}

Point DynSystem::eval(double time, Point p) const {
  if (kind_ == Kind::Flow) return time == 0.0 ? p : flow_(time, p);
  if (time != std::floor(time)) throw DomainError("DynSystem::eval: maps need integral time");
  auto steps = static_cast<long long>(time);
  if (power_) return power_(static_cast<long>(steps), p);
  for (long long i = 0; i < steps; ++i) p = forward_(p);
  for (long long i = 0; i > steps; --i) p = step_back(p);
  return p;
}

void DynSystem::orbit(Point start, std::size_t count, Point* out) const {
  if (count == 0) return;
  if (orbit_) {
    orbit_(start, count, out);
    return;
  }
  out[0] = start;
  for (std::size_t k = 1; k < count; ++k) out[k] = forward_(out[k - 1]);
}

double DynSystem::flow_time_step(double eps) const { return 0.05 * eps / speed_bound_; }

DynSystem& DynSystem::with_orbit(OrbitFn fn) {
  orbit_ = std::move(fn);
  return *this;
}

DynSystem& DynSystem::with_power(PowerFn fn) {
  power_ = std::move(fn);
  return *this;
}

DynSystem& DynSystem::with_circle_order(double lipschitz) {
  if (space_ != SpaceKind::Circle || kind_ != Kind::Map) {
    throw InvalidInput("with_circle_order: only for circle maps");
  }
  circle_lip_ = lipschitz;
  return *this;
}

}  // namespace hpol
