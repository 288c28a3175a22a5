#include "hpol/registry.hpp"

#include <functional>

#include "hpol/circlemaps.hpp"
#include "hpol/entropy.hpp"
#include "hpol/errors.hpp"
#include "hpol/suspension.hpp"
#include "hpol/torusflows.hpp"

namespace hpol {

namespace {

using Builder = std::function<BuiltSystem(const Params&)>;

struct Entry {
  SystemSpec spec;
  Builder build;
  std::function<CircleLift(const Params&)> lift;
};

constexpr std::pair<double, double> kZero{0.0, 0.05};
constexpr std::pair<double, double> kOne{0.8, 1.2};

BuiltSystem circle(const CircleLift& lift, std::optional<std::pair<double, double>> expected) {
  CircleSchedules sched;
  BuiltSystem b{circle_system(lift), default_circle_grid(lift), sched.n, sched.eps, expected, {}};
  auto rho = rotation_number(lift);
  b.note = "rotation number " + std::to_string(rho.value);
  return b;
}

BuiltSystem suspension(const CircleLift& lift, std::optional<std::pair<double, double>> expected) {
  SuspensionFlow s(Isotopy::of_lift(lift));
  GridPolicy g;
  g.seeds = 16;
  return {suspension_time_one(s, "suspension-" + lift.name()), g, geometric_schedule(8, 256),
          {0.25, 0.125, 0.0625}, expected, "time-one map of the suspension flow"};
}

BuiltSystem annulus(DynSystem sys, std::optional<std::pair<double, double>> expected, std::string note) {
  GridPolicy g;
  g.seeds = 16;
  g.transversal = 2;
  return {std::move(sys), g, geometric_schedule(8, 256), {0.25, 0.125, 0.0625}, expected, std::move(note)};
}

using LiftFn = std::function<CircleLift(const Params&)>;

Entry circle_entry(SystemSpec spec, LiftFn lift, std::optional<std::pair<double, double>> expected) {
  return {std::move(spec), [lift, expected](const Params& p) { return circle(lift(p), expected); }, lift};
}

Entry suspension_entry(SystemSpec spec, LiftFn lift, std::optional<std::pair<double, double>> expected) {
  return {std::move(spec), [lift, expected](const Params& p) { return suspension(lift(p), expected); }, lift};
}

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      circle_entry({"rotation", "circle", "rigid rotation x + a", {{"a", 0.3}}},
                   [](const Params& p) { return rotation_lift(p.at("a")); }, kZero),
      circle_entry({"sine", "circle", "x + 0.1 sin(2 pi x): fixed points, not a rotation", {}},
                   [](const Params&) { return sine_lift(); }, kOne),
      circle_entry({"arnold", "circle", "x + b + a sin(2 pi x), |a| < 1/(2 pi)", {{"b", 0.25}, {"a", 0.1}}},
                   [](const Params& p) { return arnold_lift(p.at("b"), p.at("a")); }, std::nullopt),
      circle_entry({"denjoy", "circle", "Denjoy homeomorphism with rotation number rho", {{"rho", golden_rotation()}}},
                   [](const Params& p) { return denjoy_lift(p.at("rho")); }, kOne),
      circle_entry({"half-turn", "circle", "half turn composed with x + a sin(4 pi x)", {{"a", 0.05}}},
                   [](const Params& p) { return half_turn_lift(p.at("a")); }, std::nullopt),
      circle_entry({"conjugated-rotation", "circle", "h o T_a o h^-1, h = x + s sin(2 pi x)",
                    {{"a", golden_rotation()}, {"s", 0.05}}},
                   [](const Params& p) { return conjugated_rotation_lift(p.at("a"), p.at("s")); }, std::nullopt),
      suspension_entry({"suspension-sine", "suspension", "suspension flow of the sine lift (time-one map)", {}},
                       [](const Params&) { return sine_lift(); }, std::pair{0.0, 1.1}),
      suspension_entry({"suspension-rotation", "suspension", "suspension flow of x + a (time-one map)", {{"a", 0.3}}},
                       [](const Params& p) { return rotation_lift(p.at("a")); }, std::nullopt),
      suspension_entry({"suspension-arnold", "suspension", "suspension flow of the Arnold lift (time-one map)",
                        {{"b", 0.25}, {"a", 0.1}}},
                       [](const Params& p) { return arnold_lift(p.at("b"), p.at("a")); }, std::nullopt),
      {{"annulus-type1", "annulus", "(1, sin pi r): boundary circles turn the same way", {}},
       [](const Params&) { return annulus(annulus_time_one(type_one_field()), kOne, "type I zone"); },
       {}},
      {{"annulus-type2", "annulus", "(cos pi r, sin pi r): boundary circles turn opposite ways", {}},
       [](const Params&) { return annulus(annulus_time_one(type_two_field()), kOne, "type II zone"); },
       {}},
      {{"action-angle", "annulus", "(theta + t (c0 + c1 r), r); c0 = 0 allows a vanishing frequency",
        {{"c0", 0.0}, {"c1", 1.0}}},
       [](const Params& p) {
         const double c0 = p.at("c0");
         const double c1 = p.at("c1");
         ActionAngleFlow psi{[c0, c1](double r) { return c0 + c1 * r; }};
         return annulus(action_angle_time_one(psi, "action-angle"), c1 == 0.0 ? kZero : kOne, "type III zone");
       },
       {}},
  };
  return table;
}

const Entry& find_entry(std::string_view id) {
  for (const auto& e : entries()) {
    if (e.spec.id == id) return e;
  }
  throw UnknownSystem("unknown system id '" + std::string(id) + "'");
}

}  // namespace

const std::vector<SystemSpec>& registered_systems() {
  static const std::vector<SystemSpec> specs = [] {
    std::vector<SystemSpec> v;
    for (const auto& e : entries()) v.push_back(e.spec);
    return v;
  }();
  return specs;
}

const SystemSpec& find_system(std::string_view id) { return find_entry(id).spec; }

namespace {

Params merged(const Entry& e, const Params& params) {
  Params p = e.spec.defaults;
  for (const auto& [key, value] : params) {
    if (!p.contains(key)) throw ConfigError("system '" + e.spec.id + "' has no parameter '" + key + "'");
    p[key] = value;
  }
  return p;
}

}  // namespace

BuiltSystem build_system(std::string_view id, const Params& params) {
  const Entry& e = find_entry(id);
  return e.build(merged(e, params));
}

CircleLift base_lift(std::string_view id, const Params& params) {
  const Entry& e = find_entry(id);
  if (!e.lift) throw NotApplicable("system '" + e.spec.id + "' is not built from a circle lift");
  return e.lift(merged(e, params));
}

}  // namespace hpol
