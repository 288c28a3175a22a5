#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hpol/circlemaps.hpp"
#include "hpol/dynsystem.hpp"
#include "hpol/separation.hpp"

namespace hpol {

using Params = std::map<std::string, double>;

struct SystemSpec {
  std::string id;
  std::string family;  // circle | suspension | annulus
  std::string description;
  Params defaults;
};

/// A constructed system with the schedules and sample it is estimated on.
struct BuiltSystem {
  DynSystem system;
  GridPolicy grid;
  std::vector<double> n_schedule;
  std::vector<double> eps_schedule;
  /// Headline range implied by the theory, when the parameters determine it.
  std::optional<std::pair<double, double>> expected;
  std::string note;
};

const std::vector<SystemSpec>& registered_systems();
/// Throws UnknownSystem.
const SystemSpec& find_system(std::string_view id);
/// Unknown parameter names throw ConfigError; out-of-range values DomainError.
BuiltSystem build_system(std::string_view id, const Params& params = {});
/// The lift of a circle system or the base lift of a suspension; throws
/// NotApplicable for annulus systems.
CircleLift base_lift(std::string_view id, const Params& params = {});

}  // namespace hpol
