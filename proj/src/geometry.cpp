#include "hpol/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hpol/errors.hpp"

namespace hpol {

std::string_view to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::Circle: return "circle";
    case SpaceKind::Annulus: return "annulus";
    case SpaceKind::Torus: return "torus";
    case SpaceKind::Plane: return "plane";
  }
  return "?";
}

double circle_dist(double a, double b) {
  double d = std::fmod(std::fabs(a - b), 1.0);
  return std::min(d, 1.0 - d);
}

bool contains(SpaceKind space, Point p) noexcept {
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) return false;
  if (space == SpaceKind::Annulus) return p.y >= 0.0 && p.y <= 1.0;
  return true;
}

double base_dist_unchecked(SpaceKind space, Point a, Point b) noexcept {
  switch (space) {
    case SpaceKind::Circle: return circle_dist(a.x, b.x);
    case SpaceKind::Annulus: return std::max(circle_dist(a.x, b.x), std::fabs(a.y - b.y));
    case SpaceKind::Torus: return std::max(circle_dist(a.x, b.x), circle_dist(a.y, b.y));
    case SpaceKind::Plane: return std::hypot(a.x - b.x, a.y - b.y);
  }
  return 0.0;
}

double base_dist(SpaceKind space, Point a, Point b) {
  if (!contains(space, a) || !contains(space, b)) {
    throw DomainError("base_dist: point outside the " + std::string(to_string(space)));
  }
  return base_dist_unchecked(space, a, b);
}

Point canonical(SpaceKind space, Point p) noexcept {
  auto wrap = [](double v) {
    double w = v - std::floor(v);
    return w >= 1.0 ? 0.0 : w;
  };
  switch (space) {
    case SpaceKind::Circle: return {wrap(p.x), 0.0};
    case SpaceKind::Annulus: return {wrap(p.x), p.y};
    case SpaceKind::Torus: return {wrap(p.x), wrap(p.y)};
    case SpaceKind::Plane: return p;
  }
  return p;
}

}  // namespace hpol
