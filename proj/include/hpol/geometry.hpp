#pragma once

#include <string_view>

namespace hpol {

/// A point of a (at most) two-dimensional phase space. Circle points only use
/// `x`; annulus points are (theta, r); torus points are (x, y).
struct Point {
  double x = 0.0;
  double y = 0.0;
};

enum class SpaceKind {
  Circle,   // T = R/Z, arc-length metric
  Annulus,  // T x [0,1], max(circle, |dr|)
  Torus,    // T x T, max(circle, circle)
  Plane,    // R^2 strip, Euclidean
};

std::string_view to_string(SpaceKind kind);

/// Distance on the unit circle between two real representatives.
double circle_dist(double a, double b);

/// Base metric of the phase space. Throws DomainError for points outside it
/// (non-finite coordinates, or r outside [0,1] on the annulus).
double base_dist(SpaceKind space, Point a, Point b);

/// Same metric without the domain check; used in inner counting loops.
double base_dist_unchecked(SpaceKind space, Point a, Point b) noexcept;

bool contains(SpaceKind space, Point p) noexcept;

/// Reduce angular coordinates into [0,1); radial/planar ones are untouched.
Point canonical(SpaceKind space, Point p) noexcept;

}  // namespace hpol
