#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

namespace hpol::num {

using Fn = std::function<double(double)>;

/// Solve g(x) = target for a nondecreasing g on [lo, hi] by safeguarded
/// regula falsi. Returns lo if g(lo) >= target and hi if g(hi) < target. Stops when the bracket is narrower than `tol` or cannot shrink further in
/// double precision (tol = 0 narrows to adjacent doubles).
double bisect_increasing(const Fn& g, double target, double lo, double hi, double tol = 1e-12,
                         int max_iter = 2000);

/// Root of a continuous g with g(lo), g(hi) of opposite signs (or zero).
double bisect_root(const Fn& g, double lo, double hi, double tol = 1e-13, int max_iter = 400);

/// Adaptive Simpson quadrature of f on [a, b] to absolute tolerance `tol`,
/// started from 16 equal panels.
double integrate_adaptive(const Fn& f, double a, double b, double tol = 1e-12, int max_depth = 50);

/// Composite trapezoid on a uniform grid of step <= h. Returns the estimate
/// and an a-posteriori error proxy (difference with the half-resolution rule).
struct Quadrature {
  double value = 0.0;
  double error = 0.0;
};
Quadrature trapezoid(const Fn& f, double a, double b, double h = 1e-3);

/// max |f| on a uniform sample of [a, b] with step <= h, plus the argmax.
struct SampledMax {
  double value = 0.0;
  double at = 0.0;
};
SampledMax sup_abs(const Fn& f, double a, double b, double h = 1e-3);

/// Ordinary least squares y = slope * x + intercept.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double rms_residual = 0.0;
};
LinearFit least_squares(std::span<const double> x, std::span<const double> y);

/// One classical RK4 step for a planar non-autonomous field.
using Field2 = std::function<std::array<double, 2>(double t, std::array<double, 2> z)>;
std::array<double, 2> rk4_step(const Field2& f, double t, std::array<double, 2> z, double h);

}  // namespace hpol::num
