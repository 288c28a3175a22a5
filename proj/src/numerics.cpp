#include "hpol/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "hpol/errors.hpp"

namespace hpol::num {

double bisect_increasing(const Fn& g, double target, double lo, double hi, double tol, int max_iter) {
  double glo = g(lo) - target;
  double ghi = g(hi) - target;
  if (!(glo < 0)) return lo;
  if (ghi < 0) return hi;
  // Illinois regula falsi; every third step must halve the bracket or the
  // next step bisects.
  int side = 0;
  double checkpoint = hi - lo;
  bool force_mid = false;
  for (int i = 0; i < max_iter && hi - lo > tol; ++i) {
    double x = force_mid ? 0.5 * (lo + hi) : lo - glo * (hi - lo) / (ghi - glo);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    if (x <= lo || x >= hi) break;
    const double gx = g(x) - target;
    if (gx == 0) return x;
    if (gx < 0) {
      lo = x;
      glo = gx;
      if (side < 0) ghi *= 0.5;
      side = -1;
    } else {
      hi = x;
      ghi = gx;
      if (side > 0) glo *= 0.5;
      side = 1;
    }
    force_mid = false;
    if (i % 3 == 2) {
      force_mid = hi - lo > 0.5 * checkpoint;
      checkpoint = hi - lo;
    }
  }
  return 0.5 * (lo + hi);
}

double bisect_root(const Fn& g, double lo, double hi, double tol, int max_iter) {
  double glo = g(lo);
  double ghi = g(hi);
  if (glo == 0.0) return lo;
  if (ghi == 0.0) return hi;
  if ((glo > 0) == (ghi > 0)) throw NumericError("bisect_root: no sign change on bracket");
  for (int i = 0; i < max_iter && hi - lo > tol; ++i) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm > 0) == (glo > 0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

namespace {

double simpson_rec(const Fn& f, double a, double b, double fa, double fm, double fb, double whole,
                   double tol, int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m);
  double rm = 0.5 * (m + b);
  double flm = f(lm);
  double frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  double delta = left + right - whole;
  if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double integrate_adaptive(const Fn& f, double a, double b, double tol, int max_depth) {
  if (a == b) return 0.0;
  double sign = 1.0;
  if (b < a) {
    std::swap(a, b);
    sign = -1.0;
  }
  // Start from several panels: a single Simpson step can sample a periodic
  // integrand at equal values and stop before resolving it.
  constexpr int kPanels = 16;
  const double w = (b - a) / kPanels;
  double sum = 0.0;
  double fa = f(a);
  for (int i = 0; i < kPanels; ++i) {
    double lo = a + w * i;
    double hi = i + 1 == kPanels ? b : a + w * (i + 1);
    double fb = f(hi);
    double fm = f(0.5 * (lo + hi));
    double whole = (hi - lo) / 6.0 * (fa + 4.0 * fm + fb);
    sum += simpson_rec(f, lo, hi, fa, fm, fb, whole, tol / kPanels, max_depth);
    fa = fb;
  }
  return sign * sum;
}

Quadrature trapezoid(const Fn& f, double a, double b, double h) {
  if (b <= a) return {};
  auto n = static_cast<long>(std::ceil((b - a) / h));
  if (n % 2) ++n;
  double step = (b - a) / static_cast<double>(n);
  double fine = 0.5 * (f(a) + f(b));
  double coarse = fine;
  for (long i = 1; i < n; ++i) {
    double v = f(a + step * static_cast<double>(i));
    fine += v;
    if (i % 2 == 0) coarse += v;
  }
  fine *= step;
  coarse *= 2.0 * step;
  // Richardson: the fine rule's error is about a third of the difference.
  return {fine, std::fabs(fine - coarse) / 3.0};
}

SampledMax sup_abs(const Fn& f, double a, double b, double h) {
  SampledMax best{std::fabs(f(a)), a};
  auto n = std::max<long>(1, static_cast<long>(std::ceil((b - a) / h)));
  for (long i = 1; i <= n; ++i) {
    double x = a + (b - a) * static_cast<double>(i) / static_cast<double>(n);
    double v = std::fabs(f(x));
    if (v > best.value) best = {v, x};
  }
  return best;
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  const auto n = static_cast<double>(x.size());
  if (x.size() != y.size() || x.size() < 2) throw EstimationError("least_squares: need >= 2 points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw EstimationError("least_squares: degenerate abscissae");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double r = y[i] - (fit.slope * x[i] + fit.intercept);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / n);
  return fit;
}

std::array<double, 2> rk4_step(const Field2& f, double t, std::array<double, 2> z, double h) {
  auto add = [](std::array<double, 2> a, std::array<double, 2> b, double s) {
    return std::array<double, 2>{a[0] + s * b[0], a[1] + s * b[1]};
  };
  auto k1 = f(t, z);
  auto k2 = f(t + 0.5 * h, add(z, k1, 0.5 * h));
  auto k3 = f(t + 0.5 * h, add(z, k2, 0.5 * h));
  auto k4 = f(t + h, add(z, k3, h));
  return {z[0] + h / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
          z[1] + h / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])};
}

}  // namespace hpol::num
