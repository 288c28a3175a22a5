#include <algorithm>
#include <cmath>

#include "hpol/circlemaps.hpp"
#include "hpol/errors.hpp"
#include "hpol/numerics.hpp"

namespace hpol {

double IntervalMap::invert(double y) const {
  if (inverse) return inverse(y);
  if (y <= a) return a;
  if (y >= b) return b;
  return num::bisect_increasing(f, y, a, b, 0.0, 4000);
}

double sampled_diameter(const std::function<double(double)>& f, double lo, double hi, std::size_t n,
                        std::size_t samples) {
  samples = std::max<std::size_t>(samples, 2);
  std::vector<double> xs(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(samples - 1);
  }
  double diam = 0;
  for (std::size_t k = 0; k < n; ++k) {
    auto [mn, mx] = std::minmax_element(xs.begin(), xs.end());
    diam = std::max(diam, *mx - *mn);
    if (k + 1 < n)
      for (double& x : xs) x = f(x);
  }
  return diam;
}

namespace {

void check_interval_map(const IntervalMap& map, int& sign) {
  if (!map.f) throw InvalidInput("interval_cover: empty map");
  if (!(map.a < map.b) || !std::isfinite(map.a) || !std::isfinite(map.b)) throw InvalidInput("interval_cover: bad interval");
  const double scale = 1e-9 * std::max(1.0, map.b - map.a);
  if (std::fabs(map.f(map.a) - map.a) > scale || std::fabs(map.f(map.b) - map.b) > scale) {
    throw InvalidInput("interval_cover: endpoints are not fixed");
  }
  constexpr int kSamples = 1000;
  double prev = map.f(map.a);
  sign = 0;
  for (int i = 1; i <= kSamples; ++i) {
    double x = map.a + (map.b - map.a) * i / kSamples;
    double v = map.f(x);
    if (!(v > prev)) throw InvalidInput("interval_cover: map is not increasing");
    prev = v;
    if (i < kSamples) {
      int s = v > x ? 1 : (v < x ? -1 : 0);
      if (s == 0 || (sign != 0 && s != sign)) throw InvalidInput("interval_cover: f - id changes sign inside (a, b)");
      sign = s;
    }
  }
}

// f > id on (a, b): a repels, b attracts.
CoverSet cover_increasing(const IntervalMap& map, double eps, std::size_t n) {
  const double a = map.a, b = map.b;
  CoverSet cs;
  cs.n = static_cast<double>(n);
  cs.eps = eps;
  auto& k = cs.constants;

  const double j_lo = a + eps, j_hi = b - eps, j_len = j_hi - j_lo;
  std::size_t n0 = 0;
  for (double x = j_lo; x < j_hi; x = map.f(x)) {
    if (++n0 > 10000000) throw BudgetError("interval_cover: orbit of a+eps does not reach [b-eps, b]");
  }
  k.n0 = n0;

  // Empirical modulus: halve alpha until points alpha apart stay eps-close
  // for n0 iterates (monotonicity makes the endpoint pair the worst case).
  auto pair_ok = [&](double x, double y) {
    for (std::size_t s = 1; s <= n0; ++s) {
      x = map.f(x);
      y = map.f(y);
      if (y - x > eps) return false;
    }
    return true;
  };
  constexpr int kGrid = 10000;
  double alpha = j_len;
  for (int it = 0;; ++it) {
    if (it > 80) throw NumericError("interval_cover: modulus search did not converge");
    bool ok = alpha <= eps;
    for (int i = 0; ok && i <= kGrid; ++i) {
      double x = a + (b - a) * i / kGrid;
      ok = pair_ok(x, std::min(x + alpha, b));
    }
    std::size_t q = static_cast<std::size_t>(std::ceil(j_len / alpha - 1e-12));
    for (std::size_t j = 0; ok && j < q; ++j) {
      double lo = j_lo + j_len * static_cast<double>(j) / static_cast<double>(q);
      double hi = j_lo + j_len * static_cast<double>(j + 1) / static_cast<double>(q);
      ok = pair_ok(lo, hi);
    }
    if (ok) break;
    alpha *= 0.5;
  }
  k.alpha = alpha;
  k.q = static_cast<std::size_t>(std::ceil(j_len / alpha - 1e-12));

  std::vector<double> cuts;  // J_j boundaries
  for (std::size_t j = 0; j <= k.q; ++j) cuts.push_back(j_lo + j_len * static_cast<double>(j) / static_cast<double>(k.q));
  cuts.back() = j_hi;
  for (std::size_t j = 0; j < k.q; ++j) cs.pieces.push_back({cuts[j], cuts[j + 1], "J"});
  cs.pieces.push_back({j_hi, b, "I1"});

  // Pieces of J (and I1) meeting [a+eps, f(a+eps)], clipped to it.
  const double top = map.f(j_lo);
  std::vector<double> base{j_lo};
  for (std::size_t j = 1; j <= k.q && cuts[j] < top; ++j) base.push_back(cuts[j]);
  if (top > j_hi && base.back() < j_hi) base.push_back(j_hi);
  base.push_back(top);
  k.p = base.size() - 1;

  std::vector<double> level = base;
  for (std::size_t depth = 1; depth <= n; ++depth) {
    for (double& v : level) v = map.invert(v);
    for (std::size_t j = 0; j + 1 < level.size(); ++j) cs.pieces.push_back({level[j], level[j + 1], "pullback"});
  }
  cs.pieces.push_back({a, level.front(), "I0-tail"});

  k.c = static_cast<double>(k.p);
  k.d = static_cast<double>(k.q) + 2.0;
  k.kappa = 0;
  return cs;
}

}  // namespace

CoverSet interval_cover(const IntervalMap& map, double eps, std::size_t n) {
  int sign = 0;
  check_interval_map(map, sign);
  if (!(eps > 0) || !(eps < 0.5 * (map.b - map.a))) throw PreconditionError("interval_cover: need 0 < eps < (b-a)/2");
  if (n < 1) throw DomainError("interval_cover: n must be at least 1");
  if (sign > 0) return cover_increasing(map, eps, n);

  // f < id: conjugate by the isometry x -> -x, which is exact in floating point.
  IntervalMap mirrored;
  auto f = map.f;
  mirrored.f = [f](double x) { return -f(-x); };
  mirrored.a = -map.b;
  mirrored.b = -map.a;
  if (map.inverse) {
    auto inv = map.inverse;
    mirrored.inverse = [inv](double y) { return -inv(-y); };
  }
  CoverSet cs = cover_increasing(mirrored, eps, n);
  for (auto& piece : cs.pieces) piece = {-piece.hi, -piece.lo, piece.tag};
  return cs;
}

CoverSet periodic_circle_cover(const CircleLift& lift, double eps, std::size_t n, std::size_t max_components) {
  if (!(eps > 0) || !(eps < 0.5)) throw PreconditionError("periodic_circle_cover: need 0 < eps < 1/2");
  PeriodicStructure ps = periodic_structure(lift);
  const long p = ps.p, q = ps.q;
  auto g = [lift, p, q](double x) { return lift.iterate(x, q) - static_cast<double>(p); };

  CoverSet cs;
  cs.n = static_cast<double>(n);
  cs.eps = eps;
  auto& k = cs.constants;

  // Closed balls of diameter eps covering P, and J_k = [min, max] of P in each.
  std::vector<std::pair<double, double>> fixed = ps.fixed;
  const double z0 = fixed.front().first;
  std::vector<std::pair<double, double>> jk;
  std::size_t i = 0;
  double cursor = z0;
  while (i < fixed.size()) {
    double ball_hi = cursor + eps;
    double lo = std::max(cursor, fixed[i].first);
    double hi = lo;
    while (i < fixed.size() && fixed[i].first <= ball_hi) {
      hi = std::min(fixed[i].second, ball_hi);
      if (fixed[i].second > ball_hi) break;
      ++i;
    }
    hi = std::min(hi, z0 + 1.0);
    jk.push_back({lo, hi});
    if (i < fixed.size() && fixed[i].second > ball_hi) {
      cursor = ball_hi;
    } else if (i < fixed.size()) {
      cursor = fixed[i].first;
    }
    if (ps.everything_periodic && ball_hi >= z0 + 1.0) break;
  }
  for (const auto& [lo, hi] : jk) cs.pieces.push_back({lo, hi, "Bk"});
  k.kappa = jk.size();

  std::size_t components = 0;
  for (std::size_t j = 0; j < jk.size(); ++j) {
    double lo = jk[j].second;
    double hi = j + 1 < jk.size() ? jk[j + 1].first : jk.front().first + 1.0;
    if (!(hi > lo)) continue;
    if (++components > max_components) throw BudgetError("periodic_circle_cover: too many complementary components");
    double len = hi - lo;
    if (len <= eps) {
      // G-invariant arc no longer than eps.
      cs.pieces.push_back({lo, hi, "single"});
      k.d += 1.0;
      continue;
    }
    double mid = 0.5 * (lo + hi);
    double repeller = g(mid) > mid ? lo : hi;
    double shift = std::round(repeller);  // G commutes with integer shifts
    IntervalMap im;
    im.f = g;
    im.a = lo - shift;
    im.b = hi - shift;
    double e = len < 2.0 * eps ? 0.99 * len / 2.0 : eps;
    CoverSet sub = interval_cover(im, e, n);
    for (auto& piece : sub.pieces) cs.pieces.push_back(piece);
    k.c += sub.constants.c;
    k.d += sub.constants.d;
    k.p += sub.constants.p;
    k.q += sub.constants.q;
  }
  return cs;
}

}  // namespace hpol
