#include <algorithm>
#include <cmath>
#include <numbers>

#include "hpol/circlemaps.hpp"
#include "hpol/errors.hpp"

namespace hpol {

namespace {

// sum over m in Z of 1/(|m|+2)^2 = 1/4 + 2 (pi^2/6 - 1 - 1/4)
constexpr double kLengthSum = 0.25 + 2.0 * (std::numbers::pi * std::numbers::pi / 6.0 - 1.25);

bool looks_rational(double rho) {
  for (long q = 1; q <= 1000; ++q) {
    double v = rho * static_cast<double>(q);
    if (std::fabs(v - std::round(v)) < 1e-12 * static_cast<double>(q)) return true;
  }
  return false;
}

}  // namespace

double golden_rotation() { return (std::sqrt(5.0) - 1.0) / 2.0; }

DenjoyModel::DenjoyModel(double rho, std::size_t truncation)
    : rho_(rho), k_(static_cast<long>(truncation)), c_(0.5 / kLengthSum) {
  if (!std::isfinite(rho) || looks_rational(rho)) throw DomainError("denjoy_lift: rotation target must be irrational");
  if (truncation < 16) throw DomainError("denjoy_lift: truncation too small");
  const std::size_t count = 2 * truncation + 1;
  std::vector<std::pair<double, long>> entries;
  entries.reserve(count);
  double inserted = 0;
  for (long m = -k_; m <= k_; ++m) {
    entries.push_back({anchor(m), m});
    inserted += length(m);
  }
  alpha_ = 1.0 - inserted;
  std::sort(entries.begin(), entries.end());
  sorted_anchor_.resize(count);
  sorted_index_.resize(count);
  prefix_.resize(count + 1);
  prefix_[0] = 0;
  for (std::size_t i = 0; i < count; ++i) {
    sorted_anchor_[i] = entries[i].first;
    sorted_index_[i] = entries[i].second;
    prefix_[i + 1] = prefix_[i] + length(entries[i].second);
  }
  left_.resize(count);
  pos_.resize(count);
  for (std::size_t i = 0; i < count; ++i) {
    left_[i] = alpha_ * sorted_anchor_[i] + prefix_[i];
    pos_[static_cast<std::size_t>(sorted_index_[i] + k_)] = i;
  }
}

double DenjoyModel::anchor(long m) const {
  long double v = static_cast<long double>(m) * static_cast<long double>(rho_);
  return static_cast<double>(v - std::floor(v));
}

double DenjoyModel::length(long m) const {
  if (std::labs(m) > k_) return 0.0;
  double d = static_cast<double>(std::labs(m) + 2);
  return c_ / (d * d);
}

double DenjoyModel::lipschitz() const {
  // Affine pieces I_m -> I_{m+1} have slope ((|m|+2)/(|m+1|+2))^2, largest at m = -1.
  return 2.25;
}

std::pair<double, double> DenjoyModel::interval(long m) const {
  if (std::labs(m) > k_) throw DomainError("DenjoyModel::interval: index beyond truncation");
  return {left_[pos_[static_cast<std::size_t>(m + k_)]], length(m)};
}

double DenjoyModel::left_value(double u) const {
  auto it = std::lower_bound(sorted_anchor_.begin(), sorted_anchor_.end(), u);
  auto i = static_cast<std::size_t>(it - sorted_anchor_.begin());
  return alpha_ * u + prefix_[i];
}

DenjoyModel::Coord DenjoyModel::decode(double x) const {
  const double j = std::floor(x);
  const double u = x - j;
  auto it = std::upper_bound(left_.begin(), left_.end(), u);
  std::size_t i = it == left_.begin() ? 0 : static_cast<std::size_t>(it - left_.begin()) - 1;
  const long m = sorted_index_[i];
  const double len = length(m);
  const double off = u - left_[i];
  Coord c;
  // Positions within rounding of the right end of I_m are taken as its endpoint.
  if (off - len <= 1e-15) {
    c.m = m;
    c.s = len > 0 ? std::min(1.0, off / len) : 0.0;
    c.theta = j + sorted_anchor_[i];
  } else {
    c.theta = j + sorted_anchor_[i] + (off - len) / alpha_;
    c.s = -1.0;
  }
  return c;
}

double DenjoyModel::encode(const Coord& c) const {
  if (c.in_interval()) {
    const double j = std::floor(c.theta - anchor(c.m) + 0.5);
    return j + left_[pos_[static_cast<std::size_t>(c.m + k_)]] + c.s * length(c.m);
  }
  const double j = std::floor(c.theta);
  return j + left_value(c.theta - j);
}

DenjoyModel::Coord DenjoyModel::shift(Coord c, long k) const {
  if (k == 0) return c;
  const double moved = c.theta + static_cast<double>(k) * rho_;
  if (!c.in_interval()) {
    c.theta = moved;
    return c;
  }
  const long m = c.m + k;
  const double a = anchor(m);
  c.theta = std::floor(moved - a + 0.5) + a;
  c.m = m;
  if (std::labs(m) > k_) c.s = -1.0;  // beyond the truncation the interval has length zero
  return c;
}

CircleLift denjoy_lift(double rho, std::size_t truncation) {
  auto model = std::make_shared<const DenjoyModel>(rho, truncation);
  CircleLift l;
  l.name_ = "denjoy(" + std::to_string(rho) + ")";
  l.repr_ = CircleLift::Repr::Denjoy;
  l.f_ = [model](double x) { return model->apply(x, 1); };
  l.inv_ = [model](double y) { return model->apply(y, -1); };
  l.disp_lo_ = rho - 1.0;
  l.disp_hi_ = rho + 1.0;
  l.lip_ = model->lipschitz();
  l.inv_lip_ = model->lipschitz();
  l.denjoy_ = model;
  return l;
}

}  // namespace hpol
