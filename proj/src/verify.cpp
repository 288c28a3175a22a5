#include "hpol/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <random>

#include "hpol/circlemaps.hpp"
#include "hpol/entropy.hpp"
#include "hpol/errors.hpp"
#include "hpol/registry.hpp"
#include "hpol/suspension.hpp"
#include "hpol/torusflows.hpp"

namespace hpol {

namespace {

constexpr double kPi = std::numbers::pi;

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::string kv(std::initializer_list<std::pair<const char*, double>> items) {
  std::string s;
  for (const auto& [k, v] : items) {
    if (!s.empty()) s += ';';
    s += k;
    s += '=';
    s += fmt("%.6g", v);
  }
  return s;
}

BoundCheck row(std::string lemma, double lhs, double rhs, double error, bool holds, std::string params) {
  return {std::move(lemma), lhs, rhs, rhs - lhs, error, holds, std::move(params)};
}

class Draw {
 public:
  explicit Draw(unsigned seed) : rng_(seed) {}
  double operator()(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }

 private:
  std::mt19937_64 rng_;
};

/// Redraws instances whose hypotheses fail; those are outside the lemma.
template <class Make>
std::vector<BoundCheck> collect(std::size_t count, Make make) {
  std::vector<BoundCheck> out;
  std::size_t attempts = 0;
  while (out.size() < count) {
    if (++attempts > 50 * count + 50) throw NumericError("bound instances: too many draws violate the hypotheses");
    try {
      out.push_back(make());
    } catch (const PreconditionError&) {
    } catch (const WindowError&) {
    }
  }
  return out;
}

BoundCheck l1_instance(Draw& u) {
  const double a = u(0.1, 0.8), ph = u(0, 1), delta = u(0.005, 0.1), ph2 = u(0, 1);
  const double k = std::floor(u(1, 4));
  const double x0 = u(0, 0.3), t = u(0.05, 0.3);
  auto f = [a, ph](double x) { return 1.0 + a * std::pow(std::sin(kPi * (x + ph)), 2); };
  auto g = [f, delta, k, ph2](double x) { return f(x) + delta * std::sin(2 * kPi * (k * x + ph2)); };
  auto r = l1_compare(f, g, 0.0, 1.0, x0, t);
  return row("l1-comparison", r.lhs, r.rhs, r.error, r.holds,
             kv({{"a", a}, {"delta", delta}, {"k", k}, {"x0", x0}, {"t", t}}));
}

BoundCheck deviation_instance(Draw& u) {
  const double a = u(0.05, 0.5), b = u(0.05, 0.3);
  const double x0 = u(0, 1), y0 = u(0, 1), gap = u(0.005, 0.05), T = u(0.5, 3);
  auto field = sheared_field(a, b);
  auto k = bound_constants(field);
  const double hi = x0 + k.mu_M * T + 0.5;
  auto phi = integrate_orbit_graph(field, {x0, y0}, x0 - 0.5, hi);
  auto psi = integrate_orbit_graph(field, {x0, y0 + gap}, x0 - 0.5, hi);
  auto d = deviation(field, k, x0, phi, psi, T);
  return row("deviation", d.measured, d.bound, d.error, d.holds,
             kv({{"a", a}, {"b", b}, {"x0", x0}, {"y0", y0}, {"gap", gap}, {"T", T}}));
}

BoundCheck diameter_instance(Draw& u, bool sheared) {
  const double eps = u(0.3, 0.6), x = u(0, 1), y0 = u(0, 1);
  if (sheared) {
    const double a = u(0.05, 0.3), b = u(0.05, 0.2), T = u(1, 3), gap = u(1e-5, 1e-4);
    auto field = sheared_field(a, b);
    auto k = bound_constants(field);
    const double x2 = x + k.c0 * eps * u(0.3, 1.0);
    const double hi = x2 + k.mu_M * T + 0.5;
    auto phi = integrate_orbit_graph(field, {x, y0}, x - 0.5, hi);
    auto psi = integrate_orbit_graph(field, {x, y0 + gap}, x - 0.5, hi);
    auto d = strip_diameter_check(field, k, x, x2, phi, psi, T, eps);
    return row("strip-diameter", d.diameter, eps, 0.0, d.holds,
               kv({{"sheared_a", a}, {"sheared_b", b}, {"eps", eps}, {"x", x}, {"width", x2 - x}, {"gap", gap},
                   {"T", T}}));
  }
  const double b = u(0, 1), a = u(0.02, 0.15), T = u(2, 5), gap = u(1e-4, 2e-3);
  SuspensionFlow s(Isotopy::of_lift(arnold_lift(b, a)));
  auto field = suspension_field(s);
  auto k = bound_constants(field);
  const double x2 = x + k.c0 * eps * u(0.3, 1.0);
  const double hi = x2 + k.mu_M * T + 2.0;
  auto phi = s.orbit_graph(y0, -1.0, hi);
  auto psi = s.orbit_graph(y0 + gap, -1.0, hi);
  auto d = strip_diameter_check(field, k, x, x2, phi, psi, T, eps);
  return row("strip-diameter", d.diameter, eps, 0.0, d.holds,
             kv({{"arnold_b", b}, {"arnold_a", a}, {"eps", eps}, {"x", x}, {"width", x2 - x}, {"gap", gap},
                 {"T", T}}));
}

/// Bases with max |X2 / X1| <= 1/4, where the constant 1/2 is established.
BoundCheck area_instance(Draw& u) {
  const double b = u(0, 0.03), a = u(0.005, 0.03);
  const double y0 = u(0, 1), gap = u(0.01, 0.3), T = u(5, 10);
  SuspensionFlow s(Isotopy::of_lift(arnold_lift(b, a)));
  auto k = bound_constants(suspension_field(s));
  auto phi = s.orbit_graph(y0, -1.0, T + 2.0);
  auto psi = s.orbit_graph(y0 + gap, -1.0, T + 2.0);
  auto c = area_lower_bound_check(k, phi, psi, T);
  return {"strip-area", c.bound, c.area, c.area - c.bound, c.area_error, c.holds,
          kv({{"arnold_b", b}, {"arnold_a", a}, {"p", k.p}, {"y0", y0}, {"gap", gap}, {"T", T}})};
}

}  // namespace

const std::vector<std::string>& bound_lemmas() {
  static const std::vector<std::string> names = {"l1-comparison", "deviation", "strip-diameter", "strip-area"};
  return names;
}

std::vector<BoundCheck> bound_instances(std::string_view lemma, std::size_t count, unsigned seed) {
  Draw u(seed);
  if (lemma == "l1-comparison") return collect(count, [&] { return l1_instance(u); });
  if (lemma == "deviation") return collect(count, [&] { return deviation_instance(u); });
  if (lemma == "strip-diameter") {
    std::size_t i = 0;
    return collect(count, [&] { return diameter_instance(u, (i++ % 2) == 1); });
  }
  if (lemma == "strip-area") return collect(count, [&] { return area_instance(u); });
  throw ConfigError("unknown bound lemma '" + std::string(lemma) + "'");
}

std::vector<BoundCheck> strip_cover_checks(double eps, const std::vector<double>& horizons) {
  SuspensionFlow s(Isotopy::of_lift(sine_lift()));
  std::vector<BoundCheck> out;
  for (double T : horizons) {
    auto c = strip_cover(s, eps, T);
    const auto n = static_cast<double>(c.domains.size());
    const bool valid = c.passed == c.checked && c.coverage_misses == 0 && c.hypothesis_failures == 0;
    out.push_back(row("strip-cover", n, c.bound, 0.0, valid && n <= c.bound,
                      kv({{"eps", eps},
                          {"T", T},
                          {"product_bound", c.product_bound},
                          {"checked", static_cast<double>(c.checked)},
                          {"passed", static_cast<double>(c.passed)},
                          {"max_diameter", c.max_diameter},
                          {"coverage_misses", static_cast<double>(c.coverage_misses)}})));
  }
  return out;
}

VerifyCheck make_check(std::string name, double value, double lo, double hi, std::string detail) {
  VerifyCheck c{std::move(name), value, lo, hi, std::min(value - lo, hi - value), false, std::move(detail)};
  c.passed = value >= lo && value <= hi;
  return c;
}

bool VerifyReport::passed() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = {"circle", "suspension", "bounds", "torus"};
  return names;
}

namespace {

void add_headline(VerifyReport& rep, const std::string& name, const EntropyEstimate& est, double lo, double hi) {
  std::string detail = "cap=" + fmt("%.3g", est.cap) + (est.saturated ? ";saturated" : "");
  rep.checks.push_back(make_check("headline/" + name, est.headline, lo, hi, detail));
  rep.reports.insert(rep.reports.end(), est.reports.begin(), est.reports.end());
}

EntropyEstimate estimate_registered(const std::string& id, const Params& params = {}) {
  BuiltSystem b = build_system(id, params);
  return estimate_hpol(b.system, b.n_schedule, b.eps_schedule, b.grid);
}

void circle_suite(VerifyReport& rep) {
  add_headline(rep, "rotation", estimate_registered("rotation"), 0.0, 0.05);
  add_headline(rep, "sine", estimate_registered("sine"), 0.8, 1.2);
  add_headline(rep, "denjoy", estimate_registered("denjoy"), 0.8, 1.2);
}

void suspension_suite(VerifyReport& rep, unsigned seed) {
  SuspensionFlow s(Isotopy::of_lift(sine_lift()));
  const CircleLift f = sine_lift();
  double section = 0;
  for (int i = 0; i < 1000; ++i) {
    const double y = i / 1000.0;
    Point p = s.flow(1.0, {0.0, y});
    section = std::max({section, std::fabs(p.x - 1.0), std::fabs(p.y - f(y))});
  }
  rep.checks.push_back(make_check("time-one-section", section, 0.0, 1e-12, "1000 samples"));

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ut(-3.0, 3.0);
  std::uniform_real_distribution<double> up(0.0, 1.0);
  double flow = 0;
  for (int i = 0; i < 1000; ++i) {
    const double t = ut(rng), r = ut(rng);
    Point p{up(rng), up(rng)};
    Point a = s.flow(t + r, p);
    Point b = s.flow(t, s.flow(r, p));
    flow = std::max({flow, std::fabs(a.x - b.x), std::fabs(a.y - b.y)});
  }
  rep.checks.push_back(make_check("flow-property", flow, 0.0, 1e-9, "1000 random (t, s, p)"));

  double oracle = 0;
  for (int i = 0; i < 20; ++i) {
    const double t = ut(rng);
    Point p{up(rng), up(rng)};
    Point a = s.flow(t, p);
    Point b = s.integrate(t, p);
    oracle = std::max({oracle, std::fabs(a.x - b.x), std::fabs(a.y - b.y)});
  }
  rep.checks.push_back(make_check("integrator-oracle", oracle, 0.0, 1e-6, "RK4 step 1e-3, 20 samples"));
  add_headline(rep, "suspension-sine", estimate_registered("suspension-sine"), 0.0, 1.1);
}

void bounds_suite(VerifyReport& rep, const VerifyOptions& opts) {
  for (const auto& lemma : bound_lemmas()) {
    auto rows = bound_instances(lemma, opts.instances, opts.seed);
    std::size_t good = 0;
    double min_margin = std::numeric_limits<double>::infinity();
    for (const auto& r : rows) {
      if (r.holds && r.margin > 0) ++good;
      min_margin = std::min(min_margin, r.margin);
    }
    const auto n = static_cast<double>(rows.size());
    rep.checks.push_back(make_check("bound/" + lemma, static_cast<double>(good), n, n,
                                    "instances=" + std::to_string(rows.size()) + ";min_margin=" +
                                        fmt("%.3g", min_margin)));
    rep.bounds.insert(rep.bounds.end(), rows.begin(), rows.end());
  }
  const std::vector<double> horizons = {5, 10, 20};
  auto rows = strip_cover_checks(0.5, horizons);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    auto c = make_check("strip-cover/T=" + fmt("%g", horizons[i]), rows[i].lhs, 0.0, rows[i].rhs, rows[i].params);
    c.passed = c.passed && rows[i].holds;
    rep.checks.push_back(c);
    rep.bounds.push_back(rows[i]);
  }
}

void torus_suite(VerifyReport& rep) {
  FlowEntropyOptions o;
  add_headline(rep, "rigid", hpol_flow(action_angle_field(golden_rotation(), 0.0), o), 0.0, 0.05);
  add_headline(rep, "action-angle", estimate_registered("action-angle"), 0.8, 1.2);

  FlowEntropyOptions real;
  real.n_schedule = geometric_schedule(8, 128, std::numbers::sqrt2);
  real.estimate.count.flow_dt = 0.125;
  for (const auto& field : {type_one_field(), type_two_field(), action_angle_field(0.5, 1.0)}) {
    auto one = hpol_flow(field, o);
    const bool model = field.family != ZoneFamily::TypeIII;
    if (model) {
      add_headline(rep, field.name, one, 0.8, 1.2);
    } else {
      rep.reports.insert(rep.reports.end(), one.reports.begin(), one.reports.end());
    }
    auto flow = hpol_flow_real_time(field, real);
    rep.reports.insert(rep.reports.end(), flow.reports.begin(), flow.reports.end());
    rep.checks.push_back(make_check("flow-vs-time-one/" + field.name, std::fabs(flow.headline - one.headline), 0.0,
                                    0.1,
                                    "time_one=" + fmt("%.4f", one.headline) + ";flow=" + fmt("%.4f", flow.headline)));
  }

  auto twist = action_angle_conjugacy(action_angle_field(1.0, 1.0)).residual(1000);
  rep.checks.push_back(make_check("conjugacy/twist", twist.residual, 0.0, 1e-5, "1000 samples"));
  auto wobbly = custom_field(
      "wobbly", [](Point p) { return std::array<double, 2>{(1 + p.y) * (1 + 0.5 * std::sin(2 * kPi * p.x)), 0.0}; },
      3.0);
  auto res = action_angle_conjugacy(wobbly).residual(1000);
  rep.checks.push_back(make_check("conjugacy/wobbly", res.residual, 0.0, 1e-5, "1000 samples"));
}

}  // namespace

VerifyReport verify(std::string_view suite, const VerifyOptions& opts) {
  if (suite.empty()) throw ConfigError("verify: empty suite name");
  VerifyReport rep;
  rep.suite = std::string(suite);
  const auto start = std::chrono::steady_clock::now();
  if (suite == "circle") {
    circle_suite(rep);
  } else if (suite == "suspension") {
    suspension_suite(rep, opts.seed);
  } else if (suite == "bounds") {
    bounds_suite(rep, opts);
  } else if (suite == "torus") {
    torus_suite(rep);
  } else {
    throw ConfigError("verify: unknown suite '" + std::string(suite) + "'");
  }
  rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

void write_verify_report(std::ostream& os, const VerifyReport& report) {
  std::size_t good = 0;
  for (const auto& c : report.checks) {
    os << "check " << c.name << ' ' << fmt("%.9g", c.value) << ' ' << fmt("%.9g", c.lo) << ' '
       << fmt("%.9g", c.hi) << ' ' << fmt("%.3g", c.margin) << ' ' << (c.passed ? "PASS" : "FAIL");
    if (!c.detail.empty()) os << ' ' << c.detail;
    os << '\n';
    good += c.passed ? 1 : 0;
  }
  os << "suite " << report.suite << ' ' << (report.passed() ? "passed" : "failed") << ' ' << good << '/'
     << report.checks.size() << " seconds=" << fmt("%.1f", report.seconds) << '\n';
}

}  // namespace hpol
