// Command-line front end: run, verify, list-systems, rotnum, cover, suspend.
//
// Exit codes: 0 ok, 1 a check failed, 2 usage or configuration error,
// 3 unknown system, 4 budget exceeded, 5 any other error.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hpol/circlemaps.hpp"
#include "hpol/errors.hpp"
#include "hpol/experiment.hpp"
#include "hpol/planarflows.hpp"
#include "hpol/registry.hpp"
#include "hpol/suspension.hpp"
#include "hpol/verify.hpp"

namespace {

using namespace hpol;

enum Exit : int { kOk = 0, kCheckFailed = 1, kUsage = 2, kUnknownSystem = 3, kBudget = 4, kOther = 5 };

std::pair<std::string, std::string> split_assignment(const std::string& s) {
  auto eq = s.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("expected key=value, got '" + s + "'");
  return {s.substr(0, eq), s.substr(eq + 1)};
}

Params parse_params(const std::vector<std::string>& items) {
  Params p;
  for (const auto& item : items) {
    auto [k, v] = split_assignment(item);
    std::size_t used = 0;
    double x = 0;
    try {
      x = std::stod(v, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != v.size()) throw ConfigError("parameter '" + k + "' expects a number, got '" + v + "'");
    p[k] = x;
  }
  return p;
}

// Config text with `overrides` replacing any line that sets the same key.
std::string apply_overrides(const std::string& text, const std::vector<std::string>& overrides) {
  std::vector<std::pair<std::string, std::string>> extra;
  for (const auto& o : overrides) extra.push_back(split_assignment(o));
  std::istringstream in(text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    auto eq = line.find('=');
    bool replaced = false;
    if (eq != std::string::npos) {
      std::string key = line.substr(0, eq);
      key.erase(0, key.find_first_not_of(" \t"));
      key.erase(key.find_last_not_of(" \t") + 1);
      for (const auto& [k, v] : extra) replaced = replaced || k == key;
    }
    if (!replaced) out << line << '\n';
  }
  for (const auto& [k, v] : extra) out << k << " = " << v << '\n';
  return out.str();
}

int cmd_run(const std::string& path, const std::vector<std::string>& overrides) {
  std::string text;
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    text = ss.str();
  }
  ExperimentConfig cfg = ExperimentConfig::parse(apply_overrides(text, overrides));
  RunResult r = run_experiment(cfg);
  write_summary(std::cout, cfg, r);
  return r.ok() ? kOk : kCheckFailed;
}

int cmd_verify(const std::string& suite, const VerifyOptions& opts, const std::string& csv) {
  VerifyReport rep = verify(suite, opts);
  write_verify_report(std::cout, rep);
  if (!csv.empty()) {
    std::ostringstream ss;
    write_bound_checks_csv(ss, rep.bounds);
    write_file_atomic(csv, ss.str());
  }
  return rep.passed() ? kOk : kCheckFailed;
}

int cmd_list_systems() {
  for (const auto& s : registered_systems()) {
    std::cout << std::left << std::setw(22) << s.id << std::setw(12) << s.family;
    std::string params;
    for (const auto& [k, v] : s.defaults) {
      std::ostringstream p;
      p << k << '=' << v;
      params += (params.empty() ? "" : ",") + p.str();
    }
    std::cout << std::setw(26) << (params.empty() ? "-" : params) << s.description << '\n';
  }
  return kOk;
}

void print_rotation(const char* label, const RotationNumber& r) {
  std::cout << std::setprecision(12) << label << " = " << r.value << "  bracket [" << r.lo << ", " << r.hi << "]";
  if (r.rational) std::cout << "  rational " << r.p << '/' << r.q;
  std::cout << "  iterations " << r.iterations << '\n';
}

int cmd_rotnum(const std::string& id, const Params& params, std::size_t iterations, long power) {
  CircleLift lift = base_lift(id, params);
  RotationNumber r = rotation_number(lift, iterations);
  print_rotation("rho", r);
  if (power != 1) {
    RotationNumber rm = rotation_number(power_lift(lift, power), iterations);
    print_rotation(("rho(F^" + std::to_string(power) + ")").c_str(), rm);
    const double lo = static_cast<double>(power) * (power > 0 ? r.lo : r.hi);
    const double hi = static_cast<double>(power) * (power > 0 ? r.hi : r.lo);
    const bool ok = rm.hi >= lo && rm.lo <= hi;
    std::cout << "power law " << (ok ? "PASS" : "FAIL") << '\n';
    return ok ? kOk : kCheckFailed;
  }
  return kOk;
}

int cmd_cover(const std::string& id, const Params& params, double eps, std::size_t n, double T, bool pieces) {
  const SystemSpec& spec = find_system(id);
  CircleLift lift = base_lift(id, params);
  std::cout << std::setprecision(10);
  if (spec.family == "suspension") {
    StripCover c = strip_cover(SuspensionFlow(Isotopy::of_lift(lift)), eps, T);
    const bool ok = c.domains.size() <= c.bound && c.passed == c.checked && c.coverage_misses == 0 &&
                    c.hypothesis_failures == 0;
    std::cout << "domains " << c.domains.size() << "\nbound " << c.bound << "\nproduct_bound " << c.product_bound
              << "\nstrips " << c.y.size() - 1 << "\nchecked " << c.passed << '/' << c.checked
              << "\nmax_diameter " << c.max_diameter << "\ncoverage_misses " << c.coverage_misses << '/'
              << c.coverage_samples << "\nhypothesis_failures " << c.hypothesis_failures << "\nc0 "
              << c.constants.c0 << "\nc1 " << c.constants.c1 << '\n';
    return ok ? kOk : kCheckFailed;
  }
  CoverSet c = periodic_circle_cover(lift, eps, n);
  const auto& k = c.constants;
  const bool ok = static_cast<double>(c.size()) <= k.bound(static_cast<double>(n));
  std::cout << "pieces " << c.size() << "\nbound " << k.bound(static_cast<double>(n)) << "\nc " << k.c << "\nd "
            << k.d << "\nkappa " << k.kappa << '\n';
  if (pieces) {
    std::cout << "lo,hi,tag\n";
    for (const auto& p : c.pieces) std::cout << p.lo << ',' << p.hi << ',' << p.tag << '\n';
  }
  return ok ? kOk : kCheckFailed;
}

int cmd_suspend(const std::string& id, const Params& params, const std::vector<double>& ys, double t) {
  CircleLift lift = base_lift(id, params);
  SuspensionFlow s(Isotopy::of_lift(lift));
  std::cout << std::setprecision(15) << "y,t,x_t,y_t,rk4_error\n";
  for (double y : ys) {
    Point p = s.flow(t, {0.0, y});
    Point q = s.integrate(t, {0.0, y});
    std::cout << y << ',' << t << ',' << p.x << ',' << p.y << ',' << std::max(std::fabs(p.x - q.x), std::fabs(p.y - q.y))
              << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Polynomial entropy estimates and constructive covers"};
  app.require_subcommand(1);

  std::string config;
  std::vector<std::string> overrides;
  auto* run = app.add_subcommand("run", "Run an experiment described by a config file");
  run->add_option("config", config, "Config file (key = value lines)");
  run->add_option("-s,--set", overrides, "Override or add a config key, key=value");

  std::string suite;
  VerifyOptions vopts;
  std::string csv;
  auto* ver = app.add_subcommand("verify", "Run a verification suite: circle, suspension, bounds, torus");
  ver->add_option("suite", suite, "Suite name")->required();
  ver->add_option("--seed", vopts.seed, "Seed of randomized instances");
  ver->add_option("--instances", vopts.instances, "Randomized instances per lemma");
  ver->add_option("--csv", csv, "Write the bound ledger to this file");

  auto* list = app.add_subcommand("list-systems", "List registered systems and their defaults");

  std::string id;
  std::vector<std::string> param_items;
  std::size_t iterations = 100000;
  long power = 1;
  auto* rot = app.add_subcommand("rotnum", "Rotation number of a circle system with a rigorous bracket");
  rot->add_option("system", id)->required();
  rot->add_option("-p,--param", param_items, "System parameter, name=value");
  rot->add_option("--iterations", iterations);
  rot->add_option("--power", power, "Also report rho(F^m) and check it against m rho(F)");

  double eps = 0.1;
  std::size_t n = 16;
  double T = 5;
  bool pieces = false;
  auto* cov = app.add_subcommand("cover", "Constructive cover: circle systems with rational rotation, or suspension strips");
  cov->add_option("system", id)->required();
  cov->add_option("-p,--param", param_items, "System parameter, name=value");
  cov->add_option("--eps", eps);
  cov->add_option("-n", n, "Horizon (circle systems)");
  cov->add_option("-T", T, "Horizon (suspensions)");
  cov->add_flag("--pieces", pieces, "Print the pieces as CSV");

  std::vector<double> ys = {0.0, 0.25, 0.5, 0.75};
  double t = 1.0;
  auto* sus = app.add_subcommand("suspend", "Evaluate the suspension flow of a circle system from the section x = 0");
  sus->add_option("system", id)->required();
  sus->add_option("-p,--param", param_items, "System parameter, name=value");
  sus->add_option("-y", ys, "Starting ordinates")->delimiter(',');
  sus->add_option("-t,--time", t);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*run) return cmd_run(config, overrides);
    if (*ver) return cmd_verify(suite, vopts, csv);
    if (*list) return cmd_list_systems();
    const Params params = parse_params(param_items);
    if (*rot) return cmd_rotnum(id, params, iterations, power);
    if (*cov) return cmd_cover(id, params, eps, n, T, pieces);
    if (*sus) return cmd_suspend(id, params, ys, t);
  } catch (const UnknownSystem& e) {
    std::cerr << "hpol: " << e.what() << '\n';
    return kUnknownSystem;
  } catch (const BudgetError& e) {
    std::cerr << "hpol: " << e.what() << '\n';
    return kBudget;
  } catch (const ConfigError& e) {
    std::cerr << "hpol: " << e.what() << '\n';
    return kUsage;
  } catch (const NotApplicable& e) {
    std::cerr << "hpol: " << e.what() << '\n';
    return kUsage;
  } catch (const DomainError& e) {
    std::cerr << "hpol: " << e.what() << '\n';
    return kUsage;
  } catch (const PreconditionError& e) {
    std::cerr << "hpol: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "hpol: " << e.what() << '\n';
    return kOther;
  }
  return kOther;
}
