#include "hpol/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "hpol/errors.hpp"
#include "hpol/verify.hpp"

namespace hpol {

namespace {

namespace fs = std::filesystem;

const std::set<std::string> kGridKeys = {"uniform", "seeds", "seed_depth", "transversal", "refine"};

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

/// Shortest text that parses back to the same double.
std::string num(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

double parse_num(const std::string& key, const std::string& text) {
  double v = 0;
  const char* end = text.data() + text.size();
  auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc() || res.ptr != end || !std::isfinite(v)) {
    throw ConfigError("config: '" + key + "' expects a number, got '" + text + "'");
  }
  return v;
}

std::size_t parse_count(const std::string& key, const std::string& text) {
  double v = parse_num(key, text);
  if (v < 0 || v != std::floor(v)) throw ConfigError("config: '" + key + "' expects a nonnegative integer");
  return static_cast<std::size_t>(v);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) throw ConfigError("config: empty list item in '" + text + "'");
    out.push_back(item);
  }
  return out;
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split_list(text)) out.push_back(parse_num(key, item));
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : ", ") + num(x);
  return s;
}

// sign = +1: strictly increasing; -1: strictly decreasing.
void check_schedule(const char* name, const std::vector<double>& v, int sign) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0)) throw ConfigError(std::string("config: ") + name + " entries must be positive");
    if (i > 0 && !(sign * (v[i] - v[i - 1]) > 0)) {
      throw ConfigError(std::string("config: ") + name + " must be strictly " +
                        (sign > 0 ? "increasing" : "decreasing"));
    }
  }
}

GridPolicy apply_grid(GridPolicy g, const std::map<std::string, double>& over) {
  for (const auto& [k, v] : over) {
    if (k == "refine") {
      g.transversal_refine = v;
      continue;
    }
    auto n = static_cast<std::size_t>(v);
    if (k == "uniform") g.uniform = n;
    if (k == "seeds") {
      g.seeds = n;
      g.seed_points.clear();
    }
    if (k == "seed_depth") g.seed_depth = n;
    if (k == "transversal") g.transversal = n;
  }
  return g;
}

}  // namespace

ExperimentConfig ExperimentConfig::parse(std::istream& in) {
  ExperimentConfig c;
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(std::string_view(t).substr(0, eq));
    std::string value = trim(std::string_view(t).substr(eq + 1));
    if (key.empty()) throw ConfigError("config line " + std::to_string(lineno) + ": empty key");
    if (!seen.insert(key).second) throw ConfigError("config: duplicate key '" + key + "'");

    if (key == "system") {
      c.system = value;
    } else if (key.rfind("param.", 0) == 0) {
      c.params[key.substr(6)] = parse_num(key, value);
    } else if (key == "n") {
      c.n_schedule = parse_list(key, value);
    } else if (key == "eps") {
      c.eps_schedule = parse_list(key, value);
    } else if (key.rfind("grid.", 0) == 0) {
      std::string g = key.substr(5);
      if (!kGridKeys.contains(g)) throw ConfigError("config: unknown grid key '" + g + "'");
      c.grid[g] = g == "refine" ? parse_num(key, value) : static_cast<double>(parse_count(key, value));
    } else if (key == "burn_in") {
      c.burn_in = parse_num(key, value);
    } else if (key == "budget") {
      c.budget = parse_num(key, value);
    } else if (key == "checks") {
      c.checks = value.empty() ? std::vector<std::string>{} : split_list(value);
    } else if (key == "check_instances") {
      c.check_instances = parse_count(key, value);
    } else if (key == "seed") {
      c.seed = static_cast<unsigned>(parse_count(key, value));
    } else if (key == "expect.lo") {
      c.expect_lo = parse_num(key, value);
    } else if (key == "expect.hi") {
      c.expect_hi = parse_num(key, value);
    } else if (key == "output") {
      c.output = value;
    } else {
      throw ConfigError("config: unknown key '" + key + "'");
    }
  }
  c.validate();
  return c;
}

ExperimentConfig ExperimentConfig::parse(const std::string& text) {
  std::istringstream in(text);
  return parse(in);
}

ExperimentConfig ExperimentConfig::load(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot read " + path.string());
  return parse(in);
}

void ExperimentConfig::validate() const {
  if (system.empty()) throw ConfigError("config: 'system' is required");
  check_schedule("n", n_schedule, +1);
  check_schedule("eps", eps_schedule, -1);
  if (!eps_schedule.empty() && eps_schedule.front() > 1.0) throw ConfigError("config: eps must be at most 1");
  for (const auto& [k, v] : grid) {
    if (!kGridKeys.contains(k)) throw ConfigError("config: unknown grid key '" + k + "'");
    if (k == "refine" && !(v > 0)) throw ConfigError("config: grid.refine must be positive");
  }
  const auto& lemmas = bound_lemmas();
  for (const auto& name : checks) {
    if (name != "strip-cover" && std::find(lemmas.begin(), lemmas.end(), name) == lemmas.end()) {
      throw ConfigError("config: unknown check '" + name + "'");
    }
  }
  if (!(burn_in >= 0)) throw ConfigError("config: burn_in must be nonnegative");
  if (!n_schedule.empty() && std::ranges::count_if(n_schedule, [&](double n) { return n >= burn_in; }) < 4) {
    throw ConfigError("config: at least four horizons must be at or above burn_in");
  }
  if (!(budget > 0)) throw ConfigError("config: budget must be positive");
  if (check_instances == 0) throw ConfigError("config: check_instances must be positive");
  if (expect_lo && expect_hi && *expect_lo > *expect_hi) throw ConfigError("config: expect.lo exceeds expect.hi");
  if (output.empty()) throw ConfigError("config: 'output' must not be empty");
}

std::string ExperimentConfig::serialize() const {
  std::ostringstream os;
  os << "system = " << system << '\n';
  for (const auto& [k, v] : params) os << "param." << k << " = " << num(v) << '\n';
  if (!n_schedule.empty()) os << "n = " << join(n_schedule) << '\n';
  if (!eps_schedule.empty()) os << "eps = " << join(eps_schedule) << '\n';
  for (const auto& [k, v] : grid) os << "grid." << k << " = " << num(v) << '\n';
  os << "burn_in = " << num(burn_in) << '\n';
  os << "budget = " << num(budget) << '\n';
  if (!checks.empty()) {
    os << "checks = ";
    for (std::size_t i = 0; i < checks.size(); ++i) os << (i ? ", " : "") << checks[i];
    os << '\n';
  }
  os << "check_instances = " << check_instances << '\n';
  os << "seed = " << seed << '\n';
  if (expect_lo) os << "expect.lo = " << num(*expect_lo) << '\n';
  if (expect_hi) os << "expect.hi = " << num(*expect_hi) << '\n';
  os << "output = " << output << '\n';
  return os.str();
}

void write_file_atomic(const fs::path& path, const std::string& text) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out << text;
    if (!out.flush()) throw Error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

void write_summary(std::ostream& os, const ExperimentConfig& config, const RunResult& r) {
  const auto& e = r.estimate;
  os << "system = " << config.system << '\n';
  for (const auto& [k, v] : config.params) os << "param." << k << " = " << num(v) << '\n';
  os << "grid = " << e.grid_policy << '\n';
  os << "headline = " << num(e.headline) << '\n';
  os << "cap = " << num(e.cap) << '\n';
  os << "saturated = " << (e.saturated ? "true" : "false") << '\n';
  for (const auto& row : e.rows) {
    os << "slope.eps=" << num(row.eps) << " = " << num(row.slope) << " (intercept " << num(row.intercept)
       << ", residual " << num(row.residual) << ", horizons " << row.n_used << ")\n";
  }
  os << "sandwich = " << (r.sandwich_ok ? "holds" : "violated") << '\n';
  if (r.expected) {
    os << "expected = [" << num(r.expected->first) << ", " << num(r.expected->second) << "]\n";
    os << "expectation = " << (r.expectation_ok ? "pass" : "fail") << '\n';
  }
  if (!r.bounds.empty()) {
    std::size_t good = 0;
    for (const auto& b : r.bounds) good += b.holds ? 1 : 0;
    os << "bounds = " << good << "/" << r.bounds.size() << " hold\n";
  }
  os << "status = " << (r.ok() ? "ok" : "check-failed") << '\n';
}

void write_curves_svg(std::ostream& os, const EntropyEstimate& est) {
  const double W = 640, H = 480, L = 70, R = 150, T = 30, B = 50;
  double xmin = INFINITY, xmax = -INFINITY, ymin = INFINITY, ymax = -INFINITY;
  for (const auto& r : est.reports) {
    if (r.sep_count == 0) continue;
    xmin = std::min(xmin, std::log2(r.n));
    xmax = std::max(xmax, std::log2(r.n));
    ymin = std::min(ymin, std::log2(static_cast<double>(r.sep_count)));
    ymax = std::max(ymax, std::log2(static_cast<double>(r.sep_count)));
  }
  if (!(xmax > xmin)) xmax = xmin + 1;
  if (!(ymax > ymin)) ymax = ymin + 1;
  xmin = std::floor(xmin), xmax = std::ceil(xmax), ymin = std::floor(ymin), ymax = std::ceil(ymax);
  auto px = [&](double x) { return L + (x - xmin) / (xmax - xmin) * (W - L - R); };
  auto py = [&](double y) { return H - B - (y - ymin) / (ymax - ymin) * (H - T - B); };
  static const char* colors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2"};

  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << L << "\" y=\"20\">" << est.system_id << ": log2 S(n, eps) against log2 n</text>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << T << "\" x2=\"" << L << "\" y2=\"" << H - B << "\" stroke=\"black\"/>\n";
  for (double x = xmin; x <= xmax; x += 1) {
    os << "<text x=\"" << px(x) << "\" y=\"" << H - B + 18 << "\" text-anchor=\"middle\">" << num(x) << "</text>\n";
  }
  const double ystep = std::max(1.0, std::ceil((ymax - ymin) / 8));
  for (double y = ymin; y <= ymax; y += ystep) {
    os << "<text x=\"" << L - 8 << "\" y=\"" << py(y) + 4 << "\" text-anchor=\"end\">" << num(y) << "</text>\n";
  }
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 10 << "\" text-anchor=\"middle\">log2 n</text>\n";
  for (std::size_t i = 0; i < est.eps_schedule.size(); ++i) {
    const double eps = est.eps_schedule[i];
    const char* color = colors[i % 7];
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (const auto& r : est.reports) {
      if (r.eps != eps || r.sep_count == 0) continue;
      os << px(std::log2(r.n)) << ',' << py(std::log2(static_cast<double>(r.sep_count))) << ' ';
    }
    os << "\"/>\n";
    const double ly = T + 18.0 * static_cast<double>(i);
    os << "<line x1=\"" << W - R + 15 << "\" y1=\"" << ly << "\" x2=\"" << W - R + 35 << "\" y2=\"" << ly
       << "\" stroke=\"" << color << "\"/>\n";
    os << "<text x=\"" << W - R + 40 << "\" y=\"" << ly + 4 << "\">eps=" << num(eps) << "</text>\n";
  }
  os << "</svg>\n";
}

RunResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  BuiltSystem b = build_system(config.system, config.params);
  const auto& n = config.n_schedule.empty() ? b.n_schedule : config.n_schedule;
  const auto& eps = config.eps_schedule.empty() ? b.eps_schedule : config.eps_schedule;
  EstimateOptions opts;
  opts.burn_in = config.burn_in;
  opts.count.budget = config.budget;

  RunResult r;
  r.estimate = estimate_hpol(b.system, n, eps, apply_grid(b.grid, config.grid), opts);
  r.estimate.system_id = config.system;
  for (auto& rep : r.estimate.reports) rep.system_id = config.system;
  for (const auto& rep : r.estimate.reports) {
    if (rep.sandwich == SandwichStatus::Violated) r.sandwich_ok = false;
  }
  r.expected = b.expected;
  if (config.expect_lo || config.expect_hi) {
    r.expected = std::pair{config.expect_lo.value_or(-INFINITY), config.expect_hi.value_or(INFINITY)};
  }
  if (r.expected) {
    r.expectation_ok = r.estimate.headline >= r.expected->first && r.estimate.headline <= r.expected->second;
  }
  for (const auto& name : config.checks) {
    auto rows = name == "strip-cover" ? strip_cover_checks()
                                      : bound_instances(name, config.check_instances, config.seed);
    for (const auto& row : rows) r.bounds_ok = r.bounds_ok && row.holds;
    r.bounds.insert(r.bounds.end(), rows.begin(), rows.end());
  }

  const fs::path dir(config.output);
  fs::create_directories(dir);
  std::ostringstream counts, summary, svg;
  write_counts_csv(counts, r.estimate.reports);
  write_summary(summary, config, r);
  write_curves_svg(svg, r.estimate);
  write_file_atomic(dir / "counts.csv", counts.str());
  write_file_atomic(dir / "summary.txt", summary.str());
  write_file_atomic(dir / "curves.svg", svg.str());
  r.files = {dir / "counts.csv", dir / "summary.txt", dir / "curves.svg"};
  if (!r.bounds.empty()) {
    std::ostringstream ledger;
    write_bound_checks_csv(ledger, r.bounds);
    write_file_atomic(dir / "bounds.csv", ledger.str());
    r.files.push_back(dir / "bounds.csv");
  }
  return r;
}

}  // namespace hpol
