#include "sbc/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "sbc/errors.hpp"

namespace sbc {

namespace {

const char* const kRequired[] = {"M", "K", "N_c", "tau", "U", "snr_db", "trials"};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_list(const std::string& v) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream ss(v);
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

[[noreturn]] void bad_value(const std::string& key, const std::string& value, const char* what) {
  throw ConfigError("key '" + key + "': " + what + " (got '" + value + "')");
}

long long parse_int(const std::string& key, const std::string& v) {
  long long x = 0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (v.empty() || r.ec != std::errc() || r.ptr != v.data() + v.size()) bad_value(key, v, "expected an integer");
  return x;
}

int parse_count(const std::string& key, const std::string& v) {
  const long long x = parse_int(key, v);
  if (x < 1 || x > 1'000'000'000) bad_value(key, v, "expected a positive integer");
  return static_cast<int>(x);
}

double parse_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
  if (v.empty() || r.ec != std::errc() || r.ptr != v.data() + v.size() || !std::isfinite(x)) {
    bad_value(key, v, "expected a finite number");
  }
  return x;
}

Scheme parse_scheme(const std::string& key, const std::string& v) {
  if (v == "agnostic") return Scheme::kAgnostic;
  if (v == "aware") return Scheme::kAware;
  if (v == "conventional") return Scheme::kConventional;
  bad_value(key, v, "expected agnostic, aware or conventional");
}

}  // namespace

std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::kAgnostic: return "agnostic";
    case Scheme::kAware: return "aware";
    case Scheme::kConventional: return "conventional";
  }
  return "?";
}

std::string to_string(AllocationMode a) {
  switch (a) {
    case AllocationMode::kNone: return "none";
    case AllocationMode::kRandom: return "random";
    case AllocationMode::kMaxCut: return "maxcut";
  }
  return "?";
}

std::string to_string(ExperimentKind e) {
  switch (e) {
    case ExperimentKind::kMse: return "mse";
    case ExperimentKind::kSe: return "se";
    case ExperimentKind::kCdf: return "cdf";
  }
  return "?";
}

std::string to_string(EdgeWeight w) { return w == EdgeWeight::kOverlap ? "overlap" : "distance"; }

ReuseCaps ScenarioConfig::caps() const {
  if (U.size() == 1) return ReuseCaps::uniform(n_cells, tau, U.front());
  return ReuseCaps(n_cells, tau, U);
}

bool ScenarioConfig::has_scheme(Scheme s) const { return std::find(schemes.begin(), schemes.end(), s) != schemes.end(); }

double ScenarioConfig::effective_pathloss_ref_km() const {
  if (pathloss_ref_km > 0.0) return pathloss_ref_km;
  return cell_radius_km * std::pow(static_cast<double>(M), -1.0 / pathloss_exp);
}

void apply_setting(ScenarioConfig& c, const std::string& key, const std::string& v) {
  if (key == "M") {
    c.M = parse_count(key, v);
  } else if (key == "K") {
    c.K = parse_count(key, v);
  } else if (key == "N_c") {
    c.n_cells = parse_count(key, v);
  } else if (key == "tau") {
    c.tau = parse_count(key, v);
  } else if (key == "U") {
    c.U.clear();
    for (const auto& item : split_list(v)) c.U.push_back(parse_count(key, item));
  } else if (key == "snr_db") {
    c.snr_db.clear();
    for (const auto& item : split_list(v)) c.snr_db.push_back(parse_double(key, item));
  } else if (key == "trials") {
    c.trials = parse_count(key, v);
  } else if (key == "alpha") {
    c.alpha = parse_double(key, v);
  } else if (key == "delta_deg") {
    c.delta_deg = parse_double(key, v);
  } else if (key == "P_rays") {
    c.rays = parse_count(key, v);
  } else if (key == "T_s") {
    c.coherence = parse_count(key, v);
  } else if (key == "cell_radius_km") {
    c.cell_radius_km = parse_double(key, v);
  } else if (key == "min_distance_km") {
    c.min_distance_km = parse_double(key, v);
  } else if (key == "pathloss_exp") {
    c.pathloss_exp = parse_double(key, v);
  } else if (key == "pathloss_ref_km") {
    c.pathloss_ref_km = parse_double(key, v);
  } else if (key == "d_over_lambda") {
    c.d_over_lambda = parse_double(key, v);
  } else if (key == "seed") {
    std::uint64_t s = 0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), s);
    if (v.empty() || r.ec != std::errc() || r.ptr != v.data() + v.size()) {
      bad_value(key, v, "expected a nonnegative integer");
    }
    c.seed = s;
  } else if (key == "schemes") {
    c.schemes.clear();
    for (const auto& item : split_list(v)) {
      const Scheme s = parse_scheme(key, item);
      if (!c.has_scheme(s)) c.schemes.push_back(s);
    }
  } else if (key == "allocation") {
    if (v == "none") c.allocation = AllocationMode::kNone;
    else if (v == "random") c.allocation = AllocationMode::kRandom;
    else if (v == "maxcut") c.allocation = AllocationMode::kMaxCut;
    else bad_value(key, v, "expected none, random or maxcut");
  } else if (key == "edge_weight") {
    if (v == "overlap") c.edge_weight = EdgeWeight::kOverlap;
    else if (v == "distance") c.edge_weight = EdgeWeight::kChordalDistance;
    else bad_value(key, v, "expected overlap or distance");
  } else if (key == "baseline_schedule") {
    c.baseline_schedule = parse_scheme(key, v);
    if (c.baseline_schedule == Scheme::kConventional) bad_value(key, v, "expected agnostic or aware");
  } else if (key == "signature_estimator") {
    if (v == "rays") c.estimator = BeamPowerEstimator::kRayDraws;
    else if (v == "angles") c.estimator = BeamPowerEstimator::kAngleDraws;
    else bad_value(key, v, "expected rays or angles");
  } else if (key == "signature_draws") {
    c.signature_draws = parse_count(key, v);
  } else if (key == "experiment") {
    if (v == "mse") c.experiment = ExperimentKind::kMse;
    else if (v == "se") c.experiment = ExperimentKind::kSe;
    else if (v == "cdf") c.experiment = ExperimentKind::kCdf;
    else bad_value(key, v, "expected mse, se or cdf");
  } else {
    throw ConfigError("unknown key '" + key + "'");
  }
}

void validate(const ScenarioConfig& c) {
  auto fail = [](const std::string& key, const std::string& what) { throw ConfigError("key '" + key + "': " + what); };
  if (c.M < 1) fail("M", "must be positive");
  if (c.K < 1) fail("K", "must be positive");
  if (c.n_cells < 1) fail("N_c", "must be positive");
  if (c.tau < 1) fail("tau", "must be positive");
  if (c.trials < 1) fail("trials", "must be positive");
  if (c.snr_db.empty()) fail("snr_db", "needs at least one value");
  if (c.U.size() != 1 && c.U.size() != static_cast<std::size_t>(c.tau) * c.n_cells) {
    fail("U", "expects one value or tau*N_c = " + std::to_string(c.tau * c.n_cells) + " values");
  }
  if (c.tau > c.coherence) {
    fail("tau", "tau = " + std::to_string(c.tau) + " exceeds T_s = " + std::to_string(c.coherence));
  }
  if (c.has_scheme(Scheme::kConventional)) {
    const ReuseCaps caps = c.caps();
    int overhead = 0;
    for (int b = 0; b < c.n_cells; ++b) overhead = std::max(overhead, caps.total(b));
    if (overhead >= c.coherence) {
      fail("U", "conventional baseline needs U*tau = " + std::to_string(overhead) + " below T_s = " +
                    std::to_string(c.coherence));
    }
  }
  if (!(c.alpha > 0.0 && c.alpha < 1.0)) fail("alpha", "must lie in (0, 1)");
  if (!(c.delta_deg >= 0.0 && c.delta_deg < 90.0)) fail("delta_deg", "must lie in [0, 90)");
  if (!(c.cell_radius_km > 0.0)) fail("cell_radius_km", "must be positive");
  if (!(c.min_distance_km >= 0.0 && c.min_distance_km < 0.8 * c.cell_radius_km)) {
    fail("min_distance_km", "must be nonnegative and well inside the cell");
  }
  if (!(c.pathloss_exp > 0.0)) fail("pathloss_exp", "must be positive");
  if (!(c.d_over_lambda > 0.0 && c.d_over_lambda <= 0.5)) fail("d_over_lambda", "must lie in (0, 0.5]");
  if (c.schemes.empty()) fail("schemes", "needs at least one scheme");
}

ScenarioConfig parse_config(std::istream& is, const std::string& source) {
  ScenarioConfig cfg;
  cfg.U.clear();
  std::set<std::string> seen;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    const std::string where = source + ":" + std::to_string(lineno) + ": ";
    if (eq == std::string::npos) throw ConfigError(where + "expected key=value, got '" + body + "'");
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (!seen.insert(key).second) throw ConfigError(where + "duplicate key '" + key + "'");
    try {
      apply_setting(cfg, key, value);
    } catch (const ConfigError& e) {
      throw ConfigError(where + e.what());
    }
  }
  std::string missing;
  for (const char* k : kRequired) {
    if (!seen.count(k)) missing += missing.empty() ? k : std::string(", ") + k;
  }
  if (!missing.empty()) throw ConfigError(source + ": missing required keys: " + missing);
  try {
    validate(cfg);
  } catch (const ConfigError& e) {
    throw ConfigError(source + ": " + e.what());
  }
  return cfg;
}

ScenarioConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_config(in, path);
}

void write_config(std::ostream& os, const ScenarioConfig& c) {
  auto join = [](const auto& v, auto fmt) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + fmt(v[i]);
    return s;
  };
  auto num = [](double x) {
    std::ostringstream ss;
    ss.precision(17);
    ss << x;
    return ss.str();
  };
  os << "M=" << c.M << "\nK=" << c.K << "\nN_c=" << c.n_cells << "\ntau=" << c.tau << "\nU="
     << join(c.U, [](int u) { return std::to_string(u); }) << "\nsnr_db=" << join(c.snr_db, num)
     << "\ntrials=" << c.trials << "\nalpha=" << num(c.alpha) << "\ndelta_deg=" << num(c.delta_deg)
     << "\nP_rays=" << c.rays << "\nT_s=" << c.coherence << "\ncell_radius_km=" << num(c.cell_radius_km)
     << "\nmin_distance_km=" << num(c.min_distance_km) << "\npathloss_exp=" << num(c.pathloss_exp)
     << "\npathloss_ref_km=" << num(c.pathloss_ref_km) << "\nd_over_lambda=" << num(c.d_over_lambda)
     << "\nseed=" << c.seed << "\nschemes=" << join(c.schemes, [](Scheme s) { return to_string(s); })
     << "\nallocation=" << to_string(c.allocation) << "\nedge_weight=" << to_string(c.edge_weight)
     << "\nbaseline_schedule=" << to_string(c.baseline_schedule) << "\nsignature_draws=" << c.signature_draws
     << "\nsignature_estimator=" << (c.estimator == BeamPowerEstimator::kAngleDraws ? "angles" : "rays")
     << "\nexperiment=" << to_string(c.experiment) << '\n';
}

}  // namespace sbc
