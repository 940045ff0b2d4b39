/**
 * @file config.hpp
 * @brief Scenario configuration: flat `key=value` files with `#` comments.
 *
 * Required keys: M, K, N_c, tau, U, snr_db, trials. Every other key has a
 * default (see ScenarioConfig). Unknown keys, malformed values and broken
 * invariants are rejected with the offending key and line.
 */
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "sbc/grouping.hpp"
#include "sbc/pilot_graph.hpp"

namespace sbc {

enum class Scheme { kAgnostic, kAware, kConventional };
enum class AllocationMode { kNone, kRandom, kMaxCut };
enum class ExperimentKind { kMse, kSe, kCdf };

std::string to_string(Scheme s);
std::string to_string(AllocationMode a);
std::string to_string(ExperimentKind e);
std::string to_string(EdgeWeight w);

struct ScenarioConfig {
  // required
  int M = 0;
  int K = 0;
  int n_cells = 0;
  int tau = 0;
  std::vector<int> U;  // one value, or tau * n_cells values (cell-major)
  std::vector<double> snr_db;
  int trials = 0;

  double alpha = 0.05;
  double delta_deg = 4.0;
  int rays = 100;
  int coherence = 128;  // T_s
  double cell_radius_km = 0.5;
  double min_distance_km = 0.035;
  double pathloss_exp = 3.5;
  double pathloss_ref_km = -1.0;  // <= 0: edge gain 1/M, see effective_pathloss_ref_km()
  double d_over_lambda = 0.5;
  std::uint64_t seed = 1;
  std::vector<Scheme> schemes{Scheme::kAgnostic, Scheme::kAware, Scheme::kConventional};
  AllocationMode allocation = AllocationMode::kNone;
  EdgeWeight edge_weight = EdgeWeight::kChordalDistance;
  Scheme baseline_schedule = Scheme::kAware;  // whose scheduled users the conventional arm serves
  int signature_draws = 2000;
  BeamPowerEstimator estimator = BeamPowerEstimator::kRayDraws;
  ExperimentKind experiment = ExperimentKind::kSe;

  ReuseCaps caps() const;
  bool has_scheme(Scheme s) const;
  /// Distance at which the path gain is 1. The default puts the cell-edge
  /// gain at 1/M, so an edge user's matched-filter SNR equals the transmit SNR.
  double effective_pathloss_ref_km() const;
};

/// Re-checks every invariant; throws ConfigError naming the key.
void validate(const ScenarioConfig& cfg);

ScenarioConfig parse_config(std::istream& is, const std::string& source = "<stream>");
ScenarioConfig parse_config_file(const std::string& path);

/// Applies one `key=value` override on top of an existing config.
void apply_setting(ScenarioConfig& cfg, const std::string& key, const std::string& value);

/// Canonical text form; parse_config(write_config(c)) reproduces c.
void write_config(std::ostream& os, const ScenarioConfig& cfg);

}  // namespace sbc
