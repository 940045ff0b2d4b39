/**
 * @file experiment.hpp
 * @brief Monte Carlo driver: one trial runs geometry, signatures, grouping,
 * pilot allocation, training, detection and metrics for every configured
 * scheme and SNR point. Results go to a flat per-user table.
 *
 * Every stage of trial t draws from its own stream keyed by (seed, t), and
 * all schemes of a trial see the same users and channels. Trials are
 * independent, so any thread count produces the same table.
 */
#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sbc/config.hpp"

namespace sbc {

struct MetricsRow {
  Scheme scheme = Scheme::kAware;
  double snr_db = 0.0;
  int trial = 0;
  int user = 0;  // cell * K + index
  double mse = 0.0;
  double sinr = 0.0;
  double se = 0.0;

  friend bool operator==(const MetricsRow&, const MetricsRow&) = default;
};

struct TrialStats {
  int shortfall_cells = 0;   // cells that could not fill every cap
  int degenerate_groups = 0; // empty copilot groups
  int skipped_users = 0;     // zero-norm estimates
};

struct MetricsTable {
  std::vector<MetricsRow> rows;
  TrialStats stats;
};

/// Rows of one trial, in (snr, scheme, user) order.
std::vector<MetricsRow> run_trial(const ScenarioConfig& cfg, int trial, TrialStats* stats = nullptr);

MetricsTable run_experiment(const ScenarioConfig& cfg, int threads = 1);

struct SummaryPoint {
  Scheme scheme = Scheme::kAware;
  double snr_db = 0.0;
  int trials = 0;
  double mean_mse = 0.0;         // over users and trials
  double mean_network_se = 0.0;  // per-trial sum over users, averaged over trials
  double outage_se = 0.0;        // 5th percentile of the per-trial network SE
  std::vector<double> network_se;  // per trial, ascending trial index
};

std::vector<SummaryPoint> summarize(const MetricsTable& table);
const SummaryPoint* find_point(const std::vector<SummaryPoint>& points, Scheme scheme, double snr_db);

/// Linear-interpolation percentile (q in [0, 100]) of unsorted samples.
double percentile(std::vector<double> samples, double q);

void write_csv(std::ostream& os, const MetricsTable& table);
void write_csv(const MetricsTable& table, const std::string& path);
MetricsTable read_csv(std::istream& is);

/// Human-readable summary tailored to the experiment kind.
void write_summary(std::ostream& os, const std::vector<SummaryPoint>& points, ExperimentKind kind);

}  // namespace sbc
