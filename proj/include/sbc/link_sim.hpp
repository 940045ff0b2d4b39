/**
 * @file link_sim.hpp
 * @brief Uplink training with beam-projected LS estimates, beam-space MRC
 * detection with a four-way signal decomposition, and per-user metrics.
 *
 * Pilots are the canonical orthonormal sequences of length `pilot_length`,
 * so correlating the received block with pilot l reads out column l. A
 * conventional orthogonal-pilot system is the special case where every user
 * owns a distinct pilot in its cell and projects on all M beams.
 */
#pragma once

#include <cstdint>
#include <vector>

#include "sbc/channel.hpp"
#include "sbc/core_math.hpp"
#include "sbc/grouping.hpp"
#include "sbc/pilot_graph.hpp"
#include "sbc/rng.hpp"
#include "sbc/signature.hpp"

namespace sbc {

inline constexpr double kSinrCap = 1e12;

struct ScheduledUser {
  int cell = 0;
  int user = 0;
  int pilot = 0;
  BeamSet beams;  // projection subspace used by the serving BS
};

struct Schedule {
  int n_cells = 0;
  int pilot_length = 0;
  std::vector<ScheduledUser> users;
};

/// Groups -> users on the pilot their group was assigned, projecting on their serving signature.
Schedule make_proposed_schedule(const GroupingResult& groups, const PilotAssignment& assignment,
                                const SignatureTable& sigs);

/**
 * Same users, each with its own pilot inside the cell (pilot indices reused
 * across cells) and the full beam set. Pilot length is the largest per-cell
 * sum of reuse caps.
 */
Schedule make_conventional_schedule(const GroupingResult& groups, const ReuseCaps& caps, int M);

/// True channels of a set of users toward every BS, kept in both domains.
class ChannelBank {
 public:
  ChannelBank() = default;
  ChannelBank(int n_cells, int users_per_cell, int M);

  int M() const { return M_; }
  int n_bs() const { return n_cells_; }
  bool has(int cell, int user) const;
  const CVec& antenna(int cell, int user, int bs) const;
  const CVec& beams(int cell, int user, int bs) const;
  void set(int cell, int user, int bs, CVec g, const DftBasis& basis);

 private:
  std::size_t slot(int cell, int user, int bs) const;

  int n_cells_ = 0;
  int users_per_cell_ = 0;
  int M_ = 0;
  std::vector<CVec> g_;
  std::vector<CVec> c_;
  std::vector<bool> present_;
};

/**
 * Draws the channel of every scheduled user toward every BS. Each link uses
 * its own stream derived from `seed` and `labels`, so a user's channels do
 * not depend on which other users are scheduled.
 */
ChannelBank draw_channels(const NetworkGeometry& geom, const std::vector<const Schedule*>& schedules,
                          const ArrayParams& array, const DftBasis& basis, std::uint64_t seed,
                          std::uint64_t label);

/// Received pilot block at one BS, as pilot_length columns of length M.
std::vector<CVec> received_pilot_block(const Schedule& schedule, const ChannelBank& bank, int bs, double rho_p,
                                       const std::vector<CVec>& noise);

struct TrainingOutcome {
  std::vector<CVec> estimate;  // per scheduled user, beam-domain on its beams
  std::vector<std::vector<CVec>> pilot_noise;  // per BS, pilot_length columns
};

TrainingOutcome simulate_training(const Schedule& schedule, const ChannelBank& bank, const DftBasis& basis,
                                  double rho_p, Rng& rng, bool noise = true);

struct UplinkDraw {
  std::vector<cplx> symbols;  // per scheduled user, unit-power Gaussian
  std::vector<CVec> noise;    // per BS, length M
};

UplinkDraw draw_uplink(const Schedule& schedule, int M, Rng& rng, bool noise = true);

/// Received data vector at one BS (antenna domain).
CVec received_data(const Schedule& schedule, const ChannelBank& bank, int bs, double rho_u, const UplinkDraw& up);

struct DetectionTerms {
  // Realized amplitudes; they sum to the filtered receive signal / sqrt(rho_u).
  cplx desired{};
  cplx copilot{};
  cplx non_coherent{};
  cplx noise{};
  // Powers conditioned on the channels and estimates (averaged over symbols and noise).
  double p_desired = 0.0;
  double p_copilot = 0.0;
  double p_non_coherent = 0.0;
  double p_noise = 0.0;
  double sinr = 0.0;
  bool skipped = false;  // zero-norm estimate
};

struct DetectionOutcome {
  std::vector<DetectionTerms> users;
  int skipped = 0;
};

DetectionOutcome detect_uplink(const Schedule& schedule, const ChannelBank& bank, const TrainingOutcome& training,
                               const DftBasis& basis, double rho_u, const UplinkDraw& up, bool noise = true);

struct UserMetrics {
  int cell = 0;
  int user = 0;
  double mse = 0.0;
  double sinr = 0.0;
  double se = 0.0;
};

struct MetricsRecord {
  std::vector<UserMetrics> users;
  double prelog = 1.0;
  double sum_se = 0.0;
  double mean_mse = 0.0;
};

double prelog_factor(int overhead, int coherence);

MetricsRecord compute_metrics(const Schedule& schedule, const ChannelBank& bank, const TrainingOutcome& training,
                              const DetectionOutcome& detection, int coherence, int overhead);

/// Training, detection and metrics for one schedule at one SNR point.
MetricsRecord run_link(const Schedule& schedule, const ChannelBank& bank, const DftBasis& basis, double rho_p,
                       double rho_u, int coherence, int overhead, Rng& pilot_rng, Rng& data_rng);

/// Orthogonal-pilot baseline: U*tau pilots per cell, full-dimension LS, MRC.
MetricsRecord run_conventional_baseline(const ChannelBank& bank, const Schedule& conventional, const DftBasis& basis,
                                        double rho_p, double rho_u, int coherence, Rng& pilot_rng, Rng& data_rng);

}  // namespace sbc
