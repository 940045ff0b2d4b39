#include "sbc/link_sim.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "sbc/errors.hpp"

namespace sbc {

Schedule make_proposed_schedule(const GroupingResult& groups, const PilotAssignment& assignment,
                                const SignatureTable& sigs) {
  Schedule s;
  s.n_cells = static_cast<int>(groups.cells.size());
  const int tau = s.n_cells > 0 ? static_cast<int>(groups.cells.front().groups.size()) : 0;
  s.pilot_length = tau;
  if (assignment.pilot_of.size() != static_cast<std::size_t>(s.n_cells * tau)) {
    throw InvalidParameter("make_proposed_schedule: assignment does not cover every copilot group");
  }
  for (int b = 0; b < s.n_cells; ++b) {
    for (int k = 0; k < tau; ++k) {
      const int pilot = assignment.pilot_of[static_cast<std::size_t>(b * tau + k)];
      for (int u : groups.group(b, k).members) {
        s.users.push_back({b, u, pilot, sigs.serving(b, u).beams});
      }
    }
  }
  return s;
}

Schedule make_conventional_schedule(const GroupingResult& groups, const ReuseCaps& caps, int M) {
  Schedule s;
  s.n_cells = static_cast<int>(groups.cells.size());
  BeamSet all(static_cast<std::size_t>(M));
  std::iota(all.begin(), all.end(), 0);
  for (int b = 0; b < s.n_cells; ++b) s.pilot_length = std::max(s.pilot_length, caps.total(b));
  for (int b = 0; b < s.n_cells; ++b) {
    int next = 0;
    for (const auto& g : groups.cells[static_cast<std::size_t>(b)].groups) {
      for (int u : g.members) s.users.push_back({b, u, next++, all});
    }
  }
  return s;
}

ChannelBank::ChannelBank(int n_cells, int users_per_cell, int M)
    : n_cells_(n_cells), users_per_cell_(users_per_cell), M_(M) {
  const auto n = static_cast<std::size_t>(n_cells) * users_per_cell * n_cells;
  g_.resize(n);
  c_.resize(n);
  present_.assign(n, false);
}

std::size_t ChannelBank::slot(int cell, int user, int bs) const {
  if (cell < 0 || cell >= n_cells_ || user < 0 || user >= users_per_cell_ || bs < 0 || bs >= n_cells_) {
    throw InvalidParameter("ChannelBank: index out of range");
  }
  return (static_cast<std::size_t>(cell) * users_per_cell_ + user) * n_cells_ + bs;
}

bool ChannelBank::has(int cell, int user) const { return present_[slot(cell, user, 0)]; }

const CVec& ChannelBank::antenna(int cell, int user, int bs) const {
  const std::size_t i = slot(cell, user, bs);
  if (!present_[i]) throw ContractViolation("ChannelBank: channel not drawn");
  return g_[i];
}

const CVec& ChannelBank::beams(int cell, int user, int bs) const {
  const std::size_t i = slot(cell, user, bs);
  if (!present_[i]) throw ContractViolation("ChannelBank: channel not drawn");
  return c_[i];
}

void ChannelBank::set(int cell, int user, int bs, CVec g, const DftBasis& basis) {
  const std::size_t i = slot(cell, user, bs);
  c_[i] = basis.analyze(g);
  g_[i] = std::move(g);
  present_[i] = true;
}

ChannelBank draw_channels(const NetworkGeometry& geom, const std::vector<const Schedule*>& schedules,
                          const ArrayParams& array, const DftBasis& basis, std::uint64_t seed,
                          std::uint64_t label) {
  ChannelBank bank(geom.n_cells, geom.users_per_cell, array.M);
  for (const Schedule* s : schedules) {
    for (const ScheduledUser& u : s->users) {
      if (bank.has(u.cell, u.user)) continue;
      for (int r = 0; r < geom.n_cells; ++r) {
        Rng rng = make_stream(seed, Stream::kChannels,
                              {label, static_cast<std::uint64_t>(u.cell), static_cast<std::uint64_t>(u.user),
                               static_cast<std::uint64_t>(r)});
        CVec g(static_cast<std::size_t>(array.M));
        draw_channel_into(geom, {u.cell, u.user, r}, array, rng, g);
        bank.set(u.cell, u.user, r, std::move(g), basis);
      }
    }
  }
  return bank;
}

std::vector<CVec> received_pilot_block(const Schedule& schedule, const ChannelBank& bank, int bs, double rho_p,
                                       const std::vector<CVec>& noise) {
  const auto M = static_cast<std::size_t>(bank.M());
  std::vector<CVec> Y(static_cast<std::size_t>(schedule.pilot_length), CVec(M, cplx{0.0, 0.0}));
  const double amp = std::sqrt(rho_p);
  for (const ScheduledUser& u : schedule.users) {
    const CVec& g = bank.antenna(u.cell, u.user, bs);
    CVec& col = Y[static_cast<std::size_t>(u.pilot)];
    for (std::size_t m = 0; m < M; ++m) col[m] += amp * g[m];
  }
  if (!noise.empty()) {
    for (std::size_t l = 0; l < Y.size(); ++l) {
      for (std::size_t m = 0; m < M; ++m) Y[l][m] += noise[l][m];
    }
  }
  return Y;
}

TrainingOutcome simulate_training(const Schedule& schedule, const ChannelBank& bank, const DftBasis& basis,
                                  double rho_p, Rng& rng, bool noise) {
  if (!(rho_p > 0.0)) throw InvalidParameter("simulate_training: rho_p must be > 0");
  const auto M = static_cast<std::size_t>(bank.M());
  for (const ScheduledUser& u : schedule.users) {
    if (u.pilot < 0 || u.pilot >= schedule.pilot_length) {
      throw InvalidParameter("simulate_training: user without a valid pilot");
    }
  }
  TrainingOutcome out;
  out.estimate.resize(schedule.users.size());
  out.pilot_noise.resize(static_cast<std::size_t>(schedule.n_cells));
  const double inv_amp = 1.0 / std::sqrt(rho_p);
  for (int b = 0; b < schedule.n_cells; ++b) {
    auto& W = out.pilot_noise[static_cast<std::size_t>(b)];
    if (noise) {
      W.assign(static_cast<std::size_t>(schedule.pilot_length), CVec(M));
      for (auto& col : W) {
        for (auto& x : col) x = complex_normal(rng, 1.0);
      }
    }
    const std::vector<CVec> Y = received_pilot_block(schedule, bank, b, rho_p, W);
    std::vector<CVec> analyzed(Y.size());
    for (std::size_t i = 0; i < schedule.users.size(); ++i) {
      const ScheduledUser& u = schedule.users[i];
      if (u.cell != b) continue;
      auto& col = analyzed[static_cast<std::size_t>(u.pilot)];
      if (col.empty()) {
        col = basis.analyze(Y[static_cast<std::size_t>(u.pilot)]);
        for (auto& x : col) x *= inv_amp;
      }
      out.estimate[i] = gather(u.beams, col);
    }
  }
  return out;
}

UplinkDraw draw_uplink(const Schedule& schedule, int M, Rng& rng, bool noise) {
  UplinkDraw up;
  up.symbols.reserve(schedule.users.size());
  for (std::size_t i = 0; i < schedule.users.size(); ++i) up.symbols.push_back(complex_normal(rng, 1.0));
  up.noise.assign(static_cast<std::size_t>(schedule.n_cells), CVec(static_cast<std::size_t>(M), cplx{0.0, 0.0}));
  if (noise) {
    for (auto& w : up.noise) {
      for (auto& x : w) x = complex_normal(rng, 1.0);
    }
  }
  return up;
}

CVec received_data(const Schedule& schedule, const ChannelBank& bank, int bs, double rho_u, const UplinkDraw& up) {
  const auto M = static_cast<std::size_t>(bank.M());
  CVec y(up.noise[static_cast<std::size_t>(bs)]);
  const double amp = std::sqrt(rho_u);
  for (std::size_t i = 0; i < schedule.users.size(); ++i) {
    const ScheduledUser& u = schedule.users[i];
    const CVec& g = bank.antenna(u.cell, u.user, bs);
    const cplx s = amp * up.symbols[i];
    for (std::size_t m = 0; m < M; ++m) y[m] += g[m] * s;
  }
  return y;
}

DetectionOutcome detect_uplink(const Schedule& schedule, const ChannelBank& bank, const TrainingOutcome& training,
                               const DftBasis& basis, double rho_u, const UplinkDraw& up, bool noise) {
  if (!(rho_u > 0.0)) throw InvalidParameter("detect_uplink: rho_u must be > 0");
  DetectionOutcome out;
  out.users.resize(schedule.users.size());
  std::vector<CVec> noise_beams;
  for (const CVec& w : up.noise) noise_beams.push_back(basis.analyze(w));
  const double inv_amp = 1.0 / std::sqrt(rho_u);

  for (std::size_t i = 0; i < schedule.users.size(); ++i) {
    const ScheduledUser& me = schedule.users[i];
    const CVec& est = training.estimate[i];
    DetectionTerms& t = out.users[i];
    const double norm = std::sqrt(squared_norm(est));
    if (!(norm > 0.0)) {
      t.skipped = true;
      ++out.skipped;
      continue;
    }
    const int b = me.cell;
    // Filter output per unit symbol: est^H F^H g_u / ||est||.
    auto response = [&](const CVec& coeffs) {
      cplx acc{0.0, 0.0};
      for (std::size_t k = 0; k < me.beams.size(); ++k) {
        acc += std::conj(est[k]) * coeffs[static_cast<std::size_t>(me.beams[k])];
      }
      return acc / norm;
    };
    for (std::size_t j = 0; j < schedule.users.size(); ++j) {
      const ScheduledUser& other = schedule.users[j];
      const cplx r = response(bank.beams(other.cell, other.user, b));
      const cplx amp = r * up.symbols[j];
      const double pw = std::norm(r);
      if (j == i) {
        t.desired += amp;
        t.p_desired += pw;
      } else if (other.pilot == me.pilot) {
        t.copilot += amp;
        t.p_copilot += pw;
      } else {
        t.non_coherent += amp;
        t.p_non_coherent += pw;
      }
    }
    t.noise = response(noise_beams[static_cast<std::size_t>(b)]) * inv_amp;
    t.p_noise = noise ? 1.0 / rho_u : 0.0;
    const double denom = t.p_copilot + t.p_non_coherent + t.p_noise;
    t.sinr = denom > 0.0 ? std::min(t.p_desired / denom, kSinrCap) : kSinrCap;
  }
  return out;
}

double prelog_factor(int overhead, int coherence) {
  if (coherence < 1 || overhead < 0 || overhead >= coherence) {
    throw InvalidParameter("prelog: training overhead " + std::to_string(overhead) +
                           " must be below the coherence interval " + std::to_string(coherence));
  }
  return 1.0 - static_cast<double>(overhead) / coherence;
}

MetricsRecord compute_metrics(const Schedule& schedule, const ChannelBank& bank, const TrainingOutcome& training,
                              const DetectionOutcome& detection, int coherence, int overhead) {
  MetricsRecord rec;
  rec.prelog = prelog_factor(overhead, coherence);
  double mse_sum = 0.0;
  for (std::size_t i = 0; i < schedule.users.size(); ++i) {
    const ScheduledUser& u = schedule.users[i];
    const CVec& c = bank.beams(u.cell, u.user, u.cell);
    const CVec& est = training.estimate[i];
    // Beams outside the projection contribute their whole power.
    double err = 0.0;
    std::size_t k = 0;
    for (std::size_t s = 0; s < c.size(); ++s) {
      if (k < u.beams.size() && static_cast<std::size_t>(u.beams[k]) == s) {
        err += std::norm(c[s] - est[k++]);
      } else {
        err += std::norm(c[s]);
      }
    }
    const double energy = squared_norm(c);
    UserMetrics m;
    m.cell = u.cell;
    m.user = u.user;
    m.mse = energy > 0.0 ? err / energy : 0.0;
    const DetectionTerms& t = detection.users[i];
    m.sinr = t.skipped ? 0.0 : t.sinr;
    m.se = rec.prelog * std::log2(1.0 + m.sinr);
    rec.sum_se += m.se;
    mse_sum += m.mse;
    rec.users.push_back(m);
  }
  rec.mean_mse = rec.users.empty() ? 0.0 : mse_sum / static_cast<double>(rec.users.size());
  return rec;
}

MetricsRecord run_link(const Schedule& schedule, const ChannelBank& bank, const DftBasis& basis, double rho_p,
                       double rho_u, int coherence, int overhead, Rng& pilot_rng, Rng& data_rng) {
  const TrainingOutcome tr = simulate_training(schedule, bank, basis, rho_p, pilot_rng);
  const UplinkDraw up = draw_uplink(schedule, bank.M(), data_rng);
  const DetectionOutcome det = detect_uplink(schedule, bank, tr, basis, rho_u, up);
  return compute_metrics(schedule, bank, tr, det, coherence, overhead);
}

MetricsRecord run_conventional_baseline(const ChannelBank& bank, const Schedule& conventional, const DftBasis& basis,
                                        double rho_p, double rho_u, int coherence, Rng& pilot_rng, Rng& data_rng) {
  if (conventional.pilot_length >= coherence) {
    throw InvalidParameter("conventional baseline: U*tau = " + std::to_string(conventional.pilot_length) +
                           " leaves no data symbols in T_s = " + std::to_string(coherence));
  }
  return run_link(conventional, bank, basis, rho_p, rho_u, coherence, conventional.pilot_length, pilot_rng, data_rng);
}

}  // namespace sbc
