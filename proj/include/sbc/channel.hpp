/**
 * @file channel.hpp
 * @brief Hexagonal multi-cell geometry, multipath ULA channel draws and
 * Monte Carlo estimation of per-beam average powers.
 */
#pragma once

#include <array>
#include <vector>

#include "sbc/core_math.hpp"
#include "sbc/rng.hpp"

namespace sbc {

struct GeometryParams {
  int n_cells = 1;
  int users_per_cell = 1;
  double cell_radius_km = 0.5;      // center to vertex
  double min_distance_km = 0.035;   // exclusion disc around each BS
  double pathloss_exp = 3.5;
  double pathloss_ref_km = 0.5;     // distance at which the path gain is 1
  double angular_spread_rad = 4.0 * kPi / 180.0;
};

struct UserRecord {
  int cell = 0;
  int index = 0;
  std::array<double, 2> position_km{};
  std::vector<double> doa;          // mean DOA toward each BS, in (-pi, pi]
  std::vector<double> distance_km;  // toward each BS
  std::vector<double> path_gain;    // mu^2 toward each BS (linear)
};

struct NetworkGeometry {
  int n_cells = 0;
  int users_per_cell = 0;
  double cell_radius_km = 0.0;
  double angular_spread_rad = 0.0;
  std::vector<std::array<double, 2>> bs_position_km;
  std::vector<UserRecord> users;  // cell-major

  const UserRecord& user(int cell, int index) const {
    return users[static_cast<std::size_t>(cell * users_per_cell + index)];
  }
};

/// User `user` of cell `cell`, seen at base station `bs`.
struct LinkId {
  int cell = 0;
  int user = 0;
  int bs = 0;
  friend bool operator==(const LinkId&, const LinkId&) = default;
};

struct ArrayParams {
  int M = 128;
  double d_over_lambda = 0.5;
  int rays = 100;
};

struct ChannelRealization {
  LinkId link;
  CVec g;
};

struct BeamPowerProfile {
  std::vector<double> zeta;
  double trace = 0.0;
};

/// Centers of the first n hexagonal cells, spiralling out from the origin.
std::vector<std::array<double, 2>> hex_cell_centers(int n_cells, double cell_radius_km);

/// True when (x, y) lies in the pointy-top hexagon of circumradius R centered at c.
bool inside_hexagon(std::array<double, 2> p, std::array<double, 2> c, double radius_km);

NetworkGeometry generate_network(const GeometryParams& params, Rng& rng);

/// Fills `g` (length M) with one draw of the P-ray channel for `link`.
void draw_channel_into(const NetworkGeometry& geom, const LinkId& link, const ArrayParams& array,
                       Rng& rng, std::span<cplx> g);

ChannelRealization draw_channel(const NetworkGeometry& geom, const LinkId& link, const ArrayParams& array,
                                Rng& rng);

/// P-ray channel with explicit mean DOA, spread and path gain.
void draw_ray_channel(double mean_doa, double spread, double path_gain, const ArrayParams& array, Rng& rng,
                      std::span<cplx> g);

enum class BeamPowerEstimator {
  kRayDraws,    // average |f_s^H g|^2 over full P-ray channel draws
  kAngleDraws,  // ray gains averaged in closed form, ray angles sampled
};

/// |f_s^H a(theta)|^2 for all s, where u = (d/lambda) sin(theta). Sums to M.
void beam_response_power(double u, std::span<double> out);

/**
 * Per-beam powers with the complex ray gains integrated out: each of the
 * n_draws samples is one ray angle, so zeta[s] = mu^2 * mean |f_s^H a(theta)|^2
 * and the trace is mu^2 * M exactly.
 */
BeamPowerProfile estimate_beam_powers_angular(double mean_doa, double spread, double path_gain, int M,
                                              double d_over_lambda, int n_draws, Rng& rng);

/// zeta[s] = mean over n_draws of |f_s^H g|^2 for draws produced by `draw`.
template <typename DrawFn>
BeamPowerProfile accumulate_beam_powers(const DftBasis& basis, int n_draws, DrawFn&& draw);

BeamPowerProfile estimate_beam_powers(const NetworkGeometry& geom, const LinkId& link, const DftBasis& basis,
                                      const ArrayParams& array, int n_draws, Rng& rng,
                                      BeamPowerEstimator estimator = BeamPowerEstimator::kRayDraws);

// -- implementation --------------------------------------------------------

template <typename DrawFn>
BeamPowerProfile accumulate_beam_powers(const DftBasis& basis, int n_draws, DrawFn&& draw) {
  const auto M = static_cast<std::size_t>(basis.size());
  BeamPowerProfile profile;
  profile.zeta.assign(M, 0.0);
  CVec g(M);
  CVec coeffs(M);
  for (int d = 0; d < n_draws; ++d) {
    draw(std::span<cplx>(g));
    basis.analyze_into(g, coeffs);
    for (std::size_t s = 0; s < M; ++s) profile.zeta[s] += std::norm(coeffs[s]);
  }
  const double inv = n_draws > 0 ? 1.0 / n_draws : 0.0;
  profile.trace = 0.0;
  for (double& z : profile.zeta) {
    z *= inv;
    profile.trace += z;
  }
  return profile;
}

}  // namespace sbc
