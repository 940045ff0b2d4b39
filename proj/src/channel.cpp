#include "sbc/channel.hpp"

#include <cmath>
#include <string>

#include "sbc/errors.hpp"

namespace sbc {

namespace {

// Axial neighbour directions for pointy-top hexagons.
constexpr std::array<std::array<int, 2>, 6> kHexDirs{{{1, 0}, {1, -1}, {0, -1}, {-1, 0}, {-1, 1}, {0, 1}}};

std::array<double, 2> axial_to_xy(int q, int r, double radius) {
  const double sqrt3 = std::sqrt(3.0);
  return {radius * sqrt3 * (q + r / 2.0), radius * 1.5 * r};
}

double wrap_angle(double a) {
  while (a <= -kPi) a += 2.0 * kPi;
  while (a > kPi) a -= 2.0 * kPi;
  return a;
}

}  // namespace

std::vector<std::array<double, 2>> hex_cell_centers(int n_cells, double cell_radius_km) {
  std::vector<std::array<double, 2>> centers;
  if (n_cells <= 0) return centers;
  centers.push_back({0.0, 0.0});
  for (int ring = 1; static_cast<int>(centers.size()) < n_cells; ++ring) {
    int q = kHexDirs[4][0] * ring;
    int r = kHexDirs[4][1] * ring;
    for (int side = 0; side < 6; ++side) {
      for (int step = 0; step < ring; ++step) {
        if (static_cast<int>(centers.size()) == n_cells) return centers;
        centers.push_back(axial_to_xy(q, r, cell_radius_km));
        q += kHexDirs[static_cast<std::size_t>(side)][0];
        r += kHexDirs[static_cast<std::size_t>(side)][1];
      }
    }
  }
  return centers;
}

bool inside_hexagon(std::array<double, 2> p, std::array<double, 2> c, double radius_km) {
  const double x = std::abs(p[0] - c[0]);
  const double y = std::abs(p[1] - c[1]);
  const double half_width = std::sqrt(3.0) / 2.0 * radius_km;
  if (x > half_width) return false;
  return y + x / std::sqrt(3.0) <= radius_km;
}

NetworkGeometry generate_network(const GeometryParams& params, Rng& rng) {
  if (params.n_cells < 1 || params.users_per_cell < 1) {
    throw InvalidParameter("generate_network: cell and user counts must be positive");
  }
  if (!(params.cell_radius_km > 0.0) || params.min_distance_km < 0.0 ||
      params.min_distance_km >= std::sqrt(3.0) / 2.0 * params.cell_radius_km) {
    throw InvalidParameter("generate_network: invalid cell radius or exclusion distance");
  }
  if (!(params.pathloss_ref_km > 0.0)) throw InvalidParameter("generate_network: pathloss_ref_km must be > 0");

  NetworkGeometry geom;
  geom.n_cells = params.n_cells;
  geom.users_per_cell = params.users_per_cell;
  geom.cell_radius_km = params.cell_radius_km;
  geom.angular_spread_rad = params.angular_spread_rad;
  geom.bs_position_km = hex_cell_centers(params.n_cells, params.cell_radius_km);

  const double R = params.cell_radius_km;
  const double half_width = std::sqrt(3.0) / 2.0 * R;
  geom.users.reserve(static_cast<std::size_t>(params.n_cells * params.users_per_cell));
  for (int b = 0; b < params.n_cells; ++b) {
    const auto center = geom.bs_position_km[static_cast<std::size_t>(b)];
    for (int i = 0; i < params.users_per_cell; ++i) {
      std::array<double, 2> pos{};
      // Rejection sampling from the bounding box gives a uniform density.
      for (;;) {
        pos = {center[0] + uniform(rng, -half_width, half_width), center[1] + uniform(rng, -R, R)};
        if (!inside_hexagon(pos, center, R)) continue;
        if (std::hypot(pos[0] - center[0], pos[1] - center[1]) < params.min_distance_km) continue;
        break;
      }
      UserRecord u;
      u.cell = b;
      u.index = i;
      u.position_km = pos;
      for (int r = 0; r < params.n_cells; ++r) {
        const auto bs = geom.bs_position_km[static_cast<std::size_t>(r)];
        const double dx = pos[0] - bs[0];
        const double dy = pos[1] - bs[1];
        const double dist = std::hypot(dx, dy);
        // Arrays lie along x; angles are measured from broadside (+y).
        u.doa.push_back(wrap_angle(std::atan2(dx, dy)));
        u.distance_km.push_back(dist);
        u.path_gain.push_back(std::pow(dist / params.pathloss_ref_km, -params.pathloss_exp));
      }
      geom.users.push_back(std::move(u));
    }
  }
  return geom;
}

void draw_ray_channel(double mean_doa, double spread, double path_gain, const ArrayParams& array, Rng& rng,
                      std::span<cplx> g) {
  if (array.rays < 1) throw InvalidParameter("draw_channel: ray count must be >= 1");
  if (static_cast<int>(g.size()) != array.M) throw InvalidParameter("draw_channel: output length != M");
  if (!(array.d_over_lambda > 0.0) || array.d_over_lambda > 0.5) {
    throw InvalidParameter("draw_channel: d/lambda must lie in (0, 0.5]");
  }
  const std::size_t M = g.size();
  // Split storage keeps the inner loop free of complex-multiply NaN fixups.
  thread_local std::vector<double> re;
  thread_local std::vector<double> im;
  re.assign(M, 0.0);
  im.assign(M, 0.0);
  const double scale = 1.0 / std::sqrt(static_cast<double>(array.rays));
  for (int p = 0; p < array.rays; ++p) {
    const double theta = spread > 0.0 ? uniform(rng, mean_doa - spread, mean_doa + spread) : mean_doa;
    const cplx gamma = complex_normal(rng, path_gain) * scale;
    const double phase = 2.0 * kPi * array.d_over_lambda * std::sin(theta);
    const double sr = std::cos(phase);
    const double si = std::sin(phase);
    double cr = gamma.real();
    double ci = gamma.imag();
    for (std::size_t m = 0; m < M; ++m) {
      re[m] += cr;
      im[m] += ci;
      const double nr = cr * sr - ci * si;
      ci = cr * si + ci * sr;
      cr = nr;
    }
  }
  for (std::size_t m = 0; m < M; ++m) g[m] = {re[m], im[m]};
}

void draw_channel_into(const NetworkGeometry& geom, const LinkId& link, const ArrayParams& array, Rng& rng,
                       std::span<cplx> g) {
  const UserRecord& u = geom.user(link.cell, link.user);
  const auto r = static_cast<std::size_t>(link.bs);
  draw_ray_channel(u.doa[r], geom.angular_spread_rad, u.path_gain[r], array, rng, g);
}

ChannelRealization draw_channel(const NetworkGeometry& geom, const LinkId& link, const ArrayParams& array,
                                Rng& rng) {
  ChannelRealization out;
  out.link = link;
  out.g.resize(static_cast<std::size_t>(array.M));
  draw_channel_into(geom, link, array, rng, out.g);
  return out;
}

void beam_response_power(double u, std::span<double> out) {
  const std::size_t M = out.size();
  const double Md = static_cast<double>(M);
  // |sum_m exp(j 2 pi m x)|^2 / M with x = s/M + u; the numerator sin^2(pi M x)
  // does not depend on s.
  const double num = std::pow(std::sin(kPi * Md * u), 2);
  for (std::size_t s = 0; s < M; ++s) {
    const double den = std::sin(kPi * (static_cast<double>(s) / Md + u));
    out[s] = std::abs(den) < 1e-9 ? Md : num / (Md * den * den);
  }
}

BeamPowerProfile estimate_beam_powers_angular(double mean_doa, double spread, double path_gain, int M,
                                              double d_over_lambda, int n_draws, Rng& rng) {
  if (n_draws < 1) throw InvalidParameter("estimate_beam_powers: n_draws must be >= 1");
  if (M < 1) throw InvalidParameter("estimate_beam_powers: M must be >= 1");
  BeamPowerProfile profile;
  profile.zeta.assign(static_cast<std::size_t>(M), 0.0);
  std::vector<double> resp(static_cast<std::size_t>(M));
  for (int d = 0; d < n_draws; ++d) {
    const double theta = spread > 0.0 ? uniform(rng, mean_doa - spread, mean_doa + spread) : mean_doa;
    beam_response_power(d_over_lambda * std::sin(theta), resp);
    for (std::size_t s = 0; s < resp.size(); ++s) profile.zeta[s] += resp[s];
  }
  const double scale = path_gain / n_draws;
  for (double& z : profile.zeta) {
    z *= scale;
    profile.trace += z;
  }
  return profile;
}

BeamPowerProfile estimate_beam_powers(const NetworkGeometry& geom, const LinkId& link, const DftBasis& basis,
                                      const ArrayParams& array, int n_draws, Rng& rng,
                                      BeamPowerEstimator estimator) {
  if (n_draws < 1) throw InvalidParameter("estimate_beam_powers: n_draws must be >= 1");
  if (array.M != basis.size()) throw InvalidParameter("estimate_beam_powers: basis size != M");
  if (estimator == BeamPowerEstimator::kAngleDraws) {
    const UserRecord& u = geom.user(link.cell, link.user);
    const auto r = static_cast<std::size_t>(link.bs);
    return estimate_beam_powers_angular(u.doa[r], geom.angular_spread_rad, u.path_gain[r], array.M,
                                        array.d_over_lambda, n_draws, rng);
  }
  return accumulate_beam_powers(basis, n_draws,
                                [&](std::span<cplx> g) { draw_channel_into(geom, link, array, rng, g); });
}

}  // namespace sbc
