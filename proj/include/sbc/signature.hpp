#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "sbc/channel.hpp"
#include "sbc/core_math.hpp"

namespace sbc {

/// DFT beams carrying at least an alpha-fraction of one link's average power.
struct SpatialSignature {
  LinkId owner;
  BeamSet beams;
  std::vector<double> zeta_on_beams;  // parallel to beams
  double trace = 0.0;

  bool empty() const { return beams.empty(); }
  double total_power() const;
  /// zeta of `beam`, or a negative value when the beam is not in the signature.
  double zeta_of(int beam) const;
  bool contains(int beam) const;
};

SpatialSignature extract_signature(const BeamPowerProfile& profile, double alpha, LinkId owner = {});

/// Signatures of every (user, target BS) link, indexed by cell, user and BS.
class SignatureTable {
 public:
  SignatureTable() = default;
  SignatureTable(int n_cells, int users_per_cell, int M);

  int n_cells() const { return n_cells_; }
  int users_per_cell() const { return users_per_cell_; }
  int basis_size() const { return M_; }

  const SpatialSignature& get(int cell, int user, int bs) const;
  const SpatialSignature& serving(int cell, int user) const { return get(cell, user, cell); }
  bool has(int cell, int user, int bs) const;
  void set(SpatialSignature sig);
  std::size_t count() const;

  /// Serving signatures of one cell, indexed by user.
  std::vector<SpatialSignature> serving_signatures(int cell) const;

 private:
  std::size_t slot(int cell, int user, int bs) const;

  int n_cells_ = 0;
  int users_per_cell_ = 0;
  int M_ = 0;
  std::vector<SpatialSignature> sigs_;
  std::vector<bool> present_;
};

/**
 * Extracts the signature of every user toward its own BS and, when
 * include_cross is set, toward every other BS. Each link draws from its own
 * stream derived from `seed`, so serving signatures do not depend on whether
 * the cross links are computed.
 */
SignatureTable extract_all_signatures(const NetworkGeometry& geom, const DftBasis& basis, const ArrayParams& array,
                                      double alpha, int n_draws, std::uint64_t seed, bool include_cross = true,
                                      BeamPowerEstimator estimator = BeamPowerEstimator::kRayDraws);

/// One line per signature: `cell user bs n beam_1..beam_n zeta_1..zeta_n trace`.
void write_signatures(std::ostream& os, const SignatureTable& table);
SignatureTable read_signatures(std::istream& is, int n_cells, int users_per_cell, int M);

}  // namespace sbc
