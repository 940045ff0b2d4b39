/**
 * @file core_math.hpp
 * @brief Complex vectors, the unitary DFT beam basis, beam-set projection and
 * chordal distance between beam subspaces.
 */
#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <vector>

namespace sbc {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

/// Strictly increasing list of DFT column indices.
using BeamSet = std::vector<int>;

inline constexpr double kPi = 3.14159265358979323846;

double squared_norm(std::span<const cplx> v);
cplx dot(std::span<const cplx> a, std::span<const cplx> b);  // a^H b

/**
 * Unitary DFT basis of dimension M.
 *
 * Column s has entry m equal to exp(-j 2 pi m s / M) / sqrt(M). Columns are
 * never materialized by the fast paths: analyze() returns every F^H v at once
 * and synthesize() applies F to a beam-domain vector, both through FFTW plans
 * shared by copies of the basis.
 */
class DftBasis {
 public:
  explicit DftBasis(int M);

  int size() const { return M_; }

  /// Column s as an explicit vector.
  CVec column(int s) const;

  /// Entry (m, s) of F.
  cplx entry(int m, int s) const;

  /// All M beam coefficients c_s = f_s^H v.
  CVec analyze(std::span<const cplx> v) const;
  void analyze_into(std::span<const cplx> v, std::span<cplx> out) const;

  /// F c for a full beam-domain vector c.
  CVec synthesize(std::span<const cplx> c) const;

 private:
  struct Plans;

  int M_;
  CVec twiddle_;  // exp(+j 2 pi k / M), k < M
  std::shared_ptr<const Plans> plans_;
};

DftBasis build_dft_basis(int M);

/// ULA steering vector: entry m = exp(j 2 pi (d/lambda) sin(theta) m).
CVec array_manifold(double theta, int M, double d_over_lambda);

/// Beam-domain coefficients F_sig^H v for the beams in `beams`.
CVec project(const BeamSet& beams, std::span<const cplx> v, const DftBasis& basis);

/// Same, starting from coefficients already analyzed against the full basis.
CVec gather(const BeamSet& beams, std::span<const cplx> beam_coeffs);

/// F_sig c: embeds beam-domain coefficients back into antenna space.
CVec embed(const BeamSet& beams, std::span<const cplx> coeffs, const DftBasis& basis);

/**
 * Squared Frobenius distance between the orthogonal projectors onto the spans
 * of two beam sets. With orthonormal columns this is |A \ B| + |B \ A|.
 */
double chordal_distance(const BeamSet& a, const BeamSet& b);

/// Size of the intersection of two sorted beam sets.
int overlap_count(const BeamSet& a, const BeamSet& b);

bool is_valid_beam_set(const BeamSet& beams, int M);

}  // namespace sbc
