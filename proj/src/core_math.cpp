#include "sbc/core_math.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include <fftw3.h>

#include "sbc/errors.hpp"

namespace sbc {

double squared_norm(std::span<const cplx> v) {
  double acc = 0.0;
  for (const cplx& x : v) acc += std::norm(x);
  return acc;
}

cplx dot(std::span<const cplx> a, std::span<const cplx> b) {
  cplx acc{0.0, 0.0};
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) acc += std::conj(a[i]) * b[i];
  return acc;
}

namespace {

// The FFTW planner is not reentrant; executing a finished plan is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

struct DftBasis::Plans {
  fftw_plan forward = nullptr;   // kernel exp(-j 2 pi mk/M): applies F
  fftw_plan backward = nullptr;  // kernel exp(+j 2 pi mk/M): applies F^H

  explicit Plans(int M) {
    // FFTW_ESTIMATE keeps plan choice, and therefore rounding, reproducible.
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    CVec buf(static_cast<std::size_t>(M));
    auto* p = reinterpret_cast<fftw_complex*>(buf.data());
    std::lock_guard<std::mutex> lock(planner_mutex());
    forward = fftw_plan_dft_1d(M, p, p, FFTW_FORWARD, flags);
    backward = fftw_plan_dft_1d(M, p, p, FFTW_BACKWARD, flags);
    if (!forward || !backward) throw Error("FFTW could not plan a length-" + std::to_string(M) + " transform");
  }
  ~Plans() {
    std::lock_guard<std::mutex> lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
  Plans(const Plans&) = delete;
  Plans& operator=(const Plans&) = delete;
};

DftBasis::DftBasis(int M) : M_(M) {
  if (M < 1) throw InvalidParameter("DFT basis size must be >= 1, got " + std::to_string(M));
  twiddle_.resize(static_cast<std::size_t>(M));
  for (int k = 0; k < M; ++k) {
    twiddle_[static_cast<std::size_t>(k)] = std::polar(1.0, 2.0 * kPi * k / M);
  }
  plans_ = std::make_shared<const Plans>(M);
}

cplx DftBasis::entry(int m, int s) const {
  const long long idx = (static_cast<long long>(m) * s) % M_;
  return std::conj(twiddle_[static_cast<std::size_t>(idx)]) / std::sqrt(static_cast<double>(M_));
}

CVec DftBasis::column(int s) const {
  CVec col(static_cast<std::size_t>(M_));
  for (int m = 0; m < M_; ++m) col[static_cast<std::size_t>(m)] = entry(m, s);
  return col;
}

void DftBasis::analyze_into(std::span<const cplx> v, std::span<cplx> out) const {
  if (static_cast<int>(v.size()) != M_ || static_cast<int>(out.size()) != M_) {
    throw InvalidParameter("analyze: vector length does not match basis size");
  }
  std::copy(v.begin(), v.end(), out.begin());
  auto* p = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(plans_->backward, p, p);
  const double scale = 1.0 / std::sqrt(static_cast<double>(M_));
  for (cplx& x : out) x *= scale;
}

CVec DftBasis::analyze(std::span<const cplx> v) const {
  CVec out(static_cast<std::size_t>(M_));
  analyze_into(v, out);
  return out;
}

CVec DftBasis::synthesize(std::span<const cplx> c) const {
  if (static_cast<int>(c.size()) != M_) {
    throw InvalidParameter("synthesize: vector length does not match basis size");
  }
  CVec out(c.begin(), c.end());
  auto* p = reinterpret_cast<fftw_complex*>(out.data());
  fftw_execute_dft(plans_->forward, p, p);
  const double scale = 1.0 / std::sqrt(static_cast<double>(M_));
  for (cplx& x : out) x *= scale;
  return out;
}

DftBasis build_dft_basis(int M) { return DftBasis(M); }

CVec array_manifold(double theta, int M, double d_over_lambda) {
  if (M < 1) throw InvalidParameter("array_manifold: M must be >= 1");
  if (!(d_over_lambda > 0.0) || d_over_lambda > 0.5) {
    throw InvalidParameter("array_manifold: d/lambda must lie in (0, 0.5], got " +
                           std::to_string(d_over_lambda));
  }
  CVec a(static_cast<std::size_t>(M));
  const double phase = 2.0 * kPi * d_over_lambda * std::sin(theta);
  for (int m = 0; m < M; ++m) a[static_cast<std::size_t>(m)] = std::polar(1.0, phase * m);
  return a;
}

bool is_valid_beam_set(const BeamSet& beams, int M) {
  for (std::size_t i = 0; i < beams.size(); ++i) {
    if (beams[i] < 0 || beams[i] >= M) return false;
    if (i > 0 && beams[i] <= beams[i - 1]) return false;
  }
  return true;
}

CVec gather(const BeamSet& beams, std::span<const cplx> beam_coeffs) {
  if (beams.empty()) throw ContractViolation("projection onto an empty beam set");
  CVec out;
  out.reserve(beams.size());
  for (int s : beams) {
    if (s < 0 || static_cast<std::size_t>(s) >= beam_coeffs.size()) {
      throw ContractViolation("beam index " + std::to_string(s) + " outside basis");
    }
    out.push_back(beam_coeffs[static_cast<std::size_t>(s)]);
  }
  return out;
}

CVec project(const BeamSet& beams, std::span<const cplx> v, const DftBasis& basis) {
  if (static_cast<int>(v.size()) != basis.size()) {
    throw InvalidParameter("project: vector length does not match basis size");
  }
  return gather(beams, basis.analyze(v));
}

CVec embed(const BeamSet& beams, std::span<const cplx> coeffs, const DftBasis& basis) {
  if (beams.size() != coeffs.size()) {
    throw InvalidParameter("embed: coefficient count does not match beam count");
  }
  CVec full(static_cast<std::size_t>(basis.size()), cplx{0.0, 0.0});
  for (std::size_t i = 0; i < beams.size(); ++i) full[static_cast<std::size_t>(beams[i])] = coeffs[i];
  return basis.synthesize(full);
}

int overlap_count(const BeamSet& a, const BeamSet& b) {
  int common = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (*ia < *ib) {
      ++ia;
    } else if (*ib < *ia) {
      ++ib;
    } else {
      ++common;
      ++ia;
      ++ib;
    }
  }
  return common;
}

double chordal_distance(const BeamSet& a, const BeamSet& b) {
  const int common = overlap_count(a, b);
  return static_cast<double>(a.size() + b.size()) - 2.0 * common;
}

}  // namespace sbc
