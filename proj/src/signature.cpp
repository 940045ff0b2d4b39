#include "sbc/signature.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>

#include "sbc/errors.hpp"

namespace sbc {

double SpatialSignature::total_power() const {
  double acc = 0.0;
  for (double z : zeta_on_beams) acc += z;
  return acc;
}

double SpatialSignature::zeta_of(int beam) const {
  auto it = std::lower_bound(beams.begin(), beams.end(), beam);
  if (it == beams.end() || *it != beam) return -1.0;
  return zeta_on_beams[static_cast<std::size_t>(it - beams.begin())];
}

bool SpatialSignature::contains(int beam) const { return std::binary_search(beams.begin(), beams.end(), beam); }

SpatialSignature extract_signature(const BeamPowerProfile& profile, double alpha, LinkId owner) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidParameter("extract_signature: alpha must lie in (0, 1), got " + std::to_string(alpha));
  }
  if (!(profile.trace > 0.0)) throw DegenerateLink("extract_signature: link has zero average power");
  SpatialSignature sig;
  sig.owner = owner;
  sig.trace = profile.trace;
  for (std::size_t s = 0; s < profile.zeta.size(); ++s) {
    if (profile.zeta[s] / profile.trace >= alpha) {
      sig.beams.push_back(static_cast<int>(s));
      sig.zeta_on_beams.push_back(profile.zeta[s]);
    }
  }
  return sig;
}

SignatureTable::SignatureTable(int n_cells, int users_per_cell, int M)
    : n_cells_(n_cells), users_per_cell_(users_per_cell), M_(M) {
  const auto n = static_cast<std::size_t>(n_cells) * static_cast<std::size_t>(users_per_cell) *
                 static_cast<std::size_t>(n_cells);
  sigs_.resize(n);
  present_.assign(n, false);
}

std::size_t SignatureTable::slot(int cell, int user, int bs) const {
  if (cell < 0 || cell >= n_cells_ || user < 0 || user >= users_per_cell_ || bs < 0 || bs >= n_cells_) {
    throw InvalidParameter("signature index out of range");
  }
  return (static_cast<std::size_t>(cell) * users_per_cell_ + user) * n_cells_ + bs;
}

const SpatialSignature& SignatureTable::get(int cell, int user, int bs) const {
  const std::size_t i = slot(cell, user, bs);
  if (!present_[i]) {
    throw ContractViolation("no signature for user " + std::to_string(user) + " of cell " + std::to_string(cell) +
                            " toward BS " + std::to_string(bs));
  }
  return sigs_[i];
}

bool SignatureTable::has(int cell, int user, int bs) const { return present_[slot(cell, user, bs)]; }

void SignatureTable::set(SpatialSignature sig) {
  const std::size_t i = slot(sig.owner.cell, sig.owner.user, sig.owner.bs);
  sigs_[i] = std::move(sig);
  present_[i] = true;
}

std::size_t SignatureTable::count() const {
  return static_cast<std::size_t>(std::count(present_.begin(), present_.end(), true));
}

std::vector<SpatialSignature> SignatureTable::serving_signatures(int cell) const {
  std::vector<SpatialSignature> out;
  out.reserve(static_cast<std::size_t>(users_per_cell_));
  for (int i = 0; i < users_per_cell_; ++i) out.push_back(serving(cell, i));
  return out;
}

SignatureTable extract_all_signatures(const NetworkGeometry& geom, const DftBasis& basis, const ArrayParams& array,
                                      double alpha, int n_draws, std::uint64_t seed, bool include_cross,
                                      BeamPowerEstimator estimator) {
  SignatureTable table(geom.n_cells, geom.users_per_cell, basis.size());
  for (int b = 0; b < geom.n_cells; ++b) {
    for (int i = 0; i < geom.users_per_cell; ++i) {
      for (int r = 0; r < geom.n_cells; ++r) {
        if (!include_cross && r != b) continue;
        const LinkId link{b, i, r};
        Rng rng = make_stream(seed, Stream::kSignatures,
                              {static_cast<std::uint64_t>(b), static_cast<std::uint64_t>(i),
                               static_cast<std::uint64_t>(r)});
        const BeamPowerProfile profile = estimate_beam_powers(geom, link, basis, array, n_draws, rng, estimator);
        table.set(extract_signature(profile, alpha, link));
      }
    }
  }
  return table;
}

void write_signatures(std::ostream& os, const SignatureTable& table) {
  const auto old_precision = os.precision(std::numeric_limits<double>::max_digits10);
  for (int b = 0; b < table.n_cells(); ++b) {
    for (int i = 0; i < table.users_per_cell(); ++i) {
      for (int r = 0; r < table.n_cells(); ++r) {
        if (!table.has(b, i, r)) continue;
        const SpatialSignature& s = table.get(b, i, r);
        os << b << ' ' << i << ' ' << r << ' ' << s.beams.size();
        for (int beam : s.beams) os << ' ' << beam;
        for (double z : s.zeta_on_beams) os << ' ' << z;
        os << ' ' << s.trace << '\n';
      }
    }
  }
  os.precision(old_precision);
}

SignatureTable read_signatures(std::istream& is, int n_cells, int users_per_cell, int M) {
  SignatureTable table(n_cells, users_per_cell, M);
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    SpatialSignature s;
    std::size_t n = 0;
    if (!(ls >> s.owner.cell >> s.owner.user >> s.owner.bs >> n)) {
      throw InvalidParameter("signature line " + std::to_string(line_no) + ": malformed owner");
    }
    s.beams.resize(n);
    s.zeta_on_beams.resize(n);
    for (auto& beam : s.beams) ls >> beam;
    for (auto& z : s.zeta_on_beams) ls >> z;
    ls >> s.trace;
    if (!ls || !is_valid_beam_set(s.beams, M)) {
      throw InvalidParameter("signature line " + std::to_string(line_no) + ": malformed beams or powers");
    }
    table.set(std::move(s));
  }
  return table;
}

}  // namespace sbc
