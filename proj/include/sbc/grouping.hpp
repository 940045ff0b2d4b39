/**
 * @file grouping.hpp
 * @brief Copilot user grouping by spatial-basis coverage.
 *
 * Each cell forms tau copilot groups, one per pilot slot, one after the other.
 * The power-agnostic path builds every group as a greedy maximum coverage of
 * the DFT beams. The power-aware path solves a generalized maximum coverage
 * per group: a beam's value depends on which member claims it, and a greedy
 * knapsack step picks the user with the largest positive residual value.
 * Users placed in one group are not candidates for later groups of the same
 * cell. Ties always go to the smallest user index, then the smallest beam.
 */
#pragma once

#include <iosfwd>
#include <map>
#include <span>
#include <vector>

#include "sbc/signature.hpp"

namespace sbc {

/// Per-(cell, slot) reuse caps U, stored cell-major.
class ReuseCaps {
 public:
  ReuseCaps() = default;
  ReuseCaps(int n_cells, int tau, std::vector<int> caps);
  static ReuseCaps uniform(int n_cells, int tau, int cap);

  int n_cells() const { return n_cells_; }
  int tau() const { return tau_; }
  int at(int cell, int slot) const;
  int total(int cell) const;
  int max_cap() const;

 private:
  int n_cells_ = 0;
  int tau_ = 0;
  std::vector<int> caps_;
};

struct CopilotGroup {
  int cell = 0;
  int slot = 0;
  std::vector<int> members;  // ascending user index
  BeamSet covered_beams;
  std::vector<BeamSet> assigned_beams;  // parallel to members: beams each member claims
  double value = 0.0;             // beam count (agnostic) or V(A) (aware)
  bool zero_gain_fill = false;    // a member was added without covering a new beam
  bool single_user_fallback = false;
};

struct CellGrouping {
  std::vector<CopilotGroup> groups;  // indexed by slot
  bool shortfall = false;            // fewer eligible users than the caps asked for
};

struct GroupingResult {
  std::vector<CellGrouping> cells;

  const CopilotGroup& group(int cell, int slot) const {
    return cells[static_cast<std::size_t>(cell)].groups[static_cast<std::size_t>(slot)];
  }
  double total_value() const;
};

/// A = (phi, xi, h) for one cell's signatures.
struct Allocation {
  std::vector<int> phi;     // selected users, in merge order
  std::map<int, int> h;     // covered beam -> user claiming it (keys form xi)
  double value = 0.0;

  int weight() const { return static_cast<int>(phi.size()); }
  BeamSet covered() const;
  bool contains(int user) const;
  /// V(A) recomputed from h against the signature powers.
  double recompute_value(std::span<const SpatialSignature> sigs) const;
};

/// Residual value of `beam` for `user` with respect to A.
double residual_value(const Allocation& a, int user, int beam, std::span<const SpatialSignature> sigs);

/// A (+) (user, beams): claims every listed beam for `user`.
void merge_into(Allocation& a, int user, const BeamSet& beams, std::span<const SpatialSignature> sigs);

/// Greedy generalized maximum coverage over `candidates` with at most `cap` users.
Allocation greedy_gmc(std::span<const int> candidates, int cap, std::span<const SpatialSignature> sigs);

CellGrouping group_cell_power_agnostic(std::span<const SpatialSignature> sigs, int cell, const ReuseCaps& caps);
CellGrouping group_cell_power_aware(std::span<const SpatialSignature> sigs, int cell, const ReuseCaps& caps);

/// Serving signatures per cell (outer index cell, inner index user).
using CellSignatures = std::vector<std::vector<SpatialSignature>>;

GroupingResult group_power_agnostic(const CellSignatures& per_cell, const ReuseCaps& caps);
GroupingResult group_power_aware(const CellSignatures& per_cell, const ReuseCaps& caps);

CellSignatures serving_by_cell(const SignatureTable& table);

enum class GroupingMode { kAgnostic, kAware };

/// Objective of one cell's groups: covered-beam count or best-owner power sum.
double grouping_objective(std::span<const SpatialSignature> sigs, const std::vector<std::vector<int>>& groups,
                          GroupingMode mode);

/**
 * Exact optimum for one cell by enumerating every assignment of users to
 * tau disjoint groups of at most `cap` members. Refuses instances with more
 * than `max_enumeration` assignments.
 */
double brute_force_grouping_oracle(std::span<const SpatialSignature> sigs, int tau, int cap, GroupingMode mode,
                                   double max_enumeration = 1e7);

/// One line per group: `cell slot n member_1..member_n`.
void write_groups(std::ostream& os, const GroupingResult& groups);
/// Member lists only; beam bookkeeping and values are not part of the text form.
GroupingResult read_groups(std::istream& is);

}  // namespace sbc
