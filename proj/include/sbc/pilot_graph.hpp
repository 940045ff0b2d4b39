/**
 * @file pilot_graph.hpp
 * @brief Cross-cell pilot allocation over copilot groups.
 *
 * Nodes are copilot groups (node id = cell * tau + slot). Groups of the same
 * cell are joined by a sentinel weight and may never share a pilot; every
 * other pair carries a finite weight derived from the members' spatial
 * signatures toward both base stations. Pilot sets are formed by a greedy
 * max-tau-cut: each group joins the admissible set it is least tied to.
 */
#pragma once

#include <iosfwd>
#include <vector>

#include "sbc/grouping.hpp"
#include "sbc/rng.hpp"
#include "sbc/signature.hpp"

namespace sbc {

enum class EdgeWeight {
  /// min over member pairs of the summed half chordal distances at both BSs.
  kChordalDistance,
  /// sum over member pairs of the beam overlaps at both BSs.
  kOverlap,
};

class InterferenceGraph {
 public:
  InterferenceGraph() = default;
  /// Finite weights for cross-cell pairs; same-cell entries are ignored.
  InterferenceGraph(std::vector<int> cell_of, std::vector<double> weights);

  int size() const { return static_cast<int>(cell_of_.size()); }
  int cell_of(int node) const { return cell_of_[static_cast<std::size_t>(node)]; }
  bool same_cell(int u, int v) const { return cell_of(u) == cell_of(v); }
  /// Edge weight; same-cell pairs return the sentinel.
  double weight(int u, int v) const;
  double finite_weight(int u, int v) const;
  double sentinel() const { return sentinel_; }
  double max_finite_weight() const;
  double total_finite_weight() const;
  int n_cells() const;

  std::vector<int> degenerate_nodes;  // empty groups, whose edges were set to 0

 private:
  std::vector<int> cell_of_;
  std::vector<double> w_;  // row-major n x n, symmetric, finite part only
  double sentinel_ = 0.0;
};

/// Copilot group identity of a graph node.
struct GroupNode {
  int cell = 0;
  int slot = 0;
};

InterferenceGraph build_interference_graph(const GroupingResult& groups, const SignatureTable& sigs,
                                           EdgeWeight kind = EdgeWeight::kChordalDistance);

/// Edge weight between two member lists in cells b and l.
double group_pair_weight(const std::vector<int>& members_b, int b, const std::vector<int>& members_l, int l,
                         const SignatureTable& sigs, EdgeWeight kind);

struct PilotAssignment {
  std::vector<int> pilot_of;  // node -> pilot index in [0, tau)
  double cut_value = 0.0;     // finite weights only
};

double cut_value(const InterferenceGraph& graph, const std::vector<int>& pilot_of);
bool is_feasible(const InterferenceGraph& graph, const std::vector<int>& pilot_of, int tau);

enum class CutRule {
  /// Seed one cell, then place every other group in random order on the
  /// admissible pilot it is least tied to.
  kGreedy,
  /// kGreedy, replaced by the cell-by-cell matching assignment whenever that
  /// one cuts more. The matching alone always cuts at least (1 - 1/tau) of the
  /// total weight, so this rule keeps that guarantee under the same-cell rule.
  kGreedyGuarded,
};

/// Max-tau-cut pilot assignment; visiting order of the non-seed groups comes from rng.
PilotAssignment max_tau_cut_assign(const InterferenceGraph& graph, int tau, Rng& rng,
                                   CutRule rule = CutRule::kGreedyGuarded);

/**
 * Cells in index order; each cell's groups get the injective pilot map that
 * maximizes the cut toward the cells already assigned (a linear assignment
 * problem). Unassigned cells would share a pilot with probability 1/tau under
 * a uniform map, so each step keeps the expected cut >= (1 - 1/tau) * total.
 */
PilotAssignment cellwise_matching_assign(const InterferenceGraph& graph, int tau);

/// Minimum-cost assignment of rows to distinct columns (rows <= cols); returns the column of each row.
std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost);

/// Uniformly random feasible assignment (independent permutation per cell).
PilotAssignment random_assign(const InterferenceGraph& graph, int tau, Rng& rng);

/// Slot k of every cell uses pilot k.
PilotAssignment identity_assign(const InterferenceGraph& graph, int tau);

/// Exact maximum feasible cut by enumeration; refuses more than max_enumeration labelings.
double brute_force_cut_oracle(const InterferenceGraph& graph, int tau, double max_enumeration = 1e7);

/// `u v weight` per edge (u < v); same-cell edges print the sentinel.
void write_edge_list(std::ostream& os, const InterferenceGraph& graph);
void write_assignment(std::ostream& os, const PilotAssignment& a);

}  // namespace sbc
