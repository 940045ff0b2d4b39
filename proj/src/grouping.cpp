#include "sbc/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <numeric>
#include <string>

#include "sbc/errors.hpp"

namespace sbc {

ReuseCaps::ReuseCaps(int n_cells, int tau, std::vector<int> caps)
    : n_cells_(n_cells), tau_(tau), caps_(std::move(caps)) {
  if (n_cells < 1 || tau < 1) throw InvalidParameter("ReuseCaps: cell count and tau must be positive");
  if (caps_.size() != static_cast<std::size_t>(n_cells) * static_cast<std::size_t>(tau)) {
    throw InvalidParameter("ReuseCaps: expected " + std::to_string(n_cells * tau) + " caps, got " +
                           std::to_string(caps_.size()));
  }
  for (int c : caps_) {
    if (c < 1) throw InvalidParameter("ReuseCaps: every cap must be >= 1");
  }
}

ReuseCaps ReuseCaps::uniform(int n_cells, int tau, int cap) {
  return ReuseCaps(n_cells, tau, std::vector<int>(static_cast<std::size_t>(n_cells * tau), cap));
}

int ReuseCaps::at(int cell, int slot) const { return caps_[static_cast<std::size_t>(cell * tau_ + slot)]; }

int ReuseCaps::total(int cell) const {
  int t = 0;
  for (int k = 0; k < tau_; ++k) t += at(cell, k);
  return t;
}

int ReuseCaps::max_cap() const { return caps_.empty() ? 0 : *std::max_element(caps_.begin(), caps_.end()); }

double GroupingResult::total_value() const {
  double v = 0.0;
  for (const auto& c : cells) {
    for (const auto& g : c.groups) v += g.value;
  }
  return v;
}

BeamSet Allocation::covered() const {
  BeamSet out;
  out.reserve(h.size());
  for (const auto& [beam, user] : h) out.push_back(beam);
  return out;
}

bool Allocation::contains(int user) const { return std::find(phi.begin(), phi.end(), user) != phi.end(); }

double Allocation::recompute_value(std::span<const SpatialSignature> sigs) const {
  double v = 0.0;
  for (const auto& [beam, user] : h) v += sigs[static_cast<std::size_t>(user)].zeta_of(beam);
  return v;
}

double residual_value(const Allocation& a, int user, int beam, std::span<const SpatialSignature> sigs) {
  const double own = sigs[static_cast<std::size_t>(user)].zeta_of(beam);
  if (own < 0.0) {
    throw ContractViolation("residual_value: beam " + std::to_string(beam) + " is not in the signature of user " +
                            std::to_string(user));
  }
  auto it = a.h.find(beam);
  if (it == a.h.end()) return own;
  return own - sigs[static_cast<std::size_t>(it->second)].zeta_of(beam);
}

void merge_into(Allocation& a, int user, const BeamSet& beams, std::span<const SpatialSignature> sigs) {
  for (int f : beams) {
    a.value += residual_value(a, user, f, sigs);
    a.h[f] = user;
  }
  if (!a.contains(user)) a.phi.push_back(user);
}

namespace {

// Positive-residual beams of `user` and their residual sum.
double positive_residual(const Allocation& a, int user, std::span<const SpatialSignature> sigs, BeamSet* subset) {
  double sum = 0.0;
  for (int f : sigs[static_cast<std::size_t>(user)].beams) {
    const double r = residual_value(a, user, f, sigs);
    if (r > 0.0) {
      sum += r;
      if (subset) subset->push_back(f);
    }
  }
  return sum;
}

bool all_residuals_positive(const Allocation& a, int user, std::span<const SpatialSignature> sigs) {
  for (int f : sigs[static_cast<std::size_t>(user)].beams) {
    if (!(residual_value(a, user, f, sigs) > 0.0)) return false;
  }
  return true;
}

std::vector<int> eligible_users(std::span<const SpatialSignature> sigs) {
  std::vector<int> pool;
  for (std::size_t i = 0; i < sigs.size(); ++i) {
    if (!sigs[i].empty()) pool.push_back(static_cast<int>(i));
  }
  return pool;
}

BeamSet union_of(std::span<const SpatialSignature> sigs, const std::vector<int>& members) {
  BeamSet out;
  for (int u : members) {
    const auto& b = sigs[static_cast<std::size_t>(u)].beams;
    out.insert(out.end(), b.begin(), b.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void sort_members(CopilotGroup& g) {
  std::vector<std::size_t> order(g.members.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return g.members[a] < g.members[b]; });
  std::vector<int> members;
  std::vector<BeamSet> assigned;
  for (std::size_t i : order) {
    members.push_back(g.members[i]);
    assigned.push_back(std::move(g.assigned_beams[i]));
  }
  g.members = std::move(members);
  g.assigned_beams = std::move(assigned);
}

}  // namespace

Allocation greedy_gmc(std::span<const int> candidates, int cap, std::span<const SpatialSignature> sigs) {
  if (cap < 1) throw InvalidParameter("greedy_gmc: cap must be >= 1");
  std::vector<int> pool(candidates.begin(), candidates.end());
  std::sort(pool.begin(), pool.end());

  Allocation a;
  while (a.weight() + 1 <= cap) {
    // Knapsack step: with unit user cost the densest choice is the user whose
    // positive-residual beams add the most value.
    int best = -1;
    double best_gain = 0.0;
    for (int u : pool) {
      if (a.contains(u)) continue;
      const double gain = positive_residual(a, u, sigs, nullptr);
      if (gain > best_gain) {
        best_gain = gain;
        best = u;
      }
    }
    if (best < 0) break;
    BeamSet subset;
    positive_residual(a, best, sigs, &subset);
    merge_into(a, best, subset, sigs);

    for (int u : pool) {
      if (a.weight() + 1 > cap) break;
      if (a.contains(u)) continue;
      if (all_residuals_positive(a, u, sigs)) merge_into(a, u, sigs[static_cast<std::size_t>(u)].beams, sigs);
    }
  }
  return a;
}

CellGrouping group_cell_power_agnostic(std::span<const SpatialSignature> sigs, int cell, const ReuseCaps& caps) {
  const int M = [&] {
    int m = 0;
    for (const auto& s : sigs) {
      if (!s.beams.empty()) m = std::max(m, s.beams.back() + 1);
    }
    return m;
  }();
  std::vector<int> pool = eligible_users(sigs);
  CellGrouping out;
  out.shortfall = static_cast<int>(pool.size()) < caps.total(cell);

  for (int k = 0; k < caps.tau(); ++k) {
    CopilotGroup g;
    g.cell = cell;
    g.slot = k;
    std::vector<bool> uncovered(static_cast<std::size_t>(M), true);
    for (int j = 0; j < caps.at(cell, k) && !pool.empty(); ++j) {
      int best = -1;
      int best_gain = -1;
      for (int u : pool) {
        int gain = 0;
        for (int f : sigs[static_cast<std::size_t>(u)].beams) gain += uncovered[static_cast<std::size_t>(f)] ? 1 : 0;
        if (gain > best_gain) {
          best_gain = gain;
          best = u;
        }
      }
      if (best_gain == 0) g.zero_gain_fill = true;
      BeamSet claimed;
      for (int f : sigs[static_cast<std::size_t>(best)].beams) {
        if (uncovered[static_cast<std::size_t>(f)]) claimed.push_back(f);
        uncovered[static_cast<std::size_t>(f)] = false;
      }
      g.members.push_back(best);
      g.assigned_beams.push_back(std::move(claimed));
      pool.erase(std::find(pool.begin(), pool.end(), best));
    }
    sort_members(g);
    g.covered_beams = union_of(sigs, g.members);
    g.value = static_cast<double>(g.covered_beams.size());
    out.groups.push_back(std::move(g));
  }
  return out;
}

CellGrouping group_cell_power_aware(std::span<const SpatialSignature> sigs, int cell, const ReuseCaps& caps) {
  std::vector<int> pool = eligible_users(sigs);
  CellGrouping out;
  out.shortfall = static_cast<int>(pool.size()) < caps.total(cell);

  for (int k = 0; k < caps.tau(); ++k) {
    CopilotGroup g;
    g.cell = cell;
    g.slot = k;
    if (!pool.empty()) {
      Allocation greedy = greedy_gmc(pool, caps.at(cell, k), sigs);

      int single = -1;
      double single_value = -1.0;
      for (int u : pool) {
        const double v = sigs[static_cast<std::size_t>(u)].total_power();
        if (v > single_value) {
          single_value = v;
          single = u;
        }
      }
      Allocation chosen = std::move(greedy);
      if (single_value > chosen.value) {
        Allocation alone;
        merge_into(alone, single, sigs[static_cast<std::size_t>(single)].beams, sigs);
        chosen = std::move(alone);
        g.single_user_fallback = true;
      }
      g.members = chosen.phi;
      std::sort(g.members.begin(), g.members.end());
      g.covered_beams = chosen.covered();
      g.assigned_beams.assign(g.members.size(), BeamSet{});
      for (const auto& [beam, user] : chosen.h) {
        const auto pos = std::find(g.members.begin(), g.members.end(), user) - g.members.begin();
        g.assigned_beams[static_cast<std::size_t>(pos)].push_back(beam);
      }
      g.value = chosen.value;
      for (int u : g.members) pool.erase(std::find(pool.begin(), pool.end(), u));
    }
    out.groups.push_back(std::move(g));
  }
  return out;
}

GroupingResult group_power_agnostic(const CellSignatures& per_cell, const ReuseCaps& caps) {
  if (static_cast<int>(per_cell.size()) != caps.n_cells()) {
    throw InvalidParameter("group_power_agnostic: cell count does not match caps");
  }
  GroupingResult r;
  for (int b = 0; b < caps.n_cells(); ++b) {
    r.cells.push_back(group_cell_power_agnostic(per_cell[static_cast<std::size_t>(b)], b, caps));
  }
  return r;
}

GroupingResult group_power_aware(const CellSignatures& per_cell, const ReuseCaps& caps) {
  if (static_cast<int>(per_cell.size()) != caps.n_cells()) {
    throw InvalidParameter("group_power_aware: cell count does not match caps");
  }
  GroupingResult r;
  for (int b = 0; b < caps.n_cells(); ++b) {
    r.cells.push_back(group_cell_power_aware(per_cell[static_cast<std::size_t>(b)], b, caps));
  }
  return r;
}

CellSignatures serving_by_cell(const SignatureTable& table) {
  CellSignatures out;
  for (int b = 0; b < table.n_cells(); ++b) out.push_back(table.serving_signatures(b));
  return out;
}

double grouping_objective(std::span<const SpatialSignature> sigs, const std::vector<std::vector<int>>& groups,
                          GroupingMode mode) {
  double total = 0.0;
  for (const auto& members : groups) {
    if (mode == GroupingMode::kAgnostic) {
      total += static_cast<double>(union_of(sigs, members).size());
      continue;
    }
    std::map<int, double> best;
    for (int u : members) {
      const auto& s = sigs[static_cast<std::size_t>(u)];
      for (std::size_t i = 0; i < s.beams.size(); ++i) {
        double& slot = best[s.beams[i]];
        slot = std::max(slot, s.zeta_on_beams[i]);
      }
    }
    for (const auto& [beam, z] : best) total += z;
  }
  return total;
}

double brute_force_grouping_oracle(std::span<const SpatialSignature> sigs, int tau, int cap, GroupingMode mode,
                                   double max_enumeration) {
  if (tau < 1 || cap < 1) throw InvalidParameter("brute_force_grouping_oracle: tau and cap must be >= 1");
  const std::vector<int> users = eligible_users(sigs);
  const double size = std::pow(static_cast<double>(tau + 1), static_cast<double>(users.size()));
  if (size > max_enumeration) {
    throw InstanceTooLarge("brute_force_grouping_oracle: " + std::to_string(size) + " assignments exceed the limit");
  }
  // choice[i] in [0, tau]; tau means "not scheduled".
  std::vector<int> choice(users.size(), tau);
  std::vector<int> load(static_cast<std::size_t>(tau), 0);
  double best = 0.0;
  std::vector<std::vector<int>> groups(static_cast<std::size_t>(tau));

  auto evaluate = [&] {
    for (auto& g : groups) g.clear();
    for (std::size_t i = 0; i < users.size(); ++i) {
      if (choice[i] < tau) groups[static_cast<std::size_t>(choice[i])].push_back(users[i]);
    }
    best = std::max(best, grouping_objective(sigs, groups, mode));
  };

  // Depth-first enumeration with cap pruning.
  auto recurse = [&](auto&& self, std::size_t i) -> void {
    if (i == users.size()) {
      evaluate();
      return;
    }
    for (int k = 0; k <= tau; ++k) {
      if (k < tau && load[static_cast<std::size_t>(k)] >= cap) continue;
      choice[i] = k;
      if (k < tau) ++load[static_cast<std::size_t>(k)];
      self(self, i + 1);
      if (k < tau) --load[static_cast<std::size_t>(k)];
    }
    choice[i] = tau;
  };
  recurse(recurse, 0);
  return best;
}

void write_groups(std::ostream& os, const GroupingResult& groups) {
  for (const auto& cell : groups.cells) {
    for (const auto& g : cell.groups) {
      os << g.cell << ' ' << g.slot << ' ' << g.members.size();
      for (int u : g.members) os << ' ' << u;
      os << '\n';
    }
  }
}

GroupingResult read_groups(std::istream& is) {
  GroupingResult out;
  std::string line;
  int line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream ls(line);
    CopilotGroup g;
    std::size_t n = 0;
    if (!(ls >> g.cell >> g.slot >> n) || g.cell < 0 || g.slot < 0) {
      throw InvalidParameter("read_groups: malformed header on line " + std::to_string(line_no));
    }
    g.members.resize(n);
    for (auto& u : g.members) {
      if (!(ls >> u)) throw InvalidParameter("read_groups: missing member on line " + std::to_string(line_no));
    }
    std::string extra;
    if (ls >> extra) throw InvalidParameter("read_groups: trailing data on line " + std::to_string(line_no));
    if (out.cells.size() <= static_cast<std::size_t>(g.cell)) out.cells.resize(static_cast<std::size_t>(g.cell) + 1);
    auto& slots = out.cells[static_cast<std::size_t>(g.cell)].groups;
    if (slots.size() <= static_cast<std::size_t>(g.slot)) slots.resize(static_cast<std::size_t>(g.slot) + 1);
    slots[static_cast<std::size_t>(g.slot)] = std::move(g);
  }
  return out;
}

}  // namespace sbc
