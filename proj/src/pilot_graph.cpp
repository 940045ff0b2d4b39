#include "sbc/pilot_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>

#include "sbc/errors.hpp"

namespace sbc {

InterferenceGraph::InterferenceGraph(std::vector<int> cell_of, std::vector<double> weights)
    : cell_of_(std::move(cell_of)), w_(std::move(weights)) {
  const std::size_t n = cell_of_.size();
  if (w_.size() != n * n) throw InvalidParameter("InterferenceGraph: weight matrix must be n x n");
  double max_w = 0.0;
  double sum_w = 0.0;
  for (std::size_t u = 0; u < n; ++u) {
    w_[u * n + u] = 0.0;
    for (std::size_t v = u + 1; v < n; ++v) {
      if (cell_of_[u] == cell_of_[v]) {
        w_[u * n + v] = w_[v * n + u] = 0.0;
        continue;
      }
      const double a = w_[u * n + v];
      if (!(a >= 0.0) || !std::isfinite(a) || a != w_[v * n + u]) {
        throw InvalidParameter("InterferenceGraph: weights must be finite, nonnegative and symmetric");
      }
      max_w = std::max(max_w, a);
      sum_w += a;
    }
  }
  sentinel_ = std::max(1e6 * std::max(max_w, 1.0), 2.0 * sum_w + 1.0);
}

double InterferenceGraph::finite_weight(int u, int v) const {
  return w_[static_cast<std::size_t>(u) * cell_of_.size() + static_cast<std::size_t>(v)];
}

double InterferenceGraph::weight(int u, int v) const { return same_cell(u, v) ? sentinel_ : finite_weight(u, v); }

double InterferenceGraph::max_finite_weight() const {
  return w_.empty() ? 0.0 : *std::max_element(w_.begin(), w_.end());
}

double InterferenceGraph::total_finite_weight() const {
  return std::accumulate(w_.begin(), w_.end(), 0.0) / 2.0;
}

int InterferenceGraph::n_cells() const {
  return cell_of_.empty() ? 0 : *std::max_element(cell_of_.begin(), cell_of_.end()) + 1;
}

double group_pair_weight(const std::vector<int>& members_b, int b, const std::vector<int>& members_l, int l,
                         const SignatureTable& sigs, EdgeWeight kind) {
  if (kind == EdgeWeight::kChordalDistance) {
    double best = std::numeric_limits<double>::infinity();
    for (int y : members_b) {
      for (int z : members_l) {
        // Useful link of y vs. interference of z at BS b, and the converse at BS l.
        const double at_b = chordal_distance(sigs.get(b, y, b).beams, sigs.get(l, z, b).beams);
        const double at_l = chordal_distance(sigs.get(b, y, l).beams, sigs.get(l, z, l).beams);
        best = std::min(best, 0.5 * at_b + 0.5 * at_l);
      }
    }
    return std::isfinite(best) ? best : 0.0;
  }
  double total = 0.0;
  for (int y : members_b) {
    for (int z : members_l) {
      total += overlap_count(sigs.get(b, y, b).beams, sigs.get(l, z, b).beams);
      total += overlap_count(sigs.get(b, y, l).beams, sigs.get(l, z, l).beams);
    }
  }
  return total;
}

InterferenceGraph build_interference_graph(const GroupingResult& groups, const SignatureTable& sigs,
                                           EdgeWeight kind) {
  const int n_cells = static_cast<int>(groups.cells.size());
  if (n_cells == 0) return {};
  const int tau = static_cast<int>(groups.cells.front().groups.size());
  for (const auto& c : groups.cells) {
    if (static_cast<int>(c.groups.size()) != tau) {
      throw InvalidParameter("build_interference_graph: every cell needs exactly tau groups");
    }
  }
  const int n = n_cells * tau;
  std::vector<int> cell_of(static_cast<std::size_t>(n));
  for (int v = 0; v < n; ++v) cell_of[static_cast<std::size_t>(v)] = v / tau;
  std::vector<double> w(static_cast<std::size_t>(n) * static_cast<std::size_t>(n), 0.0);
  std::vector<int> degenerate;
  for (int u = 0; u < n; ++u) {
    const CopilotGroup& gu = groups.group(u / tau, u % tau);
    if (gu.members.empty()) degenerate.push_back(u);
    for (int v = u + 1; v < n; ++v) {
      if (u / tau == v / tau) continue;
      const CopilotGroup& gv = groups.group(v / tau, v % tau);
      const double weight = group_pair_weight(gu.members, gu.cell, gv.members, gv.cell, sigs, kind);
      w[static_cast<std::size_t>(u) * n + v] = weight;
      w[static_cast<std::size_t>(v) * n + u] = weight;
    }
  }
  InterferenceGraph g(std::move(cell_of), std::move(w));
  g.degenerate_nodes = std::move(degenerate);
  return g;
}

double cut_value(const InterferenceGraph& graph, const std::vector<int>& pilot_of) {
  double cut = 0.0;
  for (int u = 0; u < graph.size(); ++u) {
    for (int v = u + 1; v < graph.size(); ++v) {
      if (graph.same_cell(u, v)) continue;
      if (pilot_of[static_cast<std::size_t>(u)] != pilot_of[static_cast<std::size_t>(v)]) {
        cut += graph.finite_weight(u, v);
      }
    }
  }
  return cut;
}

bool is_feasible(const InterferenceGraph& graph, const std::vector<int>& pilot_of, int tau) {
  if (static_cast<int>(pilot_of.size()) != graph.size()) return false;
  for (int u = 0; u < graph.size(); ++u) {
    const int pu = pilot_of[static_cast<std::size_t>(u)];
    if (pu < 0 || pu >= tau) return false;
    for (int v = u + 1; v < graph.size(); ++v) {
      if (graph.same_cell(u, v) && pu == pilot_of[static_cast<std::size_t>(v)]) return false;
    }
  }
  return true;
}

namespace {

void require_tau_per_cell(const InterferenceGraph& graph, int tau) {
  if (tau < 1) throw InvalidParameter("pilot assignment: tau must be >= 1");
  std::vector<int> count(static_cast<std::size_t>(graph.n_cells()), 0);
  for (int v = 0; v < graph.size(); ++v) ++count[static_cast<std::size_t>(graph.cell_of(v))];
  for (int c : count) {
    if (c > tau) throw InvalidParameter("pilot assignment: a cell has more than tau groups");
  }
}

PilotAssignment greedy_cut(const InterferenceGraph& graph, int tau, Rng& rng) {
  require_tau_per_cell(graph, tau);
  const int n = graph.size();
  PilotAssignment out;
  out.pilot_of.assign(static_cast<std::size_t>(n), -1);
  if (n == 0) return out;

  // Seed: the groups of the first cell go to distinct sets in slot order.
  const int seed_cell = graph.cell_of(0);
  std::vector<int> rest;
  int next_set = 0;
  for (int v = 0; v < n; ++v) {
    if (graph.cell_of(v) == seed_cell) {
      out.pilot_of[static_cast<std::size_t>(v)] = next_set++;
    } else {
      rest.push_back(v);
    }
  }
  std::shuffle(rest.begin(), rest.end(), rng);

  std::vector<std::vector<int>> sets(static_cast<std::size_t>(tau));
  for (int v = 0; v < n; ++v) {
    const int p = out.pilot_of[static_cast<std::size_t>(v)];
    if (p >= 0) sets[static_cast<std::size_t>(p)].push_back(v);
  }
  for (int v : rest) {
    int best = -1;
    double best_w = std::numeric_limits<double>::infinity();
    for (int g = 0; g < tau; ++g) {
      const auto& members = sets[static_cast<std::size_t>(g)];
      const bool blocked =
          std::any_of(members.begin(), members.end(), [&](int u) { return graph.same_cell(u, v); });
      if (blocked) continue;
      double wg = 0.0;
      for (int u : members) wg += graph.finite_weight(v, u);
      if (wg < best_w) {
        best_w = wg;
        best = g;
      }
    }
    if (best < 0) throw ContractViolation("max_tau_cut_assign: no admissible pilot set for group " + std::to_string(v));
    sets[static_cast<std::size_t>(best)].push_back(v);
    out.pilot_of[static_cast<std::size_t>(v)] = best;
  }
  out.cut_value = cut_value(graph, out.pilot_of);
  return out;
}

}  // namespace

PilotAssignment max_tau_cut_assign(const InterferenceGraph& graph, int tau, Rng& rng, CutRule rule) {
  PilotAssignment greedy = greedy_cut(graph, tau, rng);
  if (rule == CutRule::kGreedy) return greedy;
  PilotAssignment matched = cellwise_matching_assign(graph, tau);
  return matched.cut_value > greedy.cut_value ? matched : greedy;
}

std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  if (n == 0) return {};
  const int m = static_cast<int>(cost.front().size());
  if (n > m) throw InvalidParameter("solve_assignment: more rows than columns");
  // Shortest augmenting paths with potentials, 1-based with a virtual column 0.
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(static_cast<std::size_t>(n + 1), 0.0);
  std::vector<double> v(static_cast<std::size_t>(m + 1), 0.0);
  std::vector<int> p(static_cast<std::size_t>(m + 1), 0);
  std::vector<int> way(static_cast<std::size_t>(m + 1), 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(m + 1), inf);
    std::vector<bool> used(static_cast<std::size_t>(m + 1), false);
    do {
      used[static_cast<std::size_t>(j0)] = true;
      const int i0 = p[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost[static_cast<std::size_t>(i0 - 1)][static_cast<std::size_t>(j - 1)] -
                           u[static_cast<std::size_t>(i0)] - v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(p[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (p[static_cast<std::size_t>(j0)] != 0);
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      p[static_cast<std::size_t>(j0)] = p[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> col(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= m; ++j) {
    if (p[static_cast<std::size_t>(j)] != 0) col[static_cast<std::size_t>(p[static_cast<std::size_t>(j)] - 1)] = j - 1;
  }
  return col;
}

PilotAssignment cellwise_matching_assign(const InterferenceGraph& graph, int tau) {
  require_tau_per_cell(graph, tau);
  const int n = graph.size();
  PilotAssignment out;
  out.pilot_of.assign(static_cast<std::size_t>(n), -1);
  for (int c = 0; c < graph.n_cells(); ++c) {
    std::vector<int> nodes;
    for (int v = 0; v < n; ++v) {
      if (graph.cell_of(v) == c) nodes.push_back(v);
    }
    if (nodes.empty()) continue;
    // cost(v, p): weight v would keep uncut by joining pilot p.
    std::vector<std::vector<double>> cost(nodes.size(), std::vector<double>(static_cast<std::size_t>(tau), 0.0));
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (int u = 0; u < n; ++u) {
        const int p = out.pilot_of[static_cast<std::size_t>(u)];
        if (p >= 0) cost[i][static_cast<std::size_t>(p)] += graph.finite_weight(nodes[i], u);
      }
    }
    const std::vector<int> col = solve_assignment(cost);
    for (std::size_t i = 0; i < nodes.size(); ++i) out.pilot_of[static_cast<std::size_t>(nodes[i])] = col[i];
  }
  out.cut_value = cut_value(graph, out.pilot_of);
  return out;
}

PilotAssignment random_assign(const InterferenceGraph& graph, int tau, Rng& rng) {
  require_tau_per_cell(graph, tau);
  PilotAssignment out;
  out.pilot_of.assign(static_cast<std::size_t>(graph.size()), -1);
  for (int c = 0; c < graph.n_cells(); ++c) {
    std::vector<int> perm(static_cast<std::size_t>(tau));
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    int k = 0;
    for (int v = 0; v < graph.size(); ++v) {
      if (graph.cell_of(v) == c) out.pilot_of[static_cast<std::size_t>(v)] = perm[static_cast<std::size_t>(k++)];
    }
  }
  out.cut_value = cut_value(graph, out.pilot_of);
  return out;
}

PilotAssignment identity_assign(const InterferenceGraph& graph, int tau) {
  require_tau_per_cell(graph, tau);
  PilotAssignment out;
  out.pilot_of.assign(static_cast<std::size_t>(graph.size()), -1);
  std::vector<int> next(static_cast<std::size_t>(graph.n_cells()), 0);
  for (int v = 0; v < graph.size(); ++v) {
    out.pilot_of[static_cast<std::size_t>(v)] = next[static_cast<std::size_t>(graph.cell_of(v))]++;
  }
  out.cut_value = cut_value(graph, out.pilot_of);
  return out;
}

double brute_force_cut_oracle(const InterferenceGraph& graph, int tau, double max_enumeration) {
  require_tau_per_cell(graph, tau);
  const int n = graph.size();
  const double size = std::pow(static_cast<double>(tau), static_cast<double>(n));
  if (size > max_enumeration) {
    throw InstanceTooLarge("brute_force_cut_oracle: " + std::to_string(size) + " labelings exceed the limit");
  }
  std::vector<int> label(static_cast<std::size_t>(n), 0);
  double best = 0.0;
  auto recurse = [&](auto&& self, int v, double cut) -> void {
    if (v == n) {
      best = std::max(best, cut);
      return;
    }
    for (int g = 0; g < tau; ++g) {
      double add = 0.0;
      bool ok = true;
      for (int u = 0; u < v; ++u) {
        const bool together = label[static_cast<std::size_t>(u)] == g;
        if (graph.same_cell(u, v)) {
          if (together) {
            ok = false;
            break;
          }
          continue;
        }
        if (!together) add += graph.finite_weight(u, v);
      }
      if (!ok) continue;
      label[static_cast<std::size_t>(v)] = g;
      self(self, v + 1, cut + add);
    }
  };
  recurse(recurse, 0, 0.0);
  return best;
}

void write_edge_list(std::ostream& os, const InterferenceGraph& graph) {
  const auto old = os.precision(17);
  for (int u = 0; u < graph.size(); ++u) {
    for (int v = u + 1; v < graph.size(); ++v) os << u << ' ' << v << ' ' << graph.weight(u, v) << '\n';
  }
  os.precision(old);
}

void write_assignment(std::ostream& os, const PilotAssignment& a) {
  for (std::size_t v = 0; v < a.pilot_of.size(); ++v) os << v << ' ' << a.pilot_of[v] << '\n';
}

}  // namespace sbc
