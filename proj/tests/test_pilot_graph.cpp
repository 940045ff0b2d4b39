#include <doctest.h>

#include <algorithm>
#include <limits>
#include <numeric>
#include <sstream>

#include "instances.hpp"
#include "sbc/errors.hpp"
#include "sbc/pilot_graph.hpp"

using namespace sbc;

namespace {

SpatialSignature link_sig(int cell, int user, int bs, BeamSet beams) {
  SpatialSignature s;
  s.owner = {cell, user, bs};
  s.beams = std::move(beams);
  s.zeta_on_beams.assign(s.beams.size(), 1.0);
  s.trace = s.total_power();
  return s;
}

InterferenceGraph two_by_two(double a1b1, double a1b2, double a2b1, double a2b2) {
  std::vector<double> w(16, 0.0);
  auto set = [&](int u, int v, double x) { w[static_cast<std::size_t>(u * 4 + v)] = w[static_cast<std::size_t>(v * 4 + u)] = x; };
  set(0, 2, a1b1);
  set(0, 3, a1b2);
  set(1, 2, a2b1);
  set(1, 3, a2b2);
  return InterferenceGraph({0, 0, 1, 1}, w);
}

}  // namespace

TEST_CASE("graph weights and sentinel") {
  const InterferenceGraph g = two_by_two(0.0, 5.0, 5.0, 0.0);
  CHECK(g.weight(0, 1) == g.sentinel());
  CHECK(g.sentinel() > g.total_finite_weight());
  CHECK(g.sentinel() >= 1e6 * g.max_finite_weight());
  CHECK(g.weight(1, 2) == 5.0);
  CHECK(g.weight(2, 1) == 5.0);
  CHECK(g.total_finite_weight() == 10.0);
  std::vector<double> asym(4, 0.0);
  asym[1] = 1.0;
  CHECK_THROWS_AS(InterferenceGraph({0, 1}, asym), InvalidParameter);

  std::ostringstream os;
  write_edge_list(os, g);
  CHECK(os.str().find("1 2 5\n") != std::string::npos);
}

TEST_CASE("edge weights from signatures") {
  // Two cells, one user each.
  SignatureTable same(2, 1, 16);
  same.set(link_sig(0, 0, 0, {1, 2}));
  same.set(link_sig(0, 0, 1, {7}));
  same.set(link_sig(1, 0, 0, {1, 2}));
  same.set(link_sig(1, 0, 1, {7}));
  CHECK(group_pair_weight({0}, 0, {0}, 1, same, EdgeWeight::kChordalDistance) == 0.0);
  CHECK(group_pair_weight({0}, 0, {0}, 1, same, EdgeWeight::kOverlap) == 3.0);

  SignatureTable apart(2, 1, 16);
  apart.set(link_sig(0, 0, 0, {1, 2}));
  apart.set(link_sig(0, 0, 1, {3, 4}));
  apart.set(link_sig(1, 0, 0, {8, 9, 10}));
  apart.set(link_sig(1, 0, 1, {11, 12, 13}));
  CHECK(group_pair_weight({0}, 0, {0}, 1, apart, EdgeWeight::kChordalDistance) == 5.0);
  CHECK(group_pair_weight({0}, 0, {0}, 1, apart, EdgeWeight::kOverlap) == 0.0);

  // 2 cells x 2 groups x 2 users against a double loop over member pairs.
  Rng rng = make_stream(3, Stream::kInstance, {30});
  SignatureTable t(2, 4, 16);
  for (int b = 0; b < 2; ++b) {
    for (int i = 0; i < 4; ++i) {
      for (int r = 0; r < 2; ++r) {
        auto s = testing::random_signatures(16, 1, 5, rng)[0];
        s.owner = {b, i, r};
        t.set(s);
      }
    }
  }
  GroupingResult groups;
  groups.cells.resize(2);
  for (int b = 0; b < 2; ++b) {
    for (int k = 0; k < 2; ++k) {
      CopilotGroup g;
      g.cell = b;
      g.slot = k;
      g.members = {2 * k, 2 * k + 1};
      groups.cells[static_cast<std::size_t>(b)].groups.push_back(g);
    }
  }
  const InterferenceGraph g = build_interference_graph(groups, t);
  for (int u = 0; u < 2; ++u) {
    for (int v = 2; v < 4; ++v) {
      double best = std::numeric_limits<double>::infinity();
      for (int y : groups.group(0, u).members) {
        for (int z : groups.group(1, v - 2).members) {
          const BeamSet& yb = t.get(0, y, 0).beams;
          const BeamSet& zb = t.get(1, z, 0).beams;
          const BeamSet& yl = t.get(0, y, 1).beams;
          const BeamSet& zl = t.get(1, z, 1).beams;
          auto sym = [](const BeamSet& a, const BeamSet& b) {
            return static_cast<double>(a.size() + b.size()) - 2.0 * overlap_count(a, b);
          };
          best = std::min(best, 0.5 * sym(yb, zb) + 0.5 * sym(yl, zl));
        }
      }
      CHECK(g.weight(u, v) == doctest::Approx(best).epsilon(1e-12));
    }
  }
  CHECK(g.degenerate_nodes.empty());
}

TEST_CASE("max-tau-cut examples") {
  Rng rng = make_stream(1, Stream::kAllocation);
  const InterferenceGraph single({0, 0, 0}, std::vector<double>(9, 0.0));
  const PilotAssignment s = max_tau_cut_assign(single, 3, rng);
  CHECK(s.pilot_of == std::vector<int>{0, 1, 2});
  CHECK(s.cut_value == 0.0);

  const InterferenceGraph g = two_by_two(0.0, 5.0, 5.0, 0.0);
  for (CutRule rule : {CutRule::kGreedy, CutRule::kGreedyGuarded}) {
    const PilotAssignment a = max_tau_cut_assign(g, 2, rng, rule);
    CHECK(a.cut_value == 10.0);
    CHECK(a.pilot_of[2] == a.pilot_of[0]);
  }
  CHECK(brute_force_cut_oracle(g, 2) == 10.0);
  CHECK_THROWS_AS(max_tau_cut_assign(g, 1, rng), InvalidParameter);

  std::vector<double> one_edge{0.0, 7.0, 7.0, 0.0};
  CHECK(brute_force_cut_oracle(InterferenceGraph({0, 1}, one_edge), 2) == 7.0);
  std::vector<double> k3(9, 1.0);
  CHECK(brute_force_cut_oracle(InterferenceGraph({0, 1, 2}, k3), 3) == 3.0);
}

TEST_CASE("max-tau-cut bound, feasibility and oracle dominance") {
  for (int seed = 0; seed < 300; ++seed) {
    Rng rng = make_stream(static_cast<std::uint64_t>(seed), Stream::kInstance, {31});
    const int tau = 2 + seed % 2;
    const int cells = 2 + (seed / 2) % (tau == 2 ? 3 : 2);
    const InterferenceGraph g = testing::random_group_graph(cells, tau, rng);
    const double opt = brute_force_cut_oracle(g, tau);
    const PilotAssignment guarded = max_tau_cut_assign(g, tau, rng);
    const PilotAssignment plain = max_tau_cut_assign(g, tau, rng, CutRule::kGreedy);
    const PilotAssignment matching = cellwise_matching_assign(g, tau);
    Rng r2 = rng;
    const PilotAssignment random = random_assign(g, tau, r2);
    for (const PilotAssignment* a : {&guarded, &plain, &matching, &random}) {
      CHECK(is_feasible(g, a->pilot_of, tau));
      CHECK(a->cut_value == doctest::Approx(cut_value(g, a->pilot_of)).epsilon(1e-12));
      CHECK(a->cut_value <= opt + 1e-9);
    }
    CHECK(matching.cut_value >= (1.0 - 1.0 / tau) * g.total_finite_weight() - 1e-9);
    CHECK(guarded.cut_value >= (1.0 - 1.0 / tau) * opt - 1e-9);
    CHECK(guarded.cut_value >= matching.cut_value - 1e-12);
  }
}

TEST_CASE("linear assignment against enumeration") {
  for (int seed = 0; seed < 100; ++seed) {
    Rng rng = make_stream(static_cast<std::uint64_t>(seed), Stream::kInstance, {32});
    const int rows = 1 + seed % 4;
    const int cols = rows + seed % 2;
    std::vector<std::vector<double>> cost(static_cast<std::size_t>(rows), std::vector<double>(static_cast<std::size_t>(cols)));
    for (auto& r : cost) {
      for (auto& c : r) c = uniform(rng, -1.0, 3.0);
    }
    const std::vector<int> pick = solve_assignment(cost);
    double got = 0.0;
    for (int r = 0; r < rows; ++r) got += cost[static_cast<std::size_t>(r)][static_cast<std::size_t>(pick[static_cast<std::size_t>(r)])];
    std::vector<int> perm(static_cast<std::size_t>(cols));
    std::iota(perm.begin(), perm.end(), 0);
    double best = std::numeric_limits<double>::infinity();
    do {
      double c = 0.0;
      for (int r = 0; r < rows; ++r) c += cost[static_cast<std::size_t>(r)][static_cast<std::size_t>(perm[static_cast<std::size_t>(r)])];
      best = std::min(best, c);
    } while (std::next_permutation(perm.begin(), perm.end()));
    CHECK(got == doctest::Approx(best).epsilon(1e-12));
    std::vector<int> sorted = pick;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
  }
}

TEST_CASE("assignment helpers") {
  Rng rng = make_stream(2, Stream::kInstance, {33});
  const InterferenceGraph g = testing::random_group_graph(3, 3, rng);
  const PilotAssignment id = identity_assign(g, 3);
  CHECK(id.pilot_of == std::vector<int>{0, 1, 2, 0, 1, 2, 0, 1, 2});
  Rng a = make_stream(9, Stream::kAllocation);
  Rng b = make_stream(9, Stream::kAllocation);
  CHECK(max_tau_cut_assign(g, 3, a).pilot_of == max_tau_cut_assign(g, 3, b).pilot_of);
  CHECK_THROWS_AS(brute_force_cut_oracle(testing::random_group_graph(6, 4, rng), 4, 1e6), InstanceTooLarge);
  std::ostringstream os;
  write_assignment(os, id);
  CHECK(os.str().substr(0, 8) == "0 0\n1 1\n");
}
