#include "sbc/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

#include "sbc/channel.hpp"
#include "sbc/errors.hpp"
#include "sbc/link_sim.hpp"
#include "sbc/pilot_graph.hpp"
#include "sbc/signature.hpp"

namespace sbc {

namespace {

constexpr const char* kCsvHeader = "scheme,snr_db,trial,user,mse,sinr,se";

std::uint64_t scheme_label(Scheme s) { return static_cast<std::uint64_t>(s); }

PilotAssignment allocate(const ScenarioConfig& cfg, const GroupingResult& groups, const SignatureTable& sigs,
                         Scheme scheme, int trial) {
  Rng rng = make_stream(cfg.seed, Stream::kAllocation,
                        {static_cast<std::uint64_t>(trial), scheme_label(scheme)});
  if (cfg.allocation == AllocationMode::kMaxCut) {
    const InterferenceGraph graph = build_interference_graph(groups, sigs, cfg.edge_weight);
    return max_tau_cut_assign(graph, cfg.tau, rng);
  }
  std::vector<int> cell_of(static_cast<std::size_t>(cfg.n_cells * cfg.tau));
  for (std::size_t v = 0; v < cell_of.size(); ++v) cell_of[v] = static_cast<int>(v) / cfg.tau;
  const InterferenceGraph plain(std::move(cell_of), std::vector<double>(
      static_cast<std::size_t>(cfg.n_cells * cfg.tau) * static_cast<std::size_t>(cfg.n_cells * cfg.tau), 0.0));
  if (cfg.allocation == AllocationMode::kRandom) return random_assign(plain, cfg.tau, rng);
  return identity_assign(plain, cfg.tau);
}

GroupingResult group(const CellSignatures& serving, const ReuseCaps& caps, Scheme s) {
  return s == Scheme::kAgnostic ? group_power_agnostic(serving, caps) : group_power_aware(serving, caps);
}

std::string fmt17(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

std::vector<MetricsRow> run_trial(const ScenarioConfig& cfg, int trial, TrialStats* stats) {
  validate(cfg);
  const auto t = static_cast<std::uint64_t>(trial);

  GeometryParams gp;
  gp.n_cells = cfg.n_cells;
  gp.users_per_cell = cfg.K;
  gp.cell_radius_km = cfg.cell_radius_km;
  gp.min_distance_km = cfg.min_distance_km;
  gp.pathloss_exp = cfg.pathloss_exp;
  gp.pathloss_ref_km = cfg.effective_pathloss_ref_km();
  gp.angular_spread_rad = cfg.delta_deg * kPi / 180.0;
  Rng geo_rng = make_stream(cfg.seed, Stream::kGeometry, {t});
  const NetworkGeometry geom = generate_network(gp, geo_rng);

  const ArrayParams array{cfg.M, cfg.d_over_lambda, cfg.rays};
  const DftBasis basis(cfg.M);
  const std::uint64_t sig_seed = make_stream(cfg.seed, Stream::kSignatures, {t})();
  const SignatureTable sigs = extract_all_signatures(geom, basis, array, cfg.alpha, cfg.signature_draws, sig_seed,
                                                     cfg.allocation == AllocationMode::kMaxCut, cfg.estimator);
  const CellSignatures serving = serving_by_cell(sigs);
  const ReuseCaps caps = cfg.caps();

  // Proposed schemes first, then the baseline on the users of baseline_schedule.
  std::vector<Scheme> order;
  std::map<Scheme, Schedule> schedules;
  std::map<Scheme, int> overhead;
  std::map<Scheme, GroupingResult> groupings;
  auto grouping_for = [&](Scheme s) -> const GroupingResult& {
    auto it = groupings.find(s);
    if (it == groupings.end()) it = groupings.emplace(s, group(serving, caps, s)).first;
    return it->second;
  };
  for (Scheme s : cfg.schemes) {
    if (s == Scheme::kConventional) continue;
    const GroupingResult& g = grouping_for(s);
    const PilotAssignment a = allocate(cfg, g, sigs, s, trial);
    schedules[s] = make_proposed_schedule(g, a, sigs);
    overhead[s] = cfg.tau;
    order.push_back(s);
    if (stats) {
      for (const auto& cell : g.cells) {
        stats->shortfall_cells += cell.shortfall ? 1 : 0;
        for (const auto& grp : cell.groups) stats->degenerate_groups += grp.members.empty() ? 1 : 0;
      }
    }
  }
  if (cfg.has_scheme(Scheme::kConventional)) {
    schedules[Scheme::kConventional] =
        make_conventional_schedule(grouping_for(cfg.baseline_schedule), caps, cfg.M);
    overhead[Scheme::kConventional] = schedules[Scheme::kConventional].pilot_length;
    order.push_back(Scheme::kConventional);
  }

  std::vector<const Schedule*> all;
  for (Scheme s : order) all.push_back(&schedules[s]);
  const ChannelBank bank = draw_channels(geom, all, array, basis, cfg.seed, t);

  std::vector<MetricsRow> rows;
  for (std::size_t p = 0; p < cfg.snr_db.size(); ++p) {
    const double rho = std::pow(10.0, cfg.snr_db[p] / 10.0);
    for (Scheme s : cfg.schemes) {
      const Schedule& sched = schedules[s];
      Rng pilot_rng = make_stream(cfg.seed, Stream::kPilotNoise, {t, p, scheme_label(s)});
      Rng data_rng = make_stream(cfg.seed, Stream::kUplinkData, {t, p, scheme_label(s)});
      const TrainingOutcome tr = simulate_training(sched, bank, basis, rho, pilot_rng);
      const UplinkDraw up = draw_uplink(sched, cfg.M, data_rng);
      const DetectionOutcome det = detect_uplink(sched, bank, tr, basis, rho, up);
      if (stats) stats->skipped_users += det.skipped;
      const MetricsRecord rec = compute_metrics(sched, bank, tr, det, cfg.coherence, overhead[s]);
      for (const UserMetrics& m : rec.users) {
        rows.push_back({s, cfg.snr_db[p], trial, m.cell * cfg.K + m.user, m.mse, m.sinr, m.se});
      }
    }
  }
  return rows;
}

MetricsTable run_experiment(const ScenarioConfig& cfg, int threads) {
  validate(cfg);
  threads = std::clamp(threads, 1, cfg.trials);
  std::vector<std::vector<MetricsRow>> per_trial(static_cast<std::size_t>(cfg.trials));
  std::vector<TrialStats> stats(static_cast<std::size_t>(cfg.trials));
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mu;
  auto worker = [&] {
    for (int t = next++; t < cfg.trials; t = next++) {
      try {
        per_trial[static_cast<std::size_t>(t)] = run_trial(cfg, t, &stats[static_cast<std::size_t>(t)]);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mu);
        if (!failure) failure = std::current_exception();
        next = cfg.trials;
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (failure) std::rethrow_exception(failure);

  MetricsTable table;
  for (std::size_t t = 0; t < per_trial.size(); ++t) {
    table.rows.insert(table.rows.end(), per_trial[t].begin(), per_trial[t].end());
    table.stats.shortfall_cells += stats[t].shortfall_cells;
    table.stats.degenerate_groups += stats[t].degenerate_groups;
    table.stats.skipped_users += stats[t].skipped_users;
  }
  return table;
}

double percentile(std::vector<double> samples, double q) {
  if (samples.empty()) throw InvalidParameter("percentile: no samples");
  if (!(q >= 0.0 && q <= 100.0)) throw InvalidParameter("percentile: q must lie in [0, 100]");
  std::sort(samples.begin(), samples.end());
  const double pos = q / 100.0 * static_cast<double>(samples.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, samples.size() - 1);
  return samples[lo] + (pos - static_cast<double>(lo)) * (samples[hi] - samples[lo]);
}

std::vector<SummaryPoint> summarize(const MetricsTable& table) {
  struct Acc {
    double mse_sum = 0.0;
    long long users = 0;
    std::map<int, double> se_by_trial;
  };
  std::map<std::pair<int, double>, Acc> acc;
  for (const MetricsRow& r : table.rows) {
    Acc& a = acc[{static_cast<int>(r.scheme), r.snr_db}];
    a.mse_sum += r.mse;
    ++a.users;
    a.se_by_trial[r.trial] += r.se;
  }
  std::vector<SummaryPoint> out;
  for (const auto& [key, a] : acc) {
    SummaryPoint p;
    p.scheme = static_cast<Scheme>(key.first);
    p.snr_db = key.second;
    p.trials = static_cast<int>(a.se_by_trial.size());
    p.mean_mse = a.users ? a.mse_sum / static_cast<double>(a.users) : 0.0;
    for (const auto& [trial, se] : a.se_by_trial) p.network_se.push_back(se);
    double total = 0.0;
    for (double se : p.network_se) total += se;
    p.mean_network_se = p.network_se.empty() ? 0.0 : total / static_cast<double>(p.network_se.size());
    p.outage_se = p.network_se.empty() ? 0.0 : percentile(p.network_se, 5.0);
    out.push_back(std::move(p));
  }
  return out;
}

const SummaryPoint* find_point(const std::vector<SummaryPoint>& points, Scheme scheme, double snr_db) {
  for (const auto& p : points) {
    if (p.scheme == scheme && p.snr_db == snr_db) return &p;
  }
  return nullptr;
}

void write_csv(std::ostream& os, const MetricsTable& table) {
  os << kCsvHeader << '\n';
  for (const MetricsRow& r : table.rows) {
    os << to_string(r.scheme) << ',' << fmt17(r.snr_db) << ',' << r.trial << ',' << r.user << ',' << fmt17(r.mse)
       << ',' << fmt17(r.sinr) << ',' << fmt17(r.se) << '\n';
  }
}

void write_csv(const MetricsTable& table, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write CSV to '" + path + "'");
  write_csv(out, table);
  out.flush();
  if (!out) throw Error("write to '" + path + "' failed");
}

MetricsTable read_csv(std::istream& is) {
  MetricsTable table;
  std::string line;
  if (!std::getline(is, line) || line != kCsvHeader) throw Error("read_csv: missing or unexpected header");
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string item;
    while (std::getline(ss, item, ',')) f.push_back(item);
    if (f.size() != 7) throw Error("read_csv: line " + std::to_string(lineno) + " needs 7 fields");
    MetricsRow r;
    if (f[0] == "agnostic") r.scheme = Scheme::kAgnostic;
    else if (f[0] == "aware") r.scheme = Scheme::kAware;
    else if (f[0] == "conventional") r.scheme = Scheme::kConventional;
    else throw Error("read_csv: unknown scheme '" + f[0] + "'");
    try {
      r.snr_db = std::stod(f[1]);
      r.trial = std::stoi(f[2]);
      r.user = std::stoi(f[3]);
      r.mse = std::stod(f[4]);
      r.sinr = std::stod(f[5]);
      r.se = std::stod(f[6]);
    } catch (const std::exception&) {
      throw Error("read_csv: malformed number on line " + std::to_string(lineno));
    }
    table.rows.push_back(r);
  }
  return table;
}

void write_summary(std::ostream& os, const std::vector<SummaryPoint>& points, ExperimentKind kind) {
  char buf[160];
  if (kind == ExperimentKind::kMse) {
    os << "scheme,snr_db,trials,mean_mse\n";
    for (const auto& p : points) {
      std::snprintf(buf, sizeof buf, "%s,%g,%d,%.6e\n", to_string(p.scheme).c_str(), p.snr_db, p.trials, p.mean_mse);
      os << buf;
    }
  } else if (kind == ExperimentKind::kSe) {
    os << "scheme,snr_db,trials,mean_network_se,outage5_se\n";
    for (const auto& p : points) {
      std::snprintf(buf, sizeof buf, "%s,%g,%d,%.6f,%.6f\n", to_string(p.scheme).c_str(), p.snr_db, p.trials,
                    p.mean_network_se, p.outage_se);
      os << buf;
    }
  } else {
    os << "scheme,snr_db,quantile,network_se\n";
    for (const auto& p : points) {
      for (int q = 0; q <= 100; q += 5) {
        std::snprintf(buf, sizeof buf, "%s,%g,%.2f,%.6f\n", to_string(p.scheme).c_str(), p.snr_db, q / 100.0,
                      percentile(p.network_se, q));
        os << buf;
      }
    }
  }
}

}  // namespace sbc
