// sbcsim: command-line front end for the uplink training simulator.
//
//   sbcsim simulate <config> [--out path] [--seed n] [--trials n]
//                            [--experiment mse|se|cdf] [--threads n]
//                            [--summary path] [--set key=value]...

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "sbc/config.hpp"
#include "sbc/errors.hpp"
#include "sbc/experiment.hpp"
#include "sbc/version.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Spatial-basis copilot grouping and pilot allocation simulator"};
  app.set_version_flag("--version", std::string("sbcsim ") + sbc::kVersion);
  app.require_subcommand(1);

  auto* sim = app.add_subcommand("simulate", "Run a Monte Carlo experiment from a config file");
  std::string config_path;
  std::string out_path = "-";
  std::string summary_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> trials;
  std::string experiment;
  int threads = 1;
  std::vector<std::string> overrides;
  sim->add_option("config", config_path, "Scenario file (key=value lines)")->required()->check(CLI::ExistingFile);
  sim->add_option("--out,-o", out_path, "CSV output path, '-' for stdout");
  sim->add_option("--seed", seed, "Override the seed key");
  sim->add_option("--trials", trials, "Override the trials key")->check(CLI::PositiveNumber);
  sim->add_option("--experiment", experiment, "Summary kind")->check(CLI::IsMember({"mse", "se", "cdf"}));
  sim->add_option("--threads", threads, "Worker threads over trials")->check(CLI::PositiveNumber);
  sim->add_option("--summary", summary_path, "Also write a summary table to this path ('-' for stderr)");
  sim->add_option("--set", overrides, "Override any config key, as key=value");

  CLI11_PARSE(app, argc, argv);

  try {
    sbc::ScenarioConfig cfg = sbc::parse_config_file(config_path);
    for (const std::string& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw sbc::ConfigError("--set expects key=value, got '" + kv + "'");
      sbc::apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (seed) sbc::apply_setting(cfg, "seed", std::to_string(*seed));
    if (trials) sbc::apply_setting(cfg, "trials", std::to_string(*trials));
    if (!experiment.empty()) sbc::apply_setting(cfg, "experiment", experiment);
    sbc::validate(cfg);

    const auto t0 = std::chrono::steady_clock::now();
    const sbc::MetricsTable table = sbc::run_experiment(cfg, threads);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (out_path == "-") {
      sbc::write_csv(std::cout, table);
    } else {
      sbc::write_csv(table, out_path);
    }
    if (!summary_path.empty()) {
      const auto points = sbc::summarize(table);
      if (summary_path == "-") {
        sbc::write_summary(std::cerr, points, cfg.experiment);
      } else {
        std::ofstream s(summary_path);
        if (!s) throw sbc::Error("cannot write summary to '" + summary_path + "'");
        sbc::write_summary(s, points, cfg.experiment);
      }
    }
    std::cerr << "sbcsim: " << cfg.trials << " trials, " << table.rows.size() << " rows in " << secs << " s";
    if (table.stats.shortfall_cells || table.stats.skipped_users) {
      std::cerr << " (" << table.stats.shortfall_cells << " short cells, " << table.stats.skipped_users
                << " skipped users)";
    }
    std::cerr << '\n';
  } catch (const sbc::ConfigError& e) {
    std::cerr << "sbcsim: config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "sbcsim: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
