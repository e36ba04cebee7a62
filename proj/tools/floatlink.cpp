#include <cstdlib>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "floatlink/errors.hpp"
#include "floatlink/harness.hpp"

namespace fs = std::filesystem;
using namespace floatlink;

namespace {

constexpr int kExitDiverged = 2;
constexpr int kExitConfig   = 3;

std::string default_out_dir()
{
  const char * env = std::getenv("FLOATLINK_OUT_DIR");
  return env && *env ? env : "out";
}

void make_dir(const std::string & dir)
{
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) { throw IoFailure("cannot create '" + dir + "': " + ec.message()); }
}

void write_run(const RunLog & log, double skip, const std::string & out)
{
  make_dir(out);
  export_csv(log, (fs::path(out) / "run.csv").string());
  export_plot_data(log, (fs::path(out) / "plot").string());
  if (!log.rows.empty()) {
    const Metrics m = compute_metrics(log, skip);
    export_summary(m, log.mode, (fs::path(out) / "summary.txt").string());
    std::cout << summary_text(m, log.mode);
  }
}

int cmd_run(const std::string & config, const std::string & mode, std::string out)
{
  ExperimentConfig cfg = load_experiment_config(config);
  if (!mode.empty()) { cfg.mode = parse_mode(mode); }
  if (out.empty()) { out = default_out_dir(); }
  try {
    const RunLog log = run_experiment(cfg);
    write_run(log, cfg.metrics_skip, out);
  } catch (const SimulationDiverged & e) {
    std::cerr << "simulation diverged: " << e.what() << '\n';
    make_dir(out);
    export_csv(e.partial(), (fs::path(out) / "run.csv").string());
    return kExitDiverged;
  }
  return 0;
}

int cmd_campaign(const std::string & config, int pairs, std::string out, std::optional<std::uint64_t> seed,
                 bool serial)
{
  const ExperimentConfig cfg = load_experiment_config(config);
  if (out.empty()) { out = default_out_dir(); }
  const std::uint64_t base_seed = seed.value_or(cfg.seed);
  const CampaignReport r = serial ? run_campaign_serial(cfg, pairs, base_seed) : run_campaign(cfg, pairs, base_seed);
  export_campaign(r, out);
  std::cout << campaign_text(r);
  for (const auto & run : r.runs) {
    if (!run.ok) { std::cerr << "trajectory " << run.trajectory_id << " (" << to_string(run.mode) << "): " << run.error << '\n'; }
  }
  return 0;
}

int cmd_replay(const std::string & path, bool metrics, double skip)
{
  const RunLog log = import_csv(path);
  if (metrics) {
    std::cout << summary_text(compute_metrics(log, skip), log.mode);
  } else {
    std::cout << "rows = " << log.rows.size() << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"floatlink: towed floating object with a USV and a UAV"};
  app.require_subcommand(1);

  std::string config, mode, out, log_path;
  int pairs   = 30;
  bool metrics = false, serial = false;
  double skip = ExperimentConfig{}.metrics_skip;
  std::optional<std::uint64_t> seed;

  auto * run = app.add_subcommand("run", "closed-loop run of one mission");
  run->add_option("--config", config, "config file")->required();
  run->add_option("--mode", mode, "multi | single")->check(CLI::IsMember({"multi", "single"}));
  run->add_option("--out", out, "output directory");

  auto * campaign = app.add_subcommand("campaign", "paired multi/single runs on random plans");
  campaign->add_option("--config", config, "base config file")->required();
  campaign->add_option("--pairs", pairs, "number of random plans")->check(CLI::PositiveNumber);
  campaign->add_option("--out", out, "output directory");
  campaign->add_option("--seed", seed, "base seed (default: config seed)");
  campaign->add_flag("--serial", serial, "run experiments one after another");

  auto * replay = app.add_subcommand("replay", "read a run log");
  replay->add_option("--log", log_path, "run.csv")->required();
  replay->add_flag("--metrics", metrics, "recompute metrics");
  replay->add_option("--skip", skip, "transient window [s]");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError & e) {
    return app.exit(e);
  }

  try {
    if (*run) { return cmd_run(config, mode, out); }
    if (*campaign) { return cmd_campaign(config, pairs, out, seed, serial); }
    return cmd_replay(log_path, metrics, skip);
  } catch (const ConfigError & e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception & e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
