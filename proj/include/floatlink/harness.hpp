#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "floatlink/config.hpp"

namespace floatlink {

inline constexpr double kPlantStep   = 1e-3;
inline constexpr int kInnerDivider   = 10;   ///< plant steps per inner-loop update (100 Hz)
inline constexpr int kMpcDivider     = 100;  ///< plant steps per MPC update (10 Hz)
inline constexpr double kLogPeriod   = kPlantStep * kInnerDivider;

/// One 100 Hz sample of a closed-loop run.
struct LogRow
{
  double t = 0.0;
  Vec3 obj_p = Vec3::Zero();
  Vec3 obj_v = Vec3::Zero();  ///< world frame
  Vec3 usv_eta = Vec3::Zero();
  Vec3 usv_nu  = Vec3::Zero();
  Vec3 uav_p = Vec3::Zero();
  Vec3 uav_v = Vec3::Zero();
  Vec3 ref_p = Vec3::Zero();
  double distance = 0.0;  ///< planar object to reference
  double usv_tether_length = 0.0;
  double uav_tether_length = 0.0;
  double usv_tension = 0.0;
  double uav_tension = 0.0;
  double tau_port = 0.0;
  double tau_starboard = 0.0;
  Vec3 uav_accel = Vec3::Zero();
  int qp_iterations = 0;
  std::string qp_status = "none";
  double lift_force = 0.0;  ///< vertical world component of the tether wrench
  bool lift_ok = true;
  bool disturbance_active = false;
  bool usv_taut = true;
  bool uav_taut = true;
};

struct RunLog
{
  RobotMode mode = RobotMode::MultiRobot;
  std::vector<LogRow> rows;

  // not exported: wall clock and scheduler bookkeeping
  std::vector<double> solve_times;
  long plant_steps = 0;
  long inner_updates = 0;
  long mpc_updates = 0;
  long mpc_failures = 0;
};

class SimulationDiverged : public Error
{
public:
  SimulationDiverged(const std::string & what, RunLog partial) : Error(what), partial_(std::move(partial)) {}
  const RunLog & partial() const { return partial_; }

private:
  RunLog partial_;
};

/**
 * @brief Closed-loop run: plant at 1 kHz, inner loops at 100 Hz, MPC at 10 Hz.
 *
 * Rows are logged at every inner update and once more after the final plant
 * step. Throws SimulationDiverged with the partial log on numeric blow-up.
 */
RunLog run_experiment(const ExperimentConfig & cfg);

/// Initial plant state: object at the path start, USV ahead on the
/// tangent, UAV to the side at operating height.
PlantState initial_state(const MissionPlan & plan, const ExperimentConfig & cfg);

struct Metrics
{
  double mean_distance      = 0.0;  ///< after the skip window
  double mean_distance_full = 0.0;
  double max_distance       = 0.0;
  std::optional<double> recovery_time;
  std::optional<double> recovery_threshold;
  int slack_events          = 0;
  int lift_violations       = 0;
  double solve_time_p95     = 0.0;
  long mpc_failures         = 0;
};

double mean_distance(const RunLog & log, double skip);

/// Time from the end of the disturbance until the distance drops below
/// `threshold` and stays there for at least `hold` seconds.
std::optional<double> recovery_time(const RunLog & log, const Disturbance & disturbance, double threshold,
                                    double hold = 1.0);

/// Same, with the threshold set to the run's mean distance before the disturbance.
std::optional<double> recovery_time(const RunLog & log, const Disturbance & disturbance);

/// Episodes where a tether stays slack for longer than `min_duration`.
int count_slack_events(const RunLog & log, double min_duration = 0.5);

/// Episodes where the no-lifting condition fails.
int count_lift_violations(const RunLog & log);

/// Disturbance window reconstructed from the `disturbance_active` flags.
std::optional<Disturbance> logged_disturbance(const RunLog & log);

Metrics compute_metrics(const RunLog & log, double skip);

struct NormalFit
{
  double mu      = 0.0;
  double sigma   = 0.0;
  int n_samples  = 0;
};

/// Sample mean and n-1 standard deviation.
NormalFit fit_normal(const std::vector<double> & samples);

// ---------------------------------------------------------------------------
// files
// ---------------------------------------------------------------------------

inline constexpr std::string_view kCsvVersionLine = "# floatlink-runlog v1";

const std::vector<std::string> & csv_columns();

void write_csv(const RunLog & log, std::ostream & os);
RunLog read_csv(std::istream & is);

void export_csv(const RunLog & log, const std::string & path);
RunLog import_csv(const std::string & path);

std::string summary_text(const Metrics & m, RobotMode mode);
void export_summary(const Metrics & m, RobotMode mode, const std::string & path);

/// Two-column (t, value) files for distance and body speeds.
void export_plot_data(const RunLog & log, const std::string & dir);

// ---------------------------------------------------------------------------
// campaign
// ---------------------------------------------------------------------------

struct CampaignRun
{
  int trajectory_id   = 0;
  std::uint64_t seed  = 0;
  RobotMode mode      = RobotMode::MultiRobot;
  bool ok             = false;
  double mean_distance = 0.0;
  double run_time      = 0.0;  ///< wall clock [s]
  std::string error;
};

struct CampaignReport
{
  std::vector<CampaignRun> runs;  ///< sorted by (trajectory id, mode)
  NormalFit multi;
  NormalFit single;
  int pairs       = 0;
  int valid_pairs = 0;
  int multi_wins  = 0;

  double win_fraction() const { return valid_pairs > 0 ? static_cast<double>(multi_wins) / valid_pairs : 0.0; }
};

/// Paired multi/single runs on `pairs` random plans, in parallel.
CampaignReport run_campaign(const ExperimentConfig & base, int pairs, std::uint64_t base_seed);

/// Reference implementation running every experiment in sequence.
CampaignReport run_campaign_serial(const ExperimentConfig & base, int pairs, std::uint64_t base_seed);

/// Experiment configuration of one campaign run.
ExperimentConfig campaign_config(const ExperimentConfig & base, int trajectory_id, std::uint64_t base_seed,
                                 RobotMode mode);

std::string campaign_text(const CampaignReport & r);
void export_campaign(const CampaignReport & r, const std::string & dir);

}  // namespace floatlink
