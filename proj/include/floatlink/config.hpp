#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "floatlink/control.hpp"
#include "floatlink/mission.hpp"
#include "floatlink/mpc.hpp"
#include "floatlink/plant.hpp"

namespace floatlink {

/// Flat `key = value` text with dotted keys. `#` starts a comment.
class ConfigMap
{
public:
  static ConfigMap parse(std::istream & is);
  static ConfigMap parse_string(const std::string & text);
  static ConfigMap load(const std::string & path);

  bool has(const std::string & key) const { return values_.count(key) != 0; }
  void set(const std::string & key, const std::string & value) { values_[key] = value; }

  std::string get_string(const std::string & key) const;
  double get_double(const std::string & key) const;
  long long get_int(const std::string & key) const;
  std::uint64_t get_uint64(const std::string & key) const;
  bool get_bool(const std::string & key) const;
  std::vector<double> get_doubles(const std::string & key) const;

  /// Keys starting with `prefix`, in sorted order.
  std::vector<std::string> keys_with_prefix(const std::string & prefix) const;

  /// Keys never read through a getter.
  std::vector<std::string> unused_keys() const;

  const std::map<std::string, std::string> & values() const { return values_; }

private:
  const std::string & raw(const std::string & key) const;

  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
};

/// Named groups of the diagonal MPC weights.
struct MpcWeights
{
  double object_position = 50.0;
  double object_along    = 50.0;  ///< object position along the USV heading
  double object_velocity = 1.0;
  double usv_position    = 50.0;  ///< planar
  double usv_heading     = 1000.0;
  double usv_velocity    = 0.1;
  double uav_position    = 50.0;  ///< planar
  double uav_altitude    = 50.0;
  double uav_velocity    = 0.1;
  double thrust          = 1e-3;
  double uav_input       = 1.0;
  double terminal_scale  = 10.0;
};

/// Object reference height change at a given time (used to provoke lifting).
struct VerticalStep
{
  double t_start = 0.0;
  double height  = 0.0;
};

struct ExperimentConfig
{
  std::string mission = "circle";  ///< circle | line | disturbance | random | custom
  MissionPlan custom_plan;         ///< used when mission == custom
  double speed = 1.0;
  std::optional<double> duration;  ///< overrides the plan duration
  std::optional<VerticalStep> vertical_step;
  bool start_underway = false;  ///< bodies start at the reference velocity instead of at rest

  RobotMode mode     = RobotMode::MultiRobot;
  std::uint64_t seed = 0;

  double object_radius = 0.25;
  ModelParams model;
  PlantParams plant;
  TetherSpec tether;

  int horizon     = 30;
  double mpc_dt   = 0.1;
  MpcWeights weights;
  int tether_relax_steps = 10;
  SolverSettings solver = MpcConfig::defaults().solver;

  UsvGains usv_gains;
  UavGains uav_gains;
  GuidanceParams guidance;
  RandomPlanSpec random;

  double metrics_skip = 10.0;

  /// Builds the controller configuration from the bundles above.
  MpcConfig mpc_config() const;

  /// Plan to run, with duration override, disturbances and vertical step applied.
  MissionPlan plan() const;

  /// Truth-plant parameters consistent with the model bundles and mode.
  PlantParams plant_params() const;

  /// Guidance with the UAV radius implied by the tether length and height.
  GuidanceParams guidance_params() const;

  /// Throws ConfigError on any inconsistency.
  void validate() const;
};

/// Applies every recognised key. Unknown keys raise ConfigError.
ExperimentConfig parse_experiment_config(const ConfigMap & map, ExperimentConfig base = {});
ExperimentConfig load_experiment_config(const std::string & path);

/// Writes a config that parses back to the same values.
std::string to_text(const ExperimentConfig & cfg);

RobotMode parse_mode(const std::string & s);

}  // namespace floatlink
