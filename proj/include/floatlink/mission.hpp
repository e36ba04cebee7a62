#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "floatlink/mpc.hpp"
#include "floatlink/plant.hpp"

namespace floatlink {

struct LineSegment
{
  Vec2 start = Vec2::Zero();
  Vec2 end   = Vec2::UnitX();
};

/// Positive sweep runs counterclockwise.
struct ArcSegment
{
  Vec2 center        = Vec2::Zero();
  double radius      = 1.0;
  double angle_start = 0.0;
  double angle_sweep = 0.0;
};

struct PathSegment
{
  std::variant<LineSegment, ArcSegment> shape;
  double speed = 1.0;

  double length() const;
  double duration() const { return length() / speed; }
  Vec2 point_at(double s) const;    ///< s = arc length from the segment start
  Vec2 tangent_at(double s) const;  ///< unit tangent
  Vec2 start_point() const { return point_at(0.0); }
  Vec2 end_point() const { return point_at(length()); }
};

struct MissionPlan
{
  std::vector<PathSegment> segments;
  std::vector<Disturbance> disturbances;
  double duration = 0.0;

  double path_time() const;
  /// Throws ConfigError on broken continuity, bad radii/speeds or a short duration.
  void validate() const;
};

struct RefSample
{
  Vec3 p    = Vec3::Zero();
  Vec3 v    = Vec3::Zero();
  double t  = 0.0;
};

/// Constant-speed sample; holds the final point with zero velocity past the end.
RefSample sample_reference(const MissionPlan & plan, double t);

/// Entries k = 1..n sample the plan at t + k dt. Only the object slots are filled.
ReferenceWindow build_reference_window(const MissionPlan & plan, double t, int n, double dt);

/// Heading and formation references for the robots.
struct GuidanceParams
{
  double tow_length = 5.0;   ///< object to USV centre along the path
  double lookahead  = 4.0;   ///< extra line-of-sight distance ahead of the USV
  double uav_radius = 4.0;   ///< planar object-UAV distance
  double uav_height = 3.0;
  double uav_side   = 1.0;   ///< +1 right of the path, -1 left; fixed side or fallback
  bool adaptive_side = true;  ///< keep the UAV on the outside of upcoming arcs
  double side_switch_time = 4.0;  ///< time to swing behind the object to the other side
  double uav_standoff = 0.05;  ///< planar distance beyond the taut-tether radius
  /// USV lateral shift away from the UAV side, so both tethers stay loaded on straights
  double usv_counter_offset = 1.0;
};

/**
 * @brief Direction of the UAV offset relative to the path heading at time t
 * (counterclockwise, -pi/2 is the right-hand side).
 *
 * With adaptive sides the UAV takes the outside of each arc; lines inherit
 * the next arc's side. Side changes rotate through the back of the object
 * during the `side_switch_time` before the arc starts. The result is
 * continuous in t but not wrapped.
 */
double uav_offset_angle(const MissionPlan & plan, double t, const GuidanceParams & g);

/**
 * @brief Fills the robot slots of a reference window.
 *
 * The USV heading is a line of sight from the USV, shifted along the
 * reference, to a path point one tow length plus lookahead ahead of the
 * object reference. The UAV sits to one side of the object reference at
 * operating height. Velocities follow the object reference.
 */
void apply_robot_guidance(ReferenceWindow & window, const MissionPlan & plan, double t, double dt,
                          const Vec2 & usv_pos, const GuidanceParams & g);

/// `circle`, `line` and `disturbance` at the given reference speed.
std::map<std::string, MissionPlan> builtin_missions(double speed = 1.0);

struct RandomPlanSpec
{
  int min_segments  = 2;
  int max_segments  = 5;
  double min_length = 20.0;
  double max_length = 60.0;
  double min_radius = 10.0;
  double max_radius = 30.0;
  double speed      = 1.0;
  double settle_time = 10.0;  ///< extra duration past the path end
};

/// G1-continuous chain of lines and arcs starting at the origin heading +x.
MissionPlan random_plan(std::uint64_t seed, const RandomPlanSpec & spec = {});

/// Seed of trajectory `id` in a campaign stream.
std::uint64_t trajectory_seed(std::uint64_t base_seed, int id);

}  // namespace floatlink
