#pragma once

#include "floatlink/dynamics.hpp"
#include "floatlink/mpc.hpp"

namespace floatlink {

struct UsvCommand
{
  double tau_port      = 0.0;
  double tau_starboard = 0.0;

  Vec2 as_vector() const { return {tau_port, tau_starboard}; }
};

struct UavCommand
{
  Vec3 accel = Vec3::Zero();
};

struct UsvGains
{
  double kp_surge = 60.0;
  double kd_surge = 120.0;
  double kp_yaw   = 200.0;
  double kd_yaw   = 150.0;
};

struct UavGains
{
  double kp = 4.0;
  double kd = 4.0;
};

/// Inverts B_b on the surge and yaw rows.
UsvCommand thrust_allocation(double tau_surge, double tau_yaw, double d_tau);

/// Scales both thrusts by the same factor until each fits in +-tau_max.
UsvCommand saturate(const UsvCommand & cmd, double tau_max);

/// Surge/yaw PD on body-frame errors plus a thrust feed-forward, allocated
/// and saturated. Sway is left uncontrolled.
UsvCommand usv_reference_controller(const UsvState & state, const UsvReference & ref, const UsvGains & gains,
                                    const UsvParams & params, const Vec2 & ff_thrust = Vec2::Zero());

/// PD on position/velocity error plus acceleration feed-forward, clamped per axis.
UavCommand uav_reference_controller(const UavState & state, const UavReference & ref, const UavGains & gains,
                                    double u_max, const Vec3 & ff_accel = Vec3::Zero());

}  // namespace floatlink
