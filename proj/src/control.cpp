#include "floatlink/control.hpp"

#include <algorithm>
#include <cmath>

#include "floatlink/errors.hpp"

namespace floatlink {

UsvCommand thrust_allocation(double tau_surge, double tau_yaw, double d_tau)
{
  if (!(d_tau > 0.0)) { throw Error("thrust_allocation: motor separation must be positive"); }
  return {tau_surge / 2.0 + tau_yaw / d_tau, tau_surge / 2.0 - tau_yaw / d_tau};
}

UsvCommand saturate(const UsvCommand & cmd, double tau_max)
{
  const double peak = std::max(std::abs(cmd.tau_port), std::abs(cmd.tau_starboard));
  if (peak <= tau_max) { return cmd; }
  const double k = tau_max / peak;
  return {cmd.tau_port * k, cmd.tau_starboard * k};
}

UsvCommand usv_reference_controller(const UsvState & state, const UsvReference & ref, const UsvGains & gains,
                                    const UsvParams & params, const Vec2 & ff_thrust)
{
  const YawAngle psi = state.heading();
  const Vec3 pos_err(ref.eta(0) - state.eta(0), ref.eta(1) - state.eta(1), 0.0);
  const double surge_err = to_vessel_parallel(pos_err, psi)(0);
  const double yaw_err   = wrap_angle(ref.eta(2) - state.eta(2));

  const double ff_surge = ff_thrust(0) + ff_thrust(1);
  const double ff_yaw   = 0.5 * params.d_tau * (ff_thrust(0) - ff_thrust(1));

  const double tau_x   = gains.kp_surge * surge_err + gains.kd_surge * (ref.nu(0) - state.nu(0)) + ff_surge;
  const double tau_psi = gains.kp_yaw * yaw_err + gains.kd_yaw * (ref.nu(2) - state.nu(2)) + ff_yaw;
  return saturate(thrust_allocation(tau_x, tau_psi, params.d_tau), params.tau_max);
}

UavCommand uav_reference_controller(const UavState & state, const UavReference & ref, const UavGains & gains,
                                    double u_max, const Vec3 & ff_accel)
{
  const Vec3 a = gains.kp * (ref.p - state.position()) + gains.kd * (ref.v - state.velocity()) + ff_accel;
  return {a.cwiseMax(-u_max).cwiseMin(u_max)};
}

}  // namespace floatlink
