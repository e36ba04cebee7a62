#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "floatlink/dynamics.hpp"

namespace floatlink {

/// Unilateral spring-damper standing in for an inextensible tether.
struct TetherModel
{
  double stiffness   = 2e4;
  double damping     = 200.0;
  double rest_length = 4.0;
};

/// Impulsive force on the object, active for t in [t_start, t_start + duration).
struct Disturbance
{
  Vec3 force     = Vec3::Zero();
  double t_start = 0.0;
  double duration = 0.5;

  bool active(double t) const;
};

/// Quantities of the truth simulator that the controller's model does not see.
struct PlantParams
{
  ObjectParams object = sphere_object();
  UsvParams usv       = wamv_usv();
  UavParams uav;

  TetherModel usv_tether{2e4, 200.0, 4.0};
  TetherModel uav_tether{2e4, 200.0, 5.0};
  Vec3 usv_attach{-1.0, 0.0, 0.0};  ///< tether eye on the USV, body frame

  /// Quadratic drag of the object per translational body axis [N s^2/m^2].
  Vec3 object_quadratic_drag{25.0, 25.0, 25.0};

  double uav_mass = 3.5;
  /// Largest external force per axis the UAV autopilot can hold against [N].
  double uav_max_hold_force = 25.0;

  bool with_uav = true;
};

struct PlantState
{
  ObjectState object;
  UsvState usv;
  UavState uav;
  double t = 0.0;
};

/// Classical fourth-order Runge-Kutta step of x' = f(t, x).
template<typename Vector, typename F>
Vector rk4_step(F && f, const Vector & x, double t, double dt)
{
  const Vector k1 = f(t, x);
  const Vector k2 = f(t + 0.5 * dt, Vector(x + 0.5 * dt * k1));
  const Vector k3 = f(t + 0.5 * dt, Vector(x + 0.5 * dt * k2));
  const Vector k4 = f(t + dt, Vector(x + dt * k3));
  return x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

/// Autonomous overload.
template<typename Vector, typename F>
Vector rk4_step(F && f, const Vector & x, double dt)
{
  return rk4_step(
    [&f](double, const Vector & y) { return f(y); }, x, 0.0, dt);
}

/// Force on body a from a tether connecting a and b. Zero while slack, never pushes.
Vec3 tether_force(const Vec3 & p_a, const Vec3 & v_a, const Vec3 & p_b, const Vec3 & v_b, const TetherModel & model);

/// Tether loads at one instant.
struct TetherLoads
{
  Vec3 usv_on_object = Vec3::Zero();  ///< world frame
  Vec3 uav_on_object = Vec3::Zero();  ///< world frame
  Vec3 usv_anchor    = Vec3::Zero();  ///< attachment point on the USV, world frame
  double usv_length  = 0.0;           ///< current separation object <-> USV eye
  double uav_length  = 0.0;           ///< current separation object <-> UAV
  /// Tether wrench on the object expressed in its body frame.
  Vec6 object_wrench = Vec6::Zero();
};

/// Nonlinear truth simulator of the object, USV and UAV.
class Plant
{
public:
  static constexpr double kMaxStep   = 2e-3;
  static constexpr double kBlowupMag = 1e6;

  explicit Plant(PlantParams params = {});

  const PlantParams & params() const { return params_; }

  /// One RK4 step. Thrust and acceleration commands are saturated to the
  /// actuator bounds; disturbances are gated on the state time at the start
  /// of the step. Throws NumericBlowup when any entry leaves +-1e6.
  PlantState step(const PlantState & s, const Vec2 & u_b, const Vec3 & u_u,
                  const std::vector<Disturbance> & disturbances, double dt) const;

  TetherLoads tether_loads(const PlantState & s) const;

  /// Kinetic energy of all bodies (added mass included), tether strain
  /// energy and hydrostatic potential.
  double mechanical_energy(const PlantState & s) const;

  static Eigen::VectorXd pack(const PlantState & s);
  static PlantState unpack(const Eigen::VectorXd & x, double t);

private:
  Eigen::VectorXd derivative(const Eigen::VectorXd & x, const Vec2 & u_b, const Vec3 & u_u, const Vec3 & f_dist) const;

  PlantParams params_;
};

}  // namespace floatlink
