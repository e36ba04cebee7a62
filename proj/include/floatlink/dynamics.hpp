#pragma once

#include <Eigen/Dense>

#include "floatlink/frames.hpp"

namespace floatlink {

using Vec2 = Eigen::Vector2d;

inline constexpr double kGravity     = 9.81;
inline constexpr double kWaterDensity = 1000.0;

/// Tether tension below this magnitude counts as slack [N].
inline constexpr double kSlackThreshold = 1e-6;

// ---------------------------------------------------------------------------
// parameter bundles
// ---------------------------------------------------------------------------

/// Floating object: M = M_I + M_A acts on nu = (u, v, w, p, q, r).
struct ObjectParams
{
  double mass  = 5.0;
  Mat6 inertia = Mat6::Zero();     ///< rigid-body M_I
  Mat6 added_mass = Mat6::Zero();  ///< hydrodynamic M_A
  Mat6 damping = Mat6::Zero();     ///< linear D
  Mat6 restoring = Mat6::Zero();   ///< linear G
  double g_mag = kGravity;

  Mat6 total_mass() const { return inertia + added_mass; }
};

/// Sphere of the given radius and mass floating half-submerged.
ObjectParams sphere_object(double radius = 0.25, double mass = 5.0);

/// 3-DOF surge/sway/yaw vessel with two stern thrusters.
struct UsvParams
{
  Mat3 inertia    = Mat3::Zero();
  Mat3 added_mass = Mat3::Zero();
  Mat3 damping    = Mat3::Zero();
  double d_tau    = 2.4;    ///< port/starboard motor separation [m]
  double tau_max  = 250.0;  ///< per-motor thrust bound [N]

  Mat3 total_mass() const { return inertia + added_mass; }
};

/// Defaults in the size class of a WAM-V catamaran.
UsvParams wamv_usv();

/// Decoupled double integrator per axis: x' = a1 v, v' = b1 u.
struct UavParams
{
  double a1    = 1.0;
  double b1    = 1.0;
  double u_max = 5.0;  ///< per-axis acceleration command bound [m/s^2]
  double v_max = 5.0;  ///< per-axis velocity bound [m/s]
};

struct TetherSpec
{
  double l_usv   = 4.0;
  double l_uav   = 5.0;
  double epsilon = 0.3;
};

void validate(const ObjectParams & p);
void validate(const UsvParams & p);
void validate(const UavParams & p);
void validate(const TetherSpec & t);

// ---------------------------------------------------------------------------
// states
// ---------------------------------------------------------------------------

/// eta = (x, y, z, phi, theta, psi) in W; nu = (u, v, w, p, q, r) in the body frame.
struct ObjectState
{
  Vec6 eta = Vec6::Zero();
  Vec6 nu  = Vec6::Zero();

  Vec3 position() const { return eta.head<3>(); }
  EulerAngles attitude() const { return {eta(3), eta(4), eta(5)}; }
  /// Linear velocity expressed in W.
  Vec3 world_velocity() const;
};

/// eta = (x, y, psi) in W; nu = (u, v, r) in the body frame.
struct UsvState
{
  Vec3 eta = Vec3::Zero();
  Vec3 nu  = Vec3::Zero();

  YawAngle heading() const { return YawAngle(eta(2)); }
  /// Planar velocity in W, z = 0.
  Vec3 world_velocity() const;
};

/// eta = (x, u, y, v, z, w): position/velocity pairs interleaved per axis.
struct UavState
{
  Vec6 eta = Vec6::Zero();

  Vec3 position() const { return {eta(0), eta(2), eta(4)}; }
  Vec3 velocity() const { return {eta(1), eta(3), eta(5)}; }
  static UavState from(const Vec3 & p, const Vec3 & v);
};

// ---------------------------------------------------------------------------
// per-body models
// ---------------------------------------------------------------------------

struct ObjectDerivative
{
  Vec6 eta_dot;
  Vec6 nu_dot;
};

/// eta' = J_o(Theta) nu, nu' = M^-1 (tau - D nu - G eta). Coriolis terms are dropped.
ObjectDerivative object_derivative(const ObjectState & s, const Vec6 & tau_o, const ObjectParams & p);

struct TetherWrench
{
  Vec6 uav;    ///< F_u
  Vec6 usv;    ///< F_b
  Vec6 total;  ///< tau_o = F_u + F_b
};

/// Wrenches the robots impose on the object when it is carried along with
/// their accelerations. `usv_accel` must be planar.
TetherWrench tether_wrench(const Vec3 & uav_accel, const Vec3 & usv_accel, const ObjectParams & p);

/// True while the vertical world component of the body-frame wrench stays
/// strictly below the object's weight.
bool check_no_lifting(const Vec6 & tau_o, const Vec6 & eta_o, const ObjectParams & p);

/// True iff the translational part of `force` is larger than `threshold`.
bool check_taut(const Vec6 & force, double threshold = kSlackThreshold);

struct UsvDerivative
{
  Vec3 eta_dot;
  Vec3 nu_dot;
};

/// Thrust map B_b: (port, starboard) -> (surge force, sway force, yaw moment).
Eigen::Matrix<double, 3, 2> usv_input_matrix(double d_tau);

/// eta' = J_b(psi) nu, nu' = (M_I + M_A)^-1 (B_b u_b + tau_ext - D nu).
UsvDerivative usv_derivative(const UsvState & s, const Vec2 & u_b, const UsvParams & p,
                             const Vec3 & tau_ext = Vec3::Zero());

struct UavSystem
{
  Mat6 a;
  Eigen::Matrix<double, 6, 3> b;
};

UavSystem uav_system(const UavParams & p);

Vec6 uav_derivative(const UavState & s, const Vec3 & u_u, const UavParams & p);

// ---------------------------------------------------------------------------
// coupled model
// ---------------------------------------------------------------------------

/// Index layout of the stacked state and input vectors.
namespace layout {
inline constexpr int kObjPos = 0;   ///< p_o (3)
inline constexpr int kObjVel = 3;   ///< v_o (3)
inline constexpr int kUsvEta = 6;   ///< (x_b, y_b, psi_b)
inline constexpr int kUsvNu  = 9;   ///< (u_b, v_b, r_b)
inline constexpr int kUav    = 12;  ///< (x, u, y, v, z, w)
inline constexpr int kNx     = 18;

inline constexpr int kThrustPort      = 0;
inline constexpr int kThrustStarboard = 1;
inline constexpr int kUavInput        = 2;  ///< (u_x, u_y, u_z)
inline constexpr int kNu              = 5;

/// Row of the UAV position along axis 0..2.
constexpr int uav_pos(int axis) { return kUav + 2 * axis; }
constexpr int uav_vel(int axis) { return kUav + 2 * axis + 1; }
}  // namespace layout

using StateVec = Eigen::Matrix<double, layout::kNx, 1>;
using InputVec = Eigen::Matrix<double, layout::kNu, 1>;
using StateMat = Eigen::Matrix<double, layout::kNx, layout::kNx>;
using InputMat = Eigen::Matrix<double, layout::kNx, layout::kNu>;

/// Continuous linear model x' = A x + B u of the towed system in the
/// vessel-parallel frame.
struct CoupledLinearModel
{
  StateMat a = StateMat::Zero();
  InputMat b = InputMat::Zero();
};

struct DiscreteModel
{
  StateMat a = StateMat::Identity();
  InputMat b = InputMat::Zero();
  double dt  = 0.1;
};

/// Throws SingularMass if either mass matrix cannot be inverted.
CoupledLinearModel assemble_coupled_model(const ObjectParams & obj, const UsvParams & usv,
                                          const UavParams & uav);

/// Variant without the UAV: its state rows are frozen and its input columns removed.
CoupledLinearModel assemble_single_robot_model(const ObjectParams & obj, const UsvParams & usv);

/// Fourth-order truncation of exp(A dt) and the matching input integral.
DiscreteModel discretize(const CoupledLinearModel & model, double dt);

/// Same expansion on arbitrary square matrices.
std::pair<Eigen::MatrixXd, Eigen::MatrixXd> discretize_rk4(const Eigen::MatrixXd & a,
                                                           const Eigen::MatrixXd & b, double dt);

}  // namespace floatlink
