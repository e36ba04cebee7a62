#include "floatlink/dynamics.hpp"

#include <cmath>
#include <numbers>

#include "floatlink/errors.hpp"

namespace floatlink {

using namespace layout;

ObjectParams sphere_object(double radius, double mass)
{
  const double volume = 4.0 / 3.0 * std::numbers::pi * radius * radius * radius;
  const double added  = 0.5 * kWaterDensity * volume;
  const double rot_i  = 0.4 * mass * radius * radius;

  ObjectParams p;
  p.mass = mass;
  p.inertia.diagonal() << mass, mass, mass, rot_i, rot_i, rot_i;
  p.added_mass.diagonal() << added, added, added, 0.0, 0.0, 0.0;
  p.damping.diagonal() << 15.0, 15.0, 30.0, 0.5, 0.5, 0.5;
  // heave: waterplane stiffness; roll/pitch: small bottom-weighted righting arm
  const double heave = kWaterDensity * kGravity * std::numbers::pi * radius * radius;
  const double tilt  = mass * kGravity * 0.05;
  p.restoring.diagonal() << 0.0, 0.0, heave, tilt, tilt, 0.0;
  return p;
}

UsvParams wamv_usv()
{
  UsvParams p;
  p.inertia.diagonal() << 180.0, 180.0, 120.0;
  p.added_mass = 0.2 * p.inertia;
  p.damping.diagonal() << 50.0, 100.0, 300.0;
  p.d_tau   = 2.4;
  p.tau_max = 250.0;
  return p;
}

namespace {

bool is_symmetric(const Eigen::MatrixXd & m)
{
  return (m - m.transpose()).norm() <= 1e-9 * std::max(1.0, m.norm());
}

bool is_spd(const Eigen::MatrixXd & m)
{
  if (!is_symmetric(m)) { return false; }
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  return llt.info() == Eigen::Success;
}

bool is_psd(const Eigen::MatrixXd & m)
{
  if (!is_symmetric(m)) { return false; }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (m + m.transpose()));
  return es.eigenvalues().minCoeff() >= -1e-9 * std::max(1.0, m.norm());
}

}  // namespace

void validate(const ObjectParams & p)
{
  if (!(p.mass > 0.0)) { throw Error("object mass must be positive"); }
  if (!is_spd(p.total_mass())) { throw SingularMass("object M_I + M_A is not symmetric positive definite"); }
  if (!is_psd(p.damping)) { throw Error("object damping must be positive semi-definite"); }
  if (!is_psd(p.restoring)) { throw Error("object restoring matrix must be positive semi-definite"); }
  for (int i : {0, 1, 5}) {
    if (p.restoring.row(i).norm() != 0.0 || p.restoring.col(i).norm() != 0.0) {
      throw Error("object restoring matrix must vanish on surge/sway/yaw");
    }
  }
}

void validate(const UsvParams & p)
{
  if (std::abs(p.total_mass().determinant()) < 1e-12) { throw SingularMass("USV M_I + M_A is singular"); }
  if (!(p.d_tau > 0.0)) { throw Error("USV motor separation must be positive"); }
  if (!(p.tau_max > 0.0)) { throw Error("USV thrust bound must be positive"); }
}

void validate(const UavParams & p)
{
  if (!(p.a1 > 0.0) || !(p.b1 > 0.0)) { throw Error("UAV model gains must be positive"); }
  if (!(p.u_max > 0.0) || !(p.v_max > 0.0)) { throw Error("UAV bounds must be positive"); }
}

void validate(const TetherSpec & t)
{
  if (!(t.l_usv > 0.0) || !(t.l_uav > 0.0)) { throw Error("tether lengths must be positive"); }
  if (!(t.epsilon > 0.0) || !(t.epsilon < t.l_uav)) { throw Error("tether relaxation must lie in (0, l_uav)"); }
}

Vec3 ObjectState::world_velocity() const
{
  return rotation_zyx(attitude()).m * nu.head<3>();
}

Vec3 UsvState::world_velocity() const
{
  const Vec3 v = rot_z(heading()).m * Vec3(nu(0), nu(1), 0.0);
  return {v(0), v(1), 0.0};
}

UavState UavState::from(const Vec3 & p, const Vec3 & v)
{
  UavState s;
  s.eta << p(0), v(0), p(1), v(1), p(2), v(2);
  return s;
}

ObjectDerivative object_derivative(const ObjectState & s, const Vec6 & tau_o, const ObjectParams & p)
{
  const Mat6 j = euler_to_transform(s.attitude());
  ObjectDerivative d;
  d.eta_dot = j * s.nu;
  d.nu_dot  = p.total_mass().ldlt().solve(tau_o - p.damping * s.nu - p.restoring * s.eta);
  return d;
}

TetherWrench tether_wrench(const Vec3 & uav_accel, const Vec3 & usv_accel, const ObjectParams & p)
{
  if (usv_accel(2) != 0.0) { throw Error("USV acceleration must be planar"); }
  const Mat6 m = p.total_mass();
  Vec6 au      = Vec6::Zero();
  Vec6 ab      = Vec6::Zero();
  au.head<3>() = uav_accel;
  ab.head<3>() = usv_accel;
  TetherWrench w;
  w.uav   = m * au;
  w.usv   = m * ab;
  w.total = w.uav + w.usv;
  return w;
}

bool check_no_lifting(const Vec6 & tau_o, const Vec6 & eta_o, const ObjectParams & p)
{
  const Mat6 j  = euler_to_transform({eta_o(3), eta_o(4), eta_o(5)});
  const double lift = (j * tau_o)(2);
  return lift < p.mass * p.g_mag;
}

bool check_taut(const Vec6 & force, double threshold) { return force.head<3>().norm() > threshold; }

Eigen::Matrix<double, 3, 2> usv_input_matrix(double d_tau)
{
  Eigen::Matrix<double, 3, 2> b;
  b << 1.0, 1.0,
       0.0, 0.0,
       d_tau / 2.0, -d_tau / 2.0;
  return b;
}

UsvDerivative usv_derivative(const UsvState & s, const Vec2 & u_b, const UsvParams & p, const Vec3 & tau_ext)
{
  UsvDerivative d;
  d.eta_dot = rot_z(s.heading()).m * s.nu;
  d.nu_dot  = p.total_mass().lu().solve(usv_input_matrix(p.d_tau) * u_b + tau_ext - p.damping * s.nu);
  return d;
}

UavSystem uav_system(const UavParams & p)
{
  UavSystem sys{Mat6::Zero(), Eigen::Matrix<double, 6, 3>::Zero()};
  for (int axis = 0; axis < 3; ++axis) {
    sys.a(2 * axis, 2 * axis + 1) = p.a1;
    sys.b(2 * axis + 1, axis)     = p.b1;
  }
  return sys;
}

Vec6 uav_derivative(const UavState & s, const Vec3 & u_u, const UavParams & p)
{
  const UavSystem sys = uav_system(p);
  return sys.a * s.eta + sys.b * u_u;
}

namespace {

CoupledLinearModel assemble(const ObjectParams & obj, const UsvParams & usv, const UavParams * uav)
{
  const Mat3 m_o = obj.total_mass().topLeftCorner<3, 3>();
  const Mat3 d_o = obj.damping.topLeftCorner<3, 3>();
  const Mat3 g_o = obj.restoring.topLeftCorner<3, 3>();
  const Mat3 m_b = usv.total_mass();

  Eigen::FullPivLU<Mat3> lu_o(m_o);
  Eigen::FullPivLU<Mat3> lu_b(m_b);
  if (!lu_o.isInvertible()) { throw SingularMass("object translational mass is singular"); }
  if (!lu_b.isInvertible()) { throw SingularMass("USV mass is singular"); }
  const Mat3 m_o_inv = lu_o.inverse();
  const Mat3 m_b_inv = lu_b.inverse();

  CoupledLinearModel model;
  auto & a = model.a;
  auto & b = model.b;

  // USV rows: eta_b' = nu_b, nu_b' = M_b^-1 (B_b u_b - D_b nu_b)
  a.block<3, 3>(kUsvEta, kUsvNu)         = Mat3::Identity();
  a.block<3, 3>(kUsvNu, kUsvNu)          = -m_b_inv * usv.damping;
  b.block<3, 2>(kUsvNu, kThrustPort)     = m_b_inv * usv_input_matrix(usv.d_tau);

  // UAV rows
  if (uav != nullptr) {
    const UavSystem sys                    = uav_system(*uav);
    a.block<6, 6>(kUav, kUav)              = sys.a;
    b.block<6, 3>(kUav, kUavInput)         = sys.b;
  }

  // object rows: p' = v, v' = M^-1(-D v - G p) + a_uav + a_usv, where the
  // M M^-1 around the tether accelerations cancels
  a.block<3, 3>(kObjPos, kObjVel) = Mat3::Identity();
  a.block<3, 3>(kObjVel, kObjVel) = -m_o_inv * d_o;
  a.block<3, 3>(kObjVel, kObjPos) = -m_o_inv * g_o;

  // planar USV acceleration (surge, sway, 0) taken from its own rows
  a.block<2, 18>(kObjVel, 0) += a.block<2, 18>(kUsvNu, 0);
  b.block<2, 5>(kObjVel, 0) += b.block<2, 5>(kUsvNu, 0);

  if (uav != nullptr) {
    for (int axis = 0; axis < 3; ++axis) {
      a.row(kObjVel + axis) += a.row(uav_vel(axis));
      b.row(kObjVel + axis) += b.row(uav_vel(axis));
    }
  }
  return model;
}

}  // namespace

CoupledLinearModel assemble_coupled_model(const ObjectParams & obj, const UsvParams & usv, const UavParams & uav)
{
  return assemble(obj, usv, &uav);
}

CoupledLinearModel assemble_single_robot_model(const ObjectParams & obj, const UsvParams & usv)
{
  return assemble(obj, usv, nullptr);
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd> discretize_rk4(const Eigen::MatrixXd & a, const Eigen::MatrixXd & b,
                                                           double dt)
{
  if (!(dt > 0.0)) { throw Error("discretization step must be positive"); }
  if (a.rows() != a.cols() || b.rows() != a.rows()) { throw DimensionMismatch("discretize: inconsistent A/B"); }

  // A_d = sum_{k=0}^{4} (A dt)^k / k!,  B_d = sum_{k=0}^{3} A^k dt^(k+1) / (k+1)! B
  const Eigen::Index n = a.rows();
  Eigen::MatrixXd ad   = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd psi  = Eigen::MatrixXd::Identity(n, n) * dt;
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k <= 4; ++k) {
    term = term * a * (dt / k);
    ad += term;
    if (k <= 3) { psi += term * (dt / (k + 1)); }
  }
  return {ad, psi * b};
}

DiscreteModel discretize(const CoupledLinearModel & model, double dt)
{
  auto [ad, bd] = discretize_rk4(model.a, model.b, dt);
  DiscreteModel out;
  out.a  = ad;
  out.b  = bd;
  out.dt = dt;
  return out;
}

}  // namespace floatlink
