#include "floatlink/plant.hpp"

#include <algorithm>
#include <cmath>

#include "floatlink/errors.hpp"

namespace floatlink {

namespace {

constexpr int kPackSize = 24;
constexpr double kTimeTol = 1e-9;

Vec3 saturate(const Vec3 & v, double bound) { return v.cwiseMax(-bound).cwiseMin(bound); }

}  // namespace

bool Disturbance::active(double t) const
{
  return t >= t_start - kTimeTol && t < t_start + duration - kTimeTol;
}

Vec3 tether_force(const Vec3 & p_a, const Vec3 & v_a, const Vec3 & p_b, const Vec3 & v_b, const TetherModel & model)
{
  const Vec3 d     = p_b - p_a;
  const double sep = d.norm();
  if (sep <= model.rest_length || sep == 0.0) { return Vec3::Zero(); }
  const Vec3 dir         = d / sep;
  const double stretch_rate = dir.dot(v_b - v_a);
  const double tension   = model.stiffness * (sep - model.rest_length) + model.damping * stretch_rate;
  return std::max(tension, 0.0) * dir;
}

Plant::Plant(PlantParams params) : params_(std::move(params))
{
  validate(params_.object);
  validate(params_.usv);
  validate(params_.uav);
  if (!(params_.uav_mass > 0.0)) { throw Error("UAV mass must be positive"); }
}

Eigen::VectorXd Plant::pack(const PlantState & s)
{
  Eigen::VectorXd x(kPackSize);
  x << s.object.eta, s.object.nu, s.usv.eta, s.usv.nu, s.uav.eta;
  return x;
}

PlantState Plant::unpack(const Eigen::VectorXd & x, double t)
{
  PlantState s;
  s.object.eta = x.segment<6>(0);
  s.object.nu  = x.segment<6>(6);
  s.usv.eta    = x.segment<3>(12);
  s.usv.nu     = x.segment<3>(15);
  s.uav.eta    = x.segment<6>(18);
  s.t          = t;
  return s;
}

TetherLoads Plant::tether_loads(const PlantState & s) const
{
  TetherLoads l;
  const Vec3 p_o = s.object.position();
  const Vec3 v_o = s.object.world_velocity();

  const Mat3 r_b     = rot_z(s.usv.heading()).m;
  const Vec3 arm     = r_b * params_.usv_attach;
  const Vec3 p_b     = Vec3(s.usv.eta(0), s.usv.eta(1), 0.0);
  const double yaw_rate = s.usv.nu(2);
  l.usv_anchor       = p_b + arm;
  const Vec3 v_anchor = s.usv.world_velocity() + Vec3(-yaw_rate * arm(1), yaw_rate * arm(0), 0.0);

  l.usv_on_object = tether_force(p_o, v_o, l.usv_anchor, v_anchor, params_.usv_tether);
  l.usv_length    = (l.usv_anchor - p_o).norm();

  if (params_.with_uav) {
    l.uav_on_object = tether_force(p_o, v_o, s.uav.position(), s.uav.velocity(), params_.uav_tether);
    l.uav_length    = (s.uav.position() - p_o).norm();
  }

  const Mat3 r_o = rotation_zyx(s.object.attitude()).m;
  l.object_wrench.head<3>() = r_o.transpose() * (l.usv_on_object + l.uav_on_object);
  return l;
}

Eigen::VectorXd Plant::derivative(const Eigen::VectorXd & x, const Vec2 & u_b, const Vec3 & u_u,
                                  const Vec3 & f_dist) const
{
  const PlantState s   = unpack(x, 0.0);
  const TetherLoads l  = tether_loads(s);
  const Mat3 r_o       = rotation_zyx(s.object.attitude()).m;

  // object: tether and disturbance forces act at the centre, quadratic drag in body axes
  Vec6 tau         = l.object_wrench;
  tau.head<3>()   += r_o.transpose() * f_dist;
  const Vec3 nu_lin = s.object.nu.head<3>();
  tau.head<3>()   -= params_.object_quadratic_drag.cwiseProduct(nu_lin.cwiseAbs()).cwiseProduct(nu_lin);
  const ObjectDerivative od = object_derivative(s.object, tau, params_.object);

  // USV: tether reaction at the stern eye
  const Vec3 f_usv_world = -l.usv_on_object;
  const Vec3 f_usv_body  = rot_z(s.usv.heading()).m.transpose() * f_usv_world;
  const Vec3 & arm       = params_.usv_attach;
  const Vec3 tau_ext(f_usv_body(0), f_usv_body(1), arm(0) * f_usv_body(1) - arm(1) * f_usv_body(0));
  const Vec2 thrust      = u_b.cwiseMax(-params_.usv.tau_max).cwiseMin(params_.usv.tau_max);
  const UsvDerivative ud = usv_derivative(s.usv, thrust, params_.usv, tau_ext);

  Eigen::VectorXd dx(kPackSize);
  dx << od.eta_dot, od.nu_dot, ud.eta_dot, ud.nu_dot, Vec6::Zero();

  if (params_.with_uav) {
    // the autopilot cancels the tether pull up to its thrust margin
    const Vec3 f_uav  = -l.uav_on_object;
    const Vec3 f_held = saturate(f_uav, params_.uav_max_hold_force);
    Vec6 uav_dot      = uav_derivative(s.uav, saturate(u_u, params_.uav.u_max), params_.uav);
    const Vec3 a_ext  = (f_uav - f_held) / params_.uav_mass;
    for (int axis = 0; axis < 3; ++axis) { uav_dot(2 * axis + 1) += a_ext(axis); }
    dx.segment<6>(18) = uav_dot;
  }
  return dx;
}

PlantState Plant::step(const PlantState & s, const Vec2 & u_b, const Vec3 & u_u,
                       const std::vector<Disturbance> & disturbances, double dt) const
{
  if (!(dt > 0.0) || dt > kMaxStep + 1e-12) { throw Error("plant step must lie in (0, 2 ms]"); }

  Vec3 f_dist = Vec3::Zero();
  for (const auto & d : disturbances) {
    if (d.active(s.t)) { f_dist += d.force; }
  }

  const Eigen::VectorXd x0 = pack(s);
  const Eigen::VectorXd x1 = rk4_step(
    [&](const Eigen::VectorXd & x) { return derivative(x, u_b, u_u, f_dist); }, x0, dt);

  if (!x1.allFinite() || x1.cwiseAbs().maxCoeff() > kBlowupMag) {
    throw NumericBlowup("plant state diverged at t = " + std::to_string(s.t));
  }

  PlantState out = unpack(x1, s.t + dt);
  for (int i = 3; i < 6; ++i) { out.object.eta(i) = wrap_angle(out.object.eta(i)); }
  out.usv.eta(2) = wrap_angle(out.usv.eta(2));
  return out;
}

double Plant::mechanical_energy(const PlantState & s) const
{
  const auto & p = params_;
  double e = 0.5 * s.object.nu.dot(p.object.total_mass() * s.object.nu);
  e += 0.5 * s.object.eta.dot(p.object.restoring * s.object.eta);
  e += 0.5 * s.usv.nu.dot(p.usv.total_mass() * s.usv.nu);

  const TetherLoads l = tether_loads(s);
  auto strain = [](const TetherModel & m, double len) {
    const double st = std::max(len - m.rest_length, 0.0);
    return 0.5 * m.stiffness * st * st;
  };
  e += strain(p.usv_tether, l.usv_length);
  if (p.with_uav) {
    e += 0.5 * p.uav_mass * s.uav.velocity().squaredNorm();
    e += strain(p.uav_tether, l.uav_length);
  }
  return e;
}

}  // namespace floatlink
