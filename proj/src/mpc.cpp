#include "floatlink/mpc.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

namespace floatlink {

using namespace layout;

namespace {

bool is_finite(const Eigen::VectorXd & v) { return v.allFinite(); }

Vec3 rotate_to_p(const Vec3 & v, YawAngle psi) { return to_vessel_parallel(v, psi); }
Vec3 rotate_to_w(const Vec3 & v, YawAngle psi) { return from_vessel_parallel(v, psi); }

void rotate_block(StateVec & x, int ix, int iy, YawAngle psi, bool to_p)
{
  const Vec3 v(x(ix), x(iy), 0.0);
  const Vec3 r = to_p ? rotate_to_p(v, psi) : rotate_to_w(v, psi);
  x(ix) = r(0);
  x(iy) = r(1);
}

/// Rotates every planar vector slot of a stacked state; psi and body rates stay.
StateVec rotate_state(StateVec x, YawAngle psi, bool to_p)
{
  rotate_block(x, kObjPos, kObjPos + 1, psi, to_p);
  rotate_block(x, kObjVel, kObjVel + 1, psi, to_p);
  rotate_block(x, kUsvEta, kUsvEta + 1, psi, to_p);
  rotate_block(x, uav_pos(0), uav_pos(1), psi, to_p);
  rotate_block(x, uav_vel(0), uav_vel(1), psi, to_p);
  return x;
}

}  // namespace

std::string_view to_string(RobotMode m)
{
  return m == RobotMode::MultiRobot ? "multi" : "single";
}

MpcConfig MpcConfig::defaults(const ModelParams & params)
{
  MpcConfig c;
  c.q = Eigen::VectorXd::Zero(kNx);
  c.q.segment<3>(kObjPos).setConstant(50.0);
  c.q.segment<3>(kObjVel).setConstant(1.0);
  // robot poses follow the guidance references; the object is carried along
  c.q(kUsvEta) = c.q(kUsvEta + 1) = 50.0;
  c.q(kUsvEta + 2) = 1000.0;
  c.q.segment<3>(kUsvNu).setConstant(0.1);
  c.q(uav_pos(0)) = c.q(uav_pos(1)) = c.q(uav_pos(2)) = 50.0;
  for (int axis = 0; axis < 3; ++axis) { c.q(uav_vel(axis)) = 0.1; }
  c.s = 10.0 * c.q;

  c.r = Eigen::VectorXd::Zero(kNu);
  c.r(kThrustPort) = c.r(kThrustStarboard) = 1e-3;
  c.r.segment<3>(kUavInput).setConstant(1.0);

  c.x_min = Eigen::VectorXd::Constant(kNx, -kInf);
  c.x_max = Eigen::VectorXd::Constant(kNx, kInf);
  for (int axis = 0; axis < 3; ++axis) {
    c.x_min(uav_vel(axis)) = -params.uav.v_max;
    c.x_max(uav_vel(axis)) = params.uav.v_max;
  }
  c.u_min = Eigen::VectorXd::Zero(kNu);
  c.u_max = Eigen::VectorXd::Zero(kNu);
  c.u_min.head<2>().setConstant(-params.usv.tau_max);
  c.u_max.head<2>().setConstant(params.usv.tau_max);
  c.u_min.segment<3>(kUavInput).setConstant(-params.uav.u_max);
  c.u_max.segment<3>(kUavInput).setConstant(params.uav.u_max);

  c.solver.eps_abs = 1e-4;
  c.solver.eps_rel = 1e-4;
  c.solver.polish  = true;
  return c;
}

void MpcConfig::validate(int nx, int nu) const
{
  if (n < 2) { throw ConfigError("mpc: horizon must have at least 2 steps"); }
  if (!(dt > 0.0)) { throw ConfigError("mpc: dt must be positive"); }
  auto check_size = [](const Eigen::VectorXd & v, int len, const char * name) {
    if (v.size() != len) {
      throw ConfigError(std::string("mpc: ") + name + " has " + std::to_string(v.size()) + " entries, expected " +
                        std::to_string(len));
    }
  };
  check_size(q, nx, "Q");
  check_size(s, nx, "S");
  check_size(r, nu, "R");
  check_size(x_min, nx, "x_min");
  check_size(x_max, nx, "x_max");
  check_size(u_min, nu, "u_min");
  check_size(u_max, nu, "u_max");
  if ((q.array() < 0.0).any() || (s.array() < 0.0).any() || (r.array() < 0.0).any()) {
    throw ConfigError("mpc: weights must be non-negative");
  }
  if ((x_min.array() > x_max.array()).any() || (u_min.array() > u_max.array()).any()) {
    throw ConfigError("mpc: lower bound exceeds upper bound");
  }
  if (tether_relax_steps < 0) { throw ConfigError("mpc: tether_relax_steps must be non-negative"); }
  try {
    floatlink::validate(tether);
  } catch (const ConfigError &) {
    throw;
  } catch (const Error & e) {
    throw ConfigError(std::string("mpc: ") + e.what());
  }
  solver.validate();
}

TetherHalfPlanes linearize_tether(const Vec3 & uav_pos, const Vec3 & obj_pos, const TetherSpec & spec)
{
  const double dz  = uav_pos(2) - obj_pos(2);
  const double rr  = spec.l_uav * spec.l_uav - dz * dz;
  if (!(rr > 0.0)) { throw DegenerateGeometry("tether cannot span the height difference"); }
  const Eigen::Vector2d d = (uav_pos - obj_pos).head<2>();
  const double sep = d.norm();
  if (!(sep > 1e-6)) { throw DegenerateGeometry("UAV is directly above the object"); }

  const double r = std::sqrt(rr);
  TetherHalfPlanes h;
  h.normal = d / sep;
  h.b_min  = r - spec.epsilon;
  h.b_max  = r + spec.epsilon;
  return h;
}

SparseQP build_qp(const Eigen::MatrixXd & a, const Eigen::MatrixXd & b, const Eigen::VectorXd & x0,
                  const ReferenceWindow & ref, const MpcConfig & cfg, const TetherHalfPlanes * tether,
                  const TetherIndices & idx)
{
  const int nx = static_cast<int>(a.rows());
  const int nu = static_cast<int>(b.cols());
  if (a.cols() != nx || b.rows() != nx || x0.size() != nx) { throw DimensionMismatch("build_qp: model/state size"); }
  cfg.validate(nx, nu);
  const int n = cfg.n;
  if (static_cast<int>(ref.x_r.size()) != n) { throw DimensionMismatch("build_qp: reference window length != n"); }
  for (const auto & xr : ref.x_r) {
    if (xr.size() != nx) { throw DimensionMismatch("build_qp: reference entry size"); }
  }
  if (!is_finite(x0)) { throw Error("build_qp: initial state is not finite"); }

  const QpLayout lay{n, nx, nu};
  const int nv = lay.num_vars();
  const int m  = lay.num_constraints(tether != nullptr);

  SparseQP qp;
  qp.q = Eigen::VectorXd::Zero(nv);
  qp.l = Eigen::VectorXd::Zero(m);
  qp.u = Eigen::VectorXd::Zero(m);

  // cost
  std::vector<Triplet> pt;
  for (int k = 0; k < n; ++k) {
    const Eigen::VectorXd & w = (k == n - 1) ? cfg.s : cfg.q;
    for (int i = 0; i < nx; ++i) {
      if (w(i) == 0.0) { continue; }
      const int c = lay.state(k, i);
      pt.emplace_back(c, c, w(i));
      qp.q(c) = -w(i) * ref.x_r[static_cast<std::size_t>(k)](i);
    }
  }
  for (int k = 0; k < n - 1; ++k) {
    for (int j = 0; j < nu; ++j) {
      if (cfg.r(j) != 0.0) { pt.emplace_back(lay.input(k, j), lay.input(k, j), cfg.r(j)); }
    }
  }
  qp.p.resize(nv, nv);
  qp.p.setFromTriplets(pt.begin(), pt.end());

  // constraints
  std::vector<Triplet> at;
  int row = 0;
  for (int i = 0; i < nx; ++i, ++row) {
    at.emplace_back(row, lay.state(0, i), 1.0);
    qp.l(row) = qp.u(row) = x0(i);
  }
  for (int k = 0; k < n - 1; ++k) {
    for (int i = 0; i < nx; ++i, ++row) {
      at.emplace_back(row, lay.state(k + 1, i), 1.0);
      for (int j = 0; j < nx; ++j) {
        if (a(i, j) != 0.0) { at.emplace_back(row, lay.state(k, j), -a(i, j)); }
      }
      for (int j = 0; j < nu; ++j) {
        if (b(i, j) != 0.0) { at.emplace_back(row, lay.input(k, j), -b(i, j)); }
      }
    }
  }
  for (int k = 0; k < n; ++k) {
    for (int i = 0; i < nx; ++i, ++row) {
      at.emplace_back(row, lay.state(k, i), 1.0);
      qp.l(row) = cfg.x_min(i);
      qp.u(row) = cfg.x_max(i);
      if (k == 0) {
        qp.l(row) = std::min(qp.l(row), x0(i));
        qp.u(row) = std::max(qp.u(row), x0(i));
      }
    }
  }
  for (int k = 0; k < n - 1; ++k) {
    for (int j = 0; j < nu; ++j, ++row) {
      at.emplace_back(row, lay.input(k, j), 1.0);
      qp.l(row) = cfg.u_min(j);
      qp.u(row) = cfg.u_max(j);
    }
  }
  if (tether != nullptr) {
    const Eigen::Vector2d & nrm = tether->normal;
    const double d0 = nrm(0) * (x0(idx.uav_x) - x0(idx.obj_x)) + nrm(1) * (x0(idx.uav_y) - x0(idx.obj_y));
    const double below = std::max(0.0, tether->b_min - d0);
    const double above = std::max(0.0, d0 - tether->b_max);
    for (int k = 0; k < n; ++k) {
      double frac = 0.0;
      if (k == 0) {
        frac = 1.0;
      } else if (cfg.tether_relax_steps > 0) {
        frac = std::max(0.0, 1.0 - static_cast<double>(k) / cfg.tether_relax_steps);
      }
      for (int side = 0; side < 2; ++side, ++row) {
        at.emplace_back(row, lay.state(k, idx.uav_x), nrm(0));
        at.emplace_back(row, lay.state(k, idx.uav_y), nrm(1));
        at.emplace_back(row, lay.state(k, idx.obj_x), -nrm(0));
        at.emplace_back(row, lay.state(k, idx.obj_y), -nrm(1));
        if (side == 0) {
          qp.l(row) = tether->b_min - below * frac;
          qp.u(row) = kInf;
        } else {
          qp.l(row) = -kInf;
          qp.u(row) = tether->b_max + above * frac;
        }
      }
    }
  }
  qp.a.resize(m, nv);
  qp.a.setFromTriplets(at.begin(), at.end());
  return qp;
}

SparseQP build_qp(const DiscreteModel & model, const StateVec & x0, const ReferenceWindow & ref,
                  const MpcConfig & cfg, const TetherHalfPlanes * tether)
{
  return build_qp(Eigen::MatrixXd(model.a), Eigen::MatrixXd(model.b), Eigen::VectorXd(x0), ref, cfg, tether);
}

MpcOutput extract_trajectories(const QPSolution & sol, const QpLayout & lay, YawAngle psi_b)
{
  if (sol.status != QPStatus::Solved && sol.status != QPStatus::MaxIter) {
    throw Error("extract_trajectories: solution carries no usable iterate");
  }
  if (lay.nx != kNx || lay.nu != kNu || sol.x.size() != lay.num_vars()) {
    throw DimensionMismatch("extract_trajectories: layout does not match the solution");
  }
  MpcOutput out;
  out.qp_status     = sol.status;
  out.iterations    = sol.iterations;
  out.max_violation = sol.primal_res;
  out.usv_traj.reserve(static_cast<std::size_t>(lay.n));
  out.uav_traj.reserve(static_cast<std::size_t>(lay.n));

  for (int k = 0; k < lay.n; ++k) {
    const StateVec x = rotate_state(sol.x.segment<kNx>(lay.state(k, 0)), psi_b, false);
    out.object_traj.emplace_back(x.segment<3>(kObjPos));
    UsvReference ub;
    ub.eta = x.segment<3>(kUsvEta);
    ub.nu  = x.segment<3>(kUsvNu);
    out.usv_traj.push_back(ub);
    UavReference ua;
    ua.p = Vec3(x(uav_pos(0)), x(uav_pos(1)), x(uav_pos(2)));
    ua.v = Vec3(x(uav_vel(0)), x(uav_vel(1)), x(uav_vel(2)));
    out.uav_traj.push_back(ua);
  }
  for (int k = 0; k < lay.n - 1; ++k) {
    InputVec u = sol.x.segment<kNu>(lay.input(k, 0));
    u.segment<3>(kUavInput) = rotate_to_w(u.segment<3>(kUavInput), psi_b);
    out.inputs.push_back(u);
  }
  out.first_inputs = out.inputs.front();
  return out;
}

StateVec to_vessel_frame(const ObjectState & obj, const UsvState & usv, const UavState & uav)
{
  StateVec x;
  x.segment<3>(kObjPos) = obj.position();
  x.segment<3>(kObjVel) = obj.world_velocity();
  x.segment<3>(kUsvEta) = usv.eta;
  x.segment<3>(kUsvNu)  = usv.nu;
  x.segment<6>(kUav)    = uav.eta;
  return rotate_state(x, usv.heading(), true);
}

namespace {

// QP coordinates: vessel-parallel axes with the origin on the object and the
// heading measured from the current USV heading. Keeps the linear cost small.
struct QpFrame
{
  Vec3 origin = Vec3::Zero();  ///< world
  double psi  = 0.0;
};

void shift_positions(StateVec & x, const Vec3 & o_p, double psi, double sign)
{
  x.segment<3>(kObjPos) += sign * o_p;
  x.segment<2>(kUsvEta) += sign * o_p.head<2>();
  x(kUsvEta + 2) += sign * psi;
  for (int axis = 0; axis < 3; ++axis) { x(uav_pos(axis)) += sign * o_p(axis); }
}

StateVec to_qp(const StateVec & x_p, const QpFrame & f)
{
  StateVec x = x_p;
  shift_positions(x, rotate_to_p(f.origin, YawAngle(f.psi)), f.psi, -1.0);
  return x;
}

StateVec from_qp(const StateVec & x_q, const QpFrame & f)
{
  StateVec x = x_q;
  shift_positions(x, rotate_to_p(f.origin, YawAngle(f.psi)), f.psi, 1.0);
  return x;
}

/// Re-expresses a stored solution in a new QP frame.
Eigen::VectorXd reframe(const Eigen::VectorXd & z, const QpLayout & lay, const QpFrame & from, const QpFrame & to)
{
  Eigen::VectorXd out = z;
  for (int k = 0; k < lay.n; ++k) {
    StateVec w = rotate_state(from_qp(z.segment<kNx>(lay.state(k, 0)), from), YawAngle(from.psi), false);
    out.segment<kNx>(lay.state(k, 0)) = to_qp(rotate_state(w, YawAngle(to.psi), true), to);
  }
  for (int k = 0; k + 1 < lay.n; ++k) {
    const Vec3 a = rotate_to_w(z.segment<3>(lay.input(k, kUavInput)), YawAngle(from.psi));
    out.segment<3>(lay.input(k, kUavInput)) = rotate_to_p(a, YawAngle(to.psi));
  }
  return out;
}

}  // namespace

StateVec reference_to_vessel_frame(const Eigen::VectorXd & x_world, YawAngle psi_b)
{
  if (x_world.size() != kNx) { throw DimensionMismatch("reference entry must have 18 entries"); }
  StateVec x       = rotate_state(x_world, psi_b, true);
  x(kUsvEta + 2)   = psi_b.rad() + wrap_angle(x_world(kUsvEta + 2) - psi_b.rad());
  return x;
}

MpcController::MpcController(ModelParams params, MpcConfig cfg, RobotMode mode)
    : params_(std::move(params)), cfg_(std::move(cfg)), mode_(mode), solver_(cfg_.solver)
{
  validate(params_.object);
  validate(params_.usv);
  validate(params_.uav);
  cfg_.validate(kNx, kNu);

  if (mode_ == RobotMode::SingleRobot) {
    model_ = discretize(assemble_single_robot_model(params_.object, params_.usv), cfg_.dt);
    for (int i = kUav; i < kNx; ++i) { cfg_.q(i) = cfg_.s(i) = 0.0; }
    cfg_.u_min.segment<3>(kUavInput).setZero();
    cfg_.u_max.segment<3>(kUavInput).setZero();
  } else {
    model_ = discretize(assemble_coupled_model(params_.object, params_.usv, params_.uav), cfg_.dt);
  }
}

MpcOutput MpcController::control_step(const ObjectState & obj, const UsvState & usv, const UavState & uav,
                                      const ReferenceWindow & ref_world)
{
  if (static_cast<int>(ref_world.x_r.size()) != cfg_.n) {
    throw DimensionMismatch("control_step: reference window length != n");
  }
  const YawAngle psi = usv.heading();
  const QpFrame frame{obj.position(), psi.rad()};
  StateVec x0        = to_vessel_frame(obj, usv, uav);
  if (!x0.allFinite()) { throw Error("control_step: state is not finite"); }
  x0(kUsvEta + 2) = psi.rad();
  x0              = to_qp(x0, frame);

  ReferenceWindow ref;
  ref.x_r.reserve(ref_world.x_r.size());
  for (const auto & xr : ref_world.x_r) { ref.x_r.emplace_back(to_qp(reference_to_vessel_frame(xr, psi), frame)); }

  std::optional<TetherHalfPlanes> tether;
  if (mode_ == RobotMode::MultiRobot) {
    try {
      TetherHalfPlanes world = linearize_tether(uav.position(), obj.position(), cfg_.tether);
      last_tether_           = world;
    } catch (const DegenerateGeometry &) {
      if (!last_tether_) { throw; }
    }
    tether         = *last_tether_;
    const Vec3 nrm = rotate_to_p(Vec3(tether->normal(0), tether->normal(1), 0.0), psi);
    tether->normal = nrm.head<2>();
  }

  const QpLayout lay{cfg_.n, kNx, kNu};
  if (warm_ && warm_->x.size() == lay.num_vars()) { warm_->x = reframe(warm_->x, lay, QpFrame{warm_origin_, warm_psi_}, frame); }

  const auto t0 = std::chrono::steady_clock::now();
  QPSolution sol;
  int fallback = 0;
  for (; fallback < 3; ++fallback) {
    if (fallback > 0 && !tether) { break; }
    MpcConfig cfg = cfg_;
    // a disturbed object can leave the band faster than the model can bring it back
    if (fallback == 1) { cfg.tether_relax_steps = std::numeric_limits<int>::max(); }
    const bool with_tether = tether && fallback < 2;
    const SparseQP qp      = build_qp(model_, x0, ref, cfg, with_tether ? &*tether : nullptr);
    sol                    = solver_.solve(qp, warm_ ? &*warm_ : nullptr);
    if (sol.status != QPStatus::PrimalInfeasible) { break; }
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  if (sol.status == QPStatus::PrimalInfeasible || sol.status == QPStatus::DualInfeasible) {
    warm_.reset();
    MpcOutput partial;
    partial.qp_status  = sol.status;
    partial.iterations = sol.iterations;
    partial.solve_time = elapsed;
    throw SolverFailed(sol.status, std::move(partial));
  }

  QPSolution world = sol;
  for (int k = 0; k < lay.n; ++k) {
    world.x.segment<kNx>(lay.state(k, 0)) = from_qp(sol.x.segment<kNx>(lay.state(k, 0)), frame);
  }
  MpcOutput out       = extract_trajectories(world, lay, psi);
  out.solve_time      = elapsed;
  out.tether_fallback = std::min(fallback, 2);

  // shift the plan one step for the next warm start
  WarmStart w;
  w.x = sol.x;
  const int n = cfg_.n;
  for (int k = 0; k + 1 < n; ++k) { w.x.segment<kNx>(lay.state(k, 0)) = sol.x.segment<kNx>(lay.state(k + 1, 0)); }
  for (int k = 0; k + 2 < n; ++k) { w.x.segment<kNu>(lay.input(k, 0)) = sol.x.segment<kNu>(lay.input(k + 1, 0)); }
  w.y   = sol.y;
  if (out.tether_fallback == 2) { w.y.resize(0); }
  warm_       = std::move(w);
  warm_origin_ = frame.origin;
  warm_psi_    = frame.psi;
  return out;
}

MpcOutput control_step(const ObjectState & obj, const UsvState & usv, const UavState & uav,
                       const ReferenceWindow & ref_world, const MpcConfig & cfg, const ModelParams & params,
                       RobotMode mode)
{
  MpcController ctrl(params, cfg, mode);
  return ctrl.control_step(obj, usv, uav, ref_world);
}

}  // namespace floatlink
