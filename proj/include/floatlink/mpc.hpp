#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "floatlink/dynamics.hpp"
#include "floatlink/errors.hpp"
#include "floatlink/qp.hpp"

namespace floatlink {

enum class RobotMode { MultiRobot, SingleRobot };

std::string_view to_string(RobotMode m);

/// Model-side parameters the controller linearizes.
struct ModelParams
{
  ObjectParams object = sphere_object();
  UsvParams usv       = wamv_usv();
  UavParams uav;
};

struct MpcConfig
{
  int n     = 30;
  double dt = 0.1;

  /// Diagonal weights on the state error, the input and the terminal error.
  Eigen::VectorXd q, r, s;
  Eigen::VectorXd x_min, x_max;
  Eigen::VectorXd u_min, u_max;

  TetherSpec tether;
  /// Steps over which a band violation of the measured geometry is phased out.
  int tether_relax_steps = 10;
  SolverSettings solver;

  /// Defaults for the 18-state towed system.
  static MpcConfig defaults(const ModelParams & params = {});

  /// Throws ConfigError on inconsistent sizes, negative weights or crossed bounds.
  void validate(int nx, int nu) const;
};

/// Per-step state references x_r[1..n].
struct ReferenceWindow
{
  std::vector<Eigen::VectorXd> x_r;
};

/// r - eps <= normal'(p_uav - p_obj) <= r + eps on planar positions.
struct TetherHalfPlanes
{
  Eigen::Vector2d normal = Eigen::Vector2d::UnitX();
  double b_min = 0.0;
  double b_max = 0.0;
};

/// Linearizes the annulus of admissible planar UAV positions around the
/// current radial ray. Throws DegenerateGeometry when the tether cannot
/// reach the height difference or the planar separation vanishes.
TetherHalfPlanes linearize_tether(const Vec3 & uav_pos, const Vec3 & obj_pos, const TetherSpec & spec);

/// Column positions of the decision vector (x_1..x_n, u_1..u_{n-1}).
struct QpLayout
{
  int n  = 0;
  int nx = 0;
  int nu = 0;

  int state(int k, int i) const { return k * nx + i; }  ///< k = 0..n-1
  int input(int k, int j) const { return n * nx + k * nu + j; }  ///< k = 0..n-2
  int num_vars() const { return n * nx + (n - 1) * nu; }
  int num_constraints(bool with_tether) const { return 2 * n * nx + (n - 1) * nu + (with_tether ? 2 * n : 0); }
};

/// Planar object and UAV position entries used by the tether rows.
struct TetherIndices
{
  int obj_x = layout::kObjPos;
  int obj_y = layout::kObjPos + 1;
  int uav_x = layout::uav_pos(0);
  int uav_y = layout::uav_pos(1);
};

/**
 * @brief Sparse stacked MPC problem.
 *
 * Rows: x_1 = x0 and x_{k+1} = A x_k + B u_k (equalities), state boxes for
 * every k, input boxes, then two tether rows per step. The state box and
 * tether rows of step 1 are widened to contain the measured state.
 */
SparseQP build_qp(const Eigen::MatrixXd & a, const Eigen::MatrixXd & b, const Eigen::VectorXd & x0,
                  const ReferenceWindow & ref, const MpcConfig & cfg, const TetherHalfPlanes * tether,
                  const TetherIndices & idx = {});

SparseQP build_qp(const DiscreteModel & model, const StateVec & x0, const ReferenceWindow & ref,
                  const MpcConfig & cfg, const TetherHalfPlanes * tether);

struct UsvReference
{
  Vec3 eta = Vec3::Zero();  ///< (x, y, psi) in W
  Vec3 nu  = Vec3::Zero();  ///< body-frame (u, v, r)
};

struct UavReference
{
  Vec3 p = Vec3::Zero();
  Vec3 v = Vec3::Zero();
};

struct MpcOutput
{
  std::vector<Vec3> object_traj;       ///< predicted object positions, n entries
  std::vector<UsvReference> usv_traj;  ///< n entries, entry 0 is the measured state
  std::vector<UavReference> uav_traj;
  std::vector<InputVec> inputs;        ///< n - 1 entries; UAV accelerations in W
  InputVec first_inputs = InputVec::Zero();
  QPStatus qp_status    = QPStatus::MaxIter;
  int iterations        = 0;
  double solve_time     = 0.0;  ///< wall clock [s]
  double max_violation  = 0.0;  ///< largest constraint violation of the returned iterate
  /// 0: nominal tether band, 1: band held open over the whole horizon,
  /// 2: tether rows dropped after both were infeasible
  int tether_fallback   = 0;
};

/// Splits a stacked solution (expressed in the vessel-parallel frame of yaw
/// psi_b) into per-body world-frame references.
MpcOutput extract_trajectories(const QPSolution & sol, const QpLayout & layout, YawAngle psi_b);

/// Stacked state in the vessel-parallel frame of the USV's current heading.
StateVec to_vessel_frame(const ObjectState & obj, const UsvState & usv, const UavState & uav);

/// Rotates a world-frame reference into the vessel-parallel frame.
StateVec reference_to_vessel_frame(const Eigen::VectorXd & x_world, YawAngle psi_b);

class SolverFailed : public Error
{
public:
  SolverFailed(QPStatus status, MpcOutput partial)
      : Error(std::string("MPC solve failed: ") + std::string(to_string(status))), status_(status),
        partial_(std::move(partial))
  {}

  QPStatus status() const { return status_; }
  const MpcOutput & partial() const { return partial_; }

private:
  QPStatus status_;
  MpcOutput partial_;
};

/**
 * @brief Receding-horizon controller holding the solver and warm start.
 *
 * In single-robot mode the UAV inputs are bounded to zero, its states carry
 * no weight and the tether rows are dropped.
 */
class MpcController
{
public:
  MpcController(ModelParams params, MpcConfig cfg, RobotMode mode = RobotMode::MultiRobot);

  /// References in W. Throws SolverFailed on infeasible or unbounded problems.
  MpcOutput control_step(const ObjectState & obj, const UsvState & usv, const UavState & uav,
                         const ReferenceWindow & ref_world);

  const DiscreteModel & model() const { return model_; }
  const MpcConfig & config() const { return cfg_; }
  RobotMode mode() const { return mode_; }
  const AdmmSolver & solver() const { return solver_; }

private:
  ModelParams params_;
  MpcConfig cfg_;
  RobotMode mode_;
  DiscreteModel model_;
  AdmmSolver solver_;
  std::optional<WarmStart> warm_;
  Vec3 warm_origin_ = Vec3::Zero();  ///< frame of the stored warm start
  double warm_psi_  = 0.0;
  std::optional<TetherHalfPlanes> last_tether_;
};

/// One-shot convenience wrapper around MpcController.
MpcOutput control_step(const ObjectState & obj, const UsvState & usv, const UavState & uav,
                       const ReferenceWindow & ref_world, const MpcConfig & cfg, const ModelParams & params,
                       RobotMode mode = RobotMode::MultiRobot);

}  // namespace floatlink
