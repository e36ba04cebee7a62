#pragma once

#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

namespace floatlink {

/// Bound magnitude treated as infinite.
inline constexpr double kInf = 1e30;

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;
using Triplet      = Eigen::Triplet<double, int>;

/// min 1/2 x'Px + q'x  s.t.  l <= A x <= u
///
/// Only the upper triangle of P is stored.
struct SparseQP
{
  SparseMatrix p;
  Eigen::VectorXd q;
  SparseMatrix a;
  Eigen::VectorXd l;
  Eigen::VectorXd u;

  int num_vars() const { return static_cast<int>(q.size()); }
  int num_constraints() const { return static_cast<int>(l.size()); }

  /// Checks dimensions, l <= u and that P + sigma I admits a Cholesky factor.
  void validate(double sigma = 1e-6) const;
};

enum class QPStatus { Solved, MaxIter, PrimalInfeasible, DualInfeasible };

std::string_view to_string(QPStatus s);

struct QPSolution
{
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  QPStatus status = QPStatus::MaxIter;
  int iterations  = 0;
  double primal_res = 0.0;
  double dual_res   = 0.0;
  bool polished     = false;
};

struct SolverSettings
{
  double rho     = 0.1;
  double sigma   = 1e-6;
  double alpha   = 1.6;
  double eps_abs = 1e-5;
  double eps_rel = 1e-5;
  int max_iter   = 4000;

  /// iterations between residual-balancing rho updates (0 disables)
  int adaptive_rho_interval = 25;
  /// iterations between termination checks
  int check_interval = 5;

  double eps_prim_inf = 1e-5;
  double eps_dual_inf = 1e-5;

  int scaling_iters = 10;
  bool polish       = true;
  int polish_refine_iters = 4;

  void validate() const;
};

struct WarmStart
{
  Eigen::VectorXd x;
  Eigen::VectorXd y;
};

struct KktResiduals
{
  double primal = 0.0;  ///< |clamp(Ax, l, u) - Ax|_inf
  double dual   = 0.0;  ///< |Px + q + A'y|_inf
};

KktResiduals kkt_residuals(const SparseQP & qp, const Eigen::VectorXd & x, const Eigen::VectorXd & y);

/// Tolerance pair the solver applies to a given iterate.
KktResiduals kkt_tolerances(const SparseQP & qp, const Eigen::VectorXd & x, const Eigen::VectorXd & y,
                            double eps_abs, double eps_rel);

/**
 * @brief ADMM operator-splitting QP solver.
 *
 * The problem is equilibrated (modified Ruiz), the quasi-definite KKT matrix
 * [P + sigma I, A'; A, -diag(1/rho)] is factored once per rho value, and the
 * symbolic analysis is kept between calls whose KKT sparsity pattern matches.
 * A solver instance is meant for a single caller.
 */
class AdmmSolver
{
public:
  explicit AdmmSolver(SolverSettings settings = {});

  const SolverSettings & settings() const { return settings_; }
  SolverSettings & settings() { return settings_; }

  QPSolution solve(const SparseQP & qp, const WarmStart * warm = nullptr);

  /// Number of symbolic analyses performed so far.
  int analyses() const { return analyses_; }

private:
  SolverSettings settings_;

  Eigen::SimplicialLDLT<SparseMatrix, Eigen::Upper> ldlt_;
  std::vector<int> pattern_outer_;
  std::vector<int> pattern_inner_;
  int analyses_ = 0;
};

QPSolution solve(const SparseQP & qp, const SolverSettings & settings = {},
                 const std::optional<WarmStart> & warm = std::nullopt);

/// Plain-text dump: "n m", then "P nnz" and "i j v" rows of the stored
/// upper triangle, "A nnz" with its rows, then the q, l and u vectors.
void write_triplets(const SparseQP & qp, std::ostream & os);
SparseQP read_triplets(std::istream & is);

}  // namespace floatlink
