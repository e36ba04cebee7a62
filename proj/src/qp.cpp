#include "floatlink/qp.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <string>

#include "floatlink/errors.hpp"

namespace floatlink {

namespace {

using Eigen::VectorXd;

constexpr double kRhoMin      = 1e-6;
constexpr double kRhoMax      = 1e6;
constexpr double kRhoEqScale  = 1e3;
constexpr double kScaleMin    = 1e-4;
constexpr double kScaleMax    = 1e4;
constexpr double kPolishDelta = 1e-7;

double inf_norm(const VectorXd & v) { return v.size() == 0 ? 0.0 : v.lpNorm<Eigen::Infinity>(); }

bool is_lower_inf(double v) { return v <= -kInf; }
bool is_upper_inf(double v) { return v >= kInf; }

VectorXd project(const VectorXd & z, const VectorXd & l, const VectorXd & u) { return z.cwiseMax(l).cwiseMin(u); }

VectorXd sym_mul(const SparseMatrix & p_upper, const VectorXd & x)
{
  return p_upper.selfadjointView<Eigen::Upper>() * x;
}

SparseMatrix upper_of(const SparseMatrix & m)
{
  SparseMatrix out = m.triangularView<Eigen::Upper>();
  out.makeCompressed();
  return out;
}

double limit_scale(double v)
{
  if (v < kScaleMin) { return 1.0; }
  return std::min(v, kScaleMax);
}

/// Problem data after equilibration: Pbar = c D P D, Abar = E A D.
struct Scaled
{
  SparseMatrix p;  // upper
  VectorXd q;
  SparseMatrix a;
  VectorXd l, u;
  VectorXd d, e, d_inv, e_inv;
  double c = 1.0;
};

Scaled equilibrate(const SparseQP & qp, int iters)
{
  const int n = qp.num_vars();
  const int m = qp.num_constraints();
  Scaled s;
  s.p = upper_of(qp.p);
  s.q = qp.q;
  s.a = qp.a;
  s.l = qp.l;
  s.u = qp.u;
  s.d = VectorXd::Ones(n);
  s.e = VectorXd::Ones(m);

  for (int it = 0; it < iters; ++it) {
    VectorXd col_norm = VectorXd::Zero(n);
    VectorXd row_norm = VectorXd::Zero(m);
    for (int k = 0; k < s.p.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator i(s.p, k); i; ++i) {
        const double v = std::abs(i.value());
        col_norm(i.col()) = std::max(col_norm(i.col()), v);
        col_norm(i.row()) = std::max(col_norm(i.row()), v);
      }
    }
    for (int k = 0; k < s.a.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator i(s.a, k); i; ++i) {
        const double v = std::abs(i.value());
        col_norm(i.col()) = std::max(col_norm(i.col()), v);
        row_norm(i.row()) = std::max(row_norm(i.row()), v);
      }
    }
    VectorXd dd(n), de(m);
    for (int j = 0; j < n; ++j) { dd(j) = 1.0 / std::sqrt(limit_scale(col_norm(j))); }
    for (int i = 0; i < m; ++i) { de(i) = 1.0 / std::sqrt(limit_scale(row_norm(i))); }

    SparseMatrix p_scaled = dd.asDiagonal() * s.p;
    s.p = p_scaled * dd.asDiagonal();
    SparseMatrix a_scaled = de.asDiagonal() * s.a;
    s.a = a_scaled * dd.asDiagonal();
    s.q = dd.cwiseProduct(s.q);
    s.d = s.d.cwiseProduct(dd);
    s.e = s.e.cwiseProduct(de);

    // cost scaling
    VectorXd p_col = VectorXd::Zero(n);
    for (int k = 0; k < s.p.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator i(s.p, k); i; ++i) {
        const double v = std::abs(i.value());
        p_col(i.col()) = std::max(p_col(i.col()), v);
        p_col(i.row()) = std::max(p_col(i.row()), v);
      }
    }
    const double mean_p = n > 0 ? p_col.mean() : 0.0;
    const double gamma  = 1.0 / limit_scale(std::max(mean_p, inf_norm(s.q)));
    s.p *= gamma;
    s.q *= gamma;
    s.c *= gamma;
  }

  for (int i = 0; i < m; ++i) {
    s.l(i) = is_lower_inf(qp.l(i)) ? -kInf : s.e(i) * qp.l(i);
    s.u(i) = is_upper_inf(qp.u(i)) ? kInf : s.e(i) * qp.u(i);
  }
  s.d_inv = s.d.cwiseInverse();
  s.e_inv = s.e.cwiseInverse();
  s.p.makeCompressed();
  s.a.makeCompressed();
  return s;
}

VectorXd rho_vector(const VectorXd & l, const VectorXd & u, double rho)
{
  VectorXd r(l.size());
  for (Eigen::Index i = 0; i < l.size(); ++i) {
    if (is_lower_inf(l(i)) && is_upper_inf(u(i))) {
      r(i) = kRhoMin;
    } else if (u(i) - l(i) < 1e-4) {
      r(i) = kRhoEqScale * rho;
    } else {
      r(i) = rho;
    }
  }
  return r;
}

/// Upper triangle of [P + sigma I, A'; A, -diag(1/rho)] with explicit diagonal.
SparseMatrix build_kkt(const SparseMatrix & p, const SparseMatrix & a, double sigma, const VectorXd & rho,
                       std::vector<int> & rho_slots)
{
  const int n = static_cast<int>(p.rows());
  const int m = static_cast<int>(a.rows());
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(p.nonZeros() + a.nonZeros() + n + m));
  for (int k = 0; k < p.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator i(p, k); i; ++i) {
      if (i.row() <= i.col()) { t.emplace_back(i.row(), i.col(), i.value()); }
    }
  }
  for (int j = 0; j < n; ++j) { t.emplace_back(j, j, sigma); }
  for (int k = 0; k < a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator i(a, k); i; ++i) { t.emplace_back(i.col(), n + i.row(), i.value()); }
  }
  for (int i = 0; i < m; ++i) { t.emplace_back(n + i, n + i, -1.0 / rho(i)); }

  SparseMatrix k(n + m, n + m);
  k.setFromTriplets(t.begin(), t.end());
  k.makeCompressed();

  rho_slots.assign(static_cast<std::size_t>(m), -1);
  for (int i = 0; i < m; ++i) {
    const int col = n + i;
    for (int idx = k.outerIndexPtr()[col]; idx < k.outerIndexPtr()[col + 1]; ++idx) {
      if (k.innerIndexPtr()[idx] == col) { rho_slots[static_cast<std::size_t>(i)] = idx; }
    }
  }
  return k;
}

struct Iterate
{
  VectorXd x, y, z;
  double prim = 0.0, dual = 0.0;
  double eps_prim = 0.0, eps_dual = 0.0;
};

/// Unscaled residuals and tolerances of a scaled iterate.
void measure(const Scaled & s, const SolverSettings & cfg, Iterate & it, VectorXd & ax, VectorXd & px,
             VectorXd & aty)
{
  ax  = s.a * it.x;
  px  = sym_mul(s.p, it.x);
  aty = s.a.transpose() * it.y;

  it.prim = inf_norm(s.e_inv.cwiseProduct(ax - it.z));
  it.dual = inf_norm(s.d_inv.cwiseProduct(px + s.q + aty)) / s.c;

  const double prim_scale = std::max(inf_norm(s.e_inv.cwiseProduct(ax)), inf_norm(s.e_inv.cwiseProduct(it.z)));
  const double dual_scale = std::max({inf_norm(s.d_inv.cwiseProduct(px)), inf_norm(s.d_inv.cwiseProduct(aty)),
                                      inf_norm(s.d_inv.cwiseProduct(s.q))}) /
                            s.c;
  it.eps_prim = cfg.eps_abs + cfg.eps_rel * prim_scale;
  it.eps_dual = cfg.eps_abs + cfg.eps_rel * dual_scale;
}

bool primal_infeasible(const Scaled & s, const SolverSettings & cfg, const VectorXd & dy)
{
  const double norm_dy = inf_norm(s.e.cwiseProduct(dy));
  if (norm_dy < 1e-12) { return false; }
  const double eps = cfg.eps_prim_inf * norm_dy;
  if (inf_norm(s.d_inv.cwiseProduct(s.a.transpose() * dy)) > eps) { return false; }
  double support = 0.0;
  for (Eigen::Index i = 0; i < dy.size(); ++i) {
    if (dy(i) > 0.0) {
      if (is_upper_inf(s.u(i))) { return false; }
      support += s.u(i) * dy(i);
    } else if (dy(i) < 0.0) {
      if (is_lower_inf(s.l(i))) { return false; }
      support += s.l(i) * dy(i);
    }
  }
  return support < -eps;
}

bool dual_infeasible(const Scaled & s, const SolverSettings & cfg, const VectorXd & dx)
{
  const double norm_dx = inf_norm(s.d.cwiseProduct(dx));
  if (norm_dx < 1e-12) { return false; }
  const double eps = cfg.eps_dual_inf * norm_dx;
  if (inf_norm(s.d_inv.cwiseProduct(sym_mul(s.p, dx))) > s.c * eps) { return false; }
  if (s.q.dot(dx) > -s.c * eps) { return false; }
  const VectorXd adx = s.e_inv.cwiseProduct(s.a * dx);
  for (Eigen::Index i = 0; i < adx.size(); ++i) {
    const bool lo_inf = is_lower_inf(s.l(i));
    const bool up_inf = is_upper_inf(s.u(i));
    if (lo_inf && up_inf) { continue; }
    if (up_inf) {
      if (adx(i) < -eps) { return false; }
    } else if (lo_inf) {
      if (adx(i) > eps) { return false; }
    } else if (std::abs(adx(i)) > eps) {
      return false;
    }
  }
  return true;
}

/// Solves the equality-constrained problem on the active set guessed from
/// the ADMM duals. Returns false when the reduced system cannot be factored.
bool polish(const SparseQP & qp, const SolverSettings & cfg, const VectorXd & x_admm, const VectorXd & y_admm,
            VectorXd & x_out, VectorXd & y_out)
{
  const int n = qp.num_vars();
  const int m = qp.num_constraints();
  const VectorXd z = project(qp.a * x_admm, qp.l, qp.u);

  std::vector<int> rows;
  std::vector<double> rhs_b;
  for (int i = 0; i < m; ++i) {
    const bool eq = !is_lower_inf(qp.l(i)) && !is_upper_inf(qp.u(i)) && qp.u(i) - qp.l(i) < 1e-10;
    if (eq) {
      rows.push_back(i);
      rhs_b.push_back(qp.l(i));
    } else if (!is_lower_inf(qp.l(i)) && z(i) - qp.l(i) < -y_admm(i)) {
      rows.push_back(i);
      rhs_b.push_back(qp.l(i));
    } else if (!is_upper_inf(qp.u(i)) && qp.u(i) - z(i) < y_admm(i)) {
      rows.push_back(i);
      rhs_b.push_back(qp.u(i));
    }
  }
  const int k = static_cast<int>(rows.size());

  SparseMatrix a_t = qp.a.transpose();  // n x m, columns are constraint rows
  std::vector<Triplet> t0;
  for (int c = 0; c < qp.p.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator i(qp.p, c); i; ++i) {
      if (i.row() <= i.col()) { t0.emplace_back(i.row(), i.col(), i.value()); }
    }
  }
  for (int r = 0; r < k; ++r) {
    for (SparseMatrix::InnerIterator i(a_t, rows[static_cast<std::size_t>(r)]); i; ++i) {
      t0.emplace_back(i.row(), n + r, i.value());
    }
  }
  std::vector<Triplet> td = t0;
  for (int j = 0; j < n; ++j) { td.emplace_back(j, j, kPolishDelta); }
  for (int r = 0; r < k; ++r) { td.emplace_back(n + r, n + r, -kPolishDelta); }

  SparseMatrix k0(n + k, n + k), kd(n + k, n + k);
  k0.setFromTriplets(t0.begin(), t0.end());
  kd.setFromTriplets(td.begin(), td.end());

  Eigen::SimplicialLDLT<SparseMatrix, Eigen::Upper> ldlt(kd);
  if (ldlt.info() != Eigen::Success) { return false; }

  VectorXd rhs(n + k);
  rhs.head(n) = -qp.q;
  for (int r = 0; r < k; ++r) { rhs(n + r) = rhs_b[static_cast<std::size_t>(r)]; }

  VectorXd sol = ldlt.solve(rhs);
  for (int it = 0; it < cfg.polish_refine_iters; ++it) {
    const VectorXd res = rhs - k0.selfadjointView<Eigen::Upper>() * sol;
    sol += ldlt.solve(res);
  }
  if (!sol.allFinite()) { return false; }

  x_out = sol.head(n);
  y_out = VectorXd::Zero(m);
  for (int r = 0; r < k; ++r) { y_out(rows[static_cast<std::size_t>(r)]) = sol(n + r); }
  return true;
}

}  // namespace

std::string_view to_string(QPStatus s)
{
  switch (s) {
  case QPStatus::Solved: return "solved";
  case QPStatus::MaxIter: return "max_iter";
  case QPStatus::PrimalInfeasible: return "primal_infeasible";
  case QPStatus::DualInfeasible: return "dual_infeasible";
  }
  return "unknown";
}

void SparseQP::validate(double sigma) const
{
  const int n = num_vars();
  const int m = num_constraints();
  if (p.rows() != n || p.cols() != n) { throw DimensionMismatch("QP: P must be n x n"); }
  if (a.rows() != m || a.cols() != n) { throw DimensionMismatch("QP: A must be m x n"); }
  if (u.size() != m) { throw DimensionMismatch("QP: l and u must have m entries"); }
  for (int i = 0; i < m; ++i) {
    if (!(l(i) <= u(i))) { throw Error("QP: lower bound exceeds upper bound in row " + std::to_string(i)); }
  }
  SparseMatrix full = upper_of(p).selfadjointView<Eigen::Upper>();
  SparseMatrix reg(n, n);
  reg.setIdentity();
  full += sigma * reg;
  Eigen::SimplicialLLT<SparseMatrix> llt(full);
  if (llt.info() != Eigen::Success) { throw Error("QP: P is not positive semi-definite"); }
}

void SolverSettings::validate() const
{
  if (!(rho > 0.0) || !(sigma > 0.0)) { throw Error("solver: rho and sigma must be positive"); }
  if (!(alpha > 0.0 && alpha < 2.0)) { throw Error("solver: alpha must lie in (0, 2)"); }
  if (!(eps_abs >= 0.0) || !(eps_rel >= 0.0)) { throw Error("solver: tolerances must be non-negative"); }
  if (max_iter <= 0 || check_interval <= 0) { throw Error("solver: iteration counts must be positive"); }
}

KktResiduals kkt_residuals(const SparseQP & qp, const Eigen::VectorXd & x, const Eigen::VectorXd & y)
{
  if (x.size() != qp.num_vars() || y.size() != qp.num_constraints()) {
    throw DimensionMismatch("kkt_residuals: iterate size");
  }
  const VectorXd ax = qp.a * x;
  KktResiduals r;
  r.primal = inf_norm(project(ax, qp.l, qp.u) - ax);
  r.dual   = inf_norm(sym_mul(upper_of(qp.p), x) + qp.q + qp.a.transpose() * y);
  return r;
}

KktResiduals kkt_tolerances(const SparseQP & qp, const Eigen::VectorXd & x, const Eigen::VectorXd & y,
                            double eps_abs, double eps_rel)
{
  const VectorXd ax  = qp.a * x;
  const VectorXd px  = sym_mul(upper_of(qp.p), x);
  const VectorXd aty = qp.a.transpose() * y;
  const VectorXd z   = project(ax, qp.l, qp.u);
  KktResiduals t;
  t.primal = eps_abs + eps_rel * std::max(inf_norm(ax), inf_norm(z));
  t.dual   = eps_abs + eps_rel * std::max({inf_norm(px), inf_norm(aty), inf_norm(qp.q)});
  return t;
}

AdmmSolver::AdmmSolver(SolverSettings settings) : settings_(settings) { settings_.validate(); }

QPSolution AdmmSolver::solve(const SparseQP & qp, const WarmStart * warm)
{
  settings_.validate();
  const SolverSettings & cfg = settings_;
  const int n = qp.num_vars();
  const int m = qp.num_constraints();
  if (qp.p.rows() != n || qp.a.rows() != m || qp.a.cols() != n || qp.u.size() != m) {
    throw DimensionMismatch("QP dimensions are inconsistent");
  }

  const Scaled s = equilibrate(qp, cfg.scaling_iters);

  double rho   = cfg.rho;
  VectorXd rv  = rho_vector(s.l, s.u, rho);
  std::vector<int> rho_slots;
  SparseMatrix kkt = build_kkt(s.p, s.a, cfg.sigma, rv, rho_slots);

  const bool same_pattern =
    analyses_ > 0 && pattern_outer_.size() == static_cast<std::size_t>(kkt.cols() + 1) &&
    std::equal(pattern_outer_.begin(), pattern_outer_.end(), kkt.outerIndexPtr()) &&
    pattern_inner_.size() == static_cast<std::size_t>(kkt.nonZeros()) &&
    std::equal(pattern_inner_.begin(), pattern_inner_.end(), kkt.innerIndexPtr());
  if (!same_pattern) {
    ldlt_.analyzePattern(kkt);
    pattern_outer_.assign(kkt.outerIndexPtr(), kkt.outerIndexPtr() + kkt.cols() + 1);
    pattern_inner_.assign(kkt.innerIndexPtr(), kkt.innerIndexPtr() + kkt.nonZeros());
    ++analyses_;
  }
  ldlt_.factorize(kkt);
  if (ldlt_.info() != Eigen::Success) { throw Error("QP: KKT factorization failed"); }

  Iterate it;
  it.x = VectorXd::Zero(n);
  it.y = VectorXd::Zero(m);
  it.z = VectorXd::Zero(m);
  if (warm != nullptr) {
    if (warm->x.size() == n) { it.x = s.d_inv.cwiseProduct(warm->x); }
    if (warm->y.size() == m) { it.y = s.c * s.e_inv.cwiseProduct(warm->y); }
    it.z = project(s.a * it.x, s.l, s.u);
  }

  QPSolution out;
  Iterate best;
  double best_score = std::numeric_limits<double>::infinity();
  VectorXd ax, px, aty;
  VectorXd rhs(n + m);
  VectorXd dx = VectorXd::Zero(n), dy = VectorXd::Zero(m);
  QPStatus status = QPStatus::MaxIter;
  int iter = 0;

  for (iter = 1; iter <= cfg.max_iter; ++iter) {
    rhs.head(n) = cfg.sigma * it.x - s.q;
    rhs.tail(m) = it.z - it.y.cwiseQuotient(rv);
    const VectorXd sol = ldlt_.solve(rhs);

    const VectorXd x_tilde = sol.head(n);
    const VectorXd z_tilde = it.z + (sol.tail(m) - it.y).cwiseQuotient(rv);

    const VectorXd x_next  = cfg.alpha * x_tilde + (1.0 - cfg.alpha) * it.x;
    const VectorXd z_relax = cfg.alpha * z_tilde + (1.0 - cfg.alpha) * it.z;
    const VectorXd z_next  = project(z_relax + it.y.cwiseQuotient(rv), s.l, s.u);
    const VectorXd y_next  = it.y + rv.cwiseProduct(z_relax - z_next);

    dx   = x_next - it.x;
    dy   = y_next - it.y;
    it.x = x_next;
    it.z = z_next;
    it.y = y_next;

    const bool check      = iter % cfg.check_interval == 0 || iter == cfg.max_iter;
    const bool adapt      = cfg.adaptive_rho_interval > 0 && iter % cfg.adaptive_rho_interval == 0;
    if (!check && !adapt) { continue; }

    measure(s, cfg, it, ax, px, aty);
    const double score = std::max(it.prim / it.eps_prim, it.dual / it.eps_dual);
    if (score < best_score) {
      best_score = score;
      best       = it;
    }
    if (it.prim <= it.eps_prim && it.dual <= it.eps_dual) {
      status = QPStatus::Solved;
      break;
    }
    if (check && primal_infeasible(s, cfg, dy)) {
      status = QPStatus::PrimalInfeasible;
      break;
    }
    if (check && dual_infeasible(s, cfg, dx)) {
      status = QPStatus::DualInfeasible;
      break;
    }

    if (adapt && m > 0) {
      const double prim_n = (inf_norm(ax - it.z)) / std::max({inf_norm(ax), inf_norm(it.z), 1e-12});
      const double dual_n = inf_norm(px + s.q + aty) / std::max({inf_norm(px), inf_norm(aty), inf_norm(s.q), 1e-12});
      double rho_new      = rho * std::sqrt(prim_n / std::max(dual_n, 1e-12));
      rho_new             = std::clamp(rho_new, kRhoMin, kRhoMax);
      if (rho_new > 5.0 * rho || rho_new < 0.2 * rho) {
        rho = rho_new;
        rv  = rho_vector(s.l, s.u, rho);
        for (int i = 0; i < m; ++i) { kkt.valuePtr()[rho_slots[static_cast<std::size_t>(i)]] = -1.0 / rv(i); }
        ldlt_.factorize(kkt);
        if (ldlt_.info() != Eigen::Success) { throw Error("QP: KKT refactorization failed"); }
      }
    }
  }
  out.iterations = std::min(iter, cfg.max_iter);

  const Iterate & fin = (status == QPStatus::MaxIter) ? best : it;
  out.status = status;

  if (status == QPStatus::PrimalInfeasible) {
    out.x = s.d.cwiseProduct(fin.x);
    out.y = s.e.cwiseProduct(dy) / s.c;  // certificate direction
    out.primal_res = fin.prim;
    out.dual_res   = fin.dual;
    return out;
  }
  if (status == QPStatus::DualInfeasible) {
    out.x = s.d.cwiseProduct(dx);  // certificate direction
    out.y = VectorXd::Zero(m);
    out.primal_res = fin.prim;
    out.dual_res   = fin.dual;
    return out;
  }

  out.x          = s.d.cwiseProduct(fin.x);
  out.y          = s.e.cwiseProduct(fin.y) / s.c;
  out.primal_res = fin.prim;
  out.dual_res   = fin.dual;

  if (status == QPStatus::Solved && cfg.polish) {
    VectorXd xp, yp;
    if (polish(qp, cfg, out.x, out.y, xp, yp)) {
      const KktResiduals r = kkt_residuals(qp, xp, yp);
      const KktResiduals tol = kkt_tolerances(qp, xp, yp, cfg.eps_abs, cfg.eps_rel);
      // dual signs must match the bound each active row sits on
      bool signs_ok = true;
      const VectorXd axp = qp.a * xp;
      for (int i = 0; i < m && signs_ok; ++i) {
        const bool eq = qp.u(i) - qp.l(i) < 1e-10;
        if (eq) { continue; }
        if (yp(i) > 1e-9 && std::abs(axp(i) - qp.u(i)) > tol.primal) { signs_ok = false; }
        if (yp(i) < -1e-9 && std::abs(axp(i) - qp.l(i)) > tol.primal) { signs_ok = false; }
        if (yp(i) > 1e-9 && is_upper_inf(qp.u(i))) { signs_ok = false; }
        if (yp(i) < -1e-9 && is_lower_inf(qp.l(i))) { signs_ok = false; }
      }
      const KktResiduals before = kkt_residuals(qp, out.x, out.y);
      if (signs_ok && r.primal <= tol.primal && r.dual <= tol.dual &&
          std::max(r.primal, r.dual) <= std::max(before.primal, before.dual)) {
        out.x          = xp;
        out.y          = yp;
        out.primal_res = r.primal;
        out.dual_res   = r.dual;
        out.polished   = true;
      }
    }
  }
  return out;
}

QPSolution solve(const SparseQP & qp, const SolverSettings & settings, const std::optional<WarmStart> & warm)
{
  AdmmSolver solver(settings);
  return solver.solve(qp, warm ? &*warm : nullptr);
}

void write_triplets(const SparseQP & qp, std::ostream & os)
{
  os << std::setprecision(17);
  os << qp.num_vars() << ' ' << qp.num_constraints() << '\n';
  const SparseMatrix pu = upper_of(qp.p);
  os << "P " << pu.nonZeros() << '\n';
  for (int k = 0; k < pu.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator i(pu, k); i; ++i) { os << i.row() << ' ' << i.col() << ' ' << i.value() << '\n'; }
  }
  os << "A " << qp.a.nonZeros() << '\n';
  for (int k = 0; k < qp.a.outerSize(); ++k) {
    for (SparseMatrix::InnerIterator i(qp.a, k); i; ++i) { os << i.row() << ' ' << i.col() << ' ' << i.value() << '\n'; }
  }
  auto vec = [&os](const char * tag, const VectorXd & v) {
    os << tag;
    for (Eigen::Index i = 0; i < v.size(); ++i) { os << ' ' << v(i); }
    os << '\n';
  };
  vec("q", qp.q);
  vec("l", qp.l);
  vec("u", qp.u);
}

SparseQP read_triplets(std::istream & is)
{
  int n = 0, m = 0;
  if (!(is >> n >> m) || n < 0 || m < 0) { throw IoFailure("QP dump: bad header"); }

  auto read_matrix = [&is](const char * tag, int rows, int cols) {
    std::string t;
    long nnz = 0;
    if (!(is >> t >> nnz) || t != tag || nnz < 0) { throw IoFailure(std::string("QP dump: expected ") + tag); }
    std::vector<Triplet> trip;
    trip.reserve(static_cast<std::size_t>(nnz));
    for (long k = 0; k < nnz; ++k) {
      int i = 0, j = 0;
      double v = 0.0;
      if (!(is >> i >> j >> v) || i < 0 || j < 0 || i >= rows || j >= cols) {
        throw IoFailure(std::string("QP dump: bad entry in ") + tag);
      }
      trip.emplace_back(i, j, v);
    }
    SparseMatrix mat(rows, cols);
    mat.setFromTriplets(trip.begin(), trip.end());
    return mat;
  };
  auto read_vec = [&is](const char * tag, int len) {
    std::string t;
    if (!(is >> t) || t != tag) { throw IoFailure(std::string("QP dump: expected ") + tag); }
    VectorXd v(len);
    for (int i = 0; i < len; ++i) {
      if (!(is >> v(i))) { throw IoFailure(std::string("QP dump: short vector ") + tag); }
    }
    return v;
  };

  SparseQP qp;
  qp.p = read_matrix("P", n, n);
  qp.a = read_matrix("A", m, n);
  qp.q = read_vec("q", n);
  qp.l = read_vec("l", m);
  qp.u = read_vec("u", m);
  return qp;
}

}  // namespace floatlink
