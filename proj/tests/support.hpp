#pragma once

// Independent reference implementations shared by the unit tests and the
// acceptance runner. Nothing here calls into the code it checks.

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "floatlink/dynamics.hpp"
#include "floatlink/plant.hpp"
#include "floatlink/qp.hpp"

namespace floatlink::testing {

struct DenseQP
{
  Eigen::MatrixXd p;
  Eigen::VectorXd q;
  Eigen::MatrixXd a;
  Eigen::VectorXd l;
  Eigen::VectorXd u;
};

inline SparseQP to_sparse(const DenseQP & d)
{
  SparseQP qp;
  qp.p = Eigen::MatrixXd(d.p.triangularView<Eigen::Upper>()).sparseView();
  qp.a = d.a.sparseView();
  qp.q = d.q;
  qp.l = d.l;
  qp.u = d.u;
  return qp;
}

struct KktPoint
{
  Eigen::VectorXd x;
  Eigen::VectorXd y;
};

/**
 * Strictly convex QP with a planted optimum: `active` rows sit on a bound with
 * multipliers of magnitude >= 0.5, the rest keep at least 0.2 of margin.
 */
inline DenseQP planted_qp(std::mt19937_64 & rng, int n, int m, int active, KktPoint * planted = nullptr)
{
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  std::uniform_real_distribution<double> gap(0.2, 2.0);
  std::uniform_real_distribution<double> mag(0.5, 2.0);
  std::bernoulli_distribution coin(0.5), open_side(0.3);

  DenseQP d;
  const Eigen::MatrixXd g = Eigen::MatrixXd::NullaryExpr(n, n, [&] { return uni(rng); });
  d.p = g * g.transpose() + 0.1 * Eigen::MatrixXd::Identity(n, n);

  d.a = Eigen::MatrixXd::Zero(m, n);
  for (int i = 0; i < m; ++i) {
    if (i < n && coin(rng)) {
      d.a(i, i) = 1.0;  // plain variable bound
    } else {
      for (int j = 0; j < n; ++j) { d.a(i, j) = uni(rng); }
    }
  }

  const Eigen::VectorXd x = Eigen::VectorXd::NullaryExpr(n, [&] { return 2.0 * uni(rng); });
  const Eigen::VectorXd ax = d.a * x;
  Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
  d.l.resize(m);
  d.u.resize(m);

  std::vector<int> rows(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) { rows[static_cast<std::size_t>(i)] = i; }
  std::shuffle(rows.begin(), rows.end(), rng);
  for (int k = 0; k < m; ++k) {
    const int i = rows[static_cast<std::size_t>(k)];
    if (k < active) {
      const bool upper = coin(rng);
      y(i)             = upper ? mag(rng) : -mag(rng);
      if (upper) {
        d.u(i) = ax(i);
        d.l(i) = open_side(rng) ? -kInf : ax(i) - gap(rng);
      } else {
        d.l(i) = ax(i);
        d.u(i) = open_side(rng) ? kInf : ax(i) + gap(rng);
      }
    } else {
      d.l(i) = open_side(rng) ? -kInf : ax(i) - gap(rng);
      d.u(i) = open_side(rng) ? kInf : ax(i) + gap(rng);
    }
  }
  d.q = -d.p * x - d.a.transpose() * y;
  if (planted != nullptr) { *planted = {x, y}; }
  return d;
}

/**
 * Brute-force active-set search. Candidate sets are visited by increasing
 * size, each row pinned at its lower or upper bound; the first candidate
 * that is primal feasible with correctly signed multipliers is the optimum
 * (unique for positive definite P). Multipliers follow the convention
 * y > 0 on an active upper bound.
 */
inline std::optional<KktPoint> brute_force_qp(const DenseQP & d, int max_active, double tol = 1e-9)
{
  const int n = static_cast<int>(d.q.size());
  const int m = static_cast<int>(d.l.size());
  const Eigen::LLT<Eigen::MatrixXd> llt(d.p);
  const Eigen::VectorXd x_free  = llt.solve(-d.q);
  const Eigen::MatrixXd pinv_at = llt.solve(d.a.transpose());  // P^-1 A'
  const Eigen::MatrixXd gram    = d.a * pinv_at;                 // A P^-1 A'
  const Eigen::VectorXd a_free  = d.a * x_free;

  auto feasible = [&](const Eigen::VectorXd & ax) {
    for (int i = 0; i < m; ++i) {
      if (ax(i) < d.l(i) - tol || ax(i) > d.u(i) + tol) { return false; }
    }
    return true;
  };

  if (feasible(a_free)) { return KktPoint{x_free, Eigen::VectorXd::Zero(m)}; }

  std::vector<int> set;
  std::vector<int> side;  // +1 upper, -1 lower
  std::optional<KktPoint> found;

  auto try_set = [&]() {
    const int k = static_cast<int>(set.size());
    Eigen::MatrixXd s(k, k);
    Eigen::VectorXd rhs(k);
    for (int r = 0; r < k; ++r) {
      const int i = set[static_cast<std::size_t>(r)];
      for (int c = 0; c < k; ++c) { s(r, c) = gram(i, set[static_cast<std::size_t>(c)]); }
      const double bound = side[static_cast<std::size_t>(r)] > 0 ? d.u(i) : d.l(i);
      rhs(r)             = a_free(i) - bound;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(s);
    if (lu.rank() < k) { return false; }
    const Eigen::VectorXd ys = lu.solve(rhs);
    for (int r = 0; r < k; ++r) {
      if (ys(r) * side[static_cast<std::size_t>(r)] < -tol) { return false; }
    }
    Eigen::VectorXd y = Eigen::VectorXd::Zero(m);
    for (int r = 0; r < k; ++r) { y(set[static_cast<std::size_t>(r)]) = ys(r); }
    const Eigen::VectorXd x = x_free - pinv_at * y;
    if (!feasible(d.a * x)) { return false; }
    found = KktPoint{x, y};
    return true;
  };

  // depth-first over sets of exactly `k` rows with start index `from`
  std::function<bool(int, int)> search = [&](int from, int k) {
    if (static_cast<int>(set.size()) == k) { return try_set(); }
    for (int i = from; i < m; ++i) {
      for (int sgn : {1, -1}) {
        const double bound = sgn > 0 ? d.u(i) : d.l(i);
        if (std::abs(bound) >= kInf) { continue; }
        set.push_back(i);
        side.push_back(sgn);
        const bool done = search(i + 1, k);
        set.pop_back();
        side.pop_back();
        if (done) { return true; }
      }
    }
    return false;
  };

  for (int k = 1; k <= std::min(max_active, n); ++k) {
    if (search(0, k)) { return found; }
  }
  return std::nullopt;
}

/**
 * Stacked derivative of the towed system built from the per-body models:
 * USV and UAV rows from their own derivatives, object rows from the object
 * derivative driven by the tether wrench of the robot accelerations. States
 * are in the vessel-parallel frame, so the USV kinematics use zero yaw.
 */
inline StateVec composed_derivative(const StateVec & x, const InputVec & u, const ObjectParams & obj,
                                    const UsvParams & usv, const UavParams & uav)
{
  using namespace layout;
  StateVec dx = StateVec::Zero();

  UsvState b;
  b.nu                   = x.segment<3>(kUsvNu);
  const UsvDerivative db = usv_derivative(b, u.segment<2>(kThrustPort), usv);
  dx.segment<3>(kUsvEta) = db.eta_dot;
  dx.segment<3>(kUsvNu)  = db.nu_dot;

  UavState a;
  a.eta                = x.segment<6>(kUav);
  const Vec6 da        = uav_derivative(a, u.segment<3>(kUavInput), uav);
  dx.segment<6>(kUav)  = da;
  const Vec3 uav_accel(da(1), da(3), da(5));
  const Vec3 usv_accel(db.nu_dot(0), db.nu_dot(1), 0.0);

  const TetherWrench w = tether_wrench(uav_accel, usv_accel, obj);
  ObjectState o;
  o.eta.head<3>()          = x.segment<3>(kObjPos);
  o.nu.head<3>()           = x.segment<3>(kObjVel);
  const ObjectDerivative od = object_derivative(o, w.total, obj);
  dx.segment<3>(kObjPos)   = od.eta_dot.head<3>();
  dx.segment<3>(kObjVel)   = od.nu_dot.head<3>();
  return dx;
}

/// Default bundles with every diagonal entry scaled by a factor in [0.5, 2].
inline ObjectParams random_object(std::mt19937_64 & rng)
{
  std::uniform_real_distribution<double> f(0.5, 2.0);
  ObjectParams p = sphere_object();
  for (int i = 0; i < 6; ++i) {
    p.inertia(i, i) *= f(rng);
    p.added_mass(i, i) *= f(rng);
    p.damping(i, i) *= f(rng);
    p.restoring(i, i) *= f(rng);
  }
  p.mass = p.inertia(0, 0);
  return p;
}

inline UsvParams random_usv(std::mt19937_64 & rng)
{
  std::uniform_real_distribution<double> f(0.5, 2.0);
  UsvParams p = wamv_usv();
  for (int i = 0; i < 3; ++i) {
    p.inertia(i, i) *= f(rng);
    p.added_mass(i, i) *= f(rng);
    p.damping(i, i) *= f(rng);
  }
  p.d_tau *= f(rng);
  return p;
}

inline UavParams random_uav(std::mt19937_64 & rng)
{
  std::uniform_real_distribution<double> f(0.5, 2.0);
  UavParams p;
  p.a1 = f(rng);
  p.b1 = f(rng);
  return p;
}

struct OrderStudy
{
  std::vector<double> steps;
  std::vector<double> errors;
  double slope = 0.0;
};

/// RK4 on x'' + 2 zeta w x' + w^2 x = 0 against the closed form at t = 10 s.
inline OrderStudy rk4_order_damped_oscillator()
{
  constexpr double w = 2.0, zeta = 0.1, t_end = 10.0;
  const double wd    = w * std::sqrt(1.0 - zeta * zeta);
  const auto exact   = [&](double t) {
    return std::exp(-zeta * w * t) * (std::cos(wd * t) + zeta * w / wd * std::sin(wd * t));
  };
  const auto f = [&](const Eigen::Vector2d & s) {
    return Eigen::Vector2d(s(1), -2.0 * zeta * w * s(1) - w * w * s(0));
  };

  OrderStudy out;
  for (double h : {0.2, 0.1, 0.05, 0.025, 0.0125}) {
    Eigen::Vector2d s(1.0, 0.0);
    const int steps = static_cast<int>(std::lround(t_end / h));
    for (int k = 0; k < steps; ++k) { s = rk4_step(f, s, h); }
    out.steps.push_back(h);
    out.errors.push_back(std::abs(s(0) - exact(t_end)));
  }
  // least-squares slope of log(err) against log(h)
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double cnt = static_cast<double>(out.steps.size());
  for (std::size_t i = 0; i < out.steps.size(); ++i) {
    const double lx = std::log(out.steps[i]), ly = std::log(out.errors[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  out.slope = (cnt * sxy - sx * sy) / (cnt * sxx - sx * sx);
  return out;
}

}  // namespace floatlink::testing
