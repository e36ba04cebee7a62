#include "floatlink/mission.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "floatlink/errors.hpp"

namespace floatlink {

using namespace layout;

namespace {

constexpr double kContinuityTol = 1e-9;

template<class... Ts>
struct overloaded : Ts...
{
  using Ts::operator()...;
};
template<class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

double arc_sign(const ArcSegment & a) { return a.angle_sweep >= 0.0 ? 1.0 : -1.0; }

struct Located
{
  const PathSegment * seg = nullptr;
  double s               = 0.0;
  bool past_end          = false;
};

Located locate(const MissionPlan & plan, double t)
{
  Located loc;
  double t0 = 0.0;
  for (const auto & seg : plan.segments) {
    const double d = seg.duration();
    if (t < t0 + d) {
      loc.seg = &seg;
      loc.s   = (t - t0) * seg.speed;
      return loc;
    }
    t0 += d;
  }
  if (!plan.segments.empty()) {
    loc.seg      = &plan.segments.back();
    loc.s        = loc.seg->length();
  }
  loc.past_end = true;
  return loc;
}

}  // namespace

double PathSegment::length() const
{
  return std::visit(overloaded{[](const LineSegment & l) { return (l.end - l.start).norm(); },
                               [](const ArcSegment & a) { return a.radius * std::abs(a.angle_sweep); }},
                    shape);
}

Vec2 PathSegment::point_at(double s) const
{
  return std::visit(overloaded{[s](const LineSegment & l) -> Vec2 {
                                 const double len = (l.end - l.start).norm();
                                 if (len == 0.0) { return l.start; }
                                 return l.start + (l.end - l.start) * (s / len);
                               },
                               [s](const ArcSegment & a) -> Vec2 {
                                 const double ang = a.angle_start + arc_sign(a) * s / a.radius;
                                 return a.center + a.radius * Vec2(std::cos(ang), std::sin(ang));
                               }},
                    shape);
}

Vec2 PathSegment::tangent_at(double s) const
{
  return std::visit(overloaded{[](const LineSegment & l) -> Vec2 {
                                 const Vec2 d = l.end - l.start;
                                 const double len = d.norm();
                                 return len == 0.0 ? Vec2::UnitX() : Vec2(d / len);
                               },
                               [s](const ArcSegment & a) -> Vec2 {
                                 const double ang = a.angle_start + arc_sign(a) * s / a.radius;
                                 return arc_sign(a) * Vec2(-std::sin(ang), std::cos(ang));
                               }},
                    shape);
}

double MissionPlan::path_time() const
{
  double t = 0.0;
  for (const auto & s : segments) { t += s.duration(); }
  return t;
}

void MissionPlan::validate() const
{
  for (std::size_t i = 0; i < segments.size(); ++i) {
    const auto & seg = segments[i];
    if (!(seg.speed > 0.0)) { throw ConfigError("mission: segment speed must be positive"); }
    if (const auto * a = std::get_if<ArcSegment>(&seg.shape); a != nullptr && !(a->radius > 0.0)) {
      throw ConfigError("mission: arc radius must be positive");
    }
    if (i > 0 && (segments[i - 1].end_point() - seg.start_point()).norm() > kContinuityTol) {
      throw ConfigError("mission: segment " + std::to_string(i) + " does not start where the previous one ends");
    }
  }
  if (!(duration >= 0.0)) { throw ConfigError("mission: duration must be non-negative"); }
  if (duration + kContinuityTol < path_time()) { throw ConfigError("mission: duration shorter than the path"); }
  for (const auto & d : disturbances) {
    if (!(d.duration >= 0.0)) { throw ConfigError("mission: disturbance duration must be non-negative"); }
  }
}

RefSample sample_reference(const MissionPlan & plan, double t)
{
  if (!(t >= 0.0)) { throw Error("sample_reference: time must be non-negative"); }
  RefSample r;
  r.t = t;
  if (plan.segments.empty()) { return r; }
  const Located loc = locate(plan, t);
  const Vec2 p      = loc.seg->point_at(loc.s);
  r.p               = Vec3(p(0), p(1), 0.0);
  if (!loc.past_end) {
    const Vec2 v = loc.seg->tangent_at(loc.s) * loc.seg->speed;
    r.v          = Vec3(v(0), v(1), 0.0);
  }
  return r;
}

ReferenceWindow build_reference_window(const MissionPlan & plan, double t, int n, double dt)
{
  if (n < 2) { throw Error("build_reference_window: n must be at least 2"); }
  ReferenceWindow w;
  w.x_r.reserve(static_cast<std::size_t>(n));
  for (int k = 1; k <= n; ++k) {
    const RefSample s = sample_reference(plan, std::max(0.0, t + k * dt));
    Eigen::VectorXd x = Eigen::VectorXd::Zero(kNx);
    x.segment<3>(kObjPos) = s.p;
    x.segment<3>(kObjVel) = s.v;
    w.x_r.push_back(std::move(x));
  }
  return w;
}

double uav_offset_angle(const MissionPlan & plan, double t, const GuidanceParams & g)
{
  const double half_pi = std::numbers::pi / 2.0;
  auto angle_of        = [&](double side) { return side > 0.0 ? -half_pi : half_pi; };
  if (!g.adaptive_side) { return angle_of(g.uav_side); }

  // outside of each arc, with its start time
  std::vector<std::pair<double, double>> arcs;
  double t0 = 0.0;
  for (const auto & seg : plan.segments) {
    if (const auto * a = std::get_if<ArcSegment>(&seg.shape)) { arcs.emplace_back(t0, arc_sign(*a)); }
    t0 += seg.duration();
  }
  if (arcs.empty()) { return angle_of(g.uav_side); }

  double side = arcs.front().second;
  double phi  = angle_of(side);
  for (std::size_t i = 1; i < arcs.size(); ++i) {
    const auto [start, next] = arcs[i];
    if (next == side) { continue; }
    const double begin = start - g.side_switch_time;
    if (t <= begin) { break; }
    const double f = g.side_switch_time > 0.0 ? std::clamp((t - begin) / g.side_switch_time, 0.0, 1.0) : 1.0;
    // right -> left turns clockwise, left -> right counterclockwise: both pass behind
    const double dir = side > 0.0 ? -1.0 : 1.0;
    const double s   = f * f * (3.0 - 2.0 * f);
    phi += dir * std::numbers::pi * s;
    if (f < 1.0) { break; }
    side = next;
  }
  return phi;
}

namespace {

// continues along the final tangent past the end of the path
RefSample extended_sample(const MissionPlan & plan, double t)
{
  const double t_end = plan.path_time();
  if (plan.segments.empty() || t <= t_end) { return sample_reference(plan, t); }
  const PathSegment & last = plan.segments.back();
  const Vec2 tangent       = last.tangent_at(last.length());
  RefSample r;
  r.t = t;
  const Vec2 p = last.end_point() + tangent * last.speed * (t - t_end);
  const Vec2 v = tangent * last.speed;
  r.p          = Vec3(p(0), p(1), 0.0);
  r.v          = Vec3(v(0), v(1), 0.0);
  return r;
}

}  // namespace

void apply_robot_guidance(ReferenceWindow & window, const MissionPlan & plan, double t, double dt,
                          const Vec2 & usv_pos, const GuidanceParams & g)
{
  if (window.x_r.empty()) { return; }
  const Vec2 first = window.x_r.front().segment<2>(kObjPos);
  double prev_psi  = 0.0;
  const int n      = static_cast<int>(window.x_r.size());

  for (int k = 0; k < n; ++k) {
    Eigen::VectorXd & x = window.x_r[static_cast<std::size_t>(k)];
    const double tk     = std::max(0.0, t + (k + 1) * dt);
    const Vec3 v_ref    = x.segment<3>(kObjVel);
    const double speed  = v_ref.head<2>().norm();
    // past the end the USV stops one tow length beyond the final point
    const double t_end  = plan.path_time();
    const double te     = std::min(tk, t_end);
    double v_path       = speed;
    if (!(v_path > 1e-9)) { v_path = plan.segments.empty() ? 1.0 : plan.segments.back().speed; }

    const double phi     = uav_offset_angle(plan, tk, g);
    const double lateral = -g.usv_counter_offset * std::sin(phi);
    // keep the tow distance when the USV sits off the path
    const double along = std::sqrt(g.tow_length * g.tow_length - lateral * lateral);
    const RefSample us = extended_sample(plan, te + along / v_path);
    const double us_speed = us.v.head<2>().norm();
    const Vec2 us_left = us_speed > 1e-9 ? Vec2(-us.v(1) / us_speed, us.v(0) / us_speed) : Vec2::Zero();
    const Vec2 counter = lateral * us_left;
    const Vec2 usv_ref = us.p.head<2>() + counter;
    const Vec2 aim     = extended_sample(plan, te + (along + g.lookahead) / v_path).p.head<2>() + counter;
    const Vec2 base    = usv_pos + (x.segment<2>(kObjPos) - first);
    Vec2 los           = aim - base;
    if (los.norm() < 1e-6) { los = speed > 1e-9 ? Vec2(v_ref.head<2>()) : Vec2::UnitX(); }
    double psi = std::atan2(los(1), los(0));
    if (k > 0) { psi = prev_psi + wrap_angle(psi - prev_psi); }

    const Vec2 heading = speed > 1e-9 ? Vec2(v_ref.head<2>() / speed) : los.normalized();
    const Vec2 left(-heading(1), heading(0));
    const Vec2 offset  = std::cos(phi) * heading + std::sin(phi) * left;

    x.segment<2>(kUsvEta) = usv_ref;
    x(kUsvEta + 2)        = psi;
    x(kUsvNu)             = speed;
    x(kUsvNu + 1)         = 0.0;
    x(kUsvNu + 2)         = k > 0 ? (psi - prev_psi) / dt : 0.0;

    const double reach = g.uav_radius + g.uav_standoff;
    x(uav_pos(0)) = x(kObjPos) + reach * offset(0);
    x(uav_pos(1)) = x(kObjPos + 1) + reach * offset(1);
    x(uav_pos(2)) = x(kObjPos + 2) + g.uav_height;
    for (int axis = 0; axis < 3; ++axis) { x(uav_vel(axis)) = v_ref(axis); }
    prev_psi = psi;
  }
  if (n > 1) { window.x_r.front()(kUsvNu + 2) = window.x_r[1](kUsvNu + 2); }
}

std::map<std::string, MissionPlan> builtin_missions(double speed)
{
  if (!(speed > 0.0)) { throw ConfigError("mission speed must be positive"); }
  std::map<std::string, MissionPlan> out;

  MissionPlan circle;
  circle.segments.push_back({ArcSegment{Vec2::Zero(), 20.0, -std::numbers::pi / 2.0, 2.0 * std::numbers::pi}, speed});
  circle.duration = circle.path_time();
  out["circle"]   = circle;

  MissionPlan line;
  line.segments.push_back({LineSegment{Vec2::Zero(), Vec2(50.0, 0.0)}, speed});
  line.duration = line.path_time();
  out["line"]   = line;

  MissionPlan dist    = circle;
  const double onset  = 7.0;
  const Vec3 p        = sample_reference(circle, onset).p;
  // towards the circle centre, away from the UAV on the outside
  const Vec3 inward   = -p.normalized();
  dist.disturbances.push_back({1000.0 * inward, onset, 0.5});
  out["disturbance"] = dist;
  return out;
}

std::uint64_t trajectory_seed(std::uint64_t base_seed, int id)
{
  // splitmix64 step over the combined value
  std::uint64_t z = base_seed + 0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(id + 1);
  z               = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z               = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

MissionPlan random_plan(std::uint64_t seed, const RandomPlanSpec & spec)
{
  if (spec.min_segments < 1 || spec.max_segments < spec.min_segments) {
    throw ConfigError("random plan: bad segment count range");
  }
  if (!(spec.min_length > 0.0) || spec.max_length < spec.min_length || !(spec.min_radius > 0.0) ||
      spec.max_radius < spec.min_radius || !(spec.speed > 0.0)) {
    throw ConfigError("random plan: bad length/radius/speed range");
  }
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> count(spec.min_segments, spec.max_segments);
  std::uniform_real_distribution<double> length(spec.min_length, spec.max_length);
  std::uniform_real_distribution<double> radius(spec.min_radius, spec.max_radius);
  std::bernoulli_distribution is_arc(0.5);
  std::bernoulli_distribution turn_left(0.5);

  MissionPlan plan;
  Vec2 pos       = Vec2::Zero();
  double heading = 0.0;
  const int segs = count(rng);
  for (int i = 0; i < segs; ++i) {
    const double len = length(rng);
    // start and alternate with lines so every plan mixes both kinds
    const bool arc = (i % 2 == 1) || (i > 0 && is_arc(rng));
    if (!arc) {
      const Vec2 end = pos + len * Vec2(std::cos(heading), std::sin(heading));
      plan.segments.push_back({LineSegment{pos, end}, spec.speed});
      pos = end;
    } else {
      const double r    = radius(rng);
      const double sign = turn_left(rng) ? 1.0 : -1.0;
      const Vec2 normal = sign * Vec2(-std::sin(heading), std::cos(heading));
      const Vec2 center = pos + r * normal;
      const Vec2 rel    = pos - center;
      ArcSegment a{center, r, std::atan2(rel(1), rel(0)), sign * len / r};
      PathSegment seg{a, spec.speed};
      pos     = seg.end_point();
      heading = wrap_angle(heading + a.angle_sweep);
      plan.segments.push_back(seg);
    }
  }
  plan.duration = plan.path_time() + spec.settle_time;
  return plan;
}

}  // namespace floatlink
