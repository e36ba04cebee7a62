#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "floatlink/errors.hpp"
#include "floatlink/mission.hpp"

using namespace floatlink;
using namespace floatlink::layout;
using doctest::Approx;

namespace {

constexpr double pi = std::numbers::pi;

MissionPlan line_plan()
{
  MissionPlan p;
  p.segments.push_back({LineSegment{Vec2::Zero(), Vec2(10.0, 0.0)}, 2.0});
  p.duration = p.path_time();
  return p;
}

}  // namespace

TEST_SUITE("mission")
{
  TEST_CASE("segment geometry")
  {
    const PathSegment l{LineSegment{Vec2(1, 1), Vec2(4, 5)}, 1.0};
    CHECK(l.length() == Approx(5.0));
    CHECK((l.point_at(2.5) - Vec2(2.5, 3.0)).norm() < 1e-12);
    CHECK((l.tangent_at(1.0) - Vec2(0.6, 0.8)).norm() < 1e-12);

    const PathSegment a{ArcSegment{Vec2::Zero(), 2.0, 0.0, pi}, 0.5};
    CHECK(a.length() == Approx(2.0 * pi));
    CHECK(a.duration() == Approx(4.0 * pi));
    CHECK((a.end_point() - Vec2(-2.0, 0.0)).norm() < 1e-12);
    CHECK((a.tangent_at(0.0) - Vec2(0.0, 1.0)).norm() < 1e-12);
    const PathSegment cw{ArcSegment{Vec2::Zero(), 2.0, 0.0, -pi}, 1.0};
    CHECK((cw.tangent_at(0.0) - Vec2(0.0, -1.0)).norm() < 1e-12);
  }

  TEST_CASE("line samples")
  {
    const MissionPlan p = line_plan();
    const RefSample s0  = sample_reference(p, 0.0);
    CHECK(s0.p.isZero());
    CHECK((s0.v - Vec3(2.0, 0.0, 0.0)).norm() < 1e-12);
    CHECK((sample_reference(p, 2.5).p - Vec3(5.0, 0.0, 0.0)).norm() < 1e-12);
    // past the end: hold the last point
    const RefSample late = sample_reference(p, 100.0);
    CHECK((late.p - Vec3(10.0, 0.0, 0.0)).norm() < 1e-12);
    CHECK(late.v.isZero());
    CHECK_THROWS(sample_reference(p, -1.0));
  }

  TEST_CASE("circle quarter point")
  {
    const MissionPlan c = builtin_missions().at("circle");
    CHECK((sample_reference(c, 0.0).p - Vec3(0.0, -20.0, 0.0)).norm() < 1e-12);
    // tests/oracle/oracles.py
    const RefSample q = sample_reference(c, 10.0 * pi);
    CHECK((q.p - Vec3(20.0, 0.0, 0.0)).norm() < 1e-9);
    CHECK((q.v - Vec3(0.0, 1.0, 0.0)).norm() < 1e-9);
    CHECK(c.duration == Approx(40.0 * pi));
  }

  TEST_CASE("named missions")
  {
    const auto m = builtin_missions(1.0);
    REQUIRE(m.size() == 3);
    CHECK(m.at("line").duration == Approx(50.0));
    const MissionPlan & d = m.at("disturbance");
    REQUIRE(d.disturbances.size() == 1);
    CHECK(d.disturbances[0].force.norm() == Approx(1000.0));
    CHECK(d.disturbances[0].t_start == Approx(7.0));
    CHECK(d.disturbances[0].duration == Approx(0.5));
    for (const auto & [name, plan] : m) { CHECK_NOTHROW(plan.validate()); }
    CHECK_THROWS_AS(builtin_missions(0.0), ConfigError);
  }

  TEST_CASE("reference window")
  {
    const MissionPlan p        = line_plan();
    const ReferenceWindow w    = build_reference_window(p, 1.0, 6, 0.1);
    REQUIRE(w.x_r.size() == 6);
    CHECK(w.x_r[0](kObjPos) == Approx(2.0 * 1.1));
    for (std::size_t k = 1; k < w.x_r.size(); ++k) {
      CHECK(w.x_r[k](kObjPos) - w.x_r[k - 1](kObjPos) == Approx(0.2));
      CHECK(w.x_r[k].size() == kNx);
    }
    // holding: every entry identical
    const ReferenceWindow h = build_reference_window(p, 50.0, 5, 0.1);
    for (const auto & x : h.x_r) { CHECK(x == h.x_r.front()); }
    CHECK_THROWS(build_reference_window(p, 0.0, 1, 0.1));
  }

  TEST_CASE("reference is Lipschitz in time")
  {
    const auto m = builtin_missions(1.5);
    std::mt19937_64 rng(31);
    for (const auto & [name, plan] : m) {
      std::uniform_real_distribution<double> d(0.0, plan.duration + 5.0);
      for (int i = 0; i < 200; ++i) {
        const double a = d(rng), b = d(rng);
        const double gap = (sample_reference(plan, a).p - sample_reference(plan, b).p).norm();
        CHECK(gap <= 1.5 * std::abs(a - b) + 1e-9);
      }
    }
  }

  TEST_CASE("arc samples stay on the circle")
  {
    const MissionPlan c = builtin_missions().at("circle");
    for (double t = 0.0; t < c.duration; t += 0.37) {
      const RefSample s = sample_reference(c, t);
      CHECK(s.p.head<2>().norm() == Approx(20.0).epsilon(1e-12));
      CHECK(std::abs(s.p.head<2>().dot(s.v.head<2>())) < 1e-9);
    }
  }

  TEST_CASE("robot guidance places the UAV beside the object")
  {
    const MissionPlan p = line_plan();
    GuidanceParams g;
    g.adaptive_side = false;
    ReferenceWindow w = build_reference_window(p, 0.0, 5, 0.1);
    apply_robot_guidance(w, p, 0.0, 0.1, Vec2(5.0, 0.0), g);
    for (const auto & x : w.x_r) {
      const Vec2 rel(x(uav_pos(0)) - x(kObjPos), x(uav_pos(1)) - x(kObjPos + 1));
      CHECK(rel.norm() == Approx(g.uav_radius + g.uav_standoff));
      // right of a path heading +x
      CHECK(rel(1) < 0.0);
      CHECK(x(uav_pos(2)) == Approx(g.uav_height));
      CHECK(x(kUsvEta) > x(kObjPos));
    }
    CHECK(uav_offset_angle(p, 0.0, g) == Approx(-pi / 2.0));
    g.uav_side = -1.0;
    CHECK(uav_offset_angle(p, 0.0, g) == Approx(pi / 2.0));
  }

  TEST_CASE("adaptive side takes the outside of arcs")
  {
    GuidanceParams g;
    // counterclockwise circle: outside is the right-hand side
    CHECK(uav_offset_angle(builtin_missions().at("circle"), 20.0, g) == Approx(-pi / 2.0));
    MissionPlan cw;
    cw.segments.push_back({ArcSegment{Vec2::Zero(), 20.0, pi / 2.0, -pi}, 1.0});
    cw.duration = cw.path_time();
    CHECK(uav_offset_angle(cw, 20.0, g) == Approx(pi / 2.0));
  }

  TEST_CASE("random plans")
  {
    for (int id = 0; id < 50; ++id) {
      const std::uint64_t seed = trajectory_seed(7, id);
      const MissionPlan p      = random_plan(seed);
      CHECK_NOTHROW(p.validate());
      CHECK(p.segments.size() >= 2);
      CHECK(p.segments.size() <= 5);
      CHECK(p.duration == Approx(p.path_time() + 10.0));
      CHECK(p.segments.front().start_point().isZero());
      // G1: tangents agree at the joints
      for (std::size_t i = 1; i < p.segments.size(); ++i) {
        const auto & a = p.segments[i - 1];
        const auto & b = p.segments[i];
        CHECK((a.tangent_at(a.length()) - b.tangent_at(0.0)).norm() < 1e-9);
      }
      const MissionPlan again = random_plan(seed);
      CHECK(again.path_time() == p.path_time());
    }
    CHECK(trajectory_seed(7, 0) != trajectory_seed(7, 1));
    CHECK(trajectory_seed(7, 3) == trajectory_seed(7, 3));
    RandomPlanSpec bad;
    bad.max_segments = 1;
    CHECK_THROWS_AS(random_plan(1, bad), ConfigError);
  }

  TEST_CASE("validate")
  {
    MissionPlan p = line_plan();
    p.segments.push_back({LineSegment{Vec2(11.0, 0.0), Vec2(20.0, 0.0)}, 1.0});
    p.duration = p.path_time();
    CHECK_THROWS_AS(p.validate(), ConfigError);

    MissionPlan s = line_plan();
    s.duration    = 1.0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s             = line_plan();
    s.segments[0].speed = 0.0;
    CHECK_THROWS_AS(s.validate(), ConfigError);
    s = line_plan();
    s.segments.push_back({ArcSegment{Vec2(10.0, 1.0), -1.0, -pi / 2.0, pi}, 1.0});
    CHECK_THROWS_AS(s.validate(), ConfigError);
  }
}
