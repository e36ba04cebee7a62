#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "floatlink/errors.hpp"
#include "floatlink/frames.hpp"

using namespace floatlink;
using doctest::Approx;

namespace {
constexpr double pi = std::numbers::pi;
}

TEST_SUITE("frames")
{
  TEST_CASE("wrap_angle lands in (-pi, pi] and is idempotent")
  {
    CHECK(wrap_angle(pi) == Approx(pi));
    CHECK(wrap_angle(-pi) == Approx(pi));
    CHECK(wrap_angle(3.0 * pi / 2.0) == Approx(-pi / 2.0));
    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> d(-50.0, 50.0);
    for (int i = 0; i < 200; ++i) {
      const double a = d(rng);
      const double w = wrap_angle(a);
      CHECK(w > -pi);
      CHECK(w <= pi);
      CHECK(wrap_angle(w) == w);
      CHECK(std::abs(wrap_angle(a + 2.0 * pi) - w) < 1e-9);
    }
  }

  TEST_CASE("rot_z examples")
  {
    CHECK(rot_z(YawAngle(0.0)).m.isApprox(Mat3::Identity()));
    const Vec3 q = rot_z(YawAngle(pi / 2.0)) * Vec3::UnitX();
    CHECK((q - Vec3::UnitY()).norm() < 1e-15);
    const Vec3 r = rot_z(YawAngle(0.3)) * Vec3::UnitX();
    CHECK(r(0) == Approx(0.95533648912560598).epsilon(1e-15));
    CHECK(r(1) == Approx(0.29552020666133955).epsilon(1e-15));
    CHECK(r(2) == 0.0);
  }

  TEST_CASE("rot_z is a proper rotation")
  {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> d(-10.0, 10.0);
    for (int i = 0; i < 100; ++i) {
      const Mat3 m = rot_z(YawAngle(d(rng))).m;
      CHECK((m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(std::abs(m.determinant() - 1.0) < 1e-12);
    }
  }

  TEST_CASE("euler_to_transform identity and yaw-only cases")
  {
    CHECK(euler_to_transform({}).isApprox(Mat6::Identity()));
    const Mat6 j = euler_to_transform({0.0, 0.0, 1.1});
    CHECK((j.topLeftCorner<3, 3>() - rot_z(YawAngle(1.1)).m).cwiseAbs().maxCoeff() < 1e-15);
    CHECK((j.bottomRightCorner<3, 3>() - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(j.topRightCorner<3, 3>().isZero());
    CHECK(j.bottomLeftCorner<3, 3>().isZero());
  }

  TEST_CASE("euler_to_transform matches the symbolic z-y-x evaluation")
  {
    // tests/oracle/oracles.py
    Mat6 expected = Mat6::Zero();
    expected.topLeftCorner<3, 3>() << 0.93629336358419923, -0.27509584731824366, 0.21835066314633439,
                                      0.28962947762551555, 0.95642508584923236, -0.03695701352462509,
                                      -0.19866933079506122, 0.09784339500725571, 0.97517032720181585;
    expected.bottomRightCorner<3, 3>() << 1.0, 0.020237235433430631, 0.20169732967478562,
                                          0.0, 0.99500416527802571, -0.099833416646828155,
                                          0.0, 0.10186391302795748, 1.0152414007114563;
    const Mat6 j = euler_to_transform({0.1, 0.2, 0.3});
    CHECK((j - expected).cwiseAbs().maxCoeff() < 1e-14);
  }

  TEST_CASE("euler_to_transform rejects gimbal lock")
  {
    CHECK_THROWS_AS(euler_to_transform({0.0, pi / 2.0, 0.0}), GimbalLock);
    CHECK_THROWS_AS(euler_to_transform({0.0, -pi / 2.0 + 1e-7, 0.0}), GimbalLock);
    CHECK_NOTHROW(euler_to_transform({0.0, pi / 2.0 - 1e-5, 0.0}));
  }

  TEST_CASE("vessel-parallel mapping")
  {
    CHECK((to_vessel_parallel({1, 2, 0}, YawAngle(0.0)) - Vec3(1, 2, 0)).norm() == 0.0);
    CHECK((to_vessel_parallel({0, 1, 0}, YawAngle(pi / 2.0)) - Vec3(1, 0, 0)).norm() < 1e-15);
    CHECK((from_vessel_parallel({1, 0, 0}, YawAngle(pi / 2.0)) - Vec3(0, 1, 0)).norm() < 1e-15);

    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> d(-5.0, 5.0);
    for (int i = 0; i < 200; ++i) {
      const Vec3 v(d(rng), d(rng), d(rng));
      const YawAngle psi(d(rng));
      const Vec3 p = to_vessel_parallel(v, psi);
      CHECK((from_vessel_parallel(p, psi) - v).norm() < 1e-12);
      CHECK((to_vessel_parallel(from_vessel_parallel(v, psi), psi) - v).norm() < 1e-12);
      CHECK(std::abs(p.norm() - v.norm()) < 1e-12);
      CHECK(p(2) == v(2));
    }
  }
}
