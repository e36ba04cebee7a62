#include "floatlink/frames.hpp"

#include <cmath>
#include <numbers>

#include "floatlink/errors.hpp"

namespace floatlink {

double wrap_angle(double a)
{
  constexpr double pi  = std::numbers::pi;
  constexpr double tau = 2.0 * std::numbers::pi;
  double w             = std::fmod(a + pi, tau);
  if (w < 0.0) { w += tau; }
  w -= pi;
  // fmod maps +pi onto -pi; the half-open interval is (-pi, pi]
  if (w <= -pi) { w = pi; }
  return w;
}

Rotation3 rot_z(YawAngle psi)
{
  const double c = std::cos(psi.rad());
  const double s = std::sin(psi.rad());
  Rotation3 r;
  r.m << c, -s, 0.0,
         s,  c, 0.0,
         0.0, 0.0, 1.0;
  return r;
}

Rotation3 rotation_zyx(const EulerAngles & a)
{
  const double cf = std::cos(a.phi), sf = std::sin(a.phi);
  const double ct = std::cos(a.theta), st = std::sin(a.theta);
  const double cp = std::cos(a.psi), sp = std::sin(a.psi);
  Rotation3 r;
  r.m << cp * ct, -sp * cf + cp * st * sf,  sp * sf + cp * cf * st,
         sp * ct,  cp * cf + sf * st * sp, -cp * sf + st * sp * cf,
         -st,      ct * sf,                 ct * cf;
  return r;
}

Mat6 euler_to_transform(const EulerAngles & a)
{
  if (std::abs(a.theta) >= std::numbers::pi / 2.0 - kGimbalMargin) { throw GimbalLock(a.theta); }

  const double cf = std::cos(a.phi), sf = std::sin(a.phi);
  const double ct = std::cos(a.theta), tt = std::tan(a.theta);

  Mat3 t;
  t << 1.0, sf * tt,  cf * tt,
       0.0, cf,      -sf,
       0.0, sf / ct,  cf / ct;

  Mat6 j                = Mat6::Zero();
  j.topLeftCorner<3, 3>()     = rotation_zyx(a).m;
  j.bottomRightCorner<3, 3>() = t;
  return j;
}

Vec3 to_vessel_parallel(const Vec3 & vec_world, YawAngle psi_b)
{
  return rot_z(psi_b).m.transpose() * vec_world;
}

Vec3 from_vessel_parallel(const Vec3 & vec_p, YawAngle psi_b) { return rot_z(psi_b).m * vec_p; }

}  // namespace floatlink
