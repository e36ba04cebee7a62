#pragma once

#include <Eigen/Dense>

namespace floatlink {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat6 = Eigen::Matrix<double, 6, 6>;

/// Wraps an angle to (-pi, pi].
double wrap_angle(double a);

/// Heading angle, always stored wrapped to (-pi, pi].
class YawAngle
{
public:
  YawAngle() = default;
  explicit YawAngle(double psi) : psi_(wrap_angle(psi)) {}

  double rad() const { return psi_; }

private:
  double psi_ = 0.0;
};

/// Proper rotation in 3D.
struct Rotation3
{
  Mat3 m = Mat3::Identity();

  Vec3 operator*(const Vec3 & v) const { return m * v; }
  Rotation3 transpose() const { return {m.transpose()}; }
};

/// Roll, pitch, yaw applied in intrinsic z-y-x order.
struct EulerAngles
{
  double phi   = 0.0;
  double theta = 0.0;
  double psi   = 0.0;
};

/// Pitch angles closer than this to +-pi/2 are rejected.
inline constexpr double kGimbalMargin = 1e-6;

/// Planar yaw rotation embedded in 3x3; the third axis is left unchanged.
Rotation3 rot_z(YawAngle psi);

/// Linear-velocity rotation of the z-y-x convention (body to world).
Rotation3 rotation_zyx(const EulerAngles & angles);

/// Body-to-world transform of a 6-DOF marine craft: block-diagonal
/// (R_zyx, T_theta), where T_theta maps body angular rates to Euler-angle rates.
/// Throws GimbalLock when |theta| >= pi/2 - kGimbalMargin.
Mat6 euler_to_transform(const EulerAngles & angles);

/// Expresses a world vector in the vessel-parallel frame: J_b(psi)^T v.
Vec3 to_vessel_parallel(const Vec3 & vec_world, YawAngle psi_b);

/// Inverse of to_vessel_parallel.
Vec3 from_vessel_parallel(const Vec3 & vec_p, YawAngle psi_b);

}  // namespace floatlink
