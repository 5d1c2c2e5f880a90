#pragma once

#include <Eigen/Dense>
#include <stdexcept>

namespace levs {

/// Rigid SE(3) transform, world-from-sensor convention:
/// sensor-frame points map to world via p_w = T * p_s.
struct Pose {
  Eigen::Matrix4d matrix = Eigen::Matrix4d::Identity();

  static Pose identity() { return Pose{}; }
  static Pose from_rt(const Eigen::Matrix3d& r, const Eigen::Vector3d& t) {
    Pose p;
    p.matrix.topLeftCorner<3, 3>() = r;
    p.matrix.topRightCorner<3, 1>() = t;
    return p;
  }
  static Pose translation(const Eigen::Vector3d& t) {
    return from_rt(Eigen::Matrix3d::Identity(), t);
  }

  Eigen::Matrix3d rotation() const { return matrix.topLeftCorner<3, 3>(); }
  Eigen::Vector3d position() const { return matrix.topRightCorner<3, 1>(); }

  Eigen::Vector3d apply(const Eigen::Vector3d& p) const {
    return rotation() * p + position();
  }

  bool is_valid(double tol = 1e-9) const;
};

/// Spherical coordinates: azimuth in (-pi, pi], elevation in [-pi/2, pi/2],
/// range in meters >= 0.
struct SphericalPoint {
  double azimuth = 0.0;
  double elevation = 0.0;
  double range = 0.0;
};

struct ZeroRangeError : std::domain_error {
  ZeroRangeError() : std::domain_error("spherical direction undefined for zero-range point") {}
};

struct PoleDegenerateError : std::domain_error {
  PoleDegenerateError() : std::domain_error("spherical Jacobian degenerate at elevation pole") {}
};

Pose compose(const Pose& a, const Pose& b);
Pose invert(const Pose& p);

SphericalPoint to_spherical(const Eigen::Vector3d& p);
Eigen::Vector3d from_spherical(const SphericalPoint& s);

/// Rows are gradients of (azimuth, elevation, range) w.r.t. (x, y, z).
/// Throws PoleDegenerateError when sqrt(x^2+y^2) <= 1e-9.
Eigen::Matrix3d spherical_jacobian(const Eigen::Vector3d& p);

}  // namespace levs
