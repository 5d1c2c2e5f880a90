#include "levs/geom.hpp"

#include <cmath>

namespace levs {

bool Pose::is_valid(double tol) const {
  const Eigen::Matrix3d r = rotation();
  if (((r * r.transpose()) - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > tol) return false;
  if (std::abs(r.determinant() - 1.0) > tol) return false;
  const Eigen::RowVector4d last = matrix.row(3);
  return last(0) == 0.0 && last(1) == 0.0 && last(2) == 0.0 && last(3) == 1.0;
}

Pose compose(const Pose& a, const Pose& b) {
  Pose out;
  out.matrix = a.matrix * b.matrix;
  out.matrix.row(3) << 0, 0, 0, 1;
  return out;
}

Pose invert(const Pose& p) {
  const Eigen::Matrix3d rt = p.rotation().transpose();
  return Pose::from_rt(rt, -(rt * p.position()));
}

SphericalPoint to_spherical(const Eigen::Vector3d& p) {
  const double r = p.norm();
  if (r < 1e-12) throw ZeroRangeError{};
  SphericalPoint s;
  // atan2(0,0) == 0, so poles get a canonical azimuth.
  s.azimuth = std::atan2(p.y(), p.x());
  s.elevation = std::asin(std::clamp(p.z() / r, -1.0, 1.0));
  s.range = r;
  return s;
}

Eigen::Vector3d from_spherical(const SphericalPoint& s) {
  const double ce = std::cos(s.elevation);
  return {s.range * ce * std::cos(s.azimuth),
          s.range * ce * std::sin(s.azimuth),
          s.range * std::sin(s.elevation)};
}

Eigen::Matrix3d spherical_jacobian(const Eigen::Vector3d& p) {
  const double x = p.x(), y = p.y(), z = p.z();
  const double rho2 = x * x + y * y;
  const double rho = std::sqrt(rho2);
  if (rho <= 1e-9) throw PoleDegenerateError{};
  const double r2 = rho2 + z * z;
  const double r = std::sqrt(r2);
  Eigen::Matrix3d j;
  j.row(0) << -y / rho2, x / rho2, 0.0;
  j.row(1) << -x * z / (r2 * rho), -y * z / (r2 * rho), rho / r2;
  j.row(2) << x / r, y / r, z / r;
  return j;
}

}  // namespace levs
