#pragma once

#include <cstdint>
#include <vector>

#include "levs/geom.hpp"
#include "levs/sensor.hpp"

namespace levs {

/// 3D Gaussian primitives for the forward range-map renderer. The per-Gaussian
/// feature is a scalar intensity in [0,1].
struct GaussianSet {
  std::vector<Eigen::Vector3f> means;    // world frame
  std::vector<Eigen::Vector3f> scales;   // > 0 per axis
  std::vector<Eigen::Vector4f> quats;    // (w,x,y,z), unit
  std::vector<float> opacities;          // in (0,1)
  std::vector<float> features;           // intensity in [0,1]

  size_t size() const { return means.size(); }
  void validate() const;
};

/// Sigma = R diag(S^2) R^T.
Eigen::Matrix3d covariance(const Eigen::Vector3d& scale, const Eigen::Vector4d& quat_wxyz);

struct SphericalGaussian {
  size_t index = 0;          // index into the source GaussianSet
  SphericalPoint mean;       // (azimuth, elevation, range)
  Eigen::Matrix3d cov;       // spherical covariance J Sigma_L J^T
};

struct SphericalProjection {
  std::vector<SphericalGaussian> gaussians;
  std::vector<size_t> skipped;  // pole-degenerate indices (rho <= 1e-6)
};

/// Transforms means and covariances into the sensor's spherical frame.
SphericalProjection to_sensor_spherical(const GaussianSet& g, const Pose& sensor);

struct RenderResult {
  RangeMap map;
  std::vector<float> alpha;  // accumulated opacity per cell (ray-drop proxy)
};

/// Forward alpha-blended range-map render. Per cell, Gaussians whose 3-sigma
/// angular footprint covers the cell center are blended front to back by mean
/// range; cells with accumulated alpha < 0.5 stay unoccupied. Blended range
/// and intensity are normalized by accumulated alpha on occupied cells.
RenderResult render_range_map(const GaussianSet& g, const Pose& sensor, const SensorModel& m);

}  // namespace levs
