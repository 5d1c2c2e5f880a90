#pragma once

#include <vector>

#include "levs/curation.hpp"
#include "levs/sensor.hpp"
#include "levs/splat.hpp"

namespace levs {
namespace fixtures {

/// 32 x 1088 full-circle sensor with the default elevation band.
SensorModel default_sensor();

struct TwoPlaneScene {
  LidarFrame frame;                 // identity pose, sensor frame
  std::vector<uint8_t> is_far;      // 1 for far-plane points
  std::vector<uint8_t> covered;     // per point: cell lies in the near-covered half
};

/// One far point (range far_m) per cell-center ray; near points (range near_m)
/// added on the first half of the azimuth columns.
TwoPlaneScene two_plane(const SensorModel& m, double near_m = 5.0, double far_m = 10.0);

/// Forward-moving frames whose scans sample interleaved azimuth columns, plus
/// a near obstacle sector; fusing more frames fills more columns.
std::vector<LidarFrame> corridor(const SensorModel& m, int n_frames = 10,
                                 double wall_range_m = 20.0);

/// Points on a sphere (Fibonacci lattice), sensor-frame coordinates.
std::vector<Eigen::Vector3d> sphere_cloud(int n, double radius, const Eigen::Vector3d& center);

/// Regular grid on the z=0 plane.
std::vector<Eigen::Vector3d> plane_cloud(int side, double spacing);

/// One tiny Gaussian per sampled cell-center ray, all at the same range:
/// every ray intersects at most one Gaussian.
GaussianSet gaussian_grid(const SensorModel& m, double range_m = 10.0, float opacity = 0.9f,
                          int row_step = 1, int col_step = 4);

/// Uniform random cloud in a spherical shell, for oracle sweeps.
std::vector<Eigen::Vector3f> random_cloud(size_t n, uint64_t seed, double r_min = 1.0,
                                          double r_max = 150.0);

}  // namespace fixtures
}  // namespace levs
