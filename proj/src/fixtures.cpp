#include "levs/fixtures.hpp"

#include <cmath>

#include "levs/rng.hpp"

namespace levs {
namespace fixtures {

SensorModel default_sensor() { return SensorModel{}; }

namespace {

Eigen::Vector3f ray_point(const SensorModel& m, int row, int col, double range) {
  SphericalPoint s;
  s.azimuth = m.azimuth_min + col * (m.azimuth_max - m.azimuth_min) / m.width;
  s.elevation = m.elevation_min + row * (m.elevation_max - m.elevation_min) / m.height;
  s.range = range;
  return from_spherical(s).cast<float>();
}

}  // namespace

TwoPlaneScene two_plane(const SensorModel& m, double near_m, double far_m) {
  TwoPlaneScene scene;
  scene.frame.timestamp_us = 0;
  for (int row = 0; row < m.height; ++row) {
    for (int col = 0; col < m.width; ++col) {
      const bool covered = col < m.width / 2;
      scene.frame.points.push_back(ray_point(m, row, col, far_m));
      scene.frame.intensities.push_back(0.5f);
      scene.frame.dynamic_flags.push_back(0);
      scene.is_far.push_back(1);
      scene.covered.push_back(covered ? 1 : 0);
      if (covered) {
        scene.frame.points.push_back(ray_point(m, row, col, near_m));
        scene.frame.intensities.push_back(0.8f);
        scene.frame.dynamic_flags.push_back(0);
        scene.is_far.push_back(0);
        scene.covered.push_back(1);
      }
    }
  }
  return scene;
}

std::vector<LidarFrame> corridor(const SensorModel& m, int n_frames, double wall_range_m) {
  std::vector<LidarFrame> frames;
  const int stride = 4;  // each frame scans every 4th azimuth column
  for (int k = 0; k < n_frames; ++k) {
    LidarFrame f;
    f.timestamp_us = static_cast<int64_t>(k) * 100000;
    f.pose = Pose::translation({2.0 * k, 0.0, 0.0});
    for (int row = 0; row < m.height; ++row) {
      for (int col = k % stride; col < m.width; col += stride) {
        f.points.push_back(ray_point(m, row, col, wall_range_m));
        f.intensities.push_back(0.4f);
        f.dynamic_flags.push_back(0);
      }
      // Near obstacle sector, present in every frame.
      for (int col = 100; col < 150; ++col) {
        f.points.push_back(ray_point(m, row, col, 2.0));
        f.intensities.push_back(0.9f);
        f.dynamic_flags.push_back(0);
      }
    }
    frames.push_back(std::move(f));
  }
  return frames;
}

std::vector<Eigen::Vector3d> sphere_cloud(int n, double radius, const Eigen::Vector3d& center) {
  std::vector<Eigen::Vector3d> out;
  out.reserve(n);
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - 2.0 * (i + 0.5) / n;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    out.push_back(center + radius * Eigen::Vector3d(rho * std::cos(phi), rho * std::sin(phi), z));
  }
  return out;
}

std::vector<Eigen::Vector3d> plane_cloud(int side, double spacing) {
  std::vector<Eigen::Vector3d> out;
  out.reserve(static_cast<size_t>(side) * side);
  for (int i = 0; i < side; ++i)
    for (int j = 0; j < side; ++j)
      out.emplace_back(i * spacing, j * spacing, 0.0);
  return out;
}

GaussianSet gaussian_grid(const SensorModel& m, double range_m, float opacity, int row_step,
                          int col_step) {
  GaussianSet g;
  for (int row = 0; row < m.height; row += row_step) {
    for (int col = 0; col < m.width; col += col_step) {
      g.means.push_back(ray_point(m, row, col, range_m));
      g.scales.push_back(Eigen::Vector3f::Constant(1e-3f));
      g.quats.push_back(Eigen::Vector4f(1.0f, 0.0f, 0.0f, 0.0f));
      g.opacities.push_back(opacity);
      g.features.push_back(0.5f);
    }
  }
  return g;
}

std::vector<Eigen::Vector3f> random_cloud(size_t n, uint64_t seed, double r_min, double r_max) {
  const CounterRng rng{seed};
  std::vector<Eigen::Vector3f> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    const double az = (rng.uniform(3 * i) * 2.0 - 1.0) * M_PI;
    const double el = (rng.uniform(3 * i + 1) - 0.5) * M_PI * 0.9;
    const double r = r_min + rng.uniform(3 * i + 2) * (r_max - r_min);
    SphericalPoint s{az, el, r};
    out.push_back(from_spherical(s).cast<float>());
  }
  return out;
}

}  // namespace fixtures
}  // namespace levs
