#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "levs/geom.hpp"

namespace levs {

/// Timestamped point cloud in the sensor frame, with a world-from-sensor pose.
struct LidarFrame {
  std::vector<Eigen::Vector3f> points;
  std::vector<float> intensities;       // each in [0,1]
  std::vector<uint8_t> dynamic_flags;   // 1 = dynamic object point
  Pose pose;
  int64_t timestamp_us = 0;

  size_t size() const { return points.size(); }
  void validate() const;  // throws std::invalid_argument on broken invariants
};

/// LiDAR intrinsics: field of view, range-map resolution, sensing bound.
struct SensorModel {
  int height = 32;
  int width = 1088;
  double azimuth_min = -M_PI;
  double azimuth_max = M_PI;
  double elevation_min = -30.0 * M_PI / 180.0;
  double elevation_max = 10.0 * M_PI / 180.0;
  double max_range = 200.0;

  bool full_circle() const {
    return std::abs((azimuth_max - azimuth_min) - 2.0 * M_PI) < 1e-9;
  }
  size_t cell_count() const { return static_cast<size_t>(height) * width; }
  void validate() const;
};

/// h x w grid of (range, intensity, occupancy). Empty cells hold range -1,
/// intensity 0, occupancy 0.
struct RangeMap {
  int height = 0;
  int width = 0;
  std::vector<float> range;
  std::vector<float> intensity;
  std::vector<uint8_t> occupancy;

  RangeMap() = default;
  RangeMap(int h, int w)
      : height(h), width(w),
        range(static_cast<size_t>(h) * w, -1.0f),
        intensity(static_cast<size_t>(h) * w, 0.0f),
        occupancy(static_cast<size_t>(h) * w, 0) {}

  size_t cells() const { return range.size(); }
  size_t idx(int row, int col) const { return static_cast<size_t>(row) * width + col; }
  size_t occupied_count() const;

  bool operator==(const RangeMap& other) const = default;
};

struct Cell {
  int row = 0;
  int col = 0;
};

/// Maps spherical coordinates onto the range-map grid. Continuous coords are
/// rounded half-up; the azimuth column wraps modulo w for full-circle sensors.
/// Returns nullopt when the point falls outside the field of view.
std::optional<Cell> project_to_cell(const SphericalPoint& s, const SensorModel& m);

/// Nearest-hit rasterization: each occupied cell keeps the minimum range among
/// the points mapping to it (ties by lowest point index) and that point's
/// intensity. Points beyond max_range or out of FoV are ignored.
RangeMap rasterize(const std::vector<Eigen::Vector3f>& points,
                   const std::vector<float>& intensities,
                   const SensorModel& m);

}  // namespace levs
