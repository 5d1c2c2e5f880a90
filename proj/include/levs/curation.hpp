#pragma once

#include <vector>

#include "levs/geom.hpp"
#include "levs/rng.hpp"
#include "levs/sensor.hpp"

namespace levs {

struct FusionConfig {
  int window = 10;                         // N frames to fuse
  bool include_dynamic_from_current = true;
};

/// World-frame fused cloud: all points of the current frame plus static-only
/// points of the temporally nearest auxiliary frames.
struct FusedCloud {
  std::vector<Eigen::Vector3d> points;  // world frame
  std::vector<float> intensities;
  std::vector<int> source_frame_ids;
};

/// Curated pseudo scan in the extrapolated sensor frame.
struct PseudoScan {
  std::vector<Eigen::Vector3f> points;
  std::vector<float> intensities;
  std::vector<int> source_frame_ids;
  std::vector<Eigen::Vector3d> normals;  // unit, oriented toward the original sensor
};

struct EmptyWindowError : std::runtime_error {
  EmptyWindowError() : std::runtime_error("fusion selected no frames") {}
};

FusedCloud fuse(const std::vector<LidarFrame>& frames, size_t current_index,
                const FusionConfig& cfg);

/// Rigid change into the target sensor frame: p_s = invert(target) * p_w.
std::vector<Eigen::Vector3d> transform_to_view(const std::vector<Eigen::Vector3d>& world_points,
                                               const Pose& target);

/// Lateral shift: compose(base, translation [0, delta, 0]). Positive delta is
/// the sensor-frame +y direction.
Pose shift_pose(const Pose& base, double delta);

/// Fair Bernoulli sign (+1 or -1), reproducible from the stream's seed.
int sample_shift_direction(SignStream& stream);

/// mask[i] is true iff point i is the nearest in-FoV, in-range hit of its
/// range-map cell (ties by lowest index). Deterministic for any thread count.
std::vector<uint8_t> raycast(const std::vector<Eigen::Vector3f>& points, const SensorModel& m,
                             int threads = 1);

/// Keeps exactly the raycast-true subset; payload arrays filtered in lockstep.
struct CurlResult {
  std::vector<size_t> kept;  // indices into the input cloud, ascending
};
CurlResult occlusion_curl(const std::vector<Eigen::Vector3f>& points, const SensorModel& m,
                          int threads = 1);

struct NormalEstimate {
  std::vector<Eigen::Vector3d> normals;
  std::vector<uint8_t> degenerate;  // 1 where the PCA plane fit failed
};

/// Per-point PCA plane-fit normal over the k nearest neighbors, oriented so
/// n . (sensor_origin - p) >= 0. Degenerate neighborhoods fall back to the
/// normalized view direction and are flagged.
NormalEstimate estimate_normals(const std::vector<Eigen::Vector3d>& cloud,
                                const Eigen::Vector3d& sensor_origin, size_t k = 16);

/// Incidence-ratio intensity remap, clamped to [0,1]. Near-grazing original
/// incidence (|n . r_ori| < 1e-3) passes the input through unchanged.
float adjust_intensity(float intensity, const Eigen::Vector3d& normal,
                       const Eigen::Vector3d& ray_ori, const Eigen::Vector3d& ray_extra,
                       bool* passthrough = nullptr);

/// Full curation pipeline: fuse -> transform to the extrapolated view ->
/// occlusion curl -> intensity adjustment. Normals are estimated on the
/// world-frame fused cloud before curling.
PseudoScan curate(const std::vector<LidarFrame>& frames, size_t current_index,
                  const SensorModel& m, const FusionConfig& cfg, const Pose& target,
                  int threads = 1, size_t normal_k = 16);

}  // namespace levs
