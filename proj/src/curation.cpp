#include "levs/curation.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <thread>

#include "levs/kdtree.hpp"

namespace levs {

namespace {

/// Frame indices contributing to the fusion window: the current frame plus the
/// window-1 temporally nearest others (ties by lower frame index).
std::vector<size_t> select_window(const std::vector<LidarFrame>& frames, size_t current,
                                  int window) {
  std::vector<size_t> others;
  for (size_t i = 0; i < frames.size(); ++i)
    if (i != current) others.push_back(i);
  std::sort(others.begin(), others.end(), [&](size_t a, size_t b) {
    const int64_t da = std::abs(frames[a].timestamp_us - frames[current].timestamp_us);
    const int64_t db = std::abs(frames[b].timestamp_us - frames[current].timestamp_us);
    return da < db || (da == db && a < b);
  });
  const size_t take = std::min<size_t>(others.size(), static_cast<size_t>(window) - 1);
  std::vector<size_t> selected{current};
  selected.insert(selected.end(), others.begin(), others.begin() + take);
  // Auxiliary frames appended in ascending index order for determinism.
  std::sort(selected.begin() + 1, selected.end());
  return selected;
}

}  // namespace

FusedCloud fuse(const std::vector<LidarFrame>& frames, size_t current_index,
                const FusionConfig& cfg) {
  if (current_index >= frames.size()) throw std::out_of_range("fuse: current_index out of range");
  if (cfg.window < 1) throw std::invalid_argument("fuse: window must be >= 1");
  const auto selected = select_window(frames, current_index, cfg.window);
  if (selected.empty()) throw EmptyWindowError{};

  FusedCloud out;
  for (size_t s = 0; s < selected.size(); ++s) {
    const size_t fi = selected[s];
    const LidarFrame& f = frames[fi];
    const bool is_current = fi == current_index;
    const bool keep_dynamic = is_current && cfg.include_dynamic_from_current;
    const Eigen::Matrix3d r = f.pose.rotation();
    const Eigen::Vector3d t = f.pose.position();
    for (size_t i = 0; i < f.size(); ++i) {
      if (f.dynamic_flags[i] && !keep_dynamic) continue;
      out.points.push_back(r * f.points[i].cast<double>() + t);
      out.intensities.push_back(f.intensities[i]);
      out.source_frame_ids.push_back(static_cast<int>(fi));
    }
  }
  return out;
}

std::vector<Eigen::Vector3d> transform_to_view(const std::vector<Eigen::Vector3d>& world_points,
                                               const Pose& target) {
  const Pose inv = invert(target);
  const Eigen::Matrix3d r = inv.rotation();
  const Eigen::Vector3d t = inv.position();
  std::vector<Eigen::Vector3d> out;
  out.reserve(world_points.size());
  for (const auto& p : world_points) out.push_back(r * p + t);
  return out;
}

Pose shift_pose(const Pose& base, double delta) {
  return compose(base, Pose::translation({0.0, delta, 0.0}));
}

int sample_shift_direction(SignStream& stream) { return stream.next(); }

namespace {

struct CellBest {
  double range;
  int64_t index;
};

/// Per-cell minimum over a contiguous index range.
void raycast_chunk(const std::vector<Eigen::Vector3f>& points, const SensorModel& m,
                   size_t begin, size_t end, std::vector<CellBest>& best) {
  for (size_t i = begin; i < end; ++i) {
    const Eigen::Vector3d p = points[i].cast<double>();
    const double r = p.norm();
    if (r <= 0.0 || r > m.max_range) continue;
    const SphericalPoint s = to_spherical(p);
    const auto cell = project_to_cell(s, m);
    if (!cell) continue;
    const size_t c = static_cast<size_t>(cell->row) * m.width + cell->col;
    CellBest& b = best[c];
    if (b.index < 0 || r < b.range || (r == b.range && static_cast<int64_t>(i) < b.index)) {
      b.range = r;
      b.index = static_cast<int64_t>(i);
    }
  }
}

}  // namespace

std::vector<uint8_t> raycast(const std::vector<Eigen::Vector3f>& points, const SensorModel& m,
                             int threads) {
  m.validate();
  const size_t cells = m.cell_count();
  const size_t n = points.size();
  threads = std::max(1, threads);
  const size_t nthreads = std::min<size_t>(threads, std::max<size_t>(n, 1));

  std::vector<std::vector<CellBest>> partials(nthreads,
                                              std::vector<CellBest>(cells, CellBest{0.0, -1}));
  if (nthreads == 1) {
    raycast_chunk(points, m, 0, n, partials[0]);
  } else {
    std::vector<std::thread> pool;
    const size_t chunk = (n + nthreads - 1) / nthreads;
    for (size_t t = 0; t < nthreads; ++t) {
      const size_t begin = t * chunk;
      const size_t end = std::min(n, begin + chunk);
      pool.emplace_back(raycast_chunk, std::cref(points), std::cref(m), begin, end,
                        std::ref(partials[t]));
    }
    for (auto& th : pool) th.join();
  }

  // Deterministic merge: (range, index) lexicographic minimum.
  std::vector<CellBest>& merged = partials[0];
  for (size_t t = 1; t < nthreads; ++t) {
    for (size_t c = 0; c < cells; ++c) {
      const CellBest& b = partials[t][c];
      if (b.index < 0) continue;
      CellBest& a = merged[c];
      if (a.index < 0 || b.range < a.range || (b.range == a.range && b.index < a.index)) a = b;
    }
  }

  std::vector<uint8_t> mask(n, 0);
  for (size_t c = 0; c < cells; ++c)
    if (merged[c].index >= 0) mask[merged[c].index] = 1;
  return mask;
}

CurlResult occlusion_curl(const std::vector<Eigen::Vector3f>& points, const SensorModel& m,
                          int threads) {
  const auto mask = raycast(points, m, threads);
  CurlResult out;
  for (size_t i = 0; i < mask.size(); ++i)
    if (mask[i]) out.kept.push_back(i);
  return out;
}

NormalEstimate estimate_normals(const std::vector<Eigen::Vector3d>& cloud,
                                const Eigen::Vector3d& sensor_origin, size_t k) {
  if (k < 3) throw std::invalid_argument("estimate_normals: k must be >= 3");
  if (cloud.size() < k) throw std::invalid_argument("estimate_normals: cloud smaller than k");
  KdTree tree(cloud);
  NormalEstimate out;
  out.normals.resize(cloud.size());
  out.degenerate.assign(cloud.size(), 0);
  for (size_t i = 0; i < cloud.size(); ++i) {
    const auto nbrs = tree.knn(cloud[i], k);
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (size_t j : nbrs) mean += cloud[j];
    mean /= static_cast<double>(nbrs.size());
    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (size_t j : nbrs) {
      const Eigen::Vector3d d = cloud[j] - mean;
      cov += d * d.transpose();
    }
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
    const Eigen::Vector3d view = sensor_origin - cloud[i];
    // Coincident or collinear neighborhoods leave no defined plane.
    const double spread = eig.eigenvalues()(1);
    if (!(spread > 1e-12 * std::max(1.0, cov.trace()))) {
      const double vn = view.norm();
      out.normals[i] = vn > 1e-12 ? Eigen::Vector3d(view / vn) : Eigen::Vector3d::UnitZ();
      out.degenerate[i] = 1;
      continue;
    }
    Eigen::Vector3d n = eig.eigenvectors().col(0);  // smallest eigenvalue
    if (n.dot(view) < 0.0) n = -n;
    out.normals[i] = n.normalized();
  }
  return out;
}

float adjust_intensity(float intensity, const Eigen::Vector3d& normal,
                       const Eigen::Vector3d& ray_ori, const Eigen::Vector3d& ray_extra,
                       bool* passthrough) {
  const double no = ray_ori.norm();
  const double ne = ray_extra.norm();
  if (no < 1e-12 || ne < 1e-12) throw std::invalid_argument("adjust_intensity: zero ray");
  const double cos_ori = normal.dot(ray_ori) / no;
  if (std::abs(cos_ori) < 1e-3) {
    // Grazing incidence at the original view: no reliable reflectance signal.
    if (passthrough) *passthrough = true;
    return intensity;
  }
  if (passthrough) *passthrough = false;
  const double cos_extra = normal.dot(ray_extra) / ne;
  const double adjusted = static_cast<double>(intensity) * (cos_extra / cos_ori);
  return static_cast<float>(std::clamp(adjusted, 0.0, 1.0));
}

PseudoScan curate(const std::vector<LidarFrame>& frames, size_t current_index,
                  const SensorModel& m, const FusionConfig& cfg, const Pose& target,
                  int threads, size_t normal_k) {
  const FusedCloud fused = fuse(frames, current_index, cfg);
  const Eigen::Vector3d origin_ori = frames[current_index].pose.position();
  const Eigen::Vector3d origin_extra = target.position();

  // Normals on the pre-curl world cloud so occluded-at-extra geometry still
  // supports the plane fits.
  NormalEstimate normals;
  const bool have_normals = fused.points.size() >= normal_k;
  if (have_normals) normals = estimate_normals(fused.points, origin_ori, normal_k);

  const auto sensor_points_d = transform_to_view(fused.points, target);
  // Quantize to the serialized f32 precision before curling so the pipeline
  // output matches its LEVP round trip exactly.
  std::vector<Eigen::Vector3f> sensor_points;
  sensor_points.reserve(sensor_points_d.size());
  for (const auto& p : sensor_points_d) sensor_points.push_back(p.cast<float>());

  const CurlResult curl = occlusion_curl(sensor_points, m, threads);

  PseudoScan scan;
  scan.points.reserve(curl.kept.size());
  scan.intensities.reserve(curl.kept.size());
  scan.source_frame_ids.reserve(curl.kept.size());
  scan.normals.reserve(curl.kept.size());
  for (size_t i : curl.kept) {
    scan.points.push_back(sensor_points[i]);
    scan.source_frame_ids.push_back(fused.source_frame_ids[i]);
    float intensity = fused.intensities[i];
    if (have_normals) {
      const Eigen::Vector3d ray_ori = fused.points[i] - origin_ori;
      const Eigen::Vector3d ray_extra = fused.points[i] - origin_extra;
      intensity = adjust_intensity(intensity, normals.normals[i], ray_ori, ray_extra);
      scan.normals.push_back(normals.normals[i]);
    }
    scan.intensities.push_back(intensity);
  }
  return scan;
}

}  // namespace levs
