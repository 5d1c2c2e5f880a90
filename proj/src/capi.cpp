#include "lidar_evs.h"

#include <chrono>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "levs/curation.hpp"
#include "levs/dropout.hpp"
#include "levs/fixtures.hpp"
#include "levs/io.hpp"
#include "levs/metrics.hpp"
#include "levs/rng.hpp"
#include "levs/splat.hpp"

struct levs_frame {
  levs::LidarFrame v;
};
struct levs_sensor {
  levs::SensorModel v;
};
struct levs_rangemap {
  levs::RangeMap v;
};
struct levs_gaussians {
  levs::GaussianSet v;
};
struct levs_scan {
  levs::PseudoScan v;
};
struct levs_mask {
  levs::DropoutMask v;
};

namespace {

thread_local std::string g_last_error = "ok";

levs_status fail(levs_status code, const std::string& msg) {
  g_last_error = msg;
  return code;
}

template <typename Fn>
levs_status guard(Fn&& fn) {
  try {
    return fn();
  } catch (const levs::ParseError& e) {
    return fail(LEVS_ERR_PARSE, e.what());
  } catch (const levs::IoError& e) {
    return fail(LEVS_ERR_IO, e.what());
  } catch (const levs::DimensionMismatchError& e) {
    return fail(LEVS_ERR_MISMATCH, e.what());
  } catch (const levs::LengthMismatchError& e) {
    return fail(LEVS_ERR_MISMATCH, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(LEVS_ERR_CONFIG, e.what());
  } catch (const std::exception& e) {
    return fail(LEVS_ERR_INTERNAL, e.what());
  }
}

levs::Pose pose_from(const double m[16]) {
  levs::Pose p;
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) p.matrix(r, c) = m[r * 4 + c];
  return p;
}

void pose_to(const levs::Pose& p, double out[16]) {
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) out[r * 4 + c] = p.matrix(r, c);
}

bool any_null() { return false; }
template <typename T, typename... Rest>
bool any_null(const T* p, Rest... rest) {
  return p == nullptr || any_null(rest...);
}

levs::LidarFrame frame_from_scan(const levs::PseudoScan& scan, const levs::Pose& pose,
                                 int64_t timestamp_us) {
  levs::LidarFrame f;
  f.points = scan.points;
  f.intensities = scan.intensities;
  f.dynamic_flags.assign(scan.points.size(), 0);
  f.pose = pose;
  f.timestamp_us = timestamp_us;
  return f;
}

}  // namespace

extern "C" {

const char* levs_last_error(void) { return g_last_error.c_str(); }

/* ---- frames ---- */

levs_status levs_frame_load(const char* path, levs_frame** out) {
  if (any_null(path, out)) return fail(LEVS_ERR_CONFIG, "levs_frame_load: null argument");
  return guard([&] {
    *out = new levs_frame{levs::read_levp(path)};
    return LEVS_OK;
  });
}

levs_status levs_frame_save(const char* path, const levs_frame* frame) {
  if (any_null(path, frame)) return fail(LEVS_ERR_CONFIG, "levs_frame_save: null argument");
  return guard([&] {
    levs::write_levp(path, frame->v);
    return LEVS_OK;
  });
}

levs_status levs_frame_save_ascii(const char* path, const levs_frame* frame) {
  if (any_null(path, frame)) return fail(LEVS_ERR_CONFIG, "levs_frame_save_ascii: null argument");
  return guard([&] {
    levs::write_ascii_cloud(path, frame->v.points, frame->v.intensities);
    return LEVS_OK;
  });
}

levs_status levs_frame_create(const float* xyz, const float* intensities,
                              const uint8_t* dynamic_flags, uint64_t count,
                              const double pose[16], int64_t timestamp_us, levs_frame** out) {
  if (any_null(xyz, intensities, pose, out)) return fail(LEVS_ERR_CONFIG, "levs_frame_create: null argument");
  return guard([&] {
    levs::LidarFrame f;
    f.points.reserve(count);
    for (uint64_t i = 0; i < count; ++i)
      f.points.emplace_back(xyz[3 * i], xyz[3 * i + 1], xyz[3 * i + 2]);
    f.intensities.assign(intensities, intensities + count);
    if (dynamic_flags)
      f.dynamic_flags.assign(dynamic_flags, dynamic_flags + count);
    else
      f.dynamic_flags.assign(count, 0);
    f.pose = pose_from(pose);
    f.timestamp_us = timestamp_us;
    f.validate();
    *out = new levs_frame{std::move(f)};
    return LEVS_OK;
  });
}

void levs_frame_free(levs_frame* frame) { delete frame; }
uint64_t levs_frame_count(const levs_frame* frame) { return frame->v.size(); }
void levs_frame_pose(const levs_frame* frame, double out[16]) { pose_to(frame->v.pose, out); }
int64_t levs_frame_timestamp(const levs_frame* frame) { return frame->v.timestamp_us; }

/* ---- sensor models ---- */

levs_status levs_sensor_load(const char* path, levs_sensor** out) {
  if (any_null(path, out)) return fail(LEVS_ERR_CONFIG, "levs_sensor_load: null argument");
  return guard([&] {
    *out = new levs_sensor{levs::read_sensor_json(path)};
    return LEVS_OK;
  });
}

levs_status levs_sensor_save(const char* path, const levs_sensor* sensor) {
  if (any_null(path, sensor)) return fail(LEVS_ERR_CONFIG, "levs_sensor_save: null argument");
  return guard([&] {
    levs::write_sensor_json(path, sensor->v);
    return LEVS_OK;
  });
}

levs_status levs_sensor_default(levs_sensor** out) {
  *out = new levs_sensor{levs::fixtures::default_sensor()};
  return LEVS_OK;
}

void levs_sensor_free(levs_sensor* sensor) { delete sensor; }

void levs_sensor_dims(const levs_sensor* sensor, int* height, int* width) {
  if (height) *height = sensor->v.height;
  if (width) *width = sensor->v.width;
}

/* ---- range maps ---- */

levs_status levs_rangemap_load(const char* path, levs_rangemap** out) {
  if (any_null(path, out)) return fail(LEVS_ERR_CONFIG, "levs_rangemap_load: null argument");
  return guard([&] {
    *out = new levs_rangemap{levs::read_levr(path)};
    return LEVS_OK;
  });
}

levs_status levs_rangemap_save(const char* path, const levs_rangemap* map) {
  if (any_null(path, map)) return fail(LEVS_ERR_CONFIG, "levs_rangemap_save: null argument");
  return guard([&] {
    levs::write_levr(path, map->v);
    return LEVS_OK;
  });
}

void levs_rangemap_free(levs_rangemap* map) { delete map; }

void levs_rangemap_dims(const levs_rangemap* map, int* height, int* width) {
  if (height) *height = map->v.height;
  if (width) *width = map->v.width;
}

uint64_t levs_rangemap_occupied(const levs_rangemap* map) { return map->v.occupied_count(); }

/* ---- Gaussian sets ---- */

levs_status levs_gaussians_load(const char* path, levs_gaussians** out) {
  if (any_null(path, out)) return fail(LEVS_ERR_CONFIG, "levs_gaussians_load: null argument");
  return guard([&] {
    *out = new levs_gaussians{levs::read_levg(path)};
    return LEVS_OK;
  });
}

levs_status levs_gaussians_save(const char* path, const levs_gaussians* g) {
  if (any_null(path, g)) return fail(LEVS_ERR_CONFIG, "levs_gaussians_save: null argument");
  return guard([&] {
    levs::write_levg(path, g->v);
    return LEVS_OK;
  });
}

void levs_gaussians_free(levs_gaussians* g) { delete g; }
uint64_t levs_gaussians_count(const levs_gaussians* g) { return g->v.size(); }

/* ---- poses ---- */

levs_status levs_shift_pose(const double base[16], double delta, double out[16]) {
  if (any_null(base, out)) return fail(LEVS_ERR_CONFIG, "levs_shift_pose: null argument");
  return guard([&] {
    pose_to(levs::shift_pose(pose_from(base), delta), out);
    return LEVS_OK;
  });
}

int levs_shift_direction(uint64_t seed, uint64_t iteration) {
  return (levs::CounterRng{seed}.bits(iteration) & 1u) ? 1 : -1;
}

/* ---- curation pipeline ---- */

levs_status levs_curate(const levs_frame* const* frames, size_t n_frames, size_t current_index,
                        const levs_sensor* sensor, int window, int include_dynamic_from_current,
                        const double target_pose[16], int threads, levs_scan** out) {
  if (any_null(frames, sensor, target_pose, out)) return fail(LEVS_ERR_CONFIG, "levs_curate: null argument");
  return guard([&] {
    std::vector<levs::LidarFrame> fs;
    fs.reserve(n_frames);
    for (size_t i = 0; i < n_frames; ++i) fs.push_back(frames[i]->v);
    levs::FusionConfig cfg;
    cfg.window = window;
    cfg.include_dynamic_from_current = include_dynamic_from_current != 0;
    *out = new levs_scan{levs::curate(fs, current_index, sensor->v, cfg,
                                      pose_from(target_pose), threads)};
    return LEVS_OK;
  });
}

void levs_scan_free(levs_scan* scan) { delete scan; }
uint64_t levs_scan_count(const levs_scan* scan) { return scan->v.points.size(); }

levs_status levs_scan_save(const char* path, const levs_scan* scan, const double pose[16],
                           int64_t timestamp_us) {
  if (any_null(path, scan, pose)) return fail(LEVS_ERR_CONFIG, "levs_scan_save: null argument");
  return guard([&] {
    levs::write_levp(path, frame_from_scan(scan->v, pose_from(pose), timestamp_us));
    return LEVS_OK;
  });
}

levs_status levs_scan_save_ascii(const char* path, const levs_scan* scan) {
  if (any_null(path, scan)) return fail(LEVS_ERR_CONFIG, "levs_scan_save_ascii: null argument");
  return guard([&] {
    levs::write_ascii_cloud(path, scan->v.points, scan->v.intensities);
    return LEVS_OK;
  });
}

levs_status levs_rasterize(const levs_frame* frame, const levs_sensor* sensor,
                           levs_rangemap** out) {
  if (any_null(frame, sensor, out)) return fail(LEVS_ERR_CONFIG, "levs_rasterize: null argument");
  return guard([&] {
    *out = new levs_rangemap{levs::rasterize(frame->v.points, frame->v.intensities, sensor->v)};
    return LEVS_OK;
  });
}

levs_status levs_curl(const levs_frame* frame, const levs_sensor* sensor, int threads,
                      levs_frame** out) {
  if (any_null(frame, sensor, out)) return fail(LEVS_ERR_CONFIG, "levs_curl: null argument");
  return guard([&] {
    const auto curl = levs::occlusion_curl(frame->v.points, sensor->v, threads);
    levs::LidarFrame f;
    f.pose = frame->v.pose;
    f.timestamp_us = frame->v.timestamp_us;
    for (size_t i : curl.kept) {
      f.points.push_back(frame->v.points[i]);
      f.intensities.push_back(frame->v.intensities[i]);
      f.dynamic_flags.push_back(frame->v.dynamic_flags[i]);
    }
    *out = new levs_frame{std::move(f)};
    return LEVS_OK;
  });
}

levs_status levs_adjust_intensity(const levs_frame* frame, const double extra_pose[16],
                                  size_t k, levs_frame** out) {
  if (any_null(frame, extra_pose, out)) return fail(LEVS_ERR_CONFIG, "levs_adjust_intensity: null argument");
  return guard([&] {
    const levs::LidarFrame& f = frame->v;
    if (f.size() < k)
      return fail(LEVS_ERR_CONFIG, "adjust_intensity: cloud smaller than neighbor count");
    std::vector<Eigen::Vector3d> world;
    world.reserve(f.size());
    for (const auto& p : f.points) world.push_back(f.pose.apply(p.cast<double>()));
    const Eigen::Vector3d origin_ori = f.pose.position();
    const Eigen::Vector3d origin_extra = pose_from(extra_pose).position();
    const auto normals = levs::estimate_normals(world, origin_ori, k);
    levs::LidarFrame adjusted = f;
    for (size_t i = 0; i < f.size(); ++i) {
      adjusted.intensities[i] =
          levs::adjust_intensity(f.intensities[i], normals.normals[i],
                                 world[i] - origin_ori, world[i] - origin_extra);
    }
    *out = new levs_frame{std::move(adjusted)};
    return LEVS_OK;
  });
}

/* ---- dropout ---- */

levs_status levs_dropout_mask(const levs_gaussians* g, const double sensor_pose[16],
                              const levs_sensor* sensor, double rate, uint64_t seed,
                              levs_mask** out) {
  if (any_null(g, sensor_pose, sensor, out)) return fail(LEVS_ERR_CONFIG, "levs_dropout_mask: null argument");
  return guard([&] {
    levs::RoiSpec spec;
    spec.d_max = sensor->v.max_range;
    spec.elevation_min = sensor->v.elevation_min;
    spec.elevation_max = sensor->v.elevation_max;
    spec.drop_rate = rate;
    const auto roi = levs::roi_mask(g->v.means, pose_from(sensor_pose), spec);
    *out = new levs_mask{levs::sample_mask(roi, rate, seed)};
    return LEVS_OK;
  });
}

void levs_mask_free(levs_mask* mask) { delete mask; }

void levs_mask_counts(const levs_mask* mask, uint64_t* roi_count, uint64_t* drop_count) {
  uint64_t roi = 0, drop = 0;
  for (uint8_t b : mask->v.roi) roi += b;
  for (uint8_t b : mask->v.drop) drop += b;
  if (roi_count) *roi_count = roi;
  if (drop_count) *drop_count = drop;
}

levs_status levs_mask_save(const char* path, const levs_mask* mask) {
  if (any_null(path, mask)) return fail(LEVS_ERR_CONFIG, "levs_mask_save: null argument");
  return guard([&] {
    std::ofstream outf(path, std::ios::binary);
    if (!outf) return fail(LEVS_ERR_IO, std::string("cannot open for writing: ") + path);
    outf.write(reinterpret_cast<const char*>(mask->v.drop.data()),
               static_cast<std::streamsize>(mask->v.drop.size()));
    return LEVS_OK;
  });
}

/* ---- rendering ---- */

levs_status levs_render(const levs_gaussians* g, const double sensor_pose[16],
                        const levs_sensor* sensor, levs_drop_mode mode, double rate,
                        uint64_t seed, levs_rangemap** out) {
  if (any_null(g, sensor_pose, sensor, out)) return fail(LEVS_ERR_CONFIG, "levs_render: null argument");
  return guard([&] {
    const levs::Pose pose = pose_from(sensor_pose);
    levs::GaussianSet set = g->v;
    if (mode != LEVS_DROP_NONE) {
      levs::RoiSpec spec;
      spec.d_max = sensor->v.max_range;
      spec.elevation_min = sensor->v.elevation_min;
      spec.elevation_max = sensor->v.elevation_max;
      spec.drop_rate = rate;
      const auto roi = levs::roi_mask(set.means, pose, spec);
      if (mode == LEVS_DROP_SAMPLE) {
        set = levs::apply_mask(set, levs::sample_mask(roi, rate, seed));
      } else {
        set.opacities = levs::compensate_opacity(set.opacities, roi, rate);
      }
    }
    if (!set.means.empty()) {
      const auto proj = levs::to_sensor_spherical(set, pose);
      if (proj.gaussians.empty())
        return fail(LEVS_ERR_DEGENERATE, "all Gaussians pole-degenerate at this pose");
    }
    *out = new levs_rangemap{levs::render_range_map(set, pose, sensor->v).map};
    return LEVS_OK;
  });
}

/* ---- metrics ---- */

levs_status levs_eval_rangemaps(const levs_rangemap* pred, const levs_rangemap* gt,
                                levs_metrics* out) {
  if (any_null(pred, gt, out)) return fail(LEVS_ERR_CONFIG, "levs_eval_rangemaps: null argument");
  return guard([&] {
    out->depth_mse_median = levs::depth_error(pred->v, gt->v);
    out->intensity_rmse = levs::intensity_rmse(pred->v, gt->v);
    out->raydrop_accuracy = levs::raydrop_accuracy(pred->v, gt->v);
    out->chamfer = 0.0;
    return LEVS_OK;
  });
}

levs_status levs_chamfer(const levs_frame* pred, const levs_frame* gt, double* out) {
  if (any_null(pred, gt, out)) return fail(LEVS_ERR_CONFIG, "levs_chamfer: null argument");
  return guard([&] {
    *out = levs::chamfer(pred->v.points, gt->v.points);
    return LEVS_OK;
  });
}

/* ---- fixtures & bench ---- */

levs_status levs_gen_fixtures(const char* out_dir) {
  if (any_null(out_dir)) return fail(LEVS_ERR_CONFIG, "levs_gen_fixtures: null argument");
  return guard([&] {
    namespace fs = std::filesystem;
    namespace fx = levs::fixtures;
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    const levs::SensorModel sensor = fx::default_sensor();
    levs::write_sensor_json((dir / "sensor.json").string(), sensor);

    const auto planes = fx::two_plane(sensor);
    levs::write_levp((dir / "two_plane.levp").string(), planes.frame);

    const auto frames = fx::corridor(sensor);
    for (size_t i = 0; i < frames.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof(name), "corridor_%03zu.levp", i);
      levs::write_levp((dir / name).string(), frames[i]);
    }

    levs::LidarFrame sphere;
    for (const auto& p : fx::sphere_cloud(2000, 5.0, {15.0, 0.0, 0.0})) {
      sphere.points.push_back(p.cast<float>());
      sphere.intensities.push_back(0.5f);
      sphere.dynamic_flags.push_back(0);
    }
    levs::write_levp((dir / "sphere.levp").string(), sphere);

    levs::write_levg((dir / "grid.levg").string(), fx::gaussian_grid(sensor));
    return LEVS_OK;
  });
}

levs_status levs_bench(uint64_t points, int threads, char* json_out, size_t json_cap) {
  if (any_null(json_out)) return fail(LEVS_ERR_CONFIG, "levs_bench: null argument");
  return guard([&] {
    namespace fx = levs::fixtures;
    using clock = std::chrono::steady_clock;
    const levs::SensorModel sensor = fx::default_sensor();
    std::ostringstream os;
    os << "{\n  \"points\": " << points << ",\n  \"threads\": " << threads
       << ",\n  \"hardware_threads\": " << std::thread::hardware_concurrency() << ",\n";

    auto report = [&](const char* stage, double seconds, uint64_t n) {
      os << "  \"" << stage << "\": {\"seconds\": " << seconds
         << ", \"points_per_second\": " << (seconds > 0 ? n / seconds : 0.0) << "},\n";
    };

    const auto cloud = fx::random_cloud(points, 7);
    {
      const auto t0 = clock::now();
      auto mask = levs::raycast(cloud, sensor, threads);
      const double dt = std::chrono::duration<double>(clock::now() - t0).count();
      report("raycast", dt, points);
    }
    {
      const auto t0 = clock::now();
      auto curl = levs::occlusion_curl(cloud, sensor, threads);
      const double dt = std::chrono::duration<double>(clock::now() - t0).count();
      report("curl", dt, points);
    }
    {
      const auto frames = fx::corridor(sensor);
      const auto t0 = clock::now();
      auto fused = levs::fuse(frames, 0, levs::FusionConfig{});
      const double dt = std::chrono::duration<double>(clock::now() - t0).count();
      report("fuse", dt, fused.points.size());
    }
    {
      const auto grid = fx::gaussian_grid(sensor);
      const auto t0 = clock::now();
      auto render = levs::render_range_map(grid, levs::Pose::identity(), sensor);
      const double dt = std::chrono::duration<double>(clock::now() - t0).count();
      report("render", dt, grid.size());
    }
    std::string body = os.str();
    body.erase(body.rfind(",\n"), 1);  // trailing comma
    body += "}\n";
    if (body.size() + 1 > json_cap)
      return fail(LEVS_ERR_CONFIG, "bench: output buffer too small");
    std::memcpy(json_out, body.c_str(), body.size() + 1);
    return LEVS_OK;
  });
}

}  // extern "C"
