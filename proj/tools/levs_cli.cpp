// lidar-evs command line tool. Talks to the core exclusively through the
// public C API (lidar_evs.h).

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "lidar_evs.h"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void die(levs_status status) {
  std::cerr << "error: " << levs_last_error() << "\n";
  std::exit(static_cast<int>(status));
}

void check(levs_status status) {
  if (status != LEVS_OK) die(status);
}

// RAII wrappers over the C handles.
template <typename T, void (*Free)(T*)>
using Handle = std::unique_ptr<T, decltype([](T* p) { Free(p); })>;
using FrameH = Handle<levs_frame, levs_frame_free>;
using SensorH = Handle<levs_sensor, levs_sensor_free>;
using RangeMapH = Handle<levs_rangemap, levs_rangemap_free>;
using GaussiansH = Handle<levs_gaussians, levs_gaussians_free>;
using ScanH = Handle<levs_scan, levs_scan_free>;
using MaskH = Handle<levs_mask, levs_mask_free>;

FrameH load_frame(const std::string& path) {
  levs_frame* f = nullptr;
  check(levs_frame_load(path.c_str(), &f));
  return FrameH(f);
}

SensorH load_sensor(const std::string& path) {
  levs_sensor* s = nullptr;
  if (path.empty()) {
    check(levs_sensor_default(&s));
  } else {
    check(levs_sensor_load(path.c_str(), &s));
  }
  return SensorH(s);
}

std::array<double, 16> identity_pose() {
  return {1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1};
}

std::array<double, 16> read_pose_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open pose file " << path << "\n";
    std::exit(2);
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    std::cerr << "error: " << path << ": " << e.what() << "\n";
    std::exit(2);
  }
  const json& arr = j.is_object() ? j.at("matrix") : j;
  if (!arr.is_array() || arr.size() != 16) {
    std::cerr << "error: " << path << ": pose must be a 16-element matrix\n";
    std::exit(2);
  }
  std::array<double, 16> out{};
  for (int i = 0; i < 16; ++i) out[i] = arr[i].get<double>();
  return out;
}

json pose_to_json(const std::array<double, 16>& pose) {
  return json{{"matrix", pose}};
}

int default_threads() {
  if (const char* env = std::getenv("LIDAR_EVS_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  return 1;
}

std::vector<std::string> list_levp(const std::string& dir) {
  std::vector<std::string> paths;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ".levp")
      paths.push_back(entry.path().string());
  std::sort(paths.begin(), paths.end());
  return paths;
}

struct CurateOpts {
  std::string config;
  std::string frames_dir;
  std::string sensor_path;
  std::string out_dir = ".";
  double delta = 4.0;
  std::string direction = "both";
  int window = 10;
  uint64_t seed = 0;
  int threads = default_threads();
  bool ascii = false;
};

void apply_config(CurateOpts& o, const CLI::App& cmd) {
  if (o.config.empty()) return;
  std::ifstream in(o.config);
  if (!in) {
    std::cerr << "error: cannot open config " << o.config << "\n";
    std::exit(3);
  }
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    std::cerr << "error: " << o.config << ": " << e.what() << "\n";
    std::exit(3);
  }
  // Flags win over config values.
  auto unset = [&](const char* flag) { return cmd.count(flag) == 0; };
  if (j.contains("frames_dir") && unset("--frames")) o.frames_dir = j["frames_dir"];
  if (j.contains("sensor") && unset("--sensor")) o.sensor_path = j["sensor"];
  if (j.contains("out_dir") && unset("--out")) o.out_dir = j["out_dir"];
  if (j.contains("delta_m") && unset("--delta")) o.delta = j["delta_m"];
  if (j.contains("direction") && unset("--direction")) o.direction = j["direction"];
  if (j.contains("window") && unset("--window")) o.window = j["window"];
  if (j.contains("seed") && unset("--seed")) o.seed = j["seed"];
  if (j.contains("threads") && unset("--threads")) o.threads = j["threads"];
}

int run_curate(const CurateOpts& o) {
  if (o.frames_dir.empty()) {
    std::cerr << "error: no frame directory given (--frames or config frames_dir)\n";
    return 3;
  }
  if (o.delta < 0.0 || o.window < 1) {
    std::cerr << "error: delta must be >= 0 and window >= 1\n";
    return 3;
  }
  const auto paths = list_levp(o.frames_dir);
  if (paths.empty()) {
    std::cerr << "error: no .levp frames in " << o.frames_dir << "\n";
    return 3;
  }
  SensorH sensor = load_sensor(o.sensor_path);
  std::vector<FrameH> frames;
  std::vector<const levs_frame*> raw;
  for (const auto& p : paths) {
    frames.push_back(load_frame(p));
    raw.push_back(frames.back().get());
  }
  fs::create_directories(o.out_dir);

  for (size_t i = 0; i < frames.size(); ++i) {
    std::vector<std::pair<std::string, double>> shifts;
    // Convention: "left" is the sensor-frame +y shift, "right" is -y.
    if (o.direction == "left" || o.direction == "both") shifts.emplace_back("left", o.delta);
    if (o.direction == "right" || o.direction == "both") shifts.emplace_back("right", -o.delta);
    if (o.direction == "random") {
      const int sign = levs_shift_direction(o.seed, i);
      shifts.emplace_back(sign > 0 ? "left" : "right", sign * o.delta);
    }
    if (shifts.empty()) {
      std::cerr << "error: unknown direction '" << o.direction << "'\n";
      return 3;
    }
    std::array<double, 16> base{};
    levs_frame_pose(raw[i], base.data());
    for (const auto& [label, delta] : shifts) {
      std::array<double, 16> target{};
      check(levs_shift_pose(base.data(), delta, target.data()));
      levs_scan* scan = nullptr;
      check(levs_curate(raw.data(), raw.size(), i, sensor.get(), o.window, 1, target.data(),
                        o.threads, &scan));
      ScanH scan_h(scan);

      char stem[64];
      std::snprintf(stem, sizeof(stem), "pseudo_%04zu_%s", i, label.c_str());
      const fs::path out_levp = fs::path(o.out_dir) / (std::string(stem) + ".levp");
      check(levs_scan_save(out_levp.string().c_str(), scan, target.data(),
                           levs_frame_timestamp(raw[i])));
      if (o.ascii)
        check(levs_scan_save_ascii(
            (fs::path(o.out_dir) / (std::string(stem) + ".xyz")).string().c_str(), scan));

      json side;
      side["source_frame"] = paths[i];
      side["current_index"] = i;
      side["window"] = o.window;
      side["delta_m"] = delta;
      side["direction"] = label;
      side["seed"] = o.seed;
      side["point_count"] = levs_scan_count(scan);
      side["target_pose"] = target;
      std::ofstream((fs::path(o.out_dir) / (std::string(stem) + ".json")).string())
          << side.dump(2) << "\n";
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lidar-evs: extrapolated-view pseudo-LiDAR curation and validation tools"};
  app.require_subcommand(1);

  // curate
  CurateOpts co;
  auto* curate = app.add_subcommand("curate", "Generate pseudo scans for shifted poses");
  curate->add_option("--config", co.config, "JSON config; flags override its values");
  curate->add_option("--frames", co.frames_dir, "Directory of .levp frames");
  curate->add_option("--sensor", co.sensor_path, "Sensor JSON (default: 32x1088)");
  curate->add_option("--delta", co.delta, "Lane-width shift in meters");
  curate->add_option("--direction", co.direction, "left | right | both | random");
  curate->add_option("--window", co.window, "Frames to fuse");
  curate->add_option("--seed", co.seed, "Seed for random direction choice");
  curate->add_option("--threads", co.threads, "Worker threads (env LIDAR_EVS_THREADS)");
  curate->add_option("--out", co.out_dir, "Output directory");
  curate->add_flag("--ascii", co.ascii, "Also write ASCII xyz clouds");

  // shift-pose
  std::string sp_pose, sp_out;
  double sp_delta = 4.0;
  auto* shift = app.add_subcommand("shift-pose", "Apply a lateral shift to a pose");
  shift->add_option("--pose", sp_pose, "Pose JSON ({\"matrix\": [16]}); identity if omitted");
  shift->add_option("--delta", sp_delta, "Signed shift in meters (+y)");
  shift->add_option("--out", sp_out, "Output pose JSON (stdout if omitted)");

  // curl
  std::string cu_in, cu_sensor, cu_out;
  int cu_threads = default_threads();
  bool cu_ascii = false;
  auto* curl = app.add_subcommand("curl", "Occlusion-curl a frame (nearest hit per cell)");
  curl->add_option("--in", cu_in, "Input .levp")->required();
  curl->add_option("--sensor", cu_sensor, "Sensor JSON");
  curl->add_option("--out", cu_out, "Output .levp")->required();
  curl->add_option("--threads", cu_threads, "Worker threads");
  curl->add_flag("--ascii", cu_ascii, "Also write ASCII xyz next to the output");

  // adjust-intensity
  std::string ai_in, ai_pose, ai_out;
  size_t ai_k = 16;
  auto* adjust = app.add_subcommand("adjust-intensity",
                                    "Incidence-based intensity remap toward a pose");
  adjust->add_option("--in", ai_in, "Input .levp")->required();
  adjust->add_option("--extra-pose", ai_pose, "Extrapolated pose JSON")->required();
  adjust->add_option("--k", ai_k, "Neighbors for normal estimation");
  adjust->add_option("--out", ai_out, "Output .levp")->required();

  // dropout-mask
  std::string dm_gaussians, dm_pose, dm_sensor, dm_out;
  double dm_rate = 0.5;
  uint64_t dm_seed = 0;
  auto* dmask = app.add_subcommand("dropout-mask", "Sample a spatially-constrained dropout mask");
  dmask->add_option("--gaussians", dm_gaussians, "Input .levg")->required();
  dmask->add_option("--pose", dm_pose, "Sensor pose JSON (identity if omitted)");
  dmask->add_option("--sensor", dm_sensor, "Sensor JSON");
  dmask->add_option("--drop-rate", dm_rate, "Dropout rate in [0,1)");
  dmask->add_option("--seed", dm_seed, "Mask seed");
  dmask->add_option("--out", dm_out, "Output mask (flat u8) path")->required();

  // render
  std::string rd_gaussians, rd_pose, rd_sensor, rd_out;
  double rd_rate = 0.0;
  uint64_t rd_seed = 0;
  bool rd_compensate = false, rd_have_seed = false;
  auto* render = app.add_subcommand("render", "Forward spherical Gaussian range-map render");
  render->add_option("--gaussians", rd_gaussians, "Input .levg")->required();
  render->add_option("--pose", rd_pose, "Sensor pose JSON (identity if omitted)");
  render->add_option("--sensor", rd_sensor, "Sensor JSON");
  render->add_option("--drop-rate", rd_rate, "Dropout rate in [0,1)");
  auto* seed_opt = render->add_option("--drop-seed", rd_seed, "Sample a dropout mask");
  render->add_flag("--compensate", rd_compensate, "Opacity compensation instead of sampling");
  render->add_option("--out", rd_out, "Output .levr")->required();

  // eval
  std::string ev_pred, ev_gt, ev_out;
  auto* eval = app.add_subcommand("eval", "Metrics between prediction and ground truth");
  eval->add_option("--pred", ev_pred, "Predicted .levr or .levp")->required();
  eval->add_option("--gt", ev_gt, "Ground-truth file of the same kind")->required();
  eval->add_option("--out", ev_out, "Metrics JSON path (stdout if omitted)");

  // bench
  uint64_t bn_points = 1000000;
  int bn_threads = default_threads();
  auto* bench = app.add_subcommand("bench", "Stage timings on synthetic scenes");
  bench->add_option("--points", bn_points, "Synthetic cloud size");
  bench->add_option("--threads", bn_threads, "Worker threads");

  // gen-fixtures
  std::string gf_out = "fixtures";
  auto* genfix = app.add_subcommand("gen-fixtures", "Write the canonical synthetic test scenes");
  genfix->add_option("--out", gf_out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  if (curate->parsed()) {
    apply_config(co, *curate);
    return run_curate(co);
  }

  if (shift->parsed()) {
    const auto base = sp_pose.empty() ? identity_pose() : read_pose_json(sp_pose);
    std::array<double, 16> out{};
    check(levs_shift_pose(base.data(), sp_delta, out.data()));
    const std::string text = pose_to_json(out).dump(2) + "\n";
    if (sp_out.empty())
      std::cout << text;
    else
      std::ofstream(sp_out) << text;
    return 0;
  }

  if (curl->parsed()) {
    FrameH frame = load_frame(cu_in);
    SensorH sensor = load_sensor(cu_sensor);
    levs_frame* out = nullptr;
    check(levs_curl(frame.get(), sensor.get(), cu_threads, &out));
    FrameH out_h(out);
    check(levs_frame_save(cu_out.c_str(), out));
    if (cu_ascii) check(levs_frame_save_ascii((cu_out + ".xyz").c_str(), out));
    return 0;
  }

  if (adjust->parsed()) {
    FrameH frame = load_frame(ai_in);
    const auto pose = read_pose_json(ai_pose);
    levs_frame* out = nullptr;
    check(levs_adjust_intensity(frame.get(), pose.data(), ai_k, &out));
    FrameH out_h(out);
    check(levs_frame_save(ai_out.c_str(), out));
    return 0;
  }

  if (dmask->parsed()) {
    GaussiansH g = [&] {
      levs_gaussians* p = nullptr;
      check(levs_gaussians_load(dm_gaussians.c_str(), &p));
      return GaussiansH(p);
    }();
    SensorH sensor = load_sensor(dm_sensor);
    const auto pose = dm_pose.empty() ? identity_pose() : read_pose_json(dm_pose);
    levs_mask* mask = nullptr;
    check(levs_dropout_mask(g.get(), pose.data(), sensor.get(), dm_rate, dm_seed, &mask));
    MaskH mask_h(mask);
    check(levs_mask_save(dm_out.c_str(), mask));
    uint64_t roi = 0, drop = 0;
    levs_mask_counts(mask, &roi, &drop);
    json side;
    side["seed"] = dm_seed;
    side["rate"] = dm_rate;
    side["gaussians"] = levs_gaussians_count(g.get());
    side["roi_count"] = roi;
    side["drop_count"] = drop;
    int h = 0, w = 0;
    levs_sensor_dims(sensor.get(), &h, &w);
    side["sensor"] = {{"height", h}, {"width", w}};
    std::ofstream(dm_out + ".json") << side.dump(2) << "\n";
    return 0;
  }

  if (render->parsed()) {
    rd_have_seed = seed_opt->count() > 0;
    GaussiansH g = [&] {
      levs_gaussians* p = nullptr;
      check(levs_gaussians_load(rd_gaussians.c_str(), &p));
      return GaussiansH(p);
    }();
    SensorH sensor = load_sensor(rd_sensor);
    const auto pose = rd_pose.empty() ? identity_pose() : read_pose_json(rd_pose);
    levs_drop_mode mode = LEVS_DROP_NONE;
    if (rd_compensate)
      mode = LEVS_DROP_COMPENSATE;
    else if (rd_have_seed)
      mode = LEVS_DROP_SAMPLE;
    levs_rangemap* map = nullptr;
    check(levs_render(g.get(), pose.data(), sensor.get(), mode, rd_rate, rd_seed, &map));
    RangeMapH map_h(map);
    check(levs_rangemap_save(rd_out.c_str(), map));
    return 0;
  }

  if (eval->parsed()) {
    auto kind = [](const std::string& path) -> std::string {
      std::ifstream in(path, std::ios::binary);
      char magic[4] = {};
      in.read(magic, 4);
      return in ? std::string(magic, 4) : std::string();
    };
    const std::string kp = kind(ev_pred), kg = kind(ev_gt);
    if (kp != kg || (kp != "LEVR" && kp != "LEVP")) {
      std::cerr << "error: inputs must both be LEVR or both LEVP\n";
      return 2;
    }
    json out;
    if (kp == "LEVR") {
      levs_rangemap *pred = nullptr, *gt = nullptr;
      check(levs_rangemap_load(ev_pred.c_str(), &pred));
      RangeMapH pred_h(pred);
      check(levs_rangemap_load(ev_gt.c_str(), &gt));
      RangeMapH gt_h(gt);
      levs_metrics m{};
      check(levs_eval_rangemaps(pred, gt, &m));
      out["depth_mse_median"] = m.depth_mse_median;
      out["intensity_rmse"] = m.intensity_rmse;
      out["raydrop_accuracy"] = m.raydrop_accuracy;
    } else {
      FrameH pred = load_frame(ev_pred);
      FrameH gt = load_frame(ev_gt);
      double cd = 0.0;
      check(levs_chamfer(pred.get(), gt.get(), &cd));
      out["chamfer"] = cd;
    }
    const std::string text = out.dump(2) + "\n";
    if (ev_out.empty())
      std::cout << text;
    else
      std::ofstream(ev_out) << text;
    return 0;
  }

  if (bench->parsed()) {
    std::vector<char> buf(1 << 16);
    check(levs_bench(bn_points, bn_threads, buf.data(), buf.size()));
    std::cout << buf.data();
    return 0;
  }

  if (genfix->parsed()) {
    check(levs_gen_fixtures(gf_out.c_str()));
    std::cout << "fixtures written to " << gf_out << "\n";
    return 0;
  }

  return 0;
}
