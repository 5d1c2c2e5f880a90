// Acceptance suite: one PASS/FAIL line per criterion. Exits nonzero if any
// gating criterion fails. Criterion 12 is a soft performance report.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstring>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "levs/curation.hpp"
#include "levs/dropout.hpp"
#include "levs/fixtures.hpp"
#include "levs/io.hpp"
#include "levs/metrics.hpp"
#include "levs/rng.hpp"
#include "levs/splat.hpp"

namespace fs = std::filesystem;
using namespace levs;

namespace {

struct Report {
  int failures = 0;
  void line(int id, bool ok, const std::string& what, const std::string& detail = "") {
    std::cout << (ok ? "PASS" : "FAIL") << " " << (id < 10 ? " " : "") << id << ": " << what;
    if (!detail.empty()) std::cout << " (" << detail << ")";
    std::cout << "\n";
    if (!ok) ++failures;
  }
};

std::string read_bytes(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// --- criterion 1: raycast vs brute-force per-cell minimum -------------------

// Independent oracle: recomputes the cell assignment from scratch and scans
// every (point, cell) pair for the per-cell minimum with the lowest-index tie
// rule.
std::vector<uint8_t> raycast_oracle(const std::vector<Eigen::Vector3f>& pts,
                                    const SensorModel& m) {
  const size_t cells = static_cast<size_t>(m.height) * m.width;
  std::vector<int64_t> win(cells, -1);
  std::vector<double> best(cells, 0.0);
  const double az_span = m.azimuth_max - m.azimuth_min;
  const double el_span = m.elevation_max - m.elevation_min;
  const bool full = std::abs(az_span - 2.0 * M_PI) < 1e-9;
  for (size_t i = 0; i < pts.size(); ++i) {
    const double x = pts[i].x(), y = pts[i].y(), z = pts[i].z();
    const double r = std::sqrt(x * x + y * y + z * z);
    if (r <= 0.0 || r > m.max_range) continue;
    const double az = std::atan2(y, x);
    const double el = std::asin(std::clamp(z / r, -1.0, 1.0));
    const int row = static_cast<int>(std::floor((el - m.elevation_min) * m.height / el_span + 0.5));
    if (row < 0 || row >= m.height) continue;
    int col = static_cast<int>(std::floor((az - m.azimuth_min) * m.width / az_span + 0.5));
    if (full) {
      col %= m.width;
      if (col < 0) col += m.width;
    } else if (col < 0 || col >= m.width) {
      continue;
    }
    const size_t c = static_cast<size_t>(row) * m.width + col;
    if (win[c] < 0 || r < best[c] ||
        (r == best[c] && static_cast<int64_t>(i) < win[c])) {
      win[c] = static_cast<int64_t>(i);
      best[c] = r;
    }
  }
  std::vector<uint8_t> mask(pts.size(), 0);
  for (size_t c = 0; c < cells; ++c)
    if (win[c] >= 0) mask[win[c]] = 1;
  return mask;
}

bool criterion1() {
  std::mt19937_64 rng(1001);
  std::uniform_int_distribution<int> n_dist(100, 10000);
  std::uniform_int_distribution<int> h_dist(4, 32);
  std::uniform_int_distribution<int> w_dist(16, 256);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    SensorModel m;
    m.height = h_dist(rng);
    m.width = w_dist(rng);
    if (u(rng) < 0.5) {
      m.azimuth_min = -M_PI;
      m.azimuth_max = M_PI;
    } else {
      m.azimuth_min = -0.4 - 2.0 * u(rng);
      m.azimuth_max = 0.4 + 2.0 * u(rng);
    }
    m.elevation_min = -0.6 - 0.5 * u(rng);
    m.elevation_max = 0.2 + 0.5 * u(rng);
    m.max_range = 50.0 + 150.0 * u(rng);
    const auto pts = fixtures::random_cloud(static_cast<size_t>(n_dist(rng)), rng());
    const auto oracle = raycast_oracle(pts, m);
    if (raycast(pts, m, 1) != oracle) return false;
    if (raycast(pts, m, 4) != oracle) return false;
  }
  return true;
}

// --- criterion 2: curate identity vs direct rasterization -------------------

bool criterion2() {
  std::mt19937_64 rng(1002);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_real_distribution<float> uf(0.0f, 1.0f);
  const SensorModel m = fixtures::default_sensor();
  for (int trial = 0; trial < 20; ++trial) {
    LidarFrame f;
    Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
    q.normalize();
    f.pose = Pose::from_rt(q.toRotationMatrix(), {n(rng) * 10, n(rng) * 10, n(rng)});
    f.timestamp_us = trial;
    auto pts = fixtures::random_cloud(5000, 2000 + trial);
    f.points = std::move(pts);
    for (size_t i = 0; i < f.points.size(); ++i) {
      f.intensities.push_back(uf(rng));
      f.dynamic_flags.push_back(0);
    }
    FusionConfig cfg;
    cfg.window = 1;
    const PseudoScan scan = curate({f}, 0, m, cfg, shift_pose(f.pose, 0.0));
    const RangeMap direct = rasterize(f.points, f.intensities, m);
    const RangeMap curated = rasterize(scan.points, scan.intensities, m);
    if (!(direct == curated)) return false;
  }
  return true;
}

// --- criterion 3: two-plane occlusion ----------------------------------------

bool criterion3(std::string& detail) {
  const SensorModel m = fixtures::default_sensor();
  const auto scene = fixtures::two_plane(m);
  const CurlResult curl = occlusion_curl(scene.frame.points, m, 2);
  std::vector<uint8_t> kept(scene.frame.size(), 0);
  for (size_t i : curl.kept) kept[i] = 1;
  size_t far_covered_kept = 0, far_uncovered_lost = 0;
  for (size_t i = 0; i < scene.frame.size(); ++i) {
    if (!scene.is_far[i]) continue;
    if (scene.covered[i] && kept[i]) ++far_covered_kept;
    if (!scene.covered[i] && !kept[i]) ++far_uncovered_lost;
  }
  detail = "far kept in covered: " + std::to_string(far_covered_kept) +
           ", far lost in uncovered: " + std::to_string(far_uncovered_lost);
  return far_covered_kept == 0 && far_uncovered_lost == 0;
}

// --- criterion 4: intensity adjustment ---------------------------------------

bool criterion4() {
  // (a) identical rays pass through exactly.
  const Eigen::Vector3d n1(0, 0, 1), ray(3, 4, -2);
  if (adjust_intensity(0.37f, n1, ray, ray) != 0.37f) return false;

  // (b) 60 degrees incidence remapped to head-on doubles the intensity.
  const Eigen::Vector3d normal(0, 0, 1);
  const double s60 = std::sin(60.0 * M_PI / 180.0);
  const Eigen::Vector3d ray60(s60, 0.0, 0.5);   // 60 deg off the normal
  const Eigen::Vector3d ray0(0.0, 0.0, 1.0);    // along the normal
  if (std::abs(adjust_intensity(0.3f, normal, ray60, ray0) - 0.6) > 1e-6) return false;

  // (c) output stays in [0,1] over random configurations.
  std::mt19937_64 rng(1004);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<float> uf(0.0f, 1.0f);
  for (int i = 0; i < 100000; ++i) {
    Eigen::Vector3d nn(g(rng), g(rng), g(rng));
    if (nn.norm() < 1e-6) continue;
    nn.normalize();
    const Eigen::Vector3d ro(g(rng) * 5, g(rng) * 5, g(rng) * 5);
    const Eigen::Vector3d re(g(rng) * 5, g(rng) * 5, g(rng) * 5);
    if (ro.norm() < 1e-6 || re.norm() < 1e-6) continue;
    const float out = adjust_intensity(uf(rng), nn, ro, re);
    if (!(out >= 0.0f && out <= 1.0f)) return false;
  }
  return true;
}

// --- criterion 5: normal estimation ------------------------------------------

bool criterion5(std::string& detail) {
  // Planar cloud: normals along +/- z.
  const auto plane = fixtures::plane_cloud(40, 0.5);
  const auto pn = estimate_normals(plane, {10.0, 10.0, 8.0}, 16);
  for (const auto& nv : pn.normals) {
    const double angle = std::acos(std::clamp(std::abs(nv.z()), 0.0, 1.0));
    if (angle > 1e-3) return false;
  }

  // Sphere: undirected angle to the radial direction within 5 deg for >= 95%.
  const Eigen::Vector3d center(15.0, 0.0, 0.0);
  const auto sphere = fixtures::sphere_cloud(1000, 5.0, center);
  const auto sn = estimate_normals(sphere, Eigen::Vector3d::Zero(), 16);
  size_t good = 0;
  for (size_t i = 0; i < sphere.size(); ++i) {
    const Eigen::Vector3d radial = (sphere[i] - center).normalized();
    const double cosang = std::clamp(std::abs(sn.normals[i].dot(radial)), 0.0, 1.0);
    if (std::acos(cosang) < 5.0 * M_PI / 180.0) ++good;
  }
  detail = "sphere radial within 5 deg: " + std::to_string(good) + "/1000";
  return good >= 950;
}

// --- criterion 6: dropout statistics -----------------------------------------

bool criterion6(std::string& detail) {
  std::mt19937_64 rng(1006);
  std::uniform_real_distribution<float> d_in(1.0f, 50.0f);
  const size_t n = 100000;
  std::vector<Eigen::Vector3f> means;
  means.reserve(2 * n);
  for (size_t i = 0; i < n; ++i) means.push_back({d_in(rng), 0.0f, 0.0f});   // in ROI
  for (size_t i = 0; i < n; ++i) means.push_back({500.0f, 0.0f, 0.0f});     // beyond d_max

  const RoiSpec spec;
  const auto roi = roi_mask(means, Pose::identity(), spec);
  const DropoutMask mask = sample_mask(roi, 0.5, 123);
  size_t dropped_in = 0, dropped_out = 0;
  for (size_t i = 0; i < n; ++i) dropped_in += mask.drop[i];
  for (size_t i = n; i < 2 * n; ++i) dropped_out += mask.drop[i];
  const double frac = static_cast<double>(dropped_in) / n;
  detail = "in-ROI drop fraction " + std::to_string(frac) + ", out-of-ROI drops " +
           std::to_string(dropped_out);
  if (!(frac >= 0.494 && frac <= 0.506) || dropped_out != 0) return false;

  // Compensation leaves out-of-ROI opacities bit-identical.
  std::uniform_real_distribution<float> op(0.01f, 0.99f);
  std::vector<float> opac(2 * n);
  for (auto& o : opac) o = op(rng);
  const auto comp = compensate_opacity(opac, roi, 0.5);
  for (size_t i = n; i < 2 * n; ++i)
    if (std::memcmp(&comp[i], &opac[i], sizeof(float)) != 0) return false;
  return true;
}

// --- criterion 7: Monte Carlo dropout vs opacity compensation ----------------

bool criterion7(std::string& detail) {
  SensorModel m;
  m.height = 8;
  m.width = 64;
  const GaussianSet grid = fixtures::gaussian_grid(m, 10.0, 0.9f, 1, 2);
  const RoiSpec spec{m.max_range, m.elevation_min, m.elevation_max, 0.5};
  const auto roi = roi_mask(grid.means, Pose::identity(), spec);

  GaussianSet comp_set = grid;
  comp_set.opacities = compensate_opacity(grid.opacities, roi, 0.5);
  const RenderResult comp = render_range_map(comp_set, Pose::identity(), m);
  const RenderResult full = render_range_map(grid, Pose::identity(), m);

  const int renders = 10000;
  const size_t cells = m.cell_count();
  std::vector<double> sum(cells, 0.0), sumsq(cells, 0.0);
  for (int k = 0; k < renders; ++k) {
    const GaussianSet kept = apply_mask(grid, sample_mask(roi, 0.5, 5000 + k));
    const RenderResult r = render_range_map(kept, Pose::identity(), m);
    for (size_t c = 0; c < cells; ++c) {
      sum[c] += r.alpha[c];
      sumsq[c] += static_cast<double>(r.alpha[c]) * r.alpha[c];
    }
  }

  size_t checked = 0, bad = 0;
  for (size_t c = 0; c < cells; ++c) {
    if (!full.map.occupancy[c]) continue;
    ++checked;
    const double mean = sum[c] / renders;
    const double var = std::max(0.0, sumsq[c] / renders - mean * mean);
    const double se = std::sqrt(var / renders);
    if (std::abs(mean - comp.alpha[c]) > 3.0 * std::max(se, 1e-12)) ++bad;
  }
  detail = std::to_string(bad) + "/" + std::to_string(checked) + " cells beyond 3 SE";
  return checked > 0 && static_cast<double>(bad) <= 0.01 * static_cast<double>(checked);
}

// --- criterion 8: spherical math ----------------------------------------------

bool criterion8() {
  std::mt19937_64 rng(1008);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    Eigen::Vector3d p(g(rng) * 20, g(rng) * 20, g(rng) * 10);
    if (p.head<2>().norm() < 0.5) p.x() += 2.0;

    // Round trip.
    const SphericalPoint s = to_spherical(p);
    if ((from_spherical(s) - p).norm() > 1e-9) return false;

    // Jacobian vs central differences.
    const Eigen::Matrix3d jac = spherical_jacobian(p);
    const double h = 1e-6 * std::max(1.0, p.norm());
    for (int axis = 0; axis < 3; ++axis) {
      Eigen::Vector3d hi = p, lo = p;
      hi(axis) += h;
      lo(axis) -= h;
      const SphericalPoint a = to_spherical(hi), b = to_spherical(lo);
      double daz = a.azimuth - b.azimuth;
      if (daz > M_PI) daz -= 2.0 * M_PI;
      if (daz < -M_PI) daz += 2.0 * M_PI;
      const double fd[3] = {daz / (2 * h), (a.elevation - b.elevation) / (2 * h),
                            (a.range - b.range) / (2 * h)};
      for (int row = 0; row < 3; ++row) {
        const double scale = std::max(std::abs(jac(row, axis)), 1e-3);
        if (std::abs(jac(row, axis) - fd[row]) / scale > 1e-5) return false;
      }
    }
  }

  // Closed-form axis case: isotropic sigma at distance d gives angular
  // variance sigma^2/d^2 and range variance sigma^2.
  GaussianSet g1;
  g1.means = {{10.0f, 0.0f, 0.0f}};
  g1.scales = {Eigen::Vector3f::Constant(0.5f)};
  g1.quats = {{1, 0, 0, 0}};
  g1.opacities = {0.9f};
  g1.features = {0.5f};
  const auto proj = to_sensor_spherical(g1, Pose::identity());
  if (proj.gaussians.size() != 1) return false;
  const Eigen::Matrix3d& cov = proj.gaussians[0].cov;
  const double var = 0.25;
  if (std::abs(cov(0, 0) - var / 100.0) > 1e-9) return false;
  if (std::abs(cov(1, 1) - var / 100.0) > 1e-9) return false;
  if (std::abs(cov(2, 2) - var) > 1e-9) return false;
  return true;
}

// --- criterion 9: metrics oracles ----------------------------------------------

bool criterion9() {
  // Chamfer vs quadratic-time oracle.
  for (uint64_t seed : {42ull, 43ull}) {
    const auto a = fixtures::random_cloud(1500, seed);
    const auto b = fixtures::random_cloud(2000, seed + 10);
    auto dir = [](const std::vector<Eigen::Vector3f>& from,
                  const std::vector<Eigen::Vector3f>& to) {
      double sum = 0.0;
      for (const auto& p : from) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& q : to)
          best = std::min(best, (p.cast<double>() - q.cast<double>()).norm());
        sum += best;
      }
      return sum / static_cast<double>(from.size());
    };
    const double oracle = 0.5 * (dir(a, b) + dir(b, a));
    if (std::abs(chamfer(a, b) - oracle) > 1e-9) return false;
  }

  // Constant-offset depth error: exact given f32-representable inputs.
  const SensorModel m = fixtures::default_sensor();
  RangeMap gt(m.height, m.width), pred(m.height, m.width);
  std::fill(gt.occupancy.begin(), gt.occupancy.end(), uint8_t{1});
  std::fill(gt.range.begin(), gt.range.end(), 10.0f);
  pred = gt;
  std::fill(pred.range.begin(), pred.range.end(), 10.1f);
  const double diff = static_cast<double>(10.1f) - 10.0;
  if (depth_error(pred, gt) != diff * diff) return false;
  if (std::abs(depth_error(pred, gt) - 0.01) > 1e-6) return false;

  // Ray-drop accuracy with a single flipped cell.
  RangeMap flipped = gt;
  flipped.occupancy[7] = 0;
  const double cells = static_cast<double>(m.cell_count());
  if (raydrop_accuracy(flipped, gt) != (cells - 1.0) / cells) return false;
  return true;
}

// --- criterion 10: CLI determinism and format round trips -----------------------

int run_cmd(const std::string& cmd) { return std::system((cmd + " > /dev/null 2>&1").c_str()); }

bool criterion10(std::string& detail) {
  const char* cli = std::getenv("LEVS_CLI");
  if (!cli) {
    detail = "LEVS_CLI not set";
    return false;
  }
  const fs::path work = fs::temp_directory_path() / ("levs_accept_" + std::to_string(getpid()));
  fs::remove_all(work);
  fs::create_directories(work);
  const std::string W = work.string();
  const std::string C = std::string("\"") + cli + "\"";

  // In-process format round trips, byte-identical.
  {
    const SensorModel m = fixtures::default_sensor();
    const auto scene = fixtures::two_plane(m);
    write_levp(W + "/rt.levp", scene.frame);
    write_levp(W + "/rt2.levp", read_levp(W + "/rt.levp"));
    if (read_bytes(W + "/rt.levp") != read_bytes(W + "/rt2.levp")) {
      detail = "LEVP round trip";
      return false;
    }
    const RangeMap map = rasterize(scene.frame.points, scene.frame.intensities, m);
    write_levr(W + "/rt.levr", map);
    write_levr(W + "/rt2.levr", read_levr(W + "/rt.levr"));
    if (read_bytes(W + "/rt.levr") != read_bytes(W + "/rt2.levr")) {
      detail = "LEVR round trip";
      return false;
    }
    const GaussianSet grid = fixtures::gaussian_grid(m);
    write_levg(W + "/rt.levg", grid);
    write_levg(W + "/rt2.levg", read_levg(W + "/rt.levg"));
    if (read_bytes(W + "/rt.levg") != read_bytes(W + "/rt2.levg")) {
      detail = "LEVG round trip";
      return false;
    }
  }

  // Fixture generation twice: identical bytes.
  if (run_cmd(C + " gen-fixtures --out " + W + "/fx") != 0 ||
      run_cmd(C + " gen-fixtures --out " + W + "/fx2") != 0) {
    detail = "gen-fixtures failed";
    return false;
  }
  for (const auto& e : fs::directory_iterator(W + "/fx")) {
    const auto other = fs::path(W + "/fx2") / e.path().filename();
    if (read_bytes(e.path()) != read_bytes(other)) {
      detail = "gen-fixtures nondeterministic: " + e.path().filename().string();
      return false;
    }
  }

  // Small frame set for curate.
  fs::create_directories(W + "/frames");
  for (int i = 0; i < 4; ++i) {
    char name[32];
    std::snprintf(name, sizeof(name), "corridor_%03d.levp", i);
    fs::copy_file(fs::path(W + "/fx") / name, fs::path(W + "/frames") / name);
  }

  auto dir_bytes = [](const fs::path& dir) {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& e : fs::directory_iterator(dir))
      out.emplace_back(e.path().filename().string(), read_bytes(e.path()));
    std::sort(out.begin(), out.end());
    return out;
  };

  const std::string sensor = W + "/fx/sensor.json";
  for (int threads : {1, 2, 8}) {
    const std::string out = W + "/curate_t" + std::to_string(threads);
    const std::string cmd = C + " curate --frames " + W + "/frames --sensor " + sensor +
                            " --delta 4 --direction both --window 3 --seed 9 --threads " +
                            std::to_string(threads) + " --out " + out;
    if (run_cmd(cmd) != 0 || run_cmd(cmd) != 0) {  // also re-run in place
      detail = "curate failed";
      return false;
    }
  }
  const auto base = dir_bytes(W + "/curate_t1");
  if (base != dir_bytes(W + "/curate_t2") || base != dir_bytes(W + "/curate_t8")) {
    detail = "curate outputs differ across thread counts";
    return false;
  }

  // curl at 1/2/8 threads.
  for (int threads : {1, 2, 8}) {
    const std::string cmd = C + " curl --in " + W + "/fx/two_plane.levp --sensor " + sensor +
                            " --threads " + std::to_string(threads) + " --out " + W + "/curl_t" +
                            std::to_string(threads) + ".levp";
    if (run_cmd(cmd) != 0) {
      detail = "curl failed";
      return false;
    }
  }
  if (read_bytes(W + "/curl_t1.levp") != read_bytes(W + "/curl_t2.levp") ||
      read_bytes(W + "/curl_t1.levp") != read_bytes(W + "/curl_t8.levp")) {
    detail = "curl outputs differ across thread counts";
    return false;
  }

  // shift-pose, adjust-intensity, dropout-mask, render, eval: re-runs identical.
  if (run_cmd(C + " shift-pose --delta 4 --out " + W + "/pose.json") != 0 ||
      run_cmd(C + " shift-pose --delta 4 --out " + W + "/pose2.json") != 0 ||
      read_bytes(W + "/pose.json") != read_bytes(W + "/pose2.json")) {
    detail = "shift-pose";
    return false;
  }
  const std::string adj = C + " adjust-intensity --in " + W + "/curl_t1.levp --extra-pose " + W +
                          "/pose.json --k 16 --out " + W + "/adj";
  if (run_cmd(adj + "1.levp") != 0 || run_cmd(adj + "2.levp") != 0 ||
      read_bytes(W + "/adj1.levp") != read_bytes(W + "/adj2.levp")) {
    detail = "adjust-intensity";
    return false;
  }
  const std::string dm = C + " dropout-mask --gaussians " + W + "/fx/grid.levg --sensor " +
                         sensor + " --drop-rate 0.5 --seed 11 --out " + W + "/mask";
  if (run_cmd(dm + "1.bin") != 0 || run_cmd(dm + "2.bin") != 0 ||
      read_bytes(W + "/mask1.bin") != read_bytes(W + "/mask2.bin")) {
    detail = "dropout-mask";
    return false;
  }
  const std::string rd = C + " render --gaussians " + W + "/fx/grid.levg --sensor " + sensor +
                         " --drop-rate 0.5 --drop-seed 11 --out " + W + "/rend";
  if (run_cmd(rd + "1.levr") != 0 || run_cmd(rd + "2.levr") != 0 ||
      read_bytes(W + "/rend1.levr") != read_bytes(W + "/rend2.levr")) {
    detail = "render";
    return false;
  }
  const std::string full = C + " render --gaussians " + W + "/fx/grid.levg --sensor " + sensor +
                           " --out " + W + "/full.levr";
  const std::string ev = C + " eval --pred " + W + "/rend1.levr --gt " + W + "/full.levr --out " +
                         W + "/metrics";
  if (run_cmd(full) != 0 || run_cmd(ev + "1.json") != 0 || run_cmd(ev + "2.json") != 0 ||
      read_bytes(W + "/metrics1.json") != read_bytes(W + "/metrics2.json")) {
    detail = "eval";
    return false;
  }

  fs::remove_all(work);
  return true;
}

// --- criterion 11: fusion window densifies the pseudo scan ----------------------

bool criterion11(std::string& detail) {
  const SensorModel m = fixtures::default_sensor();
  const auto frames = fixtures::corridor(m);
  const Pose target = shift_pose(frames[0].pose, 4.0);
  size_t counts[3] = {0, 0, 0};
  const int windows[3] = {1, 5, 10};
  for (int i = 0; i < 3; ++i) {
    FusionConfig cfg;
    cfg.window = windows[i];
    const PseudoScan scan = curate(frames, 0, m, cfg, target, 2);
    counts[i] = rasterize(scan.points, scan.intensities, m).occupied_count();
  }
  detail = "occupied cells w1/w5/w10: " + std::to_string(counts[0]) + "/" +
           std::to_string(counts[1]) + "/" + std::to_string(counts[2]);
  return counts[0] <= counts[1] && counts[1] <= counts[2] &&
         static_cast<double>(counts[2]) >= 1.1 * static_cast<double>(counts[0]);
}

// --- criterion 12: performance floor (soft) --------------------------------------

bool criterion12(std::string& detail) {
  const auto cloud = fixtures::random_cloud(1000000, 77);
  const SensorModel m = fixtures::default_sensor();
  const auto t0 = std::chrono::steady_clock::now();
  const auto mask = raycast(cloud, m, 1);
  const auto curl = occlusion_curl(cloud, m, 1);
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  (void)mask;
  (void)curl;
  std::ostringstream os;
  os << "raycast+curl of 1e6 points: " << dt << " s single-threaded, target < 1 s, "
     << (dt < 1.0 ? "met" : "missed") << "; soft criterion, reported only";
  detail = os.str();
  return true;
}

}  // namespace

int main() {
  Report rep;
  std::string detail;

  rep.line(1, criterion1(), "raycast equals brute-force per-cell minimum on 100 random clouds");
  rep.line(2, criterion2(), "zero-shift single-frame curation reproduces direct rasterization");
  detail.clear();
  {
    const bool ok = criterion3(detail);
    rep.line(3, ok, "two-plane fixture: covered far points curl away, uncovered survive", detail);
  }
  rep.line(4, criterion4(), "intensity adjustment: identity, 60->0 deg example, [0,1] bounds");
  detail.clear();
  {
    const bool ok = criterion5(detail);
    rep.line(5, ok, "normal estimation on plane and sphere fixtures", detail);
  }
  detail.clear();
  {
    const bool ok = criterion6(detail);
    rep.line(6, ok, "dropout rate statistics and strict ROI confinement", detail);
  }
  detail.clear();
  {
    const bool ok = criterion7(detail);
    rep.line(7, ok, "mean of sampled dropout renders matches opacity compensation", detail);
  }
  rep.line(8, criterion8(), "spherical Jacobian, round trip, covariance axis case");
  rep.line(9, criterion9(), "metric oracles: chamfer, constant-offset depth, ray-drop flip");
  detail.clear();
  {
    const bool ok = criterion10(detail);
    rep.line(10, ok, "CLI byte-identical at 1/2/8 threads; formats round-trip", detail);
  }
  detail.clear();
  {
    const bool ok = criterion11(detail);
    rep.line(11, ok, "wider fusion window densifies the shifted pseudo scan", detail);
  }
  detail.clear();
  {
    const bool ok = criterion12(detail);
    rep.line(12, ok, "performance floor", detail);
  }

  if (rep.failures > 0) {
    std::cout << rep.failures << " criterion(s) failed\n";
    return 1;
  }
  std::cout << "all criteria passed\n";
  return 0;
}
