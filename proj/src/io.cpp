#include "levs/io.hpp"

#include <cstring>
#include <fstream>

#include <nlohmann/json.hpp>

namespace levs {

ParseError::ParseError(std::string file, uint64_t byte_offset, const std::string& what)
    : std::runtime_error(file + " @ byte " + std::to_string(byte_offset) + ": " + what),
      path(std::move(file)),
      offset(byte_offset) {}

namespace {

class Reader {
 public:
  Reader(const std::string& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw IoError("cannot open file: " + path);
  }

  template <typename T>
  T get() {
    T v{};
    in_.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in_) throw ParseError(path_, offset_, "unexpected end of file");
    offset_ += sizeof(T);
    return v;
  }

  void raw(void* dst, size_t bytes) {
    in_.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(bytes));
    if (!in_) throw ParseError(path_, offset_, "unexpected end of file");
    offset_ += bytes;
  }

  void expect_magic(const char magic[4]) {
    char got[4];
    raw(got, 4);
    if (std::memcmp(got, magic, 4) != 0)
      throw ParseError(path_, 0, std::string("bad magic, expected ") + std::string(magic, 4));
  }

  void expect_version(uint32_t want) {
    const uint32_t v = get<uint32_t>();
    if (v != want)
      throw ParseError(path_, offset_ - sizeof(uint32_t),
                       "unsupported version " + std::to_string(v));
  }

  uint64_t offset() const { return offset_; }
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ifstream in_;
  uint64_t offset_ = 0;
};

class Writer {
 public:
  Writer(const std::string& path) : out_(path, std::ios::binary) {
    if (!out_) throw IoError("cannot open for writing: " + path);
  }

  template <typename T>
  void put(const T& v) {
    out_.write(reinterpret_cast<const char*>(&v), sizeof(T));
  }

  void raw(const void* src, size_t bytes) {
    out_.write(reinterpret_cast<const char*>(src), static_cast<std::streamsize>(bytes));
  }

 private:
  std::ofstream out_;
};

constexpr char kMagicP[4] = {'L', 'E', 'V', 'P'};
constexpr char kMagicR[4] = {'L', 'E', 'V', 'R'};
constexpr char kMagicG[4] = {'L', 'E', 'V', 'G'};

}  // namespace

void write_levp(const std::string& path, const LidarFrame& frame) {
  frame.validate();
  Writer w(path);
  w.raw(kMagicP, 4);
  w.put<uint32_t>(1);
  for (int r = 0; r < 4; ++r)
    for (int c = 0; c < 4; ++c) w.put<double>(frame.pose.matrix(r, c));
  w.put<int64_t>(frame.timestamp_us);
  w.put<uint64_t>(frame.points.size());
  const char pad[3] = {0, 0, 0};
  for (size_t i = 0; i < frame.points.size(); ++i) {
    w.put<float>(frame.points[i].x());
    w.put<float>(frame.points[i].y());
    w.put<float>(frame.points[i].z());
    w.put<float>(frame.intensities[i]);
    w.put<uint8_t>(frame.dynamic_flags[i] ? 1 : 0);
    w.raw(pad, 3);
  }
}

LidarFrame read_levp(const std::string& path) {
  Reader r(path);
  r.expect_magic(kMagicP);
  r.expect_version(1);
  LidarFrame frame;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) frame.pose.matrix(i, j) = r.get<double>();
  frame.timestamp_us = r.get<int64_t>();
  const uint64_t n = r.get<uint64_t>();
  frame.points.reserve(n);
  frame.intensities.reserve(n);
  frame.dynamic_flags.reserve(n);
  for (uint64_t i = 0; i < n; ++i) {
    const float x = r.get<float>(), y = r.get<float>(), z = r.get<float>();
    frame.points.emplace_back(x, y, z);
    frame.intensities.push_back(r.get<float>());
    frame.dynamic_flags.push_back(r.get<uint8_t>());
    char pad[3];
    r.raw(pad, 3);
  }
  if (!frame.pose.is_valid(1e-6))
    throw ParseError(path, 8, "pose rotation block is not orthonormal");
  return frame;
}

void write_levr(const std::string& path, const RangeMap& map) {
  Writer w(path);
  w.raw(kMagicR, 4);
  w.put<uint32_t>(1);
  w.put<uint32_t>(static_cast<uint32_t>(map.height));
  w.put<uint32_t>(static_cast<uint32_t>(map.width));
  w.raw(map.range.data(), map.cells() * sizeof(float));
  w.raw(map.intensity.data(), map.cells() * sizeof(float));
  w.raw(map.occupancy.data(), map.cells());
}

RangeMap read_levr(const std::string& path) {
  Reader r(path);
  r.expect_magic(kMagicR);
  r.expect_version(1);
  const uint32_t h = r.get<uint32_t>();
  const uint32_t w = r.get<uint32_t>();
  if (h == 0 || w == 0 || static_cast<uint64_t>(h) * w > (1ull << 32))
    throw ParseError(path, 8, "implausible range map dimensions");
  RangeMap map(static_cast<int>(h), static_cast<int>(w));
  r.raw(map.range.data(), map.cells() * sizeof(float));
  r.raw(map.intensity.data(), map.cells() * sizeof(float));
  r.raw(map.occupancy.data(), map.cells());
  return map;
}

void write_levg(const std::string& path, const GaussianSet& g) {
  Writer w(path);
  w.raw(kMagicG, 4);
  w.put<uint32_t>(1);
  w.put<uint64_t>(g.size());
  for (size_t i = 0; i < g.size(); ++i) {
    for (int k = 0; k < 3; ++k) w.put<float>(g.means[i](k));
    for (int k = 0; k < 3; ++k) w.put<float>(g.scales[i](k));
    for (int k = 0; k < 4; ++k) w.put<float>(g.quats[i](k));
    w.put<float>(g.opacities[i]);
    w.put<float>(g.features[i]);
  }
}

GaussianSet read_levg(const std::string& path) {
  Reader r(path);
  r.expect_magic(kMagicG);
  r.expect_version(1);
  const uint64_t n = r.get<uint64_t>();
  GaussianSet g;
  g.means.reserve(n);
  g.scales.reserve(n);
  g.quats.reserve(n);
  g.opacities.reserve(n);
  g.features.reserve(n);
  for (uint64_t i = 0; i < n; ++i) {
    Eigen::Vector3f mean, scale;
    Eigen::Vector4f quat;
    for (int k = 0; k < 3; ++k) mean(k) = r.get<float>();
    for (int k = 0; k < 3; ++k) scale(k) = r.get<float>();
    for (int k = 0; k < 4; ++k) quat(k) = r.get<float>();
    g.means.push_back(mean);
    g.scales.push_back(scale);
    g.quats.push_back(quat);
    g.opacities.push_back(r.get<float>());
    g.features.push_back(r.get<float>());
  }
  return g;
}

namespace {

constexpr double kDeg = M_PI / 180.0;

SensorModel sensor_from_json(const nlohmann::json& j, const std::string& path) {
  try {
    SensorModel m;
    m.height = j.at("height").get<int>();
    m.width = j.at("width").get<int>();
    const auto az = j.at("azimuth_fov_deg");
    const auto el = j.at("elevation_fov_deg");
    m.azimuth_min = az.at(0).get<double>() * kDeg;
    m.azimuth_max = az.at(1).get<double>() * kDeg;
    m.elevation_min = el.at(0).get<double>() * kDeg;
    m.elevation_max = el.at(1).get<double>() * kDeg;
    m.max_range = j.at("max_range_m").get<double>();
    m.validate();
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path, 0, std::string("sensor JSON: ") + e.what());
  }
}

}  // namespace

std::string sensor_to_json_string(const SensorModel& m) {
  nlohmann::json j;
  j["height"] = m.height;
  j["width"] = m.width;
  j["azimuth_fov_deg"] = {m.azimuth_min / kDeg, m.azimuth_max / kDeg};
  j["elevation_fov_deg"] = {m.elevation_min / kDeg, m.elevation_max / kDeg};
  j["max_range_m"] = m.max_range;
  return j.dump(2);
}

void write_sensor_json(const std::string& path, const SensorModel& m) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  out << sensor_to_json_string(m) << "\n";
}

SensorModel read_sensor_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path, 0, std::string("sensor JSON: ") + e.what());
  }
  return sensor_from_json(j, path);
}

SensorModel sensor_from_json_string(const std::string& json) {
  try {
    return sensor_from_json(nlohmann::json::parse(json), "<string>");
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("<string>", 0, std::string("sensor JSON: ") + e.what());
  }
}

void write_ascii_cloud(const std::string& path, const std::vector<Eigen::Vector3f>& points,
                       const std::vector<float>& intensities) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  for (size_t i = 0; i < points.size(); ++i) {
    out << points[i].x() << " " << points[i].y() << " " << points[i].z() << " "
        << (i < intensities.size() ? intensities[i] : 0.0f) << "\n";
  }
}

}  // namespace levs
