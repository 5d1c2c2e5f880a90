#pragma once

#include <string>
#include <vector>

#include "levs/sensor.hpp"
#include "levs/splat.hpp"

namespace levs {

/// Raised when a file cannot be opened for reading or writing.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when a binary input does not match its format; carries the file
/// path and the byte offset where parsing stopped.
struct ParseError : std::runtime_error {
  std::string path;
  uint64_t offset;
  ParseError(std::string file, uint64_t byte_offset, const std::string& what);
};

// LEVP: point-cloud frame. Magic "LEVP", u32 version=1, f64x16 pose
// (row-major), i64 timestamp, u64 count, then (f32 x,y,z,intensity,
// u8 dynamic, 3 pad) per point. Little-endian.
void write_levp(const std::string& path, const LidarFrame& frame);
LidarFrame read_levp(const std::string& path);

// LEVR: range map. Magic "LEVR", u32 version=1, u32 h, u32 w, h*w f32 ranges,
// h*w f32 intensities, h*w u8 occupancy. Little-endian.
void write_levr(const std::string& path, const RangeMap& map);
RangeMap read_levr(const std::string& path);

// LEVG: Gaussian set. Magic "LEVG", u32 version=1, u64 count, per record
// f32x3 mean, f32x3 scale, f32x4 quat (w,x,y,z), f32 opacity, f32 feature.
void write_levg(const std::string& path, const GaussianSet& g);
GaussianSet read_levg(const std::string& path);

// SensorModel JSON: keys height, width, azimuth_fov_deg [min,max],
// elevation_fov_deg [min,max], max_range_m.
void write_sensor_json(const std::string& path, const SensorModel& m);
SensorModel read_sensor_json(const std::string& path);
SensorModel sensor_from_json_string(const std::string& json);
std::string sensor_to_json_string(const SensorModel& m);

/// ASCII export: one "x y z intensity" line per point.
void write_ascii_cloud(const std::string& path, const std::vector<Eigen::Vector3f>& points,
                       const std::vector<float>& intensities);

}  // namespace levs
