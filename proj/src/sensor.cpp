#include "levs/sensor.hpp"

#include <cmath>
#include <stdexcept>

namespace levs {

void LidarFrame::validate() const {
  if (intensities.size() != points.size() || dynamic_flags.size() != points.size())
    throw std::invalid_argument("LidarFrame: parallel arrays differ in length");
  for (float v : intensities)
    if (!(v >= 0.0f && v <= 1.0f))
      throw std::invalid_argument("LidarFrame: intensity outside [0,1]");
}

void SensorModel::validate() const {
  if (height < 1 || width < 1) throw std::invalid_argument("SensorModel: non-positive resolution");
  if (!(azimuth_min < azimuth_max) || !(elevation_min < elevation_max))
    throw std::invalid_argument("SensorModel: fov min must be < max");
  if (!(max_range > 0.0)) throw std::invalid_argument("SensorModel: max_range must be > 0");
}

size_t RangeMap::occupied_count() const {
  size_t n = 0;
  for (uint8_t o : occupancy) n += o ? 1 : 0;
  return n;
}

namespace {
int round_half_up(double x) { return static_cast<int>(std::floor(x + 0.5)); }
}  // namespace

std::optional<Cell> project_to_cell(const SphericalPoint& s, const SensorModel& m) {
  const double u = (s.azimuth - m.azimuth_min) * m.width / (m.azimuth_max - m.azimuth_min);
  const double v = (s.elevation - m.elevation_min) * m.height / (m.elevation_max - m.elevation_min);
  const int row = round_half_up(v);
  if (row < 0 || row >= m.height) return std::nullopt;
  int col = round_half_up(u);
  if (m.full_circle()) {
    col %= m.width;
    if (col < 0) col += m.width;
  } else if (col < 0 || col >= m.width) {
    return std::nullopt;
  }
  return Cell{row, col};
}

RangeMap rasterize(const std::vector<Eigen::Vector3f>& points,
                   const std::vector<float>& intensities,
                   const SensorModel& m) {
  m.validate();
  RangeMap map(m.height, m.width);
  // winner[c] = index of the current nearest point for cell c, or -1.
  std::vector<int64_t> winner(map.cells(), -1);
  std::vector<double> best(map.cells(), 0.0);
  for (size_t i = 0; i < points.size(); ++i) {
    const Eigen::Vector3d p = points[i].cast<double>();
    const double r = p.norm();
    if (r <= 0.0 || r > m.max_range) continue;
    SphericalPoint s;
    try {
      s = to_spherical(p);
    } catch (const ZeroRangeError&) {
      continue;
    }
    const auto cell = project_to_cell(s, m);
    if (!cell) continue;
    const size_t c = map.idx(cell->row, cell->col);
    if (winner[c] < 0 || r < best[c]) {
      winner[c] = static_cast<int64_t>(i);
      best[c] = r;
    }
  }
  for (size_t c = 0; c < map.cells(); ++c) {
    if (winner[c] < 0) continue;
    map.occupancy[c] = 1;
    map.range[c] = static_cast<float>(best[c]);
    map.intensity[c] = intensities.empty() ? 0.0f : intensities[winner[c]];
  }
  return map;
}

}  // namespace levs
