#include "levs/splat.hpp"

#include <algorithm>
#include <cmath>

namespace levs {

void GaussianSet::validate() const {
  const size_t n = means.size();
  if (scales.size() != n || quats.size() != n || opacities.size() != n || features.size() != n)
    throw std::invalid_argument("GaussianSet: parallel arrays differ in length");
  for (size_t i = 0; i < n; ++i) {
    if (std::abs(quats[i].norm() - 1.0f) > 1e-6f)
      throw std::invalid_argument("GaussianSet: non-unit quaternion");
    if (!(scales[i].minCoeff() > 0.0f))
      throw std::invalid_argument("GaussianSet: non-positive scale");
    if (!(opacities[i] > 0.0f && opacities[i] < 1.0f))
      throw std::invalid_argument("GaussianSet: opacity outside (0,1)");
  }
}

Eigen::Matrix3d covariance(const Eigen::Vector3d& scale, const Eigen::Vector4d& quat_wxyz) {
  const Eigen::Quaterniond q(quat_wxyz(0), quat_wxyz(1), quat_wxyz(2), quat_wxyz(3));
  const Eigen::Matrix3d r = q.normalized().toRotationMatrix();
  return r * scale.cwiseProduct(scale).asDiagonal() * r.transpose();
}

SphericalProjection to_sensor_spherical(const GaussianSet& g, const Pose& sensor) {
  const Eigen::Matrix3d rt = sensor.rotation().transpose();
  const Eigen::Vector3d t = sensor.position();
  SphericalProjection out;
  out.gaussians.reserve(g.size());
  for (size_t i = 0; i < g.size(); ++i) {
    const Eigen::Vector3d mu_s = rt * (g.means[i].cast<double>() - t);
    if (std::hypot(mu_s.x(), mu_s.y()) <= 1e-6) {
      out.skipped.push_back(i);
      continue;
    }
    const Eigen::Matrix3d cov_world = covariance(g.scales[i].cast<double>(),
                                                 g.quats[i].cast<double>());
    const Eigen::Matrix3d cov_sensor = rt * cov_world * rt.transpose();
    const Eigen::Matrix3d j = spherical_jacobian(mu_s);
    SphericalGaussian sg;
    sg.index = i;
    sg.mean = to_spherical(mu_s);
    sg.cov = j * cov_sensor * j.transpose();
    out.gaussians.push_back(sg);
  }
  return out;
}

namespace {

constexpr double kAlphaFloor = 1.0 / 255.0;
constexpr double kTransmittanceFloor = 1e-4;

double wrap_angle(double a) {
  while (a > M_PI) a -= 2.0 * M_PI;
  while (a <= -M_PI) a += 2.0 * M_PI;
  return a;
}

}  // namespace

RenderResult render_range_map(const GaussianSet& g, const Pose& sensor, const SensorModel& m) {
  m.validate();
  RenderResult out;
  out.map = RangeMap(m.height, m.width);
  out.alpha.assign(m.cell_count(), 0.0f);

  const SphericalProjection proj = to_sensor_spherical(g, sensor);

  // Bin each Gaussian into the cells its 3-sigma angular footprint touches.
  const double az_span = m.azimuth_max - m.azimuth_min;
  const double el_span = m.elevation_max - m.elevation_min;
  const double col_per_rad = m.width / az_span;
  const double row_per_rad = m.height / el_span;
  std::vector<std::vector<uint32_t>> bins(m.cell_count());

  for (uint32_t k = 0; k < proj.gaussians.size(); ++k) {
    const SphericalGaussian& sg = proj.gaussians[k];
    if (sg.mean.range > m.max_range) continue;
    const double saz = 3.0 * std::sqrt(std::max(sg.cov(0, 0), 0.0));
    const double sel = 3.0 * std::sqrt(std::max(sg.cov(1, 1), 0.0));
    const double u = (sg.mean.azimuth - m.azimuth_min) * col_per_rad;
    const double v = (sg.mean.elevation - m.elevation_min) * row_per_rad;
    const int row_lo = std::max(0, static_cast<int>(std::floor(v - sel * row_per_rad)));
    const int row_hi = std::min(m.height - 1, static_cast<int>(std::ceil(v + sel * row_per_rad)));
    int col_lo = static_cast<int>(std::floor(u - saz * col_per_rad));
    int col_hi = static_cast<int>(std::ceil(u + saz * col_per_rad));
    if (col_hi - col_lo + 1 >= m.width) {
      col_lo = 0;
      col_hi = m.width - 1;
    }
    for (int row = row_lo; row <= row_hi; ++row) {
      for (int cc = col_lo; cc <= col_hi; ++cc) {
        int col = cc;
        if (m.full_circle()) {
          col = ((col % m.width) + m.width) % m.width;
        } else if (col < 0 || col >= m.width) {
          continue;
        }
        bins[static_cast<size_t>(row) * m.width + col].push_back(k);
      }
    }
  }

  for (int row = 0; row < m.height; ++row) {
    // Cell centers sit at integer continuous coordinates.
    const double el_c = m.elevation_min + row / row_per_rad;
    for (int col = 0; col < m.width; ++col) {
      auto& cand = bins[static_cast<size_t>(row) * m.width + col];
      if (cand.empty()) continue;
      const double az_c = m.azimuth_min + col / col_per_rad;
      // Front-to-back by mean range, ties by original index.
      std::sort(cand.begin(), cand.end(), [&](uint32_t a, uint32_t b) {
        const auto &ga = proj.gaussians[a], &gb = proj.gaussians[b];
        return ga.mean.range < gb.mean.range ||
               (ga.mean.range == gb.mean.range && ga.index < gb.index);
      });
      double transmittance = 1.0;
      double acc_alpha = 0.0, acc_range = 0.0, acc_intensity = 0.0;
      for (uint32_t k : cand) {
        const SphericalGaussian& sg = proj.gaussians[k];
        Eigen::Matrix2d cov2 = sg.cov.topLeftCorner<2, 2>();
        const double det = cov2.determinant();
        if (!(det > 0.0)) continue;
        const Eigen::Vector2d d(wrap_angle(az_c - sg.mean.azimuth), el_c - sg.mean.elevation);
        const double maha = d.dot(cov2.inverse() * d);
        if (maha > 9.0) continue;  // outside the 3-sigma conic
        const double alpha = g.opacities[sg.index] * std::exp(-0.5 * maha);
        if (alpha < kAlphaFloor) continue;
        const double w = alpha * transmittance;
        acc_alpha += w;
        acc_range += w * sg.mean.range;
        acc_intensity += w * g.features[sg.index];
        transmittance *= 1.0 - alpha;
        if (transmittance < kTransmittanceFloor) break;
      }
      const size_t c = static_cast<size_t>(row) * m.width + col;
      out.alpha[c] = static_cast<float>(acc_alpha);
      if (acc_alpha >= 0.5) {
        out.map.occupancy[c] = 1;
        out.map.range[c] = static_cast<float>(acc_range / acc_alpha);
        out.map.intensity[c] =
            static_cast<float>(std::clamp(acc_intensity / acc_alpha, 0.0, 1.0));
      }
    }
  }
  return out;
}

}  // namespace levs
