#include "levs/dropout.hpp"

#include <cmath>

#include "levs/rng.hpp"

namespace levs {

void RoiSpec::validate() const {
  if (!(drop_rate >= 0.0 && drop_rate < 1.0))
    throw std::invalid_argument("RoiSpec: drop_rate must be in [0,1)");
  if (!(elevation_min < elevation_max))
    throw std::invalid_argument("RoiSpec: elevation_min must be < elevation_max");
  if (!(d_max > 0.0)) throw std::invalid_argument("RoiSpec: d_max must be > 0");
}

std::vector<uint8_t> roi_mask(const std::vector<Eigen::Vector3f>& means, const Pose& sensor,
                              const RoiSpec& spec) {
  spec.validate();
  const Eigen::Matrix3d rt = sensor.rotation().transpose();
  const Eigen::Vector3d t = sensor.position();
  std::vector<uint8_t> roi(means.size(), 0);
  for (size_t i = 0; i < means.size(); ++i) {
    const Eigen::Vector3d v = means[i].cast<double>() - t;
    const double d = v.norm();
    if (d > spec.d_max) continue;
    double elevation = 0.0;  // canonical at zero distance
    if (d > 0.0) {
      const Eigen::Vector3d vs = rt * v;
      elevation = std::asin(std::clamp(vs.z() / d, -1.0, 1.0));
    }
    if (elevation >= spec.elevation_min && elevation < spec.elevation_max) roi[i] = 1;
  }
  return roi;
}

DropoutMask sample_mask(const std::vector<uint8_t>& roi, double rate, uint64_t seed) {
  if (!(rate >= 0.0 && rate < 1.0))
    throw std::invalid_argument("sample_mask: rate must be in [0,1)");
  DropoutMask mask;
  mask.roi = roi;
  mask.seed = seed;
  mask.drop.assign(roi.size(), 0);
  const CounterRng rng{seed};
  for (size_t i = 0; i < roi.size(); ++i)
    if (roi[i] && rng.uniform(i) < rate) mask.drop[i] = 1;
  return mask;
}

std::vector<float> compensate_opacity(const std::vector<float>& opacities,
                                      const std::vector<uint8_t>& roi, double rate) {
  if (!(rate >= 0.0 && rate < 1.0))
    throw std::invalid_argument("compensate_opacity: rate must be in [0,1)");
  if (opacities.size() != roi.size()) throw LengthMismatchError{};
  std::vector<float> out = opacities;
  for (size_t i = 0; i < out.size(); ++i)
    if (roi[i]) out[i] = static_cast<float>(out[i] * (1.0 - rate));
  return out;
}

GaussianSet apply_mask(const GaussianSet& g, const DropoutMask& mask) {
  if (mask.drop.size() != g.size()) throw LengthMismatchError{};
  GaussianSet out;
  for (size_t i = 0; i < g.size(); ++i) {
    if (mask.drop[i]) continue;
    out.means.push_back(g.means[i]);
    out.scales.push_back(g.scales[i]);
    out.quats.push_back(g.quats[i]);
    out.opacities.push_back(g.opacities[i]);
    out.features.push_back(g.features[i]);
  }
  return out;
}

}  // namespace levs
