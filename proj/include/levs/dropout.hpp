#pragma once

#include <cstdint>
#include <vector>

#include "levs/geom.hpp"
#include "levs/splat.hpp"

namespace levs {

/// Region of interest for spatially-constrained dropout: near-field Gaussians
/// inside the sensor's elevation band.
struct RoiSpec {
  double d_max = 200.0;
  double elevation_min = -30.0 * M_PI / 180.0;
  double elevation_max = 10.0 * M_PI / 180.0;
  double drop_rate = 0.5;

  void validate() const;
};

struct DropoutMask {
  std::vector<uint8_t> roi;
  std::vector<uint8_t> drop;  // drop[i] implies roi[i]
  uint64_t seed = 0;
};

/// Per Gaussian: v = mu - sensor_position, d = |v|, elevation computed in the
/// sensor frame (v rotated by R^T). In-ROI iff d <= d_max and
/// elevation in [min, max). Zero-distance points get elevation 0.
std::vector<uint8_t> roi_mask(const std::vector<Eigen::Vector3f>& means, const Pose& sensor,
                              const RoiSpec& spec);

/// drop[i] = (u_i < rate) for roi-true i, with u_i from a counter-based stream
/// indexed by Gaussian id; false elsewhere. Schedule-independent.
DropoutMask sample_mask(const std::vector<uint8_t>& roi, double rate, uint64_t seed);

/// Inference-time compensation: in-ROI opacities scaled by (1 - rate),
/// out-of-ROI opacities bit-identical.
std::vector<float> compensate_opacity(const std::vector<float>& opacities,
                                      const std::vector<uint8_t>& roi, double rate);

struct LengthMismatchError : std::invalid_argument {
  LengthMismatchError() : std::invalid_argument("mask length != gaussian count") {}
};

/// Materializes the drop=false subset.
GaussianSet apply_mask(const GaussianSet& g, const DropoutMask& mask);

}  // namespace levs
