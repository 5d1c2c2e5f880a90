#pragma once

#include <vector>

#include "levs/sensor.hpp"

namespace levs {

struct LidarMetrics {
  double depth_mse_median = 0.0;  // m^2, median squared range error
  double chamfer = 0.0;           // m
  double intensity_rmse = 0.0;
  double raydrop_accuracy = 0.0;  // fraction of cells with agreeing occupancy
};

struct DimensionMismatchError : std::invalid_argument {
  DimensionMismatchError() : std::invalid_argument("range map dimensions differ") {}
};
struct NoOverlapError : std::runtime_error {
  NoOverlapError() : std::runtime_error("no jointly occupied cells") {}
};
struct EmptyCloudError : std::invalid_argument {
  EmptyCloudError() : std::invalid_argument("chamfer requires nonempty clouds") {}
};

/// Median of squared range differences over jointly occupied cells. Even
/// counts average the two central order statistics.
double depth_error(const RangeMap& pred, const RangeMap& gt);

/// Symmetric mean nearest-neighbor distance (first power, meters), halved
/// average of both directions. Exact NN via a k-d tree.
double chamfer(const std::vector<Eigen::Vector3f>& pred, const std::vector<Eigen::Vector3f>& gt);

/// RMS intensity difference over jointly occupied cells.
double intensity_rmse(const RangeMap& pred, const RangeMap& gt);

/// Fraction of all h*w cells whose occupancy booleans agree.
double raydrop_accuracy(const RangeMap& pred, const RangeMap& gt);

}  // namespace levs
