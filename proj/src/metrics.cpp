#include "levs/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "levs/kdtree.hpp"

namespace levs {

namespace {

std::vector<size_t> joint_cells(const RangeMap& pred, const RangeMap& gt) {
  if (pred.height != gt.height || pred.width != gt.width) throw DimensionMismatchError{};
  std::vector<size_t> cells;
  for (size_t c = 0; c < pred.cells(); ++c)
    if (pred.occupancy[c] && gt.occupancy[c]) cells.push_back(c);
  if (cells.empty()) throw NoOverlapError{};
  return cells;
}

double median(std::vector<double>& v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

double depth_error(const RangeMap& pred, const RangeMap& gt) {
  const auto cells = joint_cells(pred, gt);
  std::vector<double> sq;
  sq.reserve(cells.size());
  for (size_t c : cells) {
    const double d = static_cast<double>(pred.range[c]) - gt.range[c];
    sq.push_back(d * d);
  }
  return median(sq);
}

double chamfer(const std::vector<Eigen::Vector3f>& pred, const std::vector<Eigen::Vector3f>& gt) {
  if (pred.empty() || gt.empty()) throw EmptyCloudError{};
  auto to_double = [](const std::vector<Eigen::Vector3f>& v) {
    std::vector<Eigen::Vector3d> out;
    out.reserve(v.size());
    for (const auto& p : v) out.push_back(p.cast<double>());
    return out;
  };
  const auto pd = to_double(pred);
  const auto gd = to_double(gt);
  const KdTree pred_tree(pd);
  const KdTree gt_tree(gd);
  double sum_pg = 0.0;
  for (const auto& p : pd) sum_pg += gt_tree.nearest_distance(p);
  double sum_gp = 0.0;
  for (const auto& p : gd) sum_gp += pred_tree.nearest_distance(p);
  return 0.5 * (sum_pg / pd.size() + sum_gp / gd.size());
}

double intensity_rmse(const RangeMap& pred, const RangeMap& gt) {
  const auto cells = joint_cells(pred, gt);
  double sum = 0.0;
  for (size_t c : cells) {
    const double d = static_cast<double>(pred.intensity[c]) - gt.intensity[c];
    sum += d * d;
  }
  return std::sqrt(sum / cells.size());
}

double raydrop_accuracy(const RangeMap& pred, const RangeMap& gt) {
  if (pred.height != gt.height || pred.width != gt.width) throw DimensionMismatchError{};
  size_t agree = 0;
  for (size_t c = 0; c < pred.cells(); ++c)
    if ((pred.occupancy[c] != 0) == (gt.occupancy[c] != 0)) ++agree;
  return static_cast<double>(agree) / pred.cells();
}

}  // namespace levs
