#pragma once

#include <Eigen/Dense>
#include <vector>

namespace levs {

/// Static 3D k-d tree for exact nearest-neighbor and k-NN queries.
class KdTree {
 public:
  explicit KdTree(const std::vector<Eigen::Vector3d>& points);

  size_t size() const { return points_.size(); }

  /// Index of the exact nearest point (ties by lowest index).
  size_t nearest(const Eigen::Vector3d& q) const;
  double nearest_distance(const Eigen::Vector3d& q) const;

  /// Indices of the k exact nearest points, sorted by (distance, index).
  std::vector<size_t> knn(const Eigen::Vector3d& q, size_t k) const;

 private:
  struct Node {
    int axis = 0;
    size_t point = 0;
    int left = -1;
    int right = -1;
  };

  int build(size_t begin, size_t end, int depth);

  template <typename Visitor>
  void search(int node, const Eigen::Vector3d& q, double& worst, Visitor&& visit) const;

  std::vector<Eigen::Vector3d> points_;
  std::vector<size_t> order_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

}  // namespace levs
