#include "levs/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>

namespace levs {

KdTree::KdTree(const std::vector<Eigen::Vector3d>& points) : points_(points) {
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), size_t{0});
  nodes_.reserve(points_.size());
  if (!points_.empty()) root_ = build(0, points_.size(), 0);
}

int KdTree::build(size_t begin, size_t end, int depth) {
  const int axis = depth % 3;
  const size_t mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](size_t a, size_t b) {
                     const double va = points_[a](axis), vb = points_[b](axis);
                     return va < vb || (va == vb && a < b);
                   });
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back(Node{axis, order_[mid], -1, -1});
  if (mid > begin) nodes_[id].left = build(begin, mid, depth + 1);
  if (mid + 1 < end) nodes_[id].right = build(mid + 1, end, depth + 1);
  return id;
}

template <typename Visitor>
void KdTree::search(int node, const Eigen::Vector3d& q, double& worst, Visitor&& visit) const {
  if (node < 0) return;
  const Node& n = nodes_[node];
  visit(n.point, (points_[n.point] - q).squaredNorm());
  const double delta = q(n.axis) - points_[n.point](n.axis);
  const int first = delta <= 0.0 ? n.left : n.right;
  const int second = delta <= 0.0 ? n.right : n.left;
  search(first, q, worst, visit);
  if (delta * delta <= worst) search(second, q, worst, visit);
}

size_t KdTree::nearest(const Eigen::Vector3d& q) const {
  if (points_.empty()) throw std::logic_error("KdTree::nearest on empty tree");
  size_t best = 0;
  double best_d2 = std::numeric_limits<double>::infinity();
  search(root_, q, best_d2, [&](size_t i, double d2) {
    if (d2 < best_d2 || (d2 == best_d2 && i < best)) {
      best = i;
      best_d2 = d2;
    }
  });
  return best;
}

double KdTree::nearest_distance(const Eigen::Vector3d& q) const {
  return (points_[nearest(q)] - q).norm();
}

std::vector<size_t> KdTree::knn(const Eigen::Vector3d& q, size_t k) const {
  if (k > points_.size()) throw std::invalid_argument("KdTree::knn: k exceeds point count");
  using Entry = std::pair<double, size_t>;  // (squared distance, index)
  std::priority_queue<Entry> heap;          // max-heap on distance
  double worst = std::numeric_limits<double>::infinity();
  search(root_, q, worst, [&](size_t i, double d2) {
    heap.emplace(d2, i);
    if (heap.size() > k) heap.pop();
    if (heap.size() == k) worst = heap.top().first;
  });
  std::vector<Entry> entries;
  entries.reserve(heap.size());
  while (!heap.empty()) {
    entries.push_back(heap.top());
    heap.pop();
  }
  std::sort(entries.begin(), entries.end());
  std::vector<size_t> out;
  out.reserve(entries.size());
  for (const auto& [d2, i] : entries) out.push_back(i);
  return out;
}

}  // namespace levs
