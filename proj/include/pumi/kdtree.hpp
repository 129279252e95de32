#pragma once

#include <algorithm>
#include <numeric>
#include <span>
#include <vector>

#include "pumi/error.hpp"
#include "pumi/geometry.hpp"

namespace pumi {

/// Standard 2D kd-tree baseline: median split on the wider axis, leaf size 16.
/// Held as flat node records over a permutation of the site indices.
class KdTree {
 public:
  static constexpr int kLeafSize = 16;

  KdTree() = default;

  explicit KdTree(std::span<const Point2> sites) {
    points_.assign(sites.begin(), sites.end());
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), 0);
    if (!points_.empty()) root_ = build(0, static_cast<int>(points_.size()));
  }

  std::size_t size() const { return points_.size(); }

  /// Indices of all sites with distance(center, site) <= radius, ascending.
  std::vector<int> range_query(const Point2& center, double radius) const {
    if (radius < 0.0) raise(errc::invalid_radius, "radius must be nonnegative");
    std::vector<int> hits;
    if (root_ >= 0) collect(root_, center, radius * radius, hits);
    std::sort(hits.begin(), hits.end());
    return hits;
  }

 private:
  struct Node {
    int axis = -1;       // -1 marks a leaf
    double split = 0.0;  // coordinate of the median along axis
    int left = -1, right = -1;
    int begin = 0, end = 0;  // index range into order_ (leaves only)
  };

  int build(int begin, int end) {
    Node node;
    const int count = end - begin;
    double min_x = points_[order_[begin]].x, max_x = min_x;
    double min_y = points_[order_[begin]].y, max_y = min_y;
    for (int i = begin + 1; i < end; ++i) {
      const Point2& p = points_[order_[i]];
      min_x = std::min(min_x, p.x);
      max_x = std::max(max_x, p.x);
      min_y = std::min(min_y, p.y);
      max_y = std::max(max_y, p.y);
    }
    // Coincident point clouds cannot be split; keep them in one leaf.
    if (count <= kLeafSize || (max_x - min_x == 0.0 && max_y - min_y == 0.0)) {
      node.begin = begin;
      node.end = end;
      nodes_.push_back(node);
      return static_cast<int>(nodes_.size()) - 1;
    }
    node.axis = (max_x - min_x >= max_y - min_y) ? 0 : 1;
    const int mid = begin + count / 2;
    const auto coord = [this, axis = node.axis](int idx) {
      return axis == 0 ? points_[idx].x : points_[idx].y;
    };
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [&](int a, int b) { return coord(a) < coord(b); });
    node.split = coord(order_[mid]);
    const int self = static_cast<int>(nodes_.size());
    nodes_.push_back(node);
    const int left = build(begin, mid);
    const int right = build(mid, end);
    nodes_[self].left = left;
    nodes_[self].right = right;
    return self;
  }

  void collect(int node_id, const Point2& center, double r_sq, std::vector<int>& hits) const {
    const Node& node = nodes_[node_id];
    if (node.axis < 0) {
      for (int i = node.begin; i < node.end; ++i) {
        const int idx = order_[i];
        if (dist_sq(center, points_[idx]) <= r_sq) hits.push_back(idx);
      }
      return;
    }
    const double c = node.axis == 0 ? center.x : center.y;
    const double d = c - node.split;
    // Left subtree holds coordinates <= split, right holds >= split; a side
    // can be skipped only when the axis gap alone already exceeds the radius.
    if (!(d > 0.0 && d * d > r_sq)) collect(node.left, center, r_sq, hits);
    if (!(d < 0.0 && d * d > r_sq)) collect(node.right, center, r_sq, hits);
  }

  std::vector<Point2> points_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
  int root_ = -1;
};

/// Convenience wrappers mirroring the rest of the spatial API.
inline KdTree kd_build(std::span<const Point2> sites) { return KdTree(sites); }

inline std::vector<int> kd_range_query(const KdTree& tree, const Point2& center, double radius) {
  return tree.range_query(center, radius);
}

}  // namespace pumi
