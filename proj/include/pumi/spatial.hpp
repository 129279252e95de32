#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "pumi/error.hpp"
#include "pumi/geometry.hpp"

namespace pumi {

/// Retained partition-of-unity subdomain centres plus the sizing that
/// produced them.
struct PuCenters {
  std::vector<Point2> centers;  ///< centres inside the hull, row-major grid order
  int d_pu = 0;                 ///< grid resolution per side before filtering
  double delta_pu = 0.0;        ///< radius of the circular patches

  int count() const { return static_cast<int>(centers.size()); }
};

/// Grid resolution per side: floor(sqrt(N) / 2). Requires N >= 16 so the
/// grid has at least 2 points per side.
inline int pu_grid_resolution(std::size_t n_sites) {
  if (n_sites < 16)
    raise(errc::too_few_points,
          "need at least 16 sites, got " + std::to_string(n_sites));
  return static_cast<int>(std::floor(0.5 * std::sqrt(static_cast<double>(n_sites))));
}

/// Uniform d_pu x d_pu grid over the data rectangle (inclusive endpoints),
/// reduced to the centres inside the hull. Patch radius is
/// delta_pu = side * sqrt(2) / d_pu.
inline PuCenters build_pu_centers(const ConvexHull& hull, const Rect& rect,
                                  const BoundingBox& box, std::size_t n_sites) {
  PuCenters out;
  out.d_pu = pu_grid_resolution(n_sites);
  out.delta_pu = box.side * std::sqrt(2.0) / static_cast<double>(out.d_pu);
  const double denom = static_cast<double>(out.d_pu - 1);
  for (int iy = 0; iy < out.d_pu; ++iy) {
    const double fy = static_cast<double>(iy) / denom;
    const double y = rect.min_y + rect.height() * fy;
    for (int ix = 0; ix < out.d_pu; ++ix) {
      const double fx = static_cast<double>(ix) / denom;
      const Point2 c{rect.min_x + rect.width() * fx, y};
      if (hull.contains(c)) out.centers.push_back(c);
    }
  }
  if (out.centers.empty())
    raise(errc::empty_cover, "no grid centre falls inside the convex hull");
  return out;
}

/// Number of blocks along one side of the bounding box: ceil(side / delta).
inline int block_count(const BoundingBox& box, double delta_pu) {
  if (!(delta_pu > 0.0)) raise(errc::invalid_argument, "patch radius must be positive");
  return static_cast<int>(std::ceil(box.side / delta_pu));
}

struct BlockCoord {
  int row = 0;
  int col = 0;
  friend bool operator==(const BlockCoord&, const BlockCoord&) = default;
};

/// Block coordinates of a point. Floor division with clamping so points on
/// the top/right boundary land in the last block; points outside the box
/// beyond the geometric tolerance are rejected.
inline BlockCoord block_of(const Point2& p, const BoundingBox& box, int q) {
  const double tol = 1e-12 * box.side;
  if (!box.contains(p, tol))
    raise(errc::out_of_domain, "point lies outside the bounding box");
  const double cell = box.side / static_cast<double>(q);
  const auto clamp_idx = [q](double v) {
    const int i = static_cast<int>(std::floor(v));
    return std::clamp(i, 0, q - 1);
  };
  return BlockCoord{clamp_idx((p.y - box.origin.y) / cell),
                    clamp_idx((p.x - box.origin.x) / cell)};
}

/// q x q uniform block index over the bounding box. Buckets are stored
/// densely (row-major) so access is O(1); bucket lists partition 0..N-1.
struct BlockGrid {
  int q = 0;
  BoundingBox box;
  std::vector<std::vector<int>> buckets;

  double block_edge() const { return box.side / static_cast<double>(q); }

  const std::vector<int>& bucket(int row, int col) const {
    return buckets[static_cast<std::size_t>(row) * static_cast<std::size_t>(q) +
                   static_cast<std::size_t>(col)];
  }
};

inline BlockGrid build_block_grid(std::span<const Point2> sites, const BoundingBox& box, int q) {
  if (q < 1) raise(errc::invalid_argument, "block count must be positive");
  BlockGrid grid;
  grid.q = q;
  grid.box = box;
  grid.buckets.assign(static_cast<std::size_t>(q) * static_cast<std::size_t>(q), {});
  for (std::size_t i = 0; i < sites.size(); ++i) {
    const BlockCoord b = block_of(sites[i], box, q);
    grid.buckets[static_cast<std::size_t>(b.row) * static_cast<std::size_t>(q) +
                 static_cast<std::size_t>(b.col)]
        .push_back(static_cast<int>(i));
  }
  return grid;
}

/// A block and its at-most-eight in-range neighbours (the 3x3 stencil
/// clipped to the grid).
struct Neighborhood {
  BlockCoord block;
  std::vector<BlockCoord> members;
};

inline Neighborhood neighborhood_of(const BlockCoord& block, int q) {
  if (block.row < 0 || block.row >= q || block.col < 0 || block.col >= q)
    raise(errc::invalid_argument, "block coordinates out of range");
  Neighborhood n;
  n.block = block;
  for (int dr = -1; dr <= 1; ++dr)
    for (int dc = -1; dc <= 1; ++dc) {
      const int r = block.row + dr;
      const int c = block.col + dc;
      if (r >= 0 && r < q && c >= 0 && c < q) n.members.push_back(BlockCoord{r, c});
    }
  return n;
}

/// All indices with distance(center, site) <= radius, by full scan.
/// Serves as the correctness oracle for the block and kd-tree searches.
inline std::vector<int> brute_force_query(const Point2& center, double radius,
                                          std::span<const Point2> sites) {
  if (radius < 0.0) raise(errc::invalid_radius, "radius must be nonnegative");
  const double r_sq = radius * radius;
  std::vector<int> hits;
  for (std::size_t i = 0; i < sites.size(); ++i)
    if (dist_sq(center, sites[i]) <= r_sq) hits.push_back(static_cast<int>(i));
  return hits;
}

/// All indices with distance(center, site) <= radius, scanning only the
/// stencil of blocks around the query block. The stencil half-width is
/// ceil(radius / block_edge): 1 gives the 3x3 neighbourhood search, which is
/// the normal regime under the q = ceil(side/delta) sizing; the ceiling in q
/// can make delta exceed the block edge slightly, in which case the stencil
/// widens to 5x5 to keep the result exact. Once the (clipped) stencil spans
/// the whole grid any radius is admissible; otherwise a half-width beyond 2
/// is rejected.
inline std::vector<int> range_query(const Point2& center, double radius, const BlockGrid& grid,
                                    std::span<const Point2> sites) {
  if (radius < 0.0) raise(errc::invalid_radius, "radius must be nonnegative");
  const double edge = grid.block_edge();
  const int needed = std::max(1, static_cast<int>(std::ceil(radius / edge)));
  const int reach = std::min(needed, grid.q - 1);
  if (reach > 2)
    raise(errc::radius_exceeds_block,
          "radius " + std::to_string(radius) + " exceeds twice the block edge " +
              std::to_string(edge));
  const BlockCoord b = block_of(center, grid.box, grid.q);
  const double r_sq = radius * radius;
  std::vector<int> hits;
  const int r0 = std::max(0, b.row - reach), r1 = std::min(grid.q - 1, b.row + reach);
  const int c0 = std::max(0, b.col - reach), c1 = std::min(grid.q - 1, b.col + reach);
  for (int r = r0; r <= r1; ++r)
    for (int c = c0; c <= c1; ++c)
      for (int i : grid.bucket(r, c))
        if (dist_sq(center, sites[static_cast<std::size_t>(i)]) <= r_sq) hits.push_back(i);
  std::sort(hits.begin(), hits.end());
  return hits;
}

}  // namespace pumi
