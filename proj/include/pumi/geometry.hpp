#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "pumi/error.hpp"

namespace pumi {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline bool is_finite(const Point2& p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// Squared Euclidean distance. Every search structure compares distances
/// through this single expression so that boundary ties resolve identically.
inline double dist_sq(const Point2& a, const Point2& b) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

inline double dist(const Point2& a, const Point2& b) { return std::sqrt(dist_sq(a, b)); }

/// Axis-aligned rectangle [min_x, max_x] x [min_y, max_y].
struct Rect {
  double min_x = 0.0;
  double max_x = 0.0;
  double min_y = 0.0;
  double max_y = 0.0;

  double width() const { return max_x - min_x; }
  double height() const { return max_y - min_y; }

  bool contains(const Point2& p, double tol = 0.0) const {
    return p.x >= min_x - tol && p.x <= max_x + tol && p.y >= min_y - tol && p.y <= max_y + tol;
  }
};

/// Square of edge `side` anchored at `origin` (lower-left corner). The anchor
/// is (m, m) with m = min(min_x, min_y), the only corner consistent with the
/// scalar edge formula side = max(max_x, max_y) - min(min_x, min_y); with that
/// anchor the square always covers the data rectangle.
struct BoundingBox {
  Point2 origin;
  double side = 0.0;

  bool contains(const Point2& p, double tol = 0.0) const {
    return p.x >= origin.x - tol && p.x <= origin.x + side + tol && p.y >= origin.y - tol &&
           p.y <= origin.y + side + tol;
  }
};

/// Convex polygon with counterclockwise vertices; collinear vertices are not
/// retained. Edge normals are cached so membership tests are a handful of
/// fused multiply-adds per edge.
struct ConvexHull {
  std::vector<Point2> vertices;
  /// Absolute distance tolerance for boundary membership.
  double boundary_tol = 0.0;

  /// Inward unit normals and offsets, one per edge: a point is inside iff
  /// nx*x + ny*y + off >= -boundary_tol for every edge.
  std::vector<double> edge_nx, edge_ny, edge_off;

  void rebuild_edges() {
    const std::size_t m = vertices.size();
    edge_nx.assign(m, 0.0);
    edge_ny.assign(m, 0.0);
    edge_off.assign(m, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
      const Point2& a = vertices[i];
      const Point2& b = vertices[(i + 1) % m];
      const double dx = b.x - a.x;
      const double dy = b.y - a.y;
      const double len = std::sqrt(dx * dx + dy * dy);
      edge_nx[i] = -dy / len;
      edge_ny[i] = dx / len;
      edge_off[i] = -(edge_nx[i] * a.x + edge_ny[i] * a.y);
    }
  }

  bool contains(const Point2& p) const {
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      if (edge_nx[i] * p.x + edge_ny[i] * p.y + edge_off[i] < -boundary_tol) return false;
    }
    return true;
  }
};

/// Componentwise extrema of a nonempty site set.
inline Rect bounding_rect(std::span<const Point2> sites) {
  if (sites.empty()) raise(errc::empty_point_set, "bounding_rect requires at least one site");
  Rect r{sites[0].x, sites[0].x, sites[0].y, sites[0].y};
  for (const Point2& p : sites) {
    if (!is_finite(p)) raise(errc::invalid_argument, "site coordinates must be finite");
    r.min_x = std::min(r.min_x, p.x);
    r.max_x = std::max(r.max_x, p.x);
    r.min_y = std::min(r.min_y, p.y);
    r.max_y = std::max(r.max_y, p.y);
  }
  return r;
}

/// Enclosing square of edge l_box = max(max_x, max_y) - min(min_x, min_y),
/// anchored at (m, m) with m = min(min_x, min_y).
inline BoundingBox bounding_box(const Rect& rect) {
  const double m = std::min(rect.min_x, rect.min_y);
  const double hi = std::max(rect.max_x, rect.max_y);
  double side = hi - m;
  if (!(side > 0.0)) raise(errc::degenerate_geometry, "bounding box side must be positive");
  // m + (hi - m) can round below hi; widen by the ulps needed so the box
  // really contains the data rectangle.
  while (m + side < hi) side = std::nextafter(side, std::numeric_limits<double>::infinity());
  return BoundingBox{{m, m}, side};
}

namespace detail {

inline double cross(const Point2& o, const Point2& a, const Point2& b) {
  return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

}  // namespace detail

/// Minimal convex polygon containing all sites (Andrew's monotone chain).
/// Requires at least 3 non-collinear sites; vertices come back in
/// counterclockwise order with no three collinear retained.
inline ConvexHull convex_hull(std::span<const Point2> sites) {
  if (sites.size() < 3)
    raise(errc::degenerate_geometry, "convex hull requires at least 3 sites");
  std::vector<Point2> pts(sites.begin(), sites.end());
  for (const Point2& p : pts)
    if (!is_finite(p)) raise(errc::invalid_argument, "site coordinates must be finite");
  std::sort(pts.begin(), pts.end(),
            [](const Point2& a, const Point2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const Point2& a, const Point2& b) { return a.x == b.x && a.y == b.y; }),
            pts.end());

  const std::size_t n = pts.size();
  std::vector<Point2> h(2 * n);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {  // lower chain
    while (k >= 2 && detail::cross(h[k - 2], h[k - 1], pts[i]) <= 0.0) --k;
    h[k++] = pts[i];
  }
  for (std::size_t i = n - 1, lower = k + 1; i-- > 0;) {  // upper chain
    while (k >= lower && detail::cross(h[k - 2], h[k - 1], pts[i]) <= 0.0) --k;
    h[k++] = pts[i];
  }
  h.resize(k > 0 ? k - 1 : 0);

  if (h.size() < 3) raise(errc::degenerate_geometry, "sites are collinear or coincident");

  ConvexHull hull;
  hull.vertices = std::move(h);
  const Rect r = bounding_rect(hull.vertices);
  const double lbox = std::max(r.max_x, r.max_y) - std::min(r.min_x, r.min_y);
  hull.boundary_tol = 1e-12 * lbox;
  hull.rebuild_edges();
  return hull;
}

/// True iff p lies inside the hull or within the boundary tolerance of it.
inline bool point_in_hull(const Point2& p, const ConvexHull& hull) { return hull.contains(p); }

}  // namespace pumi
