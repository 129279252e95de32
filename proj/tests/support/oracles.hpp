#pragma once

// Test-only oracles, kept independent of the library implementation paths
// they check.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "pumi/geometry.hpp"
#include "pumi/rbf.hpp"

namespace oracles {

// O(N^3) convex hull: a point is a hull vertex iff it is not strictly inside
// the hull, i.e. there exists a half-plane through it containing all other
// points. Implemented as the all-pairs half-plane test: an edge (i, j)
// belongs to the hull iff every other point lies on one side of it.
inline std::vector<pumi::Point2> brute_force_hull(std::span<const pumi::Point2> pts) {
  const auto cross = [](const pumi::Point2& o, const pumi::Point2& a, const pumi::Point2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
  };
  const std::size_t n = pts.size();
  std::vector<char> on_hull(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      bool all_left = true;
      bool degenerate = false;
      for (std::size_t k = 0; k < n && all_left; ++k) {
        if (k == i || k == j) continue;
        const double c = cross(pts[i], pts[j], pts[k]);
        if (c < 0.0) all_left = false;
        if (c == 0.0) degenerate = true;  // collinear point on the candidate edge
      }
      if (all_left && !degenerate) on_hull[i] = on_hull[j] = 1;
    }
  std::vector<pumi::Point2> verts;
  for (std::size_t i = 0; i < n; ++i)
    if (on_hull[i]) verts.push_back(pts[i]);
  // canonical order for comparison: sort lexicographically
  std::sort(verts.begin(), verts.end(), [](const pumi::Point2& a, const pumi::Point2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  return verts;
}

inline std::vector<pumi::Point2> sorted_vertices(std::vector<pumi::Point2> verts) {
  std::sort(verts.begin(), verts.end(), [](const pumi::Point2& a, const pumi::Point2& b) {
    return a.x < b.x || (a.x == b.x && a.y < b.y);
  });
  return verts;
}

// Franke's test function, the usual smooth benchmark for 2D scattered-data
// interpolation on the unit square.
inline double franke(double x, double y) {
  const double t1 = 0.75 * std::exp(-((9 * x - 2) * (9 * x - 2) + (9 * y - 2) * (9 * y - 2)) / 4.0);
  const double t2 = 0.75 * std::exp(-((9 * x + 1) * (9 * x + 1)) / 49.0 - (9 * y + 1) / 10.0);
  const double t3 = 0.5 * std::exp(-((9 * x - 7) * (9 * x - 7) + (9 * y - 3) * (9 * y - 3)) / 4.0);
  const double t4 = -0.2 * std::exp(-(9 * x - 4) * (9 * x - 4) - (9 * y - 7) * (9 * y - 7));
  return t1 + t2 + t3 + t4;
}

// Dense global RBF interpolant on all N sites: assemble the full collocation
// system once and evaluate directly. This is the single-patch reference the
// blended model must reproduce.
struct DenseInterpolant {
  std::vector<pumi::Point2> sites;
  Eigen::VectorXd lambda;
  pumi::Kernel kernel;

  double operator()(const pumi::Point2& p) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < sites.size(); ++i)
      acc += lambda[static_cast<Eigen::Index>(i)] * pumi::kernel_eval(kernel, pumi::dist(p, sites[i]));
    return acc;
  }
};

inline DenseInterpolant dense_global_interpolant(std::span<const pumi::Point2> sites,
                                                 std::span<const double> values,
                                                 const pumi::Kernel& kernel) {
  DenseInterpolant d;
  d.sites.assign(sites.begin(), sites.end());
  d.kernel = kernel;
  const auto n = static_cast<Eigen::Index>(sites.size());
  Eigen::MatrixXd a(n, n);
  Eigen::VectorXd f(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    f(i) = values[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < n; ++j)
      a(i, j) = pumi::kernel_eval(
          kernel, pumi::dist(sites[static_cast<std::size_t>(i)], sites[static_cast<std::size_t>(j)]));
  }
  d.lambda = a.fullPivLu().solve(f);
  return d;
}

}  // namespace oracles
