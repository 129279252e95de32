#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "pumi/geometry.hpp"
#include "pumi/sampling.hpp"
#include "support/oracles.hpp"

using namespace pumi;

TEST_CASE("bounding_rect computes componentwise extrema") {
  const std::vector<Point2> a{{0, 0}, {1, 2}};
  const Rect ra = bounding_rect(a);
  CHECK(ra.min_x == 0.0);
  CHECK(ra.max_x == 1.0);
  CHECK(ra.min_y == 0.0);
  CHECK(ra.max_y == 2.0);

  const std::vector<Point2> single{{3, 3}};
  const Rect rs = bounding_rect(single);
  CHECK(rs.min_x == 3.0);
  CHECK(rs.max_x == 3.0);
  CHECK(rs.min_y == 3.0);
  CHECK(rs.max_y == 3.0);

  const std::vector<Point2> c{{-1, 4}, {2, -5}, {0, 0}};
  const Rect rc = bounding_rect(c);
  CHECK(rc.min_x == -1.0);
  CHECK(rc.max_x == 2.0);
  CHECK(rc.min_y == -5.0);
  CHECK(rc.max_y == 4.0);
}

TEST_CASE("bounding_rect rejects empty and non-finite input") {
  CHECK_THROWS_MATCHES(bounding_rect(std::vector<Point2>{}), error,
                       Catch::Matchers::Predicate<error>(
                           [](const error& e) { return e.code() == errc::empty_point_set; }));
  const std::vector<Point2> bad{{0, 0}, {std::nan(""), 1}};
  CHECK_THROWS_AS(bounding_rect(bad), error);
}

TEST_CASE("bounding_box uses the scalar edge formula and the (m, m) anchor") {
  const BoundingBox unit = bounding_box(Rect{0, 1, 0, 1});
  CHECK(unit.side == 1.0);
  CHECK(unit.origin.x == 0.0);
  CHECK(unit.origin.y == 0.0);

  const BoundingBox wide = bounding_box(Rect{0, 2, 0, 1});
  CHECK(wide.side == 2.0);

  const BoundingBox shifted = bounding_box(Rect{-1, 1, 0, 3});
  CHECK(shifted.side == 4.0);
  CHECK(shifted.origin.x == -1.0);
  CHECK(shifted.origin.y == -1.0);
}

TEST_CASE("bounding_box rejects degenerate rectangles") {
  CHECK_THROWS_MATCHES(bounding_box(Rect{3, 3, 3, 3}), error,
                       Catch::Matchers::Predicate<error>(
                           [](const error& e) { return e.code() == errc::degenerate_geometry; }));
}

TEST_CASE("bounding_box covers the data rectangle") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const double x0 = -5 + 10 * uniform01(rng), x1 = x0 + 10 * uniform01(rng) + 1e-6;
    const double y0 = -5 + 10 * uniform01(rng), y1 = y0 + 10 * uniform01(rng) + 1e-6;
    const Rect r{x0, x1, y0, y1};
    const BoundingBox box = bounding_box(r);
    CHECK(box.side >= std::max(r.width(), r.height()));
    CHECK(box.contains({r.min_x, r.min_y}));
    CHECK(box.contains({r.max_x, r.max_y}));
  }
}

TEST_CASE("convex_hull drops interior points and keeps triangles") {
  const std::vector<Point2> square{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.5, 0.5}};
  const ConvexHull hull = convex_hull(square);
  CHECK(hull.vertices.size() == 4);
  for (const Point2& v : hull.vertices) CHECK((v.x == 0.0 || v.x == 1.0));

  const std::vector<Point2> tri{{0, 0}, {2, 0}, {1, 3}};
  CHECK(convex_hull(tri).vertices.size() == 3);
}

TEST_CASE("convex_hull rejects degenerate configurations") {
  CHECK_THROWS_AS(convex_hull(std::vector<Point2>{{0, 0}, {1, 1}}), error);
  // collinear sets are intrinsically 1D and rejected
  const std::vector<Point2> collinear{{0, 0}, {1, 1}, {2, 2}, {3, 3}};
  CHECK_THROWS_MATCHES(convex_hull(collinear), error,
                       Catch::Matchers::Predicate<error>(
                           [](const error& e) { return e.code() == errc::degenerate_geometry; }));
}

TEST_CASE("convex_hull matches the brute-force oracle on random sets") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t n = 3 + static_cast<std::size_t>(uniform01(rng) * 47);
    std::vector<Point2> pts;
    for (std::size_t i = 0; i < n; ++i) {
      // uniform in the unit disk
      for (;;) {
        const Point2 p{2 * uniform01(rng) - 1, 2 * uniform01(rng) - 1};
        if (p.x * p.x + p.y * p.y <= 1.0) {
          pts.push_back(p);
          break;
        }
      }
    }
    ConvexHull hull;
    try {
      hull = convex_hull(pts);
    } catch (const error&) {
      continue;  // degenerate random draw (collinear), not this test's concern
    }
    const auto expected = oracles::brute_force_hull(pts);
    const auto got = oracles::sorted_vertices(hull.vertices);
    REQUIRE(got.size() == expected.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      CHECK(got[i].x == expected[i].x);
      CHECK(got[i].y == expected[i].y);
    }
  }
}

TEST_CASE("every site lies inside its own hull") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Point2> pts;
    for (int i = 0; i < 60; ++i) pts.push_back({uniform01(rng) * 3 - 1, uniform01(rng) * 2});
    const ConvexHull hull = convex_hull(pts);
    for (const Point2& p : pts) CHECK(point_in_hull(p, hull));
  }
}

TEST_CASE("hull of hull vertices is idempotent") {
  std::mt19937_64 rng(99);
  std::vector<Point2> pts;
  for (int i = 0; i < 200; ++i) pts.push_back({uniform01(rng), uniform01(rng)});
  const ConvexHull hull = convex_hull(pts);
  const ConvexHull again = convex_hull(hull.vertices);
  const auto a = oracles::sorted_vertices(hull.vertices);
  const auto b = oracles::sorted_vertices(again.vertices);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].x == b[i].x);
    CHECK(a[i].y == b[i].y);
  }
}

TEST_CASE("point_in_hull: centroid, far exterior, vertices and edge midpoints") {
  const std::vector<Point2> pts{{0, 0}, {4, 0}, {4, 3}, {0, 3}, {2, 1}};
  const ConvexHull hull = convex_hull(pts);

  Point2 centroid{0, 0};
  for (const Point2& v : hull.vertices) {
    centroid.x += v.x;
    centroid.y += v.y;
  }
  centroid.x /= static_cast<double>(hull.vertices.size());
  centroid.y /= static_cast<double>(hull.vertices.size());
  CHECK(point_in_hull(centroid, hull));

  CHECK_FALSE(point_in_hull({8, 8}, hull));  // ~2 box edges away
  for (const Point2& v : hull.vertices) CHECK(point_in_hull(v, hull));
  for (std::size_t i = 0; i < hull.vertices.size(); ++i) {
    const Point2& a = hull.vertices[i];
    const Point2& b = hull.vertices[(i + 1) % hull.vertices.size()];
    CHECK(point_in_hull({0.5 * (a.x + b.x), 0.5 * (a.y + b.y)}, hull));
  }
}
