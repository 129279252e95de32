#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <vector>

#include "pumi/csv.hpp"
#include "pumi/error.hpp"
#include "pumi/geometry.hpp"
#include "pumi/kdtree.hpp"
#include "pumi/sampling.hpp"
#include "pumi/spatial.hpp"

namespace pumi {

/// One timing record of the benchmark CSV.
struct BenchRow {
  std::string structure;  ///< block, kdtree or brute
  std::size_t n = 0;
  double build_seconds = 0.0;
  double total_query_seconds = 0.0;
  double queries_per_second = 0.0;
};

/// The PUM range-query workload over a site set: the retained PU centres as
/// query points, the patch radius delta_pu as query radius.
struct PumWorkload {
  std::vector<Point2> sites;
  std::vector<Point2> queries;
  double radius = 0.0;
  BoundingBox box;
};

inline PumWorkload make_pum_workload(std::vector<Point2> sites) {
  PumWorkload w;
  const Rect rect = bounding_rect(sites);
  w.box = bounding_box(rect);
  const ConvexHull hull = convex_hull(sites);
  const PuCenters centers = build_pu_centers(hull, rect, w.box, sites.size());
  w.queries = centers.centers;
  w.radius = centers.delta_pu;
  w.sites = std::move(sites);
  return w;
}

namespace detail {

inline double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace detail

/// Runs the workload against one structure; `checksum` accumulates hit counts
/// so the compiler cannot drop the queries.
inline BenchRow run_block_workload(const PumWorkload& w, std::uint64_t& checksum) {
  auto t0 = std::chrono::steady_clock::now();
  const int q = block_count(w.box, w.radius);
  const BlockGrid grid = build_block_grid(w.sites, w.box, q);
  const double build_s = detail::seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  for (const Point2& c : w.queries) checksum += range_query(c, w.radius, grid, w.sites).size();
  const double query_s = detail::seconds_since(t0);
  return BenchRow{"block", w.sites.size(), build_s, query_s,
                  static_cast<double>(w.queries.size()) / query_s};
}

inline BenchRow run_kdtree_workload(const PumWorkload& w, std::uint64_t& checksum) {
  auto t0 = std::chrono::steady_clock::now();
  const KdTree tree(w.sites);
  const double build_s = detail::seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  for (const Point2& c : w.queries) checksum += tree.range_query(c, w.radius).size();
  const double query_s = detail::seconds_since(t0);
  return BenchRow{"kdtree", w.sites.size(), build_s, query_s,
                  static_cast<double>(w.queries.size()) / query_s};
}

inline BenchRow run_brute_workload(const PumWorkload& w, std::uint64_t& checksum) {
  const auto t0 = std::chrono::steady_clock::now();
  for (const Point2& c : w.queries) checksum += brute_force_query(c, w.radius, w.sites).size();
  const double query_s = detail::seconds_since(t0);
  return BenchRow{"brute", w.sites.size(), 0.0, query_s,
                  static_cast<double>(w.queries.size()) / query_s};
}

/// Exact set equality of the three search paths on this workload; run before
/// any timing is trusted.
inline void verify_workload_equivalence(const PumWorkload& w) {
  const int q = block_count(w.box, w.radius);
  const BlockGrid grid = build_block_grid(w.sites, w.box, q);
  const KdTree tree(w.sites);
  for (const Point2& c : w.queries) {
    const auto blocked = range_query(c, w.radius, grid, w.sites);
    const auto brute = brute_force_query(c, w.radius, w.sites);
    const auto kd = tree.range_query(c, w.radius);
    if (blocked != brute || kd != brute)
      raise(errc::invalid_argument, "search structures disagree on the workload");
  }
}

inline void write_bench_csv(const std::vector<BenchRow>& rows, const std::string& path) {
  CsvWriter out(path, {"structure", "N", "build_seconds", "total_query_seconds",
                       "queries_per_second"});
  for (const BenchRow& r : rows) {
    // structure is a string cell; write the row by hand
    out.raw_row(r.structure + "," + std::to_string(r.n) + "," + format_double(r.build_seconds) +
                "," + format_double(r.total_query_seconds) + "," +
                format_double(r.queries_per_second));
  }
  out.close();
}

}  // namespace pumi
