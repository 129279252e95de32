#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "pumi/geometry.hpp"

namespace pumi {

/// Uniform double in [0, 1) from the raw engine stream. std::mt19937_64's
/// output sequence is pinned by the standard, so values derived this way are
/// reproducible across platforms (library distributions are not).
inline double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline Point2 uniform_point(std::mt19937_64& rng, const Rect& rect) {
  return Point2{rect.min_x + rect.width() * uniform01(rng),
                rect.min_y + rect.height() * uniform01(rng)};
}

inline std::vector<Point2> uniform_sites(std::size_t n, std::uint64_t seed,
                                         const Rect& rect = {0.0, 1.0, 0.0, 1.0}) {
  std::mt19937_64 rng(seed);
  std::vector<Point2> sites;
  sites.reserve(n);
  for (std::size_t i = 0; i < n; ++i) sites.push_back(uniform_point(rng, rect));
  return sites;
}

/// Radical-inverse / Halton low-discrepancy sequence (index starts at 1).
inline double radical_inverse(std::uint64_t index, std::uint64_t base) {
  double inv_base = 1.0 / static_cast<double>(base);
  double scale = inv_base;
  double value = 0.0;
  while (index > 0) {
    value += static_cast<double>(index % base) * scale;
    index /= base;
    scale *= inv_base;
  }
  return value;
}

/// First n points of the 2D Halton sequence (bases 2 and 3) on the unit square.
inline std::vector<Point2> halton_sites(std::size_t n) {
  std::vector<Point2> sites;
  sites.reserve(n);
  for (std::size_t i = 1; i <= n; ++i)
    sites.push_back(Point2{radical_inverse(i, 2), radical_inverse(i, 3)});
  return sites;
}

}  // namespace pumi
