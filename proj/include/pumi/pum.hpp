#pragma once

#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pumi/error.hpp"
#include "pumi/geometry.hpp"
#include "pumi/parallel.hpp"
#include "pumi/rbf.hpp"
#include "pumi/spatial.hpp"

namespace pumi {

/// Interpolation input: sites with associated function values.
struct ScatteredData {
  std::vector<Point2> sites;
  std::vector<double> values;
};

struct PumConfig {
  /// Kernel shape parameter; defaults to 1/delta_pu so the local kernel
  /// support matches the patch diameter.
  std::optional<double> epsilon;
  /// Absolute patch radius replacing the delta_pu = side*sqrt(2)/d_pu sizing.
  std::optional<double> delta_override;
};

/// Partition-of-unity interpolation model: per-patch RBF coefficients blended
/// by Shepard-normalized Wendland weights on the patch disks. Immutable after
/// build; evaluation is safe to call concurrently.
struct PumModel {
  ScatteredData data;
  Rect rect;
  BoundingBox box;
  ConvexHull hull;
  PuCenters centers;  ///< retained centres; delta_pu is the final patch radius
  Kernel kernel;      ///< local interpolant kernel
  std::vector<LocalInterpolant> locals;
  BlockGrid center_grid;  ///< block index over the centres, drives evaluation

  double delta() const { return centers.delta_pu; }

  /// Weight generator kernel: support radius exactly delta_pu.
  Kernel weight_kernel() const {
    return Kernel{KernelFamily::wendland_c2, 1.0 / centers.delta_pu};
  }
};

enum class EvalStatus { ok, out_of_hull, uncovered };

struct BatchResult {
  std::vector<double> values;  ///< NaN where status != ok
  std::vector<EvalStatus> status;
};

namespace detail {

/// Patch memberships for every centre at the given radius, via the data-site
/// block grid. Returns per-centre index lists; empties are kept here so the
/// caller can drop the corresponding centres.
inline std::vector<std::vector<int>> collect_patches(const ScatteredData& data,
                                                     const BoundingBox& box,
                                                     const PuCenters& centers, double delta) {
  const int q = block_count(box, delta);
  const BlockGrid grid = build_block_grid(data.sites, box, q);
  std::vector<std::vector<int>> patches(centers.centers.size());
  for (std::size_t j = 0; j < centers.centers.size(); ++j)
    patches[j] = range_query(centers.centers[j], delta, grid, data.sites);
  return patches;
}

inline std::vector<int> uncovered_indices(const std::vector<std::vector<int>>& patches,
                                          std::size_t n_sites) {
  std::vector<char> covered(n_sites, 0);
  for (const auto& patch : patches)
    for (int i : patch) covered[static_cast<std::size_t>(i)] = 1;
  std::vector<int> missing;
  for (std::size_t i = 0; i < n_sites; ++i)
    if (!covered[i]) missing.push_back(static_cast<int>(i));
  return missing;
}

}  // namespace detail

/// Builds the full model: hull, bounding box, PU centres, patch memberships
/// through the block structure, and one local RBF solve per patch. If some
/// site ends up in no patch the radius is inflated by 1.5 once and the cover
/// rebuilt; a second violation is an error listing the uncovered sites.
/// Centres whose patch is empty carry no data and are dropped.
inline PumModel build_pum(ScatteredData data, const PumConfig& config = {}) {
  if (data.sites.size() != data.values.size())
    raise(errc::invalid_argument, "sites and values must have equal length");
  for (double v : data.values)
    if (!std::isfinite(v)) raise(errc::invalid_argument, "data values must be finite");

  PumModel model;
  model.rect = bounding_rect(data.sites);
  model.box = bounding_box(model.rect);
  model.hull = convex_hull(data.sites);
  model.centers = build_pu_centers(model.hull, model.rect, model.box, data.sites.size());
  if (config.delta_override) {
    if (!(*config.delta_override > 0.0))
      raise(errc::invalid_argument, "delta override must be positive");
    model.centers.delta_pu = *config.delta_override;
  }

  std::vector<std::vector<int>> patches;
  for (int attempt = 0;; ++attempt) {
    patches = detail::collect_patches(data, model.box, model.centers, model.centers.delta_pu);
    const std::vector<int> missing = detail::uncovered_indices(patches, data.sites.size());
    if (missing.empty()) break;
    if (attempt == 0) {
      model.centers.delta_pu *= 1.5;  // one automatic cover repair
      continue;
    }
    std::string which;
    for (std::size_t i = 0; i < missing.size() && i < 20; ++i)
      which += (i ? "," : "") + std::to_string(missing[i]);
    if (missing.size() > 20) which += ",...";
    raise(errc::uncovered_sites, std::to_string(missing.size()) +
                                     " sites uncovered after radius inflation: indices " + which);
  }

  // Drop centres with empty patches; they contribute no local interpolant.
  {
    std::vector<Point2> kept;
    std::vector<std::vector<int>> kept_patches;
    for (std::size_t j = 0; j < patches.size(); ++j) {
      if (patches[j].empty()) continue;
      kept.push_back(model.centers.centers[j]);
      kept_patches.push_back(std::move(patches[j]));
    }
    if (kept.empty()) raise(errc::empty_cover, "every candidate patch is empty");
    model.centers.centers = std::move(kept);
    patches = std::move(kept_patches);
  }

  model.kernel.epsilon = config.epsilon.value_or(1.0 / model.centers.delta_pu);
  if (!(model.kernel.epsilon > 0.0))
    raise(errc::invalid_argument, "kernel shape parameter must be positive");

  const double dup_tol = 1e-10 * model.box.side;
  model.locals.resize(patches.size());
  parallel_for(patches.size(), [&](std::size_t j) {
    const std::vector<int>& patch = patches[j];
    std::vector<Point2> ps;
    std::vector<double> fs;
    ps.reserve(patch.size());
    fs.reserve(patch.size());
    for (int i : patch) {
      ps.push_back(data.sites[static_cast<std::size_t>(i)]);
      fs.push_back(data.values[static_cast<std::size_t>(i)]);
    }
    auto [a, f] = assemble_system(ps, fs, model.kernel, dup_tol);
    const Eigen::VectorXd lambda = solve_local(a, f, static_cast<int>(j));
    model.locals[j] =
        LocalInterpolant{patch, {lambda.data(), lambda.data() + lambda.size()}, model.kernel};
  });

  const int q = block_count(model.box, model.centers.delta_pu);
  model.center_grid = build_block_grid(model.centers.centers, model.box, q);
  model.data = std::move(data);
  return model;
}

namespace detail {

inline EvalStatus weights_impl(const Point2& p, const PumModel& model,
                               std::vector<std::pair<int, double>>& out) {
  out.clear();
  if (!model.hull.contains(p)) return EvalStatus::out_of_hull;
  const Kernel wk = model.weight_kernel();
  const std::vector<int> candidates =
      range_query(p, model.delta(), model.center_grid, model.centers.centers);
  double sum = 0.0;
  for (int j : candidates) {
    const double phi = kernel_eval(wk, dist(p, model.centers.centers[static_cast<std::size_t>(j)]));
    if (phi > 0.0) {
      out.emplace_back(j, phi);
      sum += phi;
    }
  }
  if (out.empty()) return EvalStatus::uncovered;
  for (auto& [j, w] : out) w /= sum;
  return EvalStatus::ok;
}

[[noreturn]] inline void raise_eval_status(EvalStatus s, const Point2& p) {
  if (s == EvalStatus::out_of_hull)
    raise(errc::out_of_domain, "evaluation point (" + std::to_string(p.x) + ", " +
                                   std::to_string(p.y) + ") lies outside the convex hull");
  raise(errc::uncovered_point, "no patch covers evaluation point (" + std::to_string(p.x) + ", " +
                                   std::to_string(p.y) + ")");
}

}  // namespace detail

/// Shepard weights of the patches covering p: w_j = phi_j / sum phi_k over
/// the covering set, phi_j the Wendland generator at the patch centre with
/// support radius delta_pu. Nonnegative and summing to one.
inline std::vector<std::pair<int, double>> weights(const Point2& p, const PumModel& model) {
  std::vector<std::pair<int, double>> w;
  const EvalStatus s = detail::weights_impl(p, model, w);
  if (s != EvalStatus::ok) detail::raise_eval_status(s, p);
  return w;
}

/// Global approximant: sum over covering patches of w_j(p) * P_j(p).
inline double eval(const PumModel& model, const Point2& p) {
  std::vector<std::pair<int, double>> w;
  const EvalStatus s = detail::weights_impl(p, model, w);
  if (s != EvalStatus::ok) detail::raise_eval_status(s, p);
  double acc = 0.0;
  for (const auto& [j, wj] : w)
    acc += wj * eval_local(model.locals[static_cast<std::size_t>(j)], model.data.sites, p);
  return acc;
}

/// Elementwise eval with per-point status instead of aborting the batch.
inline BatchResult eval_batch(const PumModel& model, std::span<const Point2> points) {
  BatchResult result;
  result.values.assign(points.size(), std::numeric_limits<double>::quiet_NaN());
  result.status.assign(points.size(), EvalStatus::ok);
  std::vector<std::pair<int, double>> w;
  for (std::size_t i = 0; i < points.size(); ++i) {
    const EvalStatus s = detail::weights_impl(points[i], model, w);
    result.status[i] = s;
    if (s != EvalStatus::ok) continue;
    double acc = 0.0;
    for (const auto& [j, wj] : w)
      acc += wj * eval_local(model.locals[static_cast<std::size_t>(j)], model.data.sites, points[i]);
    result.values[i] = acc;
  }
  return result;
}

// --- model serialization ----------------------------------------------------

inline nlohmann::json to_json(const PumModel& model) {
  nlohmann::json j;
  j["format"] = "pumi-model";
  j["version"] = 1;
  j["kernel"] = {{"family", "wendland_c2"}, {"epsilon", model.kernel.epsilon}};
  j["delta_pu"] = model.centers.delta_pu;
  j["d_pu"] = model.centers.d_pu;
  j["rect"] = {{"min_x", model.rect.min_x},
               {"max_x", model.rect.max_x},
               {"min_y", model.rect.min_y},
               {"max_y", model.rect.max_y}};
  j["box"] = {{"origin_x", model.box.origin.x},
              {"origin_y", model.box.origin.y},
              {"side", model.box.side}};
  auto points_to_json = [](std::span<const Point2> pts) {
    nlohmann::json arr = nlohmann::json::array();
    for (const Point2& p : pts) arr.push_back({p.x, p.y});
    return arr;
  };
  j["hull"] = {{"vertices", points_to_json(model.hull.vertices)},
               {"boundary_tol", model.hull.boundary_tol}};
  j["sites"] = points_to_json(model.data.sites);
  j["values"] = model.data.values;
  j["centers"] = points_to_json(model.centers.centers);
  nlohmann::json patches = nlohmann::json::array();
  for (const LocalInterpolant& local : model.locals)
    patches.push_back({{"sites", local.site_indices}, {"lambda", local.lambda}});
  j["patches"] = std::move(patches);
  return j;
}

inline PumModel from_json(const nlohmann::json& j) {
  try {
    if (j.at("format").get<std::string>() != "pumi-model" || j.at("version").get<int>() != 1)
      raise(errc::io_error, "not a version-1 pumi model document");
    PumModel model;
    model.kernel.epsilon = j.at("kernel").at("epsilon").get<double>();
    model.centers.delta_pu = j.at("delta_pu").get<double>();
    model.centers.d_pu = j.at("d_pu").get<int>();
    const auto& rect = j.at("rect");
    model.rect = Rect{rect.at("min_x").get<double>(), rect.at("max_x").get<double>(),
                      rect.at("min_y").get<double>(), rect.at("max_y").get<double>()};
    const auto& box = j.at("box");
    model.box = BoundingBox{{box.at("origin_x").get<double>(), box.at("origin_y").get<double>()},
                            box.at("side").get<double>()};
    auto points_from_json = [](const nlohmann::json& arr) {
      std::vector<Point2> pts;
      pts.reserve(arr.size());
      for (const auto& p : arr) pts.push_back(Point2{p.at(0).get<double>(), p.at(1).get<double>()});
      return pts;
    };
    model.hull.vertices = points_from_json(j.at("hull").at("vertices"));
    model.hull.boundary_tol = j.at("hull").at("boundary_tol").get<double>();
    if (model.hull.vertices.size() < 3) raise(errc::io_error, "model hull is degenerate");
    model.hull.rebuild_edges();
    model.data.sites = points_from_json(j.at("sites"));
    model.data.values = j.at("values").get<std::vector<double>>();
    model.centers.centers = points_from_json(j.at("centers"));
    for (const auto& patch : j.at("patches")) {
      LocalInterpolant local;
      local.site_indices = patch.at("sites").get<std::vector<int>>();
      local.lambda = patch.at("lambda").get<std::vector<double>>();
      local.kernel = model.kernel;
      if (local.site_indices.size() != local.lambda.size() || local.site_indices.empty())
        raise(errc::io_error, "patch index/coefficient lengths disagree");
      for (int idx : local.site_indices)
        if (idx < 0 || static_cast<std::size_t>(idx) >= model.data.sites.size())
          raise(errc::io_error, "patch site index out of range");
      model.locals.push_back(std::move(local));
    }
    if (model.locals.size() != model.centers.centers.size())
      raise(errc::io_error, "patch count does not match centre count");
    if (model.data.sites.size() != model.data.values.size())
      raise(errc::io_error, "site/value lengths disagree");
    if (!(model.centers.delta_pu > 0.0) || !(model.kernel.epsilon > 0.0))
      raise(errc::io_error, "model radii must be positive");
    const int q = block_count(model.box, model.centers.delta_pu);
    model.center_grid = build_block_grid(model.centers.centers, model.box, q);
    return model;
  } catch (const nlohmann::json::exception& e) {
    raise(errc::io_error, std::string("malformed model document: ") + e.what());
  }
}

inline void save_model(const PumModel& model, const std::string& path) {
  std::ofstream out(path);
  if (!out) raise(errc::io_error, "cannot open " + path + " for writing");
  out << to_json(model).dump(2) << '\n';
  if (!out) raise(errc::io_error, "failed writing " + path);
}

inline PumModel load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(errc::io_error, "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    raise(errc::io_error, std::string("malformed JSON in ") + path + ": " + e.what());
  }
  return from_json(j);
}

}  // namespace pumi
