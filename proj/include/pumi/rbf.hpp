#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pumi/error.hpp"
#include "pumi/geometry.hpp"

namespace pumi {

enum class KernelFamily { wendland_c2 };

/// Compactly supported kernel with shape parameter epsilon > 0; the support
/// radius is 1/epsilon.
struct Kernel {
  KernelFamily family = KernelFamily::wendland_c2;
  double epsilon = 1.0;
};

/// Wendland C2 kernel: (1 - eps*r)_+^4 * (4*eps*r + 1).
inline double kernel_eval(const Kernel& k, double r) {
  if (r < 0.0) raise(errc::invalid_radius, "kernel argument must be nonnegative");
  const double t = k.epsilon * r;
  if (t >= 1.0) return 0.0;
  const double u = 1.0 - t;
  const double u2 = u * u;
  return u2 * u2 * (4.0 * t + 1.0);
}

/// Local RBF interpolant on one patch: coefficients for the kernel translates
/// at the patch sites (stored as global site indices).
struct LocalInterpolant {
  std::vector<int> site_indices;
  std::vector<double> lambda;
  Kernel kernel;
};

/// Kernel collocation system A lambda = f with A_ij = phi(d(site_i, site_j)).
/// A is symmetric with unit diagonal (phi(0) = 1); sites closer than dup_tol
/// would make it singular and are rejected.
inline std::pair<Eigen::MatrixXd, Eigen::VectorXd> assemble_system(
    std::span<const Point2> patch_sites, std::span<const double> values, const Kernel& kernel,
    double dup_tol = 0.0) {
  const auto n = static_cast<Eigen::Index>(patch_sites.size());
  if (n == 0) raise(errc::invalid_argument, "patch must contain at least one site");
  if (patch_sites.size() != values.size())
    raise(errc::invalid_argument, "sites and values must have equal length");
  Eigen::MatrixXd a(n, n);
  Eigen::VectorXd f(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    a(i, i) = 1.0;
    f(i) = values[static_cast<std::size_t>(i)];
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double d =
          dist(patch_sites[static_cast<std::size_t>(i)], patch_sites[static_cast<std::size_t>(j)]);
      if (d <= dup_tol)
        raise(errc::duplicate_sites, "patch sites " + std::to_string(i) + " and " +
                                         std::to_string(j) + " coincide (distance " +
                                         std::to_string(d) + ")");
      const double v = kernel_eval(kernel, d);
      a(i, j) = v;
      a(j, i) = v;  // exact mirror keeps A_ij == A_ji bitwise
    }
  }
  return {std::move(a), std::move(f)};
}

/// Residual bound for accepting a local solve: ||A*x - f||_inf <= tau * (1 + ||f||_inf).
inline constexpr double kSolveTolerance = 1e-8;

namespace detail {

inline bool try_spd_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& f,
                          Eigen::VectorXd& x) {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(a);
  if (ldlt.info() != Eigen::Success) return false;
  x = ldlt.solve(f);
  x += ldlt.solve(f - a * x);  // one refinement step
  if (!x.allFinite()) return false;
  const double bound = kSolveTolerance * (1.0 + f.lpNorm<Eigen::Infinity>());
  return (a * x - f).lpNorm<Eigen::Infinity>() <= bound;
}

}  // namespace detail

/// Solves the symmetric positive-definite system A lambda = f by LDLT with
/// one refinement step. If the factorization fails or the residual bound is
/// violated, a single ridge of 1e-12 * trace(A)/n is added; a second failure
/// reports the patch as ill-conditioned.
inline Eigen::VectorXd solve_local(const Eigen::MatrixXd& a, const Eigen::VectorXd& f,
                                   int patch_id = -1) {
  if (a.rows() != a.cols() || a.rows() != f.size())
    raise(errc::invalid_argument, "system dimensions disagree");
  Eigen::VectorXd x;
  if (detail::try_spd_solve(a, f, x)) return x;
  const double ridge = 1e-12 * a.trace() / static_cast<double>(a.rows());
  Eigen::MatrixXd regularized = a;
  regularized.diagonal().array() += ridge;
  if (detail::try_spd_solve(regularized, f, x)) return x;
  raise(errc::ill_conditioned_patch,
        "local system not solvable to tolerance (patch " + std::to_string(patch_id) + ")");
}

/// Evaluates the local interpolant sum_i lambda_i * phi(||p - site_i||).
inline double eval_local(const LocalInterpolant& interp, std::span<const Point2> sites,
                         const Point2& p) {
  double acc = 0.0;
  for (std::size_t i = 0; i < interp.site_indices.size(); ++i) {
    const Point2& s = sites[static_cast<std::size_t>(interp.site_indices[i])];
    acc += interp.lambda[i] * kernel_eval(interp.kernel, dist(p, s));
  }
  return acc;
}

}  // namespace pumi
