#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "pumi/error.hpp"
#include "pumi/parallel.hpp"
#include "pumi/pum.hpp"

namespace pumi {

/// Parameters of the herbivore/grass/trees model. Feeding follows a
/// Beddington-DeAngelis response; alpha and beta are the inverses of the
/// maximal grass and tree consumption.
struct EcologyParams {
  double mu = 0.0;     ///< herbivore metabolic rate (1/day)
  double r1 = 0.0;     ///< grass growth rate (1/day)
  double r2 = 0.0;     ///< tree growth rate (1/day)
  double K1 = 1.0;     ///< grass carrying capacity (biomass)
  double K2 = 1.0;     ///< tree carrying capacity (biomass)
  double c = 1.0;      ///< grass half-saturation (biomass)
  double g = 1.0;      ///< tree half-saturation (biomass)
  double e = 0.0;      ///< grass conversion factor (<= 1)
  double f = 0.0;      ///< tree conversion factor (<= 1)
  double a = 0.0;      ///< daily grass feeding rate (1/day)
  double b = 0.0;      ///< daily tree feeding rate (1/day)
  double alpha = 0.0;  ///< inverse maximal grass consumption (pure)
  double beta = 0.0;   ///< inverse maximal tree consumption (pure)

  void validate() const {
    const double fields[] = {mu, r1, r2, K1, K2, c, g, e, f, a, b, alpha, beta};
    for (double v : fields)
      if (!std::isfinite(v) || v < 0.0)
        raise(errc::invalid_argument, "model parameters must be finite and nonnegative");
    if (e > 1.0 || f > 1.0)
      raise(errc::invalid_argument, "conversion factors e and f must not exceed 1");
    if (!(K1 > 0.0) || !(K2 > 0.0) || !(c > 0.0) || !(g > 0.0))
      raise(errc::invalid_argument, "carrying capacities and half-saturations must be positive");
  }
};

struct EcoState {
  double H = 0.0;
  double G = 0.0;
  double T = 0.0;
};

struct EcoDerivs {
  double dH = 0.0;
  double dG = 0.0;
  double dT = 0.0;
};

/// Right-hand side of the three-species system. At the herbivore-free state
/// (0, K1, K2) and at the origin every term vanishes structurally, so the
/// result is exactly zero in floating point.
inline EcoDerivs rhs(const EcoState& s, const EcologyParams& p) {
  const double grass_denom = p.c + s.H + p.alpha * s.G;
  const double tree_denom = p.g + s.H + p.beta * s.T + p.alpha * s.G;
  const double grass_feed = p.a * s.H * s.G / grass_denom;
  const double tree_feed = p.b * s.H * s.T / tree_denom;
  return EcoDerivs{-p.mu * s.H + p.e * grass_feed + p.f * tree_feed,
                   p.r1 * s.G * (1.0 - s.G / p.K1) - grass_feed,
                   p.r2 * s.T * (1.0 - s.T / p.K2) - tree_feed};
}

namespace detail {

inline EcoState rk4_step_from(const EcoState& s, const EcoDerivs& k1, const EcologyParams& p,
                              double dt) {
  const double h = 0.5 * dt;
  const EcoState s2{s.H + h * k1.dH, s.G + h * k1.dG, s.T + h * k1.dT};
  const EcoDerivs k2 = rhs(s2, p);
  const EcoState s3{s.H + h * k2.dH, s.G + h * k2.dG, s.T + h * k2.dT};
  const EcoDerivs k3 = rhs(s3, p);
  const EcoState s4{s.H + dt * k3.dH, s.G + dt * k3.dG, s.T + dt * k3.dT};
  const EcoDerivs k4 = rhs(s4, p);
  const double w = dt / 6.0;
  return EcoState{s.H + w * (k1.dH + 2.0 * k2.dH + 2.0 * k3.dH + k4.dH),
                  s.G + w * (k1.dG + 2.0 * k2.dG + 2.0 * k3.dG + k4.dG),
                  s.T + w * (k1.dT + 2.0 * k2.dT + 2.0 * k3.dT + k4.dT)};
}

/// Clamps populations at zero from below; returns how many components were
/// clamped on this step.
inline int clamp_nonnegative(EcoState& s) {
  int clamped = 0;
  if (s.H < 0.0) { s.H = 0.0; ++clamped; }
  if (s.G < 0.0) { s.G = 0.0; ++clamped; }
  if (s.T < 0.0) { s.T = 0.0; ++clamped; }
  return clamped;
}

inline bool finite_state(const EcoState& s) {
  return std::isfinite(s.H) && std::isfinite(s.G) && std::isfinite(s.T);
}

}  // namespace detail

/// One classical Runge-Kutta step (no clamping).
inline EcoState rk4_step(const EcoState& s, const EcologyParams& p, double dt) {
  return detail::rk4_step_from(s, rhs(s, p), p, dt);
}

struct Trajectory {
  std::vector<double> times;
  std::vector<EcoState> states;
  long clamp_events = 0;
};

/// Fixed-step RK4 integration from t=0 to t=t_end inclusive (the last step is
/// shortened to land exactly on t_end). States are clamped at zero from
/// below; NaN/Inf aborts with the offending time. store_stride thins the
/// stored trajectory; the first and last states are always kept.
inline Trajectory integrate(const EcoState& s0, const EcologyParams& p, double t_end, double dt,
                            std::size_t store_stride = 1) {
  if (!(dt > 0.0) || !(t_end > 0.0))
    raise(errc::invalid_argument, "dt and t_end must be positive");
  if (store_stride == 0) store_stride = 1;
  Trajectory traj;
  traj.times.push_back(0.0);
  traj.states.push_back(s0);
  EcoState s = s0;
  const auto n_full = static_cast<long long>(std::floor(t_end / dt + 1e-9));
  const double remainder = t_end - static_cast<double>(n_full) * dt;
  long long step = 0;
  auto advance = [&](double h, double t_now) {
    s = rk4_step(s, p, h);
    if (!detail::finite_state(s))
      raise(errc::numerical_blowup,
            "state became non-finite at t = " + std::to_string(t_now) + " days");
    traj.clamp_events += detail::clamp_nonnegative(s);
  };
  for (; step < n_full; ++step) {
    const double t_next = static_cast<double>(step + 1) * dt;
    advance(dt, t_next);
    if (static_cast<std::size_t>(step + 1) % store_stride == 0 && t_next < t_end) {
      traj.times.push_back(t_next);
      traj.states.push_back(s);
    }
  }
  if (remainder > 1e-9 * dt) advance(remainder, t_end);
  traj.times.push_back(t_end);
  traj.states.push_back(s);
  return traj;
}

enum class Outcome { coexistence, herbivore_free, undetermined };

inline const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::coexistence: return "coexistence";
    case Outcome::herbivore_free: return "herbivore-free";
    case Outcome::undetermined: return "undetermined";
  }
  return "?";
}

struct ClassifyConfig {
  double horizon = 36500.0;    ///< days (100 years)
  double dt = 0.5;             ///< days
  double theta_ext_rel = 1e-3; ///< extinction threshold relative to H(0)
  double theta_settle = 1e-3;  ///< relative H drift bound over the trailing window
  double window_frac = 0.10;   ///< trailing window as a fraction of the horizon
  bool early_exit = true;      ///< allow provably-decided runs to stop early
};

/// Integrates to the horizon and labels the attractor: herbivore-free when
/// H(t_end) < theta_ext; coexistence when H stayed above theta_ext and its
/// relative spread over the trailing window is below theta_settle; otherwise
/// undetermined.
///
/// Two early exits keep near-boundary scans affordable. Extinction exit: when
/// mu exceeds the supremum of the per-capita gain (reachable G and T are
/// bounded by max(G0,K1) and max(T0,K2)), H is strictly decreasing, so
/// dropping under theta_ext is final; likewise H == 0 is absorbing.
/// Coexistence exit: once the full vector field stays so small for 5000
/// consecutive days that the projected remaining change is under 1% of the
/// settle tolerance, the trajectory is pinned at an interior equilibrium.
inline Outcome classify(const EcologyParams& p, const EcoState& s0, const ClassifyConfig& cfg) {
  p.validate();
  if (!(cfg.dt > 0.0) || !(cfg.horizon > 0.0))
    raise(errc::invalid_argument, "classification needs positive dt and horizon");
  if (s0.H <= 0.0) return Outcome::herbivore_free;

  const double theta_ext = cfg.theta_ext_rel * s0.H;
  const double g_max = std::max(s0.G, p.K1) * (1.0 + 1e-9);
  const double t_max = std::max(s0.T, p.K2) * (1.0 + 1e-9);
  const double gain_sup =
      p.a * p.e * g_max / (p.c + p.alpha * g_max) + p.b * p.f * t_max / (p.g + p.beta * t_max);
  const bool monotone_decay = p.mu > gain_sup;

  const double window_start = (1.0 - cfg.window_frac) * cfg.horizon;
  double window_min = s0.H, window_max = s0.H;
  bool window_seen = false;
  bool dipped = false;
  double settle_streak_start = -1.0;

  EcoState s = s0;
  const auto n_full = static_cast<long long>(std::floor(cfg.horizon / cfg.dt + 1e-9));
  const double remainder = cfg.horizon - static_cast<double>(n_full) * cfg.dt;
  const long long n_steps = n_full + (remainder > 1e-9 * cfg.dt ? 1 : 0);

  for (long long step = 0; step < n_steps; ++step) {
    const bool last = step == n_steps - 1;
    const double h = (step < n_full) ? cfg.dt : remainder;
    const double t_next = last ? cfg.horizon : static_cast<double>(step + 1) * cfg.dt;
    const EcoDerivs k1 = rhs(s, p);
    s = detail::rk4_step_from(s, k1, p, h);
    if (!detail::finite_state(s))
      raise(errc::numerical_blowup,
            "state became non-finite at t = " + std::to_string(t_next) + " days");
    detail::clamp_nonnegative(s);

    if (s.H < theta_ext) {
      dipped = true;
      if (s.H == 0.0 || monotone_decay) return Outcome::herbivore_free;
    }
    if (t_next >= window_start) {
      window_min = window_seen ? std::min(window_min, s.H) : s.H;
      window_max = window_seen ? std::max(window_max, s.H) : s.H;
      window_seen = true;
    }
    if (cfg.early_exit && !last) {
      const double remaining = cfg.horizon - t_next;
      const EcoDerivs d = rhs(s, p);
      const double quiet = 0.01 * cfg.theta_settle;
      const bool still = !dipped && s.H >= 2.0 * theta_ext &&
                         std::abs(d.dH) * remaining <= quiet * s.H &&
                         std::abs(d.dG) * remaining <= quiet * std::max(s.G, 1e-6 * p.K1) &&
                         std::abs(d.dT) * remaining <= quiet * std::max(s.T, 1e-6 * p.K2);
      if (still) {
        if (settle_streak_start < 0.0) settle_streak_start = t_next;
        if (t_next - settle_streak_start >= 5000.0) return Outcome::coexistence;
      } else {
        settle_streak_start = -1.0;
      }
    }
  }

  if (s.H < theta_ext) return Outcome::herbivore_free;
  if (!dipped && window_seen) {
    const double drift = (window_max - window_min) / std::max(window_max, 1e-300);
    if (drift <= cfg.theta_settle) return Outcome::coexistence;
  }
  return Outcome::undetermined;
}

/// classify with the one spec'd retry: an undetermined run is repeated once
/// at twice the horizon.
inline Outcome classify_with_retry(const EcologyParams& p, const EcoState& s0,
                                   const ClassifyConfig& cfg) {
  const Outcome first = classify(p, s0, cfg);
  if (first != Outcome::undetermined) return first;
  ClassifyConfig doubled = cfg;
  doubled.horizon *= 2.0;
  return classify(p, s0, doubled);
}

enum class ScanAxis { mu, e, alpha };

inline const char* scan_axis_name(ScanAxis a) {
  switch (a) {
    case ScanAxis::mu: return "mu";
    case ScanAxis::e: return "e";
    case ScanAxis::alpha: return "alpha";
  }
  return "?";
}

inline double get_axis(const EcologyParams& p, ScanAxis axis) {
  switch (axis) {
    case ScanAxis::mu: return p.mu;
    case ScanAxis::e: return p.e;
    case ScanAxis::alpha: return p.alpha;
  }
  return 0.0;
}

inline void set_axis(EcologyParams& p, ScanAxis axis, double v) {
  switch (axis) {
    case ScanAxis::mu: p.mu = v; break;
    case ScanAxis::e: p.e = v; break;
    case ScanAxis::alpha: p.alpha = v; break;
  }
}

struct BisectConfig {
  double tol_rel = 1e-4;  ///< stop when width < tol_rel * initial width
  int max_iter = 60;
  ClassifyConfig classify_cfg;
};

struct BisectResult {
  EcologyParams boundary;
  ScanAxis axis = ScanAxis::mu;
  int iterations = 0;
  double width_abs = 0.0;
  double width_rel = 0.0;
};

namespace detail {

/// The scanned axis along which the two parameter sets differ; all other
/// fields must agree exactly.
inline ScanAxis bracket_axis(const EcologyParams& in, const EcologyParams& out) {
  int differing = 0;
  ScanAxis axis = ScanAxis::mu;
  for (ScanAxis a : {ScanAxis::mu, ScanAxis::e, ScanAxis::alpha}) {
    if (get_axis(in, a) != get_axis(out, a)) {
      axis = a;
      ++differing;
    }
  }
  const bool rest_equal = in.r1 == out.r1 && in.r2 == out.r2 && in.K1 == out.K1 &&
                          in.K2 == out.K2 && in.c == out.c && in.g == out.g && in.f == out.f &&
                          in.a == out.a && in.b == out.b && in.beta == out.beta;
  if (differing != 1 || !rest_equal)
    raise(errc::invalid_bracket,
          "bracket endpoints must differ in exactly one of mu, e, alpha (found " +
              std::to_string(differing) + " differing scanned coordinates)");
  return axis;
}

}  // namespace detail

/// Interval halving between a coexistence parameter set and a herbivore-free
/// one along their single differing coordinate. The bracket invariant (the
/// endpoints classify differently) holds at every iteration; an undetermined
/// midpoint is retried once at twice the horizon and is an error after that.
inline BisectResult bisect_boundary(const EcologyParams& p_in, const EcologyParams& p_out,
                                    const EcoState& s0, const BisectConfig& cfg) {
  const ScanAxis axis = detail::bracket_axis(p_in, p_out);
  const Outcome label_in = classify_with_retry(p_in, s0, cfg.classify_cfg);
  const Outcome label_out = classify_with_retry(p_out, s0, cfg.classify_cfg);
  if (label_in != Outcome::coexistence)
    raise(errc::invalid_bracket, std::string("p_in must classify as coexistence, got ") +
                                     outcome_name(label_in));
  if (label_out != Outcome::herbivore_free)
    raise(errc::invalid_bracket, std::string("p_out must classify as herbivore-free, got ") +
                                     outcome_name(label_out));

  double v_in = get_axis(p_in, axis);
  double v_out = get_axis(p_out, axis);
  const double initial_width = std::abs(v_out - v_in);
  if (initial_width == 0.0) raise(errc::invalid_bracket, "bracket has zero width");

  EcologyParams mid = p_in;
  int iter = 0;
  while (std::abs(v_out - v_in) >= cfg.tol_rel * initial_width) {
    if (iter >= cfg.max_iter)
      raise(errc::bisect_failure, "bracket did not shrink below tolerance within " +
                                      std::to_string(cfg.max_iter) + " iterations");
    const double v_mid = 0.5 * (v_in + v_out);
    set_axis(mid, axis, v_mid);
    const Outcome label = classify_with_retry(mid, s0, cfg.classify_cfg);
    if (label == Outcome::undetermined)
      raise(errc::bisect_failure, std::string("midpoint ") + scan_axis_name(axis) + " = " +
                                      std::to_string(v_mid) +
                                      " is undetermined after horizon doubling");
    (label == Outcome::coexistence ? v_in : v_out) = v_mid;
    ++iter;
  }

  BisectResult result;
  result.axis = axis;
  result.iterations = iter;
  result.width_abs = std::abs(v_out - v_in);
  result.width_rel = result.width_abs / initial_width;
  result.boundary = p_in;
  set_axis(result.boundary, axis, 0.5 * (v_in + v_out));
  return result;
}

enum class SampleLabel { coexistence, herbivore_free, boundary };

/// A parameter-space point classified or bisected onto the separatrix.
struct SensitivitySample {
  double mu = 0.0;
  double e = 0.0;
  double alpha = 0.0;
  SampleLabel label = SampleLabel::boundary;
  int iterations = 0;
  double bracket_width = 0.0;  ///< final absolute bracket width in mu
};

struct ScanFailure {
  double e = 0.0;
  double alpha = 0.0;
  std::string reason;
};

struct SensitivityScan {
  std::vector<SensitivitySample> samples;
  std::vector<ScanFailure> failures;
};

/// For each (e, alpha) pair, bisects along mu between mu_lo and mu_hi to the
/// separatrix value mu*(e, alpha). Pairs whose mu interval does not bracket
/// the boundary are reported in failures rather than aborting the scan. Grid
/// points are processed as a parallel map; output order follows the input.
inline SensitivityScan build_sensitivity_samples(const std::vector<std::pair<double, double>>& grid,
                                                 double mu_lo, double mu_hi,
                                                 const EcologyParams& base, const EcoState& s0,
                                                 const BisectConfig& cfg) {
  if (grid.empty()) raise(errc::invalid_argument, "scan grid must be nonempty");
  if (!(mu_lo < mu_hi)) raise(errc::invalid_argument, "mu range must satisfy mu_lo < mu_hi");

  struct Slot {
    std::optional<SensitivitySample> sample;
    std::optional<ScanFailure> failure;
  };
  std::vector<Slot> slots(grid.size());

  parallel_for(grid.size(), [&](std::size_t i) {
    const auto [e_val, alpha_val] = grid[i];
    EcologyParams lo = base;
    lo.e = e_val;
    lo.alpha = alpha_val;
    lo.mu = mu_lo;
    EcologyParams hi = lo;
    hi.mu = mu_hi;
    try {
      const Outcome c_lo = classify_with_retry(lo, s0, cfg.classify_cfg);
      const Outcome c_hi = classify_with_retry(hi, s0, cfg.classify_cfg);
      const EcologyParams* p_in = nullptr;
      const EcologyParams* p_out = nullptr;
      if (c_lo == Outcome::coexistence && c_hi == Outcome::herbivore_free) {
        p_in = &lo;
        p_out = &hi;
      } else if (c_hi == Outcome::coexistence && c_lo == Outcome::herbivore_free) {
        p_in = &hi;
        p_out = &lo;
      } else {
        slots[i].failure =
            ScanFailure{e_val, alpha_val,
                        std::string("mu range does not bracket the boundary (lo: ") +
                            outcome_name(c_lo) + ", hi: " + outcome_name(c_hi) + ")"};
        return;
      }
      const BisectResult r = bisect_boundary(*p_in, *p_out, s0, cfg);
      slots[i].sample = SensitivitySample{r.boundary.mu,    e_val,       alpha_val,
                                          SampleLabel::boundary, r.iterations, r.width_abs};
    } catch (const error& err) {
      slots[i].failure = ScanFailure{e_val, alpha_val, err.what()};
    }
  });

  SensitivityScan scan;
  for (Slot& slot : slots) {
    if (slot.sample) scan.samples.push_back(*slot.sample);
    if (slot.failure) scan.failures.push_back(*slot.failure);
  }
  return scan;
}

// --- surface reconstruction over the sample cloud ---------------------------

/// PUM interpolation model over the (e, alpha) sample cloud with values
/// mu*(e, alpha). Coordinates are affinely normalized to [0,1]^2 before
/// interpolation (the axes carry very different units), so `param_rect`
/// must accompany the model to evaluate it.
struct SurfaceModel {
  PumModel model;
  Rect param_rect;  ///< (e, alpha) extents used for normalization

  Point2 normalized(double e_val, double alpha_val) const {
    return Point2{(e_val - param_rect.min_x) / param_rect.width(),
                  (alpha_val - param_rect.min_y) / param_rect.height()};
  }
};

inline SurfaceModel build_surface_model(std::span<const SensitivitySample> samples,
                                        const PumConfig& config = {}) {
  ScatteredData data;
  Rect rect;
  {
    std::vector<Point2> raw;
    raw.reserve(samples.size());
    for (const SensitivitySample& s : samples) raw.push_back(Point2{s.e, s.alpha});
    if (raw.empty()) raise(errc::empty_point_set, "no samples to build a surface from");
    rect = bounding_rect(raw);
    if (!(rect.width() > 0.0) || !(rect.height() > 0.0))
      raise(errc::degenerate_geometry, "sample cloud must span both parameter axes");
    for (const Point2& p : raw)
      data.sites.push_back(Point2{(p.x - rect.min_x) / rect.width(),
                                  (p.y - rect.min_y) / rect.height()});
  }
  for (const SensitivitySample& s : samples) data.values.push_back(s.mu);
  SurfaceModel surface{build_pum(std::move(data), config), rect};
  return surface;
}

/// Interpolated mu at (e, alpha); status reports out-of-hull points.
inline std::pair<double, EvalStatus> eval_surface(const SurfaceModel& surface, double e_val,
                                                  double alpha_val) {
  const Point2 p = surface.normalized(e_val, alpha_val);
  std::vector<std::pair<int, double>> w;
  const EvalStatus status = detail::weights_impl(p, surface.model, w);
  if (status != EvalStatus::ok)
    return {std::numeric_limits<double>::quiet_NaN(), status};
  double acc = 0.0;
  for (const auto& [j, wj] : w)
    acc += wj * eval_local(surface.model.locals[static_cast<std::size_t>(j)],
                           surface.model.data.sites, p);
  return {acc, EvalStatus::ok};
}

struct HoldoutReport {
  double rms = 0.0;             ///< RMS error over evaluated holdout points
  double mu_span = 0.0;         ///< scan range the RMS is judged against
  std::size_t train_count = 0;
  std::size_t test_count = 0;
  std::size_t evaluated = 0;    ///< holdout points inside the training hull
};

/// Leave-fraction-out validation of the surface reconstruction: a seeded
/// shuffle splits the samples, the model is rebuilt on the training part and
/// scored on the held-out bisected values.
inline HoldoutReport holdout_rms(std::span<const SensitivitySample> samples, double mu_lo,
                                 double mu_hi, double fraction, std::uint64_t seed,
                                 const PumConfig& config = {}) {
  if (!(fraction > 0.0 && fraction < 1.0))
    raise(errc::invalid_argument, "holdout fraction must lie in (0, 1)");
  const std::size_t n = samples.size();
  const auto n_test = static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n)));
  if (n_test == 0 || n - n_test < 16)
    raise(errc::too_few_points, "not enough samples for a holdout split");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i-- > 1;) {
    const std::size_t j = static_cast<std::size_t>(rng() % (i + 1));
    std::swap(order[i], order[j]);
  }

  std::vector<SensitivitySample> train;
  train.reserve(n - n_test);
  for (std::size_t i = n_test; i < n; ++i) train.push_back(samples[order[i]]);
  const SurfaceModel surface = build_surface_model(train, config);

  HoldoutReport report;
  report.mu_span = mu_hi - mu_lo;
  report.train_count = n - n_test;
  report.test_count = n_test;
  double sq_sum = 0.0;
  for (std::size_t i = 0; i < n_test; ++i) {
    const SensitivitySample& s = samples[order[i]];
    const auto [value, status] = eval_surface(surface, s.e, s.alpha);
    if (status != EvalStatus::ok) continue;  // boundary points can fall outside the training hull
    const double err = value - s.mu;
    sq_sum += err * err;
    ++report.evaluated;
  }
  if (report.evaluated == 0)
    raise(errc::uncovered_point, "no holdout point lies inside the training hull");
  report.rms = std::sqrt(sq_sum / static_cast<double>(report.evaluated));
  return report;
}

// --- parameter file ----------------------------------------------------------

/// Scan section of a parameter file: the (e, alpha) grid, the mu bracket and
/// the classification settings used for surface scans.
struct ScanSpec {
  double mu_min = 0.0, mu_max = 0.0;
  double e_min = 0.0, e_max = 0.0;
  int e_count = 0;
  double alpha_min = 0.0, alpha_max = 0.0;
  int alpha_count = 0;
  double dt = 1.0;
  double horizon = 1e6;
  int surface_grid = 40;
  double holdout_fraction = 0.2;

  std::vector<std::pair<double, double>> grid() const {
    std::vector<std::pair<double, double>> pts;
    pts.reserve(static_cast<std::size_t>(e_count) * static_cast<std::size_t>(alpha_count));
    for (int i = 0; i < e_count; ++i) {
      const double e_val =
          e_count == 1 ? e_min
                       : e_min + (e_max - e_min) * static_cast<double>(i) /
                                     static_cast<double>(e_count - 1);
      for (int j = 0; j < alpha_count; ++j) {
        const double a_val =
            alpha_count == 1 ? alpha_min
                             : alpha_min + (alpha_max - alpha_min) * static_cast<double>(j) /
                                               static_cast<double>(alpha_count - 1);
        pts.emplace_back(e_val, a_val);
      }
    }
    return pts;
  }
};

struct SimulationSetup {
  EcologyParams params;
  EcoState initial_state;
  double dt = 0.5;
  double horizon = 36500.0;
  std::optional<ScanSpec> scan;
};

/// Parses the parameter file: the 13 model parameters, initial state, dt and
/// horizon, plus an optional scan section. Any missing parameter is a hard
/// error naming the field.
inline SimulationSetup load_simulation_setup(const std::string& path) {
  std::ifstream in(path);
  if (!in) raise(errc::io_error, "cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    raise(errc::io_error, std::string("malformed JSON in ") + path + ": " + e.what());
  }

  const char* required[] = {"mu", "r1", "r2", "K1", "K2", "c", "g",
                            "e",  "f",  "a",  "b",  "alpha", "beta"};
  std::string missing;
  for (const char* name : required) {
    if (!j.contains(name) || !j[name].is_number())
      missing += (missing.empty() ? "" : ", ") + std::string(name);
  }
  if (!j.contains("initial_state")) missing += (missing.empty() ? "" : ", ") + std::string("initial_state");
  if (!missing.empty())
    raise(errc::invalid_argument, "parameter file is missing: " + missing);

  try {
    SimulationSetup setup;
    EcologyParams& p = setup.params;
    p.mu = j["mu"].get<double>();
    p.r1 = j["r1"].get<double>();
    p.r2 = j["r2"].get<double>();
    p.K1 = j["K1"].get<double>();
    p.K2 = j["K2"].get<double>();
    p.c = j["c"].get<double>();
    p.g = j["g"].get<double>();
    p.e = j["e"].get<double>();
    p.f = j["f"].get<double>();
    p.a = j["a"].get<double>();
    p.b = j["b"].get<double>();
    p.alpha = j["alpha"].get<double>();
    p.beta = j["beta"].get<double>();
    p.validate();
    const auto& s = j.at("initial_state");
    setup.initial_state = EcoState{s.at("H").get<double>(), s.at("G").get<double>(),
                                   s.at("T").get<double>()};
    if (setup.initial_state.H < 0.0 || setup.initial_state.G < 0.0 || setup.initial_state.T < 0.0)
      raise(errc::invalid_argument, "initial populations must be nonnegative");
    setup.dt = j.value("dt", 0.5);
    setup.horizon = j.value("horizon_days", 36500.0);
    if (!(setup.dt > 0.0) || !(setup.horizon > 0.0))
      raise(errc::invalid_argument, "dt and horizon_days must be positive");
    if (j.contains("scan")) {
      const auto& sc = j["scan"];
      ScanSpec spec;
      spec.mu_min = sc.at("mu_min").get<double>();
      spec.mu_max = sc.at("mu_max").get<double>();
      spec.e_min = sc.at("e_min").get<double>();
      spec.e_max = sc.at("e_max").get<double>();
      spec.e_count = sc.at("e_count").get<int>();
      spec.alpha_min = sc.at("alpha_min").get<double>();
      spec.alpha_max = sc.at("alpha_max").get<double>();
      spec.alpha_count = sc.at("alpha_count").get<int>();
      spec.dt = sc.value("dt", 1.0);
      spec.horizon = sc.value("horizon_days", 1e6);
      spec.surface_grid = sc.value("surface_grid", 40);
      spec.holdout_fraction = sc.value("holdout_fraction", 0.2);
      if (spec.e_count < 1 || spec.alpha_count < 1)
        raise(errc::invalid_argument, "scan grid counts must be positive");
      setup.scan = spec;
    }
    return setup;
  } catch (const nlohmann::json::exception& e) {
    raise(errc::io_error, std::string("malformed parameter file ") + path + ": " + e.what());
  }
}

}  // namespace pumi
