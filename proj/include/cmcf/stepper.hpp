// Semi-implicit backward Euler time stepping for the flowing-finite-volume
// curve evolution
//
//   (X_i^{n+1} - X_i^n) / tau = D_i(X^{n+1}) + F^n N_i^n,
//
// where D_i is the implicit second difference, N_i the discrete normal and
// F the forcing of the flow model. Segment lengths, the normal and F are
// frozen at time n, so each step is two cyclic tridiagonal solves (one per
// coordinate) with a shared factorization.
#pragma once

#include "cmcf/curve.hpp"
#include "cmcf/cyclic_tridiagonal.hpp"
#include "cmcf/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace cmcf {

/// Which second difference drives the implicit part of the step.
enum class StepScheme {
  /// 2 / (d_i + d_{i+1}) * ((X_{i+1} - X_i) / d_{i+1} - (X_i - X_{i-1}) / d_i):
  /// the curvature vector itself, no tangential motion in the continuum limit.
  curvature_flux,
  /// 4 (X_{i+1} - 2 X_i + X_{i-1}) / (d_i + d_{i+1})^2: equal weights on both
  /// neighbours, which adds a tangential drift toward equal segment lengths.
  redistributing,
};

template <typename Scalar>
struct SolverConfig {
  Scalar tau = Scalar(1e-4);
  Scalar t_final = Scalar(0);
  FlowModel<Scalar> model{};
  long snapshot_every = 100;
  Scalar epsilon_geom = Scalar(kDefaultEpsilonGeom);
  StepScheme scheme = StepScheme::redistributing;

  void validate() const {
    if (!(tau > 0) || !std::isfinite(double(tau))) throw std::invalid_argument("tau > 0");
    if (!(t_final >= 0) || !std::isfinite(double(t_final))) throw std::invalid_argument("t_final >= 0");
    if (snapshot_every < 1) throw std::invalid_argument("snapshot_every >= 1");
    if (!(epsilon_geom > 0)) throw std::invalid_argument("epsilon_geom > 0");
  }
};

/// Off-diagonal weights of the implicit operator: row i couples to X_{i-1}
/// with weight lower(i) and to X_{i+1} with weight upper(i).
template <typename Scalar>
std::pair<Vector<Scalar>, Vector<Scalar>> diffusion_weights(const Vector<Scalar>& d,
                                                            StepScheme scheme) {
  const Eigen::Index m = d.size();
  Vector<Scalar> lower(m), upper(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const Scalar dn = d(detail::next(i, m));
    const Scalar sum = d(i) + dn;
    if (scheme == StepScheme::curvature_flux) {
      lower(i) = 2 / (sum * d(i));
      upper(i) = 2 / (sum * dn);
    } else {
      lower(i) = upper(i) = 4 / (sum * sum);
    }
  }
  return {std::move(lower), std::move(upper)};
}

/// Explicit right-hand side of the semi-discrete system at the given state.
template <typename Scalar>
Points<Scalar> velocity(const CurveState<Scalar>& curve, const SolverConfig<Scalar>& config) {
  const GeometryCache<Scalar> g = compute_geometry(curve, config.epsilon_geom);
  const Scalar force = forcing_value(config.model, g.kappa, g.d);
  const auto [lower, upper] = diffusion_weights(g.d, config.scheme);
  const auto& x = curve.nodes();
  const Eigen::Index m = x.rows();
  Points<Scalar> v = force * discrete_normals(curve, g.d);
  for (Eigen::Index i = 0; i < m; ++i) {
    v.row(i) += lower(i) * (x.row(detail::prev(i, m)) - x.row(i)) +
                upper(i) * (x.row(detail::next(i, m)) - x.row(i));
  }
  return v;
}

/// Total length without the degeneracy check, for extinction detection.
template <typename Scalar>
Scalar perimeter(const CurveState<Scalar>& curve) {
  const auto& x = curve.nodes();
  const Eigen::Index m = x.rows();
  Scalar total = 0;
  for (Eigen::Index i = 0; i < m; ++i) total += (x.row(i) - x.row(detail::prev(i, m))).norm();
  return total;
}

/// One semi-implicit backward Euler step. Throws DegenerateSegmentError or
/// SolverFailure; the input curve is left untouched either way.
template <typename Scalar>
CurveState<Scalar> step(const CurveState<Scalar>& curve, const SolverConfig<Scalar>& config) {
  const GeometryCache<Scalar> g = compute_geometry(curve, config.epsilon_geom);
  const Scalar force = forcing_value(config.model, g.kappa, g.d);
  auto [lower, upper] = diffusion_weights(g.d, config.scheme);

  const Scalar tau = config.tau;
  Vector<Scalar> diag = Vector<Scalar>::Ones(g.d.size()) + tau * (lower + upper);
  const CyclicTridiagonal<Scalar> system(-tau * lower, std::move(diag), -tau * upper);

  const Points<Scalar> rhs = curve.nodes() + (tau * force) * discrete_normals(curve, g.d);
  Points<Scalar> next(rhs.rows(), 2);
  next.col(0) = system.solve(rhs.col(0));
  next.col(1) = system.solve(rhs.col(1));
  std::optional<CurveState<Scalar>> result;
  try {
    result.emplace(std::move(next));
  } catch (const std::invalid_argument& e) {
    throw SolverFailure(std::string("step produced an invalid curve: ") + e.what());
  }
  if (!std::isfinite(double(perimeter(*result))) || !std::isfinite(double(enclosed_area(*result)))) {
    throw SolverFailure("step produced a curve whose length or area overflows");
  }
  return *std::move(result);
}

template <typename Scalar>
struct StepDiagnostics {
  Scalar t;
  Scalar length;
  Scalar area;
  Scalar forcing;
  Scalar isoperimetric_ratio;  ///< NaN when the area is not positive
  Scalar uniformity_ratio;
  Scalar min_segment;
};

template <typename Scalar>
struct Snapshot {
  Scalar t;
  CurveState<Scalar> curve;
};

enum class RunStatus {
  completed,  ///< reached t_final
  extinct,    ///< total length fell below 100 epsilon_geom, or the next step
              ///< would contract the curve below floating-point resolution
  aborted,    ///< degenerate segment or linear solver failure
};

template <typename Scalar>
struct Trajectory {
  std::vector<Snapshot<Scalar>> snapshots;
  std::vector<StepDiagnostics<Scalar>> diagnostics;
  RunStatus status = RunStatus::completed;
  std::optional<Scalar> extinction_time;
  long steps = 0;
  std::string message;  ///< abort reason, empty otherwise

  const CurveState<Scalar>& final_curve() const { return snapshots.back().curve; }
};

template <typename Scalar>
StepDiagnostics<Scalar> measure(Scalar t, const CurveState<Scalar>& curve,
                                const SolverConfig<Scalar>& config) {
  const Vector<Scalar> d = segment_lengths(curve, Scalar(0));
  const Scalar length = curve_length(d);
  const Scalar area = enclosed_area(curve);
  Scalar forcing = config.model.law == FlowModel<Scalar>::Law::constant_force ? config.model.force
                                                                               : Scalar(0);
  if (config.model.law == FlowModel<Scalar>::Law::area_preserving && d.minCoeff() > 0) {
    forcing = nonlocal_force(discrete_curvature(curve, d), d);
  }
  const Scalar iso = area > 0 ? length * length / (4 * std::numbers::pi_v<Scalar> * area)
                              : std::numeric_limits<Scalar>::quiet_NaN();
  return {t, length, area, forcing, iso, d.maxCoeff() / d.minCoeff(), d.minCoeff()};
}

/// True when tau * (diffusion weight) swamps the identity in every row, so
/// the implicit operator is numerically singular and the exact step would
/// contract the curve onto its centroid below floating-point resolution.
template <typename Scalar>
bool collapses_in_one_step(const CurveState<Scalar>& curve, const SolverConfig<Scalar>& config) {
  const Vector<Scalar> d = segment_lengths(curve, Scalar(0));
  if (!(d.minCoeff() > 0)) return false;
  const auto [lower, upper] = diffusion_weights(d, config.scheme);
  const Scalar floor = 1 / std::numeric_limits<Scalar>::epsilon();
  return ((config.tau * (lower + upper)).array() >= floor).all();
}

/// Number of fixed-size steps needed to reach t_final.
template <typename Scalar>
long step_count(const SolverConfig<Scalar>& config) {
  const double ratio = double(config.t_final) / double(config.tau);
  const double nearest = std::round(ratio);
  if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, nearest)) return static_cast<long>(nearest);
  return static_cast<long>(std::ceil(ratio));
}

/// Runs the time loop from t = 0. Snapshots and diagnostics are recorded at
/// t = 0, every snapshot_every steps and at the last step. Failures do not
/// throw: the trajectory ends at the last valid state with status aborted.
template <typename Scalar>
Trajectory<Scalar> evolve(const CurveState<Scalar>& initial, const SolverConfig<Scalar>& config) {
  config.validate();
  Trajectory<Scalar> traj;
  auto record = [&](Scalar t, const CurveState<Scalar>& c) {
    traj.snapshots.push_back({t, c});
    traj.diagnostics.push_back(measure(t, c, config));
  };
  record(Scalar(0), initial);

  const long total_steps = step_count(config);
  const Scalar extinction_length = 100 * config.epsilon_geom;
  CurveState<Scalar> current = initial;
  for (long n = 1; n <= total_steps; ++n) {
    if (collapses_in_one_step(current, config)) {
      traj.status = RunStatus::extinct;
      traj.extinction_time = Scalar(n) * config.tau;
      if (traj.snapshots.back().t != Scalar(n - 1) * config.tau) {
        record(Scalar(n - 1) * config.tau, current);
      }
      return traj;
    }
    try {
      current = step(current, config);
    } catch (const std::exception& e) {
      traj.status = RunStatus::aborted;
      traj.message = e.what();
      if (traj.snapshots.back().t != Scalar(n - 1) * config.tau) {
        record(Scalar(n - 1) * config.tau, current);
      }
      return traj;
    }
    traj.steps = n;
    const Scalar t = Scalar(n) * config.tau;
    const Scalar total = perimeter(current);
    if (total < extinction_length) {
      traj.status = RunStatus::extinct;
      traj.extinction_time = t;
      record(t, current);
      return traj;
    }
    if (n % config.snapshot_every == 0 || n == total_steps) record(t, current);
  }
  return traj;
}

}  // namespace cmcf
