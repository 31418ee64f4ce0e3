// Copyright 2026 The infogeo-sensor Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Iterated geodesic replanning for mobile bearings sensors.

#ifndef INFOGEO_PLANNER_HPP
#define INFOGEO_PLANNER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "infogeo/errors.hpp"
#include "infogeo/prior.hpp"
#include "infogeo/sensor_manifold.hpp"
#include "infogeo/sensor_model.hpp"
#include "infogeo/spd.hpp"

namespace infogeo {

/// How the velocity of each replan segment is chosen.
enum class DirectionRule {
  /// Q⁻¹ ∇J with J(sigma) = ∫ log det F dF: steepest ascent of expected
  /// log information measured in the induced metric.
  natural_gradient,
  /// Dominant eigenvector of Q.
  dominant_eigenvector,
};

inline const char* to_string(DirectionRule r) {
  return r == DirectionRule::natural_gradient ? "natural-gradient"
                                              : "dominant-eigenvector";
}

struct PlanSettings {
  double speed = 0.05;
  double replan_period = 1.0;
  int iterations = 5;
  double ode_step = 0.01;
  double guard_radius = 0.05;
  DirectionRule rule = DirectionRule::natural_gradient;
  /// Relative G-speed drift tolerated inside one segment.
  double max_speed_drift = 1e-3;
  friend bool operator==(const PlanSettings&, const PlanSettings&) = default;
};

struct OutputSettings {
  std::string csv;
  std::string svg;
  std::uint64_t seed = 0;
  friend bool operator==(const OutputSettings&, const OutputSettings&) = default;
};

struct Scenario {
  ParameterPoint target;
  Prior prior;
  VonMisesModel model;
  SensorConfiguration initial;
  PlanSettings plan;
  FisherOptions fisher;
  OutputSettings output;

  void validate() const {
    if (!std::isfinite(target.x) || !std::isfinite(target.y))
      throw ValidationError("target must be finite");
    if (!(plan.speed > 0.0) || !std::isfinite(plan.speed))
      throw ValidationError("speed must be positive");
    if (!(plan.ode_step > 0.0) || !std::isfinite(plan.ode_step))
      throw ValidationError("ode_step must be positive");
    if (!(plan.replan_period >= plan.ode_step) || !std::isfinite(plan.replan_period))
      throw ValidationError("replan_period must be >= ode_step");
    if (plan.iterations < 1) throw ValidationError("iterations must be >= 1");
    if (!(plan.guard_radius >= 0.0) || !std::isfinite(plan.guard_radius))
      throw ValidationError("guard_radius must be non-negative");
    if (!(plan.max_speed_drift >= 0.0))
      throw ValidationError("max_speed_drift must be non-negative");
    if (!(fisher.ridge_epsilon > 0.0) || !std::isfinite(fisher.ridge_epsilon))
      throw ValidationError("ridge_epsilon must be positive");
  }

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// ---------------------------------------------------------------------------
// Diagnostics

inline double det_fisher_at(const SensorConfiguration& sigma, ParameterPoint theta,
                            const VonMisesModel& model) {
  return fisher_information(sigma, theta, model).matrix().determinant();
}

/// |φ₁ − φ₂| wrapped to [0, π]; zero for a single platform.
inline double bearing_separation(const SensorConfiguration& sigma, ParameterPoint theta) {
  if (sigma.platform_count() < 2) return 0.0;
  const double d = bearing(sigma.platform(0), theta) - bearing(sigma.platform(1), theta);
  return std::abs(std::remainder(d, 2.0 * std::numbers::pi));
}

/// ∫ log det F dF.
inline double expected_log_det(const SensorConfiguration& sigma,
                               const VonMisesModel& model, const QuadratureGrid& grid,
                               const FisherOptions& opts = {}) {
  return integrate_scalar(
      [&](const ParameterPoint& theta) {
        return SpdMatrix(fisher_metric(sigma, theta, model, opts)).log_det();
      },
      grid);
}

/// ∂_i ∫ log det F dF = ∫ Tr(F⁻¹ ∂_i F) dF.
inline Vector information_gradient(const SensorConfiguration& sigma,
                                   const VonMisesModel& model,
                                   const QuadratureGrid& grid,
                                   const FisherOptions& opts = {}) {
  const int n = sigma.dim();
  const auto per_node = detail::evaluate_nodes(
      [&](const ParameterPoint& theta) {
        const SpdMatrix f(fisher_metric(sigma, theta, model, opts));
        Vector g(n);
        for (int i = 0; i < n; ++i)
          g(i) = f.solve(fisher_metric_derivative(sigma, theta, model, i, opts).matrix())
                     .trace();
        return g;
      },
      grid);
  Vector acc = Vector::Zero(n);
  for (std::size_t a = 0; a < per_node.size(); ++a) {
    if (!per_node[a].allFinite())
      throw NonFiniteFieldError("non-finite gradient at " + detail::node_label(grid, a), a);
    acc += grid.weights[a] * per_node[a];
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Direction rules

/// Largest Euclidean speed over platforms of a chart velocity.
inline double max_platform_speed(const Vector& u) {
  double m = 0.0;
  for (Eigen::Index j = 0; j + 1 < u.size(); j += 2)
    m = std::max(m, std::hypot(u(j), u(j + 1)));
  return m;
}

/// Rescales u so its fastest platform moves at `speed`.
inline Vector scale_to_speed(const Vector& u, double speed) {
  const double m = max_platform_speed(u);
  if (!(m > 0.0) || !std::isfinite(m))
    throw DegenerateGeometryError("direction has no platform motion");
  return u * (speed / m);
}

/// Rate of change of the summed platform distances to `point` along u.
inline double range_rate(const SensorConfiguration& sigma, const Vector& u,
                         ParameterPoint point) {
  double rate = 0.0;
  for (int j = 0; j < sigma.platform_count(); ++j) {
    const Point2 p = sigma.platform(j);
    const double r = std::hypot(p.x - point.x, p.y - point.y);
    if (r > 0.0) rate += ((p.x - point.x) * u(2 * j) + (p.y - point.y) * u(2 * j + 1)) / r;
  }
  return rate;
}

namespace detail {

inline constexpr double kEigenTieTolerance = 1e-10;
inline constexpr double kSignTieTolerance = 1e-12;

/// Sign choice: continuity with `previous` if given, otherwise closing
/// range on `point`, otherwise first nonzero component positive.
inline Vector orient(Vector v, const SensorConfiguration& sigma, ParameterPoint point,
                     const Vector* previous) {
  const double scale = v.norm();
  if (previous != nullptr && previous->size() == v.size()) {
    const double d = v.dot(*previous);
    if (std::abs(d) > kSignTieTolerance * scale * previous->norm())
      return d > 0.0 ? v : Vector(-v);
  }
  const double rate = range_rate(sigma, v, point);
  if (std::abs(rate) > kSignTieTolerance * scale) return rate < 0.0 ? v : Vector(-v);
  for (Eigen::Index k = 0; k < v.size(); ++k)
    if (std::abs(v(k)) > kSignTieTolerance * scale) return v(k) > 0.0 ? v : Vector(-v);
  return v;
}

}  // namespace detail

/// Dominant eigenvector of Q with platform speed bound `speed`.  A repeated
/// top eigenvalue selects the projection of the first coordinate axis onto
/// the top eigenspace (the next axis if that projection vanishes).
inline Vector initial_direction(const SensorConfiguration& sigma, const InducedMetric& q,
                                double speed, ParameterPoint prior_mean,
                                const Vector* previous = nullptr) {
  if (!(speed > 0.0)) throw DomainError("initial_direction: speed must be positive");
  const SymEigen eig = sym_eigen(q.sym());
  const int n = q.dim();
  const double top = eig.values(0);
  int k = 1;
  while (k < n && top - eig.values(k) <= detail::kEigenTieTolerance * std::abs(top)) ++k;
  Vector v = eig.vectors.col(0);
  if (k > 1) {
    const Matrix basis = eig.vectors.leftCols(k);
    for (int axis = 0; axis < n; ++axis) {
      const Vector p = basis * basis.row(axis).transpose();
      if (p.norm() > 1e-6) {
        v = p / p.norm();
        break;
      }
    }
  }
  return scale_to_speed(detail::orient(v, sigma, prior_mean, previous), speed);
}

/// Q⁻¹ ∇J scaled to the speed bound.
inline Vector natural_gradient_direction(const SensorConfiguration& sigma,
                                         const InducedMetric& q, double speed,
                                         const VonMisesModel& model,
                                         const QuadratureGrid& grid,
                                         const FisherOptions& opts = {}) {
  if (!(speed > 0.0))
    throw DomainError("natural_gradient_direction: speed must be positive");
  const Vector g = information_gradient(sigma, model, grid, opts);
  const Vector u = q.spd().solve(g);
  if (!(max_platform_speed(u) > 0.0))
    throw DegenerateGeometryError("information gradient vanishes");
  return scale_to_speed(u, speed);
}

// ---------------------------------------------------------------------------
// Replanning loop

struct PlanRecord {
  double time = 0.0;
  Vector sigma;
  /// Chosen velocity for the segment starting here.  The closing record
  /// carries the last chosen direction.
  Vector direction;
  Vector q_eigenvalues;
  double det_f_mean = 0.0;
  double bearing_sep = 0.0;
};

enum class PlanStatus { completed, guard_stop, geometry_error };

inline const char* to_string(PlanStatus s) {
  switch (s) {
    case PlanStatus::completed: return "completed";
    case PlanStatus::guard_stop: return "guard_stop";
    case PlanStatus::geometry_error: return "geometry_error";
  }
  return "unknown";
}

struct PathSample {
  double t;
  Vector sigma;
};

struct PlanTrace {
  /// One record per iteration start, then a closing record.
  std::vector<PlanRecord> records;
  /// Every integrator sample, for plotting.
  std::vector<PathSample> path;
  PlanStatus status = PlanStatus::completed;
  std::string message;
  /// Segments started.
  int iterations = 0;
};

/// Called after each segment; returns the prior for the next one.  The
/// default leaves the prior unchanged.
using PriorHook = std::function<Prior(const Prior&, const PlanRecord&)>;

namespace detail {

inline PlanRecord diagnose(double t, const Vector& s, const Vector& direction,
                           const SymMatrix& q, const Scenario& sc) {
  const SensorConfiguration cfg = SensorConfiguration::from_coordinates(s);
  PlanRecord r;
  r.time = t;
  r.sigma = s;
  r.direction = direction;
  r.q_eigenvalues = sym_eigen(q).values;
  r.det_f_mean = det_fisher_at(cfg, sc.prior.mean(), sc.model);
  r.bearing_sep = bearing_separation(cfg, sc.prior.mean());
  return r;
}

inline bool inside_guard(const Vector& s, ParameterPoint c, double radius) {
  for (Eigen::Index j = 0; j + 1 < s.size(); j += 2)
    if (std::hypot(s(j) - c.x, s(j + 1) - c.y) < radius) return true;
  return false;
}

}  // namespace detail

inline Vector choose_direction(const Scenario& sc, const SensorConfiguration& cfg,
                               const InducedMetric& q, const QuadratureGrid& grid,
                               const Vector* previous) {
  if (sc.plan.rule == DirectionRule::dominant_eigenvector)
    return initial_direction(cfg, q, sc.plan.speed, sc.prior.mean(), previous);
  return natural_gradient_direction(cfg, q, sc.plan.speed, sc.model, grid, sc.fisher);
}

inline PlanTrace replan_loop(const Scenario& sc, const PriorHook& update_prior = {}) {
  sc.validate();
  PlanTrace trace;
  Prior prior = sc.prior;
  QuadratureGrid grid = build_grid(prior);
  Vector s = sc.initial.coordinates();
  Vector previous;
  double t = 0.0;
  trace.path.push_back({t, s});

  // Closing record at the current state, if it adds a new time stamp.
  auto close = [&](PlanStatus status, std::string message) {
    trace.status = status;
    trace.message = std::move(message);
    if (!trace.records.empty() && !(t > trace.records.back().time)) return;
    try {
      const SymMatrix q =
          induced_metric_matrix(SensorConfiguration::from_coordinates(s), sc.model, grid,
                                sc.fisher);
      trace.records.push_back(detail::diagnose(t, s, previous, q, sc));
    } catch (const Error&) {
      if (trace.status == PlanStatus::completed) throw;
    }
  };

  if (detail::inside_guard(s, prior.mean(), sc.plan.guard_radius))
    throw ValidationError("initial platform inside guard radius");

  for (int it = 0; it < sc.plan.iterations; ++it) {
    SensorMetricSource source(sc.model, grid, sc.fisher);
    PlanRecord rec;
    try {
      const SensorConfiguration cfg = SensorConfiguration::from_coordinates(s);
      const InducedMetric q(source.metric(s));
      check_metric_jacobian(source, s);
      const Vector dir =
          choose_direction(sc, cfg, q, grid, previous.size() ? &previous : nullptr);
      rec = detail::diagnose(t, s, dir, q.sym(), sc);
    } catch (const Error& e) {
      trace.status = PlanStatus::geometry_error;
      trace.message = e.what();
      return trace;
    }
    trace.records.push_back(rec);
    trace.iterations = it + 1;
    previous = rec.direction;

    GeodesicOptions gopts;
    gopts.max_speed_drift = sc.plan.max_speed_drift;
    const ParameterPoint centre = prior.mean();
    const double radius = sc.plan.guard_radius;
    gopts.stop = [centre, radius](const GeodesicState& st) {
      return detail::inside_guard(st.sigma, centre, radius);
    };
    const GeodesicTrajectory seg =
        integrate_geodesic(source, {s, rec.direction}, sc.plan.replan_period,
                           sc.plan.ode_step, gopts);
    for (std::size_t k = 1; k < seg.states.size(); ++k)
      trace.path.push_back({t + seg.times[k], seg.states[k].sigma});
    s = seg.states.back().sigma;
    t += seg.times.back();

    if (seg.status == TrajectoryStatus::stopped) {
      close(PlanStatus::guard_stop, "platform reached guard radius");
      return trace;
    }
    if (seg.status == TrajectoryStatus::failed) {
      close(PlanStatus::geometry_error, seg.message);
      return trace;
    }
    if (update_prior) {
      prior = update_prior(prior, rec);
      grid = build_grid(prior);
    }
  }
  close(PlanStatus::completed, {});
  return trace;
}

/// Straight-line continuation of every platform along the last chosen
/// direction, sampled at `samples` + 1 equally spaced times in [0, duration].
inline std::vector<Vector> extrapolate(const PlanTrace& trace, double duration,
                                       int samples = 1) {
  if (trace.records.empty()) throw DomainError("extrapolate: empty trace");
  if (samples < 1) throw DomainError("extrapolate: samples must be >= 1");
  const PlanRecord& last = trace.records.back();
  std::vector<Vector> out;
  out.reserve(samples + 1);
  for (int k = 0; k <= samples; ++k) {
    const double tau = duration * static_cast<double>(k) / samples;
    out.push_back(last.direction.size() ? Vector(last.sigma + tau * last.direction)
                                        : last.sigma);
  }
  return out;
}

}  // namespace infogeo

#endif  // INFOGEO_PLANNER_HPP
