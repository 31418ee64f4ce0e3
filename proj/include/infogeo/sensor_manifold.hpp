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

// Riemannian geometry induced on the sensor manifold.
//
// The metric on sensor coordinates is the pull-back of the metric-space
// inner product through sigma ↦ F(sigma):
//
//   Q_ij(sigma) = ∫ Tr(F⁻¹ ∂_i F F⁻¹ ∂_j F) dF(theta).
//
// ∂Q is taken by central differences of Q; geodesics of Q are integrated
// with fixed-step RK4.  Anything implementing MetricSource can stand in for
// the sensor-derived metric, which is how the closed-form toy metrics are
// tested.

#ifndef INFOGEO_SENSOR_MANIFOLD_HPP
#define INFOGEO_SENSOR_MANIFOLD_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "infogeo/errors.hpp"
#include "infogeo/ode.hpp"
#include "infogeo/parallel.hpp"
#include "infogeo/prior.hpp"
#include "infogeo/sensor_model.hpp"
#include "infogeo/spd.hpp"

namespace infogeo {

/// Integrand of Q at one parameter point: Tr(F⁻¹ ∂_i F F⁻¹ ∂_j F).
inline SymMatrix induced_metric_integrand(const SensorConfiguration& sigma,
                                          ParameterPoint theta,
                                          const VonMisesModel& model,
                                          const FisherOptions& opts = {}) {
  const int n = sigma.dim();
  const SpdMatrix f(fisher_metric(sigma, theta, model, opts));
  std::vector<Matrix> p;
  p.reserve(n);
  for (int i = 0; i < n; ++i)
    p.push_back(f.solve(fisher_metric_derivative(sigma, theta, model, i, opts).matrix()));
  Matrix q(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) q(i, j) = q(j, i) = trace_product(p[i], p[j]);
  return SymMatrix(q);
}

/// Q integrated over the grid without checking its definiteness.
inline SymMatrix induced_metric_matrix(const SensorConfiguration& sigma,
                                       const VonMisesModel& model,
                                       const QuadratureGrid& grid,
                                       const FisherOptions& opts = {}) {
  return integrate_matrix(
      [&](const ParameterPoint& theta) {
        return induced_metric_integrand(sigma, theta, model, opts);
      },
      grid);
}

/// The induced metric Q at a sensor configuration; construction fails with
/// DegenerateGeometryError when Q is singular.
class InducedMetric {
 public:
  explicit InducedMetric(const SymMatrix& q) : q_(certify(q)) {}

  int dim() const noexcept { return q_.dim(); }
  const SpdMatrix& spd() const noexcept { return q_; }
  const SymMatrix& sym() const noexcept { return q_.sym(); }
  double speed(const Vector& u) const { return u.dot(q_.matrix() * u); }

 private:
  static SpdMatrix certify(const SymMatrix& q) {
    try {
      return SpdMatrix(q);
    } catch (const PositiveDefinitenessError& e) {
      throw DegenerateGeometryError(std::string("induced metric is singular: ") +
                                    e.what());
    }
  }
  SpdMatrix q_;
};

inline InducedMetric induced_metric(const SensorConfiguration& sigma,
                                    const VonMisesModel& model,
                                    const QuadratureGrid& grid,
                                    const FisherOptions& opts = {}) {
  return InducedMetric(induced_metric_matrix(sigma, model, grid, opts));
}

// ---------------------------------------------------------------------------
// Metric sources

/// A Riemannian metric on a coordinate chart: sigma ↦ Q(sigma).
class MetricSource {
 public:
  virtual ~MetricSource() = default;
  virtual SymMatrix metric(const Vector& sigma) const = 0;
};

/// Q induced by the bearings sensor model over a fixed prior grid.
class SensorMetricSource final : public MetricSource {
 public:
  SensorMetricSource(VonMisesModel model, QuadratureGrid grid,
                     FisherOptions opts = {})
      : model_(model), grid_(std::move(grid)), opts_(opts) {}

  SymMatrix metric(const Vector& sigma) const override {
    return induced_metric_matrix(SensorConfiguration::from_coordinates(sigma), model_, grid_, opts_);
  }

  const QuadratureGrid& grid() const noexcept { return grid_; }
  const VonMisesModel& model() const noexcept { return model_; }

 private:
  VonMisesModel model_;
  QuadratureGrid grid_;
  FisherOptions opts_;
};

/// Flat metric, independent of position.
class ConstantMetricSource final : public MetricSource {
 public:
  explicit ConstantMetricSource(SymMatrix q) : q_(std::move(q)) {}
  SymMatrix metric(const Vector&) const override { return q_; }

 private:
  SymMatrix q_;
};

/// Conformally flat metric e^{2 sigma_0} I.
class ConformalMetricSource final : public MetricSource {
 public:
  SymMatrix metric(const Vector& sigma) const override {
    return SymMatrix::identity(static_cast<int>(sigma.size())) *
           std::exp(2.0 * sigma(0));
  }
};

/// Default central-difference step along chart axis k.
inline double jacobian_step(const Vector& sigma, int k) {
  return 1e-4 * (1.0 + std::abs(sigma(k)));
}

/// ∂_k Q by central difference with step h (0 selects jacobian_step).
inline SymMatrix metric_jacobian(const MetricSource& source, const Vector& sigma,
                                 int k, double h = 0.0) {
  if (k < 0 || k >= sigma.size()) throw DomainError("metric_jacobian: bad axis");
  if (h == 0.0) h = jacobian_step(sigma, k);
  const auto q = parallel_map(2, [&](std::size_t side) {
    Vector s = sigma;
    s(k) += side == 0 ? h : -h;
    return source.metric(s);
  });
  return (q[0] - q[1]) * (0.5 / h);
}

/// Largest relative gap between the step-h and step-h/2 estimates of ∂_k Q.
/// Small values mean the default step sits in the truncation-dominated
/// regime where Richardson's h² model holds.
inline double metric_jacobian_consistency(const MetricSource& source, const Vector& sigma) {
  double worst = 0.0;
  for (int k = 0; k < sigma.size(); ++k) {
    const double h = jacobian_step(sigma, k);
    const SymMatrix coarse = metric_jacobian(source, sigma, k, h);
    const SymMatrix fine = metric_jacobian(source, sigma, k, 0.5 * h);
    const double scale = std::max(fine.frobenius_norm(), 1e-12 * source.metric(sigma).frobenius_norm());
    if (scale > 0.0) worst = std::max(worst, (coarse - fine).frobenius_norm() / scale);
  }
  return worst;
}

inline constexpr double kJacobianConsistencyTolerance = 1e-2;

/// Throws DegenerateGeometryError when the finite-difference ∂Q is not
/// self-consistent at sigma.
inline void check_metric_jacobian(const MetricSource& source, const Vector& sigma,
                                  double tolerance = kJacobianConsistencyTolerance) {
  const double gap = metric_jacobian_consistency(source, sigma);
  if (!(gap <= tolerance))
    throw DegenerateGeometryError("finite-difference metric derivative inconsistent (h vs h/2 gap " +
                                  std::to_string(gap) + ")");
}

/// Q and every ∂_k Q at one point.
struct MetricDerivatives {
  SymMatrix q;
  std::vector<SymMatrix> dq;
};

inline MetricDerivatives metric_derivatives(const MetricSource& source,
                                            const Vector& sigma) {
  const int n = static_cast<int>(sigma.size());
  // Index 0 is Q itself, then (+h, -h) pairs per axis.
  auto values = parallel_map(2 * n + 1, [&](std::size_t idx) {
    if (idx == 0) return source.metric(sigma);
    const int k = static_cast<int>(idx - 1) / 2;
    Vector s = sigma;
    s(k) += (idx - 1) % 2 == 0 ? jacobian_step(sigma, k) : -jacobian_step(sigma, k);
    return source.metric(s);
  });
  MetricDerivatives out{values[0], {}};
  out.dq.reserve(n);
  for (int k = 0; k < n; ++k)
    out.dq.push_back((values[1 + 2 * k] - values[2 + 2 * k]) *
                     (0.5 / jacobian_step(sigma, k)));
  return out;
}

/// Christoffel symbols Γ^l_ij, stored with Γ^l_ij and Γ^l_ji bit-identical.
class ChristoffelTensor {
 public:
  explicit ChristoffelTensor(int n) : n_(n), data_(n * n * n, 0.0) {}

  int dim() const noexcept { return n_; }
  double operator()(int l, int i, int j) const { return data_[index(l, i, j)]; }
  void set_symmetric(int l, int i, int j, double v) {
    data_[index(l, i, j)] = v;
    data_[index(l, j, i)] = v;
  }

  /// Γ(u, u)^l = sum_ij Γ^l_ij u^i u^j.
  Vector contract(const Vector& u) const {
    Vector out = Vector::Zero(n_);
    for (int l = 0; l < n_; ++l) {
      double acc = 0.0;
      for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) acc += (*this)(l, i, j) * u(i) * u(j);
      out(l) = acc;
    }
    return out;
  }

  double max_abs_difference(const ChristoffelTensor& o) const {
    double m = 0.0;
    for (std::size_t i = 0; i < data_.size(); ++i)
      m = std::max(m, std::abs(data_[i] - o.data_[i]));
    return m;
  }

 private:
  std::size_t index(int l, int i, int j) const {
    return (static_cast<std::size_t>(l) * n_ + i) * n_ + j;
  }
  int n_;
  std::vector<double> data_;
};

namespace detail {

inline SymMatrix inverse_metric(const SymMatrix& q) {
  try {
    return SpdMatrix(q).inverse();
  } catch (const PositiveDefinitenessError& e) {
    throw DegenerateGeometryError(std::string("induced metric is singular: ") +
                                  e.what());
  }
}

}  // namespace detail

/// Levi-Civita form ½ Q^{lk} (∂_i Q_kj + ∂_j Q_ik − ∂_k Q_ij).
inline ChristoffelTensor christoffel(const MetricDerivatives& d) {
  const int n = d.q.dim();
  const SymMatrix qinv = detail::inverse_metric(d.q);
  ChristoffelTensor g(n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k)
          acc += qinv(l, k) * (d.dq[i](k, j) + d.dq[j](i, k) - d.dq[k](i, j));
        g.set_symmetric(l, i, j, 0.5 * acc);
      }
  return g;
}

/// Coefficients read off the coordinate Euler–Lagrange equation
///   ü^l = sum_ij (−sum_k Q^{lk} ∂_i Q_kj + ½ sum_k Q^{lk} ∂_k Q_ij) u^i u^j,
/// negated and symmetrized over (i, j).  Agrees with christoffel().
inline ChristoffelTensor christoffel_variational(const MetricDerivatives& d) {
  const int n = d.q.dim();
  const SymMatrix qinv = detail::inverse_metric(d.q);
  auto coeff = [&](int l, int i, int j) {
    double acc = 0.0;
    for (int k = 0; k < n; ++k)
      acc += qinv(l, k) * (-d.dq[i](k, j) + 0.5 * d.dq[k](i, j));
    return acc;
  };
  ChristoffelTensor g(n);
  for (int l = 0; l < n; ++l)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j)
        g.set_symmetric(l, i, j, -0.5 * (coeff(l, i, j) + coeff(l, j, i)));
  return g;
}

inline ChristoffelTensor christoffel(const MetricSource& source, const Vector& sigma) {
  return christoffel(metric_derivatives(source, sigma));
}

inline ChristoffelTensor christoffel_variational(const MetricSource& source,
                                                 const Vector& sigma) {
  return christoffel_variational(metric_derivatives(source, sigma));
}

// ---------------------------------------------------------------------------
// Geodesics

struct GeodesicState {
  Vector sigma;
  Vector velocity;
};

/// −Γ(u, u), computed as −Q⁻¹ ((sum_i u^i ∂_i Q) u − ½ (uᵀ ∂_k Q u)_k).
inline Vector geodesic_acceleration(const MetricDerivatives& d, const Vector& u) {
  const int n = d.q.dim();
  Matrix dir = Matrix::Zero(n, n);
  Vector grad(n);
  for (int k = 0; k < n; ++k) {
    dir += u(k) * d.dq[k].matrix();
    grad(k) = u.dot(d.dq[k].matrix() * u);
  }
  const Vector rhs = dir * u - 0.5 * grad;
  try {
    return -SpdMatrix(d.q).solve(rhs);
  } catch (const PositiveDefinitenessError& e) {
    throw DegenerateGeometryError(std::string("induced metric is singular: ") +
                                  e.what());
  }
}

inline Vector geodesic_acceleration(const MetricSource& source, const GeodesicState& s) {
  return geodesic_acceleration(metric_derivatives(source, s.sigma), s.velocity);
}

/// Q(sigma)(u, u).
inline double g_speed(const MetricSource& source, const GeodesicState& s) {
  return s.velocity.dot(source.metric(s.sigma).matrix() * s.velocity);
}

enum class TrajectoryStatus { completed, stopped, failed };

struct GeodesicTrajectory {
  std::vector<double> times;
  std::vector<GeodesicState> states;
  TrajectoryStatus status = TrajectoryStatus::completed;
  /// Diagnostic for `stopped` and `failed`.
  std::string message;
  /// Time at which integration ended (the failing time for `failed`).
  double end_time = 0.0;
};

/// Returns true when a state must not be entered; integration stops before it.
using StopPredicate = std::function<bool(const GeodesicState&)>;

struct GeodesicOptions {
  /// States that must not be entered; integration stops before them.
  StopPredicate stop;
  /// When positive, a relative change of Q(u, u) from its initial value
  /// beyond this bound ends the run as `failed`.  Near-singular Fisher
  /// matrices at quadrature nodes show up this way.
  double max_speed_drift = 0.0;
};

/// Fixed-step RK4 on the first-order system (sigma, u)' = (u, −Γ(u, u)).
/// Geometry failures end the run with status `failed`; the partial
/// trajectory is kept.
inline GeodesicTrajectory integrate_geodesic(const MetricSource& source,
                                             const GeodesicState& start,
                                             double horizon, double dt,
                                             const GeodesicOptions& opts = {}) {
  if (!(dt > 0.0)) throw DomainError("integrate_geodesic: dt must be positive");
  if (!(horizon >= dt)) throw DomainError("integrate_geodesic: horizon must be >= dt");
  if (start.sigma.size() != start.velocity.size())
    throw DomainError("integrate_geodesic: state dimension mismatch");
  const Eigen::Index n = start.sigma.size();
  using State = Eigen::VectorXd;
  auto pack = [n](const GeodesicState& s) {
    State y(2 * n);
    y << s.sigma, s.velocity;
    return y;
  };
  auto unpack = [n](const State& y) {
    return GeodesicState{Vector(y.head(n)), Vector(y.tail(n))};
  };
  auto rhs = [&](double, const State& y) {
    const GeodesicState s = unpack(y);
    const Vector a = geodesic_acceleration(source, s);
    State d(2 * n);
    d << s.velocity, a;
    return d;
  };

  GeodesicTrajectory out;
  out.times.push_back(0.0);
  out.states.push_back(start);
  State y = pack(start);
  double speed0 = 0.0;
  if (opts.max_speed_drift > 0.0) {
    try {
      speed0 = g_speed(source, start);
    } catch (const Error& e) {
      out.status = TrajectoryStatus::failed;
      out.message = e.what();
      return out;
    }
  }
  const std::size_t steps = step_count(horizon, dt);
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double h = std::min(dt, horizon - t);
    State next;
    try {
      next = rk4_step(y, t, h, rhs);
      if (!next.allFinite()) throw DegenerateGeometryError("non-finite geodesic state");
      if (opts.max_speed_drift > 0.0) {
        const double speed = g_speed(source, unpack(next));
        const double drift = std::abs(speed - speed0) / std::max(speed0, 1e-300);
        if (!(drift <= opts.max_speed_drift))
          throw DegenerateGeometryError("G-speed drift " + std::to_string(drift) +
                                        " exceeds bound at t=" + std::to_string(t + h));
      }
    } catch (const Error& e) {
      out.status = TrajectoryStatus::failed;
      out.message = e.what();
      out.end_time = t;
      return out;
    }
    const GeodesicState s = unpack(next);
    if (opts.stop && opts.stop(s)) {
      out.status = TrajectoryStatus::stopped;
      out.message = "stop condition reached";
      out.end_time = t;
      return out;
    }
    y = next;
    out.times.push_back(k + 1 == steps ? horizon : t + h);
    out.states.push_back(s);
  }
  out.end_time = horizon;
  return out;
}

/// ½ ∫ uᵀ Q(sigma) u dt by the trapezoidal rule over a sampled path.
inline double path_energy(const MetricSource& source, const std::vector<double>& times,
                          const std::vector<GeodesicState>& path) {
  if (times.size() != path.size()) throw DomainError("path_energy: size mismatch");
  double e = 0.0;
  double prev = 0.0;
  for (std::size_t i = 0; i < path.size(); ++i) {
    const double cur = g_speed(source, path[i]);
    if (i > 0) e += 0.5 * (times[i] - times[i - 1]) * (prev + cur);
    prev = cur;
  }
  return 0.5 * e;
}

}  // namespace infogeo

#endif  // INFOGEO_SENSOR_MANIFOLD_HPP
