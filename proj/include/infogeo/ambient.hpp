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

// The space of Riemannian metrics on the parameter plane.
//
// A point g assigns an SPD matrix g_theta to every theta; a tangent vector
// h assigns a symmetric matrix.  The inner product is
//
//   G_g(h, k) = ∫ Tr(g⁻¹ h g⁻¹ k) dF(theta)
//
// where dF is the prior, integrated with the prior's quadrature grid.
// Geodesics solve γ̈ = γ̇ γ⁻¹ γ̇, in closed form γ(t) = γ(0) exp(γ(0)⁻¹ γ̇(0) t).
// Both divergences below have this inner product (halved) as their
// Hessian on the diagonal.

#ifndef INFOGEO_AMBIENT_HPP
#define INFOGEO_AMBIENT_HPP

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "infogeo/errors.hpp"
#include "infogeo/ode.hpp"
#include "infogeo/prior.hpp"
#include "infogeo/sensor_model.hpp"
#include "infogeo/spd.hpp"

namespace infogeo {

/// A matrix-valued field theta ↦ matrix.  The tag separates points of the
/// metric space (SPD values) from tangent vectors (symmetric values).
template <typename Tag>
class MatrixField {
 public:
  using Function = std::function<SymMatrix(const ParameterPoint&)>;

  MatrixField(Function fn, std::string descriptor)
      : fn_(std::move(fn)), descriptor_(std::move(descriptor)) {}

  static MatrixField constant(const SymMatrix& value) {
    return MatrixField([value](const ParameterPoint&) { return value; },
                       "constant");
  }

  SymMatrix operator()(const ParameterPoint& theta) const { return fn_(theta); }
  const std::string& descriptor() const noexcept { return descriptor_; }

 private:
  Function fn_;
  std::string descriptor_;
};

struct MetricTag {};
struct TangentTag {};
using MetricField = MatrixField<MetricTag>;
using TangentField = MatrixField<TangentTag>;

/// theta ↦ Fisher metric of the sensor configuration.
inline MetricField sensor_metric_field(const SensorConfiguration& sigma,
                                       const VonMisesModel& model,
                                       const FisherOptions& opts = {}) {
  return MetricField(
      [sigma, model, opts](const ParameterPoint& theta) {
        return fisher_metric(sigma, theta, model, opts);
      },
      "from-sensor");
}

/// Push-forward of a sensor velocity u: theta ↦ sum_i u_i ∂_i F.
inline TangentField sensor_pushforward(const SensorConfiguration& sigma,
                                       const VonMisesModel& model, const Vector& u,
                                       const FisherOptions& opts = {}) {
  if (u.size() != sigma.dim()) throw DomainError("pushforward: dimension mismatch");
  return TangentField(
      [sigma, model, u, opts](const ParameterPoint& theta) {
        SymMatrix acc(2);
        for (int i = 0; i < sigma.dim(); ++i)
          if (u(i) != 0.0)
            acc += u(i) * fisher_metric_derivative(sigma, theta, model, i, opts);
        return acc;
      },
      "from-sensor pushforward");
}

/// Measure used for integrals over the parameter plane.  `volume_form`
/// swaps dF for sqrt(det g) dtheta by reweighting the prior's nodes with
/// sqrt(det g)/density; it is an alternative that the rest of the library
/// does not use.
enum class Weighting { prior, volume_form };

/// Tr(g⁻¹ h g⁻¹ k) at one point.
inline double ambient_integrand(const SpdMatrix& g, const SymMatrix& h,
                                const SymMatrix& k) {
  return trace_product(g.solve(h.matrix()), g.solve(k.matrix()));
}

inline double ambient_inner(const MetricField& g, const TangentField& h,
                            const TangentField& k, const QuadratureGrid& grid,
                            Weighting weighting = Weighting::prior) {
  if (weighting == Weighting::prior)
    return integrate_scalar(
        [&](const ParameterPoint& theta) {
          return ambient_integrand(SpdMatrix(g(theta)), h(theta), k(theta));
        },
        grid);
  const std::vector<double> values = parallel_map(grid.size(), [&](std::size_t i) {
    const ParameterPoint& theta = grid.nodes[i];
    const SpdMatrix gi(g(theta));
    return ambient_integrand(gi, h(theta), k(theta)) *
           std::exp(0.5 * gi.log_det()) / grid.densities[i];
  });
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) acc += grid.weights[i] * values[i];
  return acc;
}

// ---------------------------------------------------------------------------
// Geodesics

/// Relative asymmetry tolerated in γ(0) exp(γ(0)⁻¹ γ̇(0) t) before it is
/// symmetrized.
inline constexpr double kGeodesicAsymmetryTolerance = 1e-10;

inline SymMatrix ambient_geodesic_point(const SpdMatrix& gamma0,
                                        const SymMatrix& gammadot0, double t) {
  const Matrix a = gamma0.solve(gammadot0.matrix());
  const Matrix g = gamma0.matrix() * mat_exp(t * a);
  const double asym = (g - g.transpose()).norm();
  if (asym > kGeodesicAsymmetryTolerance * g.norm())
    throw OverflowError("ambient geodesic lost symmetry (relative residual " +
                        std::to_string(asym / g.norm()) + ")");
  return SymMatrix(g);
}

/// γ̇(t) = γ̇(0) exp(γ(0)⁻¹ γ̇(0) t).
inline SymMatrix ambient_geodesic_velocity(const SpdMatrix& gamma0,
                                           const SymMatrix& gammadot0, double t) {
  const Matrix a = gamma0.solve(gammadot0.matrix());
  return SymMatrix(Matrix(gammadot0.matrix() * mat_exp(t * a)));
}

inline MetricField ambient_geodesic(const MetricField& gamma0,
                                    const TangentField& gammadot0, double t) {
  return MetricField(
      [gamma0, gammadot0, t](const ParameterPoint& theta) {
        return ambient_geodesic_point(SpdMatrix(gamma0(theta)), gammadot0(theta), t);
      },
      "geodesic(" + gamma0.descriptor() + ")");
}

/// Tr((γ⁻¹γ̇)²), the pointwise energy density along a curve.
inline double ambient_energy_density(const SymMatrix& gamma,
                                     const SymMatrix& gammadot) {
  const Matrix p = SpdMatrix(gamma).solve(gammadot.matrix());
  return trace_product(p, p);
}

struct AmbientSample {
  double t;
  SymMatrix gamma;
  SymMatrix gammadot;
};

/// Fixed-step RK4 integration of γ̈ = γ̇ γ⁻¹ γ̇ from (γ0, γ̇0) to `horizon`.
/// Independent of the closed form; used to cross-check it.
inline std::vector<AmbientSample> ambient_geodesic_rk4(const SpdMatrix& gamma0,
                                                       const SymMatrix& gammadot0,
                                                       double horizon, double dt) {
  if (!(dt > 0.0) || !(horizon >= 0.0)) throw DomainError("invalid RK4 step");
  const int n = gamma0.dim();
  // State is [γ | γ̇] stacked side by side.
  using State = Eigen::MatrixXd;
  State y(n, 2 * n);
  y << gamma0.matrix(), gammadot0.matrix();
  auto rhs = [n](double, const State& s) {
    const SpdMatrix g{SymMatrix(Matrix(s.leftCols(n)))};
    const Matrix v = s.rightCols(n);
    const Matrix a = v * g.solve(v);
    State d(n, 2 * n);
    d << v, a;
    return d;
  };
  std::vector<AmbientSample> out;
  out.push_back({0.0, gamma0.sym(), gammadot0});
  const std::size_t steps = step_count(horizon, dt);
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double h = std::min(dt, horizon - t);
    y = rk4_step(y, t, h, rhs);
    out.push_back({t + h, SymMatrix(Matrix(y.leftCols(n))),
                   SymMatrix(Matrix(y.rightCols(n)))});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Divergences

/// ½ Tr(g h⁻¹ − I) + ½ log(|h| / |g|), zero exactly when g == h.
inline double kl_integrand(const SymMatrix& g, const SymMatrix& h) {
  if (g == h) return 0.0;
  const SpdMatrix gs(g), hs(h);
  const double tr = hs.solve(g.matrix()).trace();
  return 0.5 * (tr - g.dim()) + 0.5 * (hs.log_det() - gs.log_det());
}

enum class MiForm {
  /// log|½(I + g⁻¹h)| + log|½(I + h⁻¹g)|, with both determinants taken
  /// directly from the (non-symmetric) matrices.
  symmetrized,
  /// 2 log|½(I + g⁻¹h)| + log(|g| / |h|), the same value through a single
  /// one-sided determinant plus log-determinants.
  one_sided,
};

namespace detail {

inline double log_det_general(const Matrix& m) {
  const double d = m.partialPivLu().determinant();
  if (!(d > 0.0)) throw PositiveDefinitenessError("determinant not positive");
  return std::log(d);
}

inline Matrix half_identity_plus(const SpdMatrix& a, const SymMatrix& b) {
  const int n = a.dim();
  return 0.5 * (Matrix(Matrix::Identity(n, n)) + a.solve(b.matrix()));
}

}  // namespace detail

inline double mi_integrand(const SymMatrix& g, const SymMatrix& h,
                           MiForm form = MiForm::symmetrized) {
  if (g == h) return 0.0;
  const SpdMatrix gs(g), hs(h);
  if (form == MiForm::symmetrized)
    return detail::log_det_general(detail::half_identity_plus(gs, h)) +
           detail::log_det_general(detail::half_identity_plus(hs, g));
  return 2.0 * detail::log_det_general(detail::half_identity_plus(gs, h)) +
         (gs.log_det() - hs.log_det());
}

enum class DivergenceKind { kl, mi };

namespace detail {

inline double divergence_integrand(DivergenceKind kind, const SymMatrix& g,
                                   const SymMatrix& h) {
  return kind == DivergenceKind::kl ? kl_integrand(g, h) : mi_integrand(g, h);
}

inline std::vector<SymMatrix> sample_field(const auto& field,
                                           const QuadratureGrid& grid) {
  return evaluate_nodes([&](const ParameterPoint& p) { return field(p); }, grid);
}

}  // namespace detail

inline double kl_divergence(const MetricField& g, const MetricField& h,
                            const QuadratureGrid& grid) {
  return integrate_scalar(
      [&](const ParameterPoint& theta) { return kl_integrand(g(theta), h(theta)); },
      grid);
}

inline double mi_divergence(const MetricField& g, const MetricField& h,
                            const QuadratureGrid& grid,
                            MiForm form = MiForm::symmetrized) {
  return integrate_scalar(
      [&](const ParameterPoint& theta) {
        return mi_integrand(g(theta), h(theta), form);
      },
      grid);
}

inline double divergence(DivergenceKind kind, const MetricField& g,
                         const MetricField& h, const QuadratureGrid& grid) {
  return kind == DivergenceKind::kl ? kl_divergence(g, h, grid)
                                    : mi_divergence(g, h, grid);
}

/// Which argument of Δ(·,·) is perturbed.
enum class Slot { first, second };

namespace detail {

/// Node values of g and h′ and the step ε = 1e-3 ‖g‖ / ‖h′‖ (L²(dF) norms).
struct PerturbationSetup {
  std::vector<SymMatrix> g;
  std::vector<SymMatrix> dir;
  double eps;
};

inline PerturbationSetup perturbation_setup(const MetricField& g,
                                            const TangentField& hprime,
                                            const QuadratureGrid& grid) {
  PerturbationSetup s{sample_field(g, grid), sample_field(hprime, grid), 0.0};
  double gn = 0.0, hn = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    SpdMatrix check(s.g[i]);
    gn += grid.weights[i] * s.g[i].matrix().squaredNorm();
    hn += grid.weights[i] * s.dir[i].matrix().squaredNorm();
  }
  s.eps = hn > 0.0 ? 1e-3 * std::sqrt(gn) / std::sqrt(hn) : 0.0;
  return s;
}

inline double perturbed_divergence(DivergenceKind kind, Slot slot,
                                   const PerturbationSetup& s,
                                   const QuadratureGrid& grid, double eps) {
  try {
    double acc = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const SymMatrix moved = s.g[i] + eps * s.dir[i];
      acc += grid.weights[i] * (slot == Slot::second
                                    ? divergence_integrand(kind, s.g[i], moved)
                                    : divergence_integrand(kind, moved, s.g[i]));
    }
    return acc;
  } catch (const PositiveDefinitenessError&) {
    throw StepTooLargeError("perturbation step " + std::to_string(eps) +
                            " leaves the SPD cone");
  }
}

}  // namespace detail

/// d²/dε² Δ(g, g + ε h′) at ε = 0 (or in the first slot), by central second
/// differences at ε and ε/2 combined by Richardson extrapolation.
inline double divergence_hessian(DivergenceKind kind, const MetricField& g,
                                 const TangentField& hprime,
                                 const QuadratureGrid& grid,
                                 Slot slot = Slot::second) {
  const auto s = detail::perturbation_setup(g, hprime, grid);
  if (s.eps == 0.0) return 0.0;
  auto second = [&](double e) {
    const double plus = detail::perturbed_divergence(kind, slot, s, grid, e);
    const double minus = detail::perturbed_divergence(kind, slot, s, grid, -e);
    return (plus + minus) / (e * e);  // Δ(g, g) = 0 exactly
  };
  const double coarse = second(s.eps);
  const double fine = second(0.5 * s.eps);
  return (4.0 * fine - coarse) / 3.0;
}

/// d/dε Δ(g, g + ε h′) at ε = 0, by Richardson-extrapolated central
/// differences.  Vanishes for both divergences.
inline double divergence_slope(DivergenceKind kind, const MetricField& g,
                               const TangentField& hprime, const QuadratureGrid& grid,
                               Slot slot = Slot::second) {
  const auto s = detail::perturbation_setup(g, hprime, grid);
  if (s.eps == 0.0) return 0.0;
  auto first = [&](double e) {
    return (detail::perturbed_divergence(kind, slot, s, grid, e) -
            detail::perturbed_divergence(kind, slot, s, grid, -e)) /
           (2.0 * e);
  };
  return (4.0 * first(0.5 * s.eps) - first(s.eps)) / 3.0;
}

}  // namespace infogeo

#endif  // INFOGEO_AMBIENT_HPP
