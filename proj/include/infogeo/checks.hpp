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


// Self-checks exposed by the command-line tool.

#ifndef INFOGEO_CHECKS_HPP
#define INFOGEO_CHECKS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

#include "infogeo/ambient.hpp"
#include "infogeo/prior.hpp"
#include "infogeo/sensor_model.hpp"
#include "infogeo/spd.hpp"

namespace infogeo {

struct FisherCheckPoint {
  ParameterPoint theta;
  SymMatrix analytic;
  SymMatrix monte_carlo;
  double relative_error;
};

/// Analytic Fisher matrix against the score Monte-Carlo estimate at the
/// prior mean and the four one-sigma axis points.
inline std::vector<FisherCheckPoint> fisher_check(const SensorConfiguration& sigma,
                                                  const Prior& prior,
                                                  const VonMisesModel& model,
                                                  std::size_t samples, std::uint64_t seed) {
  const ParameterPoint mu = prior.mean();
  const double sx = std::sqrt(prior.covariance().sym()(0, 0));
  const double sy = std::sqrt(prior.covariance().sym()(1, 1));
  const std::vector<ParameterPoint> points = {
      mu, {mu.x + sx, mu.y}, {mu.x - sx, mu.y}, {mu.x, mu.y + sy}, {mu.x, mu.y - sy}};
  std::vector<FisherCheckPoint> out;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const SymMatrix f = fisher_information(sigma, points[k], model);
    const SymMatrix mc = fisher_mc_oracle(sigma, points[k], model, samples,
                                          splitmix64(seed + k));
    out.push_back({points[k], f, mc, (mc - f).frobenius_norm() / f.frobenius_norm()});
  }
  return out;
}

struct DivergenceTrial {
  SensorConfiguration sigma;
  Vector direction;
  double inner_half;     // ½ ∫ Tr(g⁻¹h′g⁻¹h′) dF
  double hessian_kl;
  double hessian_mi;
  double slope_kl;
  double slope_mi;
  double relative_error;  // worst of the three pairwise comparisons
};

namespace detail {

/// Smallest |sin| of the bearing difference over the grid; zero means some
/// node sits on the sensor baseline and F is singular there.
inline double min_bearing_sine(const SensorConfiguration& s, const QuadratureGrid& grid) {
  double m = 1.0;
  for (const ParameterPoint& p : grid.nodes)
    m = std::min(m, std::abs(std::sin(bearing(s.platform(0), p) - bearing(s.platform(1), p))));
  return m;
}

}  // namespace detail

/// Hessians of both divergences along sensor-induced directions h′ = ∂_u F
/// at g = F, against the ambient inner product.  Geometries come from a
/// seeded stream and keep both platforms clear of the prior bulk.
inline std::vector<DivergenceTrial> divergence_check(const Prior& prior,
                                                     const VonMisesModel& model,
                                                     int trials, std::uint64_t seed) {
  const QuadratureGrid grid = build_grid(prior);
  const ParameterPoint mu = prior.mean();
  const double spread = std::sqrt(prior.covariance().sym().trace());
  std::mt19937_64 rng(splitmix64(seed));
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  std::vector<DivergenceTrial> out;
  while (static_cast<int>(out.size()) < trials) {
    std::vector<Point2> pts;
    for (int j = 0; j < 2; ++j) {
      const double r = spread * (8.0 + 8.0 * (unit(rng) + 1.0));
      const double a = std::numbers::pi * unit(rng);
      pts.push_back({mu.x + r * std::cos(a), mu.y + r * std::sin(a)});
    }
    Vector u(4);
    for (int k = 0; k < 4; ++k) u(k) = unit(rng);
    const SensorConfiguration sigma(pts);
    if (detail::min_bearing_sine(sigma, grid) < 0.2) continue;
    const MetricField g = sensor_metric_field(sigma, model);
    const TangentField h = sensor_pushforward(sigma, model, u);
    const double half = 0.5 * ambient_inner(g, h, h, grid);
    DivergenceTrial t{sigma, u, half,
                      divergence_hessian(DivergenceKind::kl, g, h, grid),
                      divergence_hessian(DivergenceKind::mi, g, h, grid),
                      divergence_slope(DivergenceKind::kl, g, h, grid),
                      divergence_slope(DivergenceKind::mi, g, h, grid), 0.0};
    t.relative_error = std::max({std::abs(t.hessian_kl - half), std::abs(t.hessian_mi - half),
                                 std::abs(t.hessian_kl - t.hessian_mi)}) /
                       half;
    out.push_back(t);
  }
  return out;
}

}  // namespace infogeo

#endif  // INFOGEO_CHECKS_HPP
