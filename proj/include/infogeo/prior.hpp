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

// Gaussian prior on the parameter plane and quadrature over it.

#ifndef INFOGEO_PRIOR_HPP
#define INFOGEO_PRIOR_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "infogeo/errors.hpp"
#include "infogeo/parallel.hpp"
#include "infogeo/sensor_model.hpp"
#include "infogeo/spd.hpp"

namespace infogeo {

/// Tensor-product Gauss–Hermite rule with `order` nodes per axis.
struct GaussHermiteRule {
  int order = 9;
  friend bool operator==(const GaussHermiteRule&, const GaussHermiteRule&) = default;
};

/// Plain Monte-Carlo rule: equally weighted Gaussian draws.
struct MonteCarloRule {
  std::size_t samples = 10000;
  std::uint64_t seed = 0;
  friend bool operator==(const MonteCarloRule&, const MonteCarloRule&) = default;
};

using QuadratureRule = std::variant<GaussHermiteRule, MonteCarloRule>;

inline constexpr int kMaxHermiteOrder = 64;

/// Normal prior dF(theta) = N(mean, covariance) with its quadrature rule.
class Prior {
 public:
  Prior(ParameterPoint mean, const SymMatrix& covariance,
        QuadratureRule rule = GaussHermiteRule{})
      : mean_(mean), covariance_(checked_covariance(covariance)), rule_(rule) {
    if (!std::isfinite(mean.x) || !std::isfinite(mean.y))
      throw ValidationError("prior mean must be finite");
    if (const auto* gh = std::get_if<GaussHermiteRule>(&rule_)) {
      if (gh->order < 1 || gh->order > kMaxHermiteOrder)
        throw ValidationError("Gauss-Hermite order must be in 1.." +
                              std::to_string(kMaxHermiteOrder));
    } else if (std::get<MonteCarloRule>(rule_).samples < 1) {
      throw ValidationError("Monte-Carlo rule needs at least one sample");
    }
  }

  ParameterPoint mean() const noexcept { return mean_; }
  const SpdMatrix& covariance() const noexcept { return covariance_; }
  const QuadratureRule& rule() const noexcept { return rule_; }

  Prior with_rule(QuadratureRule rule) const {
    return Prior(mean_, covariance_.sym(), rule);
  }

  double density(ParameterPoint theta) const {
    const Vector d = (Vector(2) << theta.x - mean_.x, theta.y - mean_.y).finished();
    const double q = d.dot(covariance_.solve(d));
    return std::exp(-0.5 * q - 0.5 * covariance_.log_det()) /
           (2.0 * std::numbers::pi);
  }

  friend bool operator==(const Prior& a, const Prior& b) {
    return a.mean_ == b.mean_ && a.covariance_.sym() == b.covariance_.sym() &&
           a.rule_ == b.rule_;
  }

 private:
  static SpdMatrix checked_covariance(const SymMatrix& c) {
    if (c.dim() != 2) throw ValidationError("prior covariance must be 2x2");
    if (!c.matrix().allFinite())
      throw ValidationError("prior covariance must be finite");
    try {
      return SpdMatrix(c);
    } catch (const PositiveDefinitenessError&) {
      throw ValidationError("covariance not SPD");
    }
  }

  ParameterPoint mean_;
  SpdMatrix covariance_;
  QuadratureRule rule_;
};

/// Nodes and weights discretizing the prior.  `densities` holds the prior
/// density at each node, used only by the volume-form weighting.
struct QuadratureGrid {
  std::vector<ParameterPoint> nodes;
  std::vector<double> weights;
  std::vector<double> densities;

  std::size_t size() const noexcept { return nodes.size(); }
};

struct HermiteRule1D {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Probabilists' Gauss–Hermite rule for the standard normal via
/// Golub–Welsch.  Nodes are ascending and exactly antisymmetric, weights
/// symmetric and normalized to sum to one.
inline HermiteRule1D gauss_hermite_rule(int order) {
  if (order < 1 || order > kMaxHermiteOrder)
    throw DomainError("Gauss-Hermite order out of range");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    jacobi(k - 1, k) = std::sqrt(static_cast<double>(k));
    jacobi(k, k - 1) = jacobi(k - 1, k);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  HermiteRule1D rule{std::vector<double>(order), std::vector<double>(order)};
  for (int i = 0; i < order; ++i) {
    rule.nodes[i] = solver.eigenvalues()(i);
    const double v = solver.eigenvectors()(0, i);
    rule.weights[i] = v * v;
  }
  for (int i = 0; i < order / 2; ++i) {
    const int k = order - 1 - i;
    const double x = 0.5 * (rule.nodes[k] - rule.nodes[i]);
    const double w = 0.5 * (rule.weights[k] + rule.weights[i]);
    rule.nodes[i] = -x;
    rule.nodes[k] = x;
    rule.weights[i] = rule.weights[k] = w;
  }
  if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
  double total = 0.0;
  for (double w : rule.weights) total += w;
  for (double& w : rule.weights) w /= total;
  return rule;
}

inline QuadratureGrid build_grid(const Prior& prior) {
  const Matrix& l = prior.covariance().cholesky_factor();
  const ParameterPoint mu = prior.mean();
  QuadratureGrid grid;
  auto push = [&](double za, double zb, double w) {
    const ParameterPoint p{mu.x + l(0, 0) * za,
                           mu.y + l(1, 0) * za + l(1, 1) * zb};
    grid.nodes.push_back(p);
    grid.weights.push_back(w);
    grid.densities.push_back(prior.density(p));
  };
  if (const auto* gh = std::get_if<GaussHermiteRule>(&prior.rule())) {
    const HermiteRule1D r = gauss_hermite_rule(gh->order);
    for (int a = 0; a < gh->order; ++a)
      for (int b = 0; b < gh->order; ++b)
        push(r.nodes[a], r.nodes[b], r.weights[a] * r.weights[b]);
  } else {
    const auto& mc = std::get<MonteCarloRule>(prior.rule());
    std::mt19937_64 rng(splitmix64(mc.seed));
    const double w = 1.0 / static_cast<double>(mc.samples);
    for (std::size_t i = 0; i < mc.samples; ++i) {
      // Box–Muller on the open unit interval.
      const double u1 = uniform_open(rng);
      const double u2 = uniform_open(rng);
      const double rad = std::sqrt(-2.0 * std::log(u1));
      push(rad * std::cos(2.0 * std::numbers::pi * u2),
           rad * std::sin(2.0 * std::numbers::pi * u2), w);
    }
  }
  return grid;
}

namespace detail {

inline std::string node_label(const QuadratureGrid& grid, std::size_t i) {
  return "quadrature node " + std::to_string(i) + " (" +
         std::to_string(grid.nodes[i].x) + ", " + std::to_string(grid.nodes[i].y) +
         ")";
}

/// Evaluates `field` at every node; PositiveDefinitenessError raised by the
/// field is re-thrown with the node attached.
template <typename Field>
auto evaluate_nodes(Field&& field, const QuadratureGrid& grid) {
  return parallel_map(grid.size(), [&](std::size_t i) {
    try {
      return field(grid.nodes[i]);
    } catch (const PositiveDefinitenessError& e) {
      throw PositiveDefinitenessError(std::string(e.what()) + " at " +
                                      node_label(grid, i));
    }
  });
}

}  // namespace detail

/// sum_i w_i field(node_i), summed in node order.
template <typename Field>
double integrate_scalar(Field&& field, const QuadratureGrid& grid) {
  const auto values = detail::evaluate_nodes(field, grid);
  double acc = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i]))
      throw NonFiniteFieldError("non-finite integrand at " +
                                    detail::node_label(grid, i),
                                i);
    acc += grid.weights[i] * values[i];
  }
  return acc;
}

/// Matrix-valued counterpart of integrate_scalar.
template <typename Field>
SymMatrix integrate_matrix(Field&& field, const QuadratureGrid& grid) {
  const auto values = detail::evaluate_nodes(field, grid);
  if (values.empty()) throw DomainError("integrate_matrix: empty grid");
  const int n = values.front().dim();
  Matrix acc = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!values[i].matrix().allFinite())
      throw NonFiniteFieldError("non-finite integrand at " +
                                    detail::node_label(grid, i),
                                i);
    acc += grid.weights[i] * values[i].matrix();
  }
  return SymMatrix(acc);
}

}  // namespace infogeo

#endif  // INFOGEO_PRIOR_HPP
