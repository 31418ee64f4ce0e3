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

// Bearings-only sensing with von Mises noise.
//
// Each platform j at (x_j, y_j) observes the bearing of the emitter at
// theta = (x_e, y_e) with von Mises noise of common concentration kappa.
// With x~ = x_j - x_e, y~ = y_j - y_e and R² = x~² + y~², the Fisher
// information of theta is
//
//   F = kappa A(kappa) sum_j (y~, -x~) (y~, -x~)ᵀ / R⁴,
//
// where A(kappa) = I1(kappa) / I0(kappa).  Derivatives of F with respect
// to the platform coordinates are obtained by differentiating every
// factor of that expression, including R.

#ifndef INFOGEO_SENSOR_MODEL_HPP
#define INFOGEO_SENSOR_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "infogeo/errors.hpp"
#include "infogeo/parallel.hpp"
#include "infogeo/spd.hpp"

namespace infogeo {

struct Point2 {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point2&, const Point2&) = default;
};

/// Emitter position on the parameter manifold.
using ParameterPoint = Point2;

/// Maximum number of platforms: the chart dimension 2J must fit kMaxDim.
inline constexpr int kMaxPlatforms = kMaxDim / 2;

/// A point of the sensor manifold: platform positions flattened as
/// (x1, y1, x2, y2, ...).
class SensorConfiguration {
 public:
  explicit SensorConfiguration(const std::vector<Point2>& platforms) {
    const auto j = static_cast<int>(platforms.size());
    if (j < 1 || j > kMaxPlatforms)
      throw ValidationError("sensor configuration needs 1.." +
                            std::to_string(kMaxPlatforms) + " platforms");
    coords_.resize(2 * j);
    for (int k = 0; k < j; ++k) {
      coords_(2 * k) = platforms[k].x;
      coords_(2 * k + 1) = platforms[k].y;
    }
    check();
  }

  /// From the flattened chart (x1, y1, x2, y2, ...).
  static SensorConfiguration from_coordinates(const Vector& coords) {
    if (coords.size() < 2 || coords.size() % 2 != 0)
      throw ValidationError("sensor chart must have even dimension >= 2");
    SensorConfiguration out;
    out.coords_ = coords;
    out.check();
    return out;
  }

  int platform_count() const { return static_cast<int>(coords_.size() / 2); }
  int dim() const { return static_cast<int>(coords_.size()); }
  Point2 platform(int j) const { return {coords_(2 * j), coords_(2 * j + 1)}; }
  const Vector& coordinates() const { return coords_; }

  friend bool operator==(const SensorConfiguration& a,
                         const SensorConfiguration& b) {
    return a.coords_.size() == b.coords_.size() && a.coords_ == b.coords_;
  }

 private:
  SensorConfiguration() = default;
  void check() const {
    if (!coords_.allFinite())
      throw ValidationError("sensor coordinates must be finite");
  }
  Vector coords_;
};

/// Distances below this make a bearing undefined.
inline constexpr double kCoincidenceRadius = 1e-12;

/// Bearing of the target seen from the sensor, atan2(y~, x~) in (-pi, pi].
inline double bearing(Point2 sensor, ParameterPoint target) {
  const double dx = sensor.x - target.x;
  const double dy = sensor.y - target.y;
  if (std::hypot(dx, dy) < kCoincidenceRadius)
    throw CoincidentError("sensor coincides with target; bearing undefined");
  const double phi = std::atan2(dy, dx);
  return phi == -std::numbers::pi ? std::numbers::pi : phi;
}

/// A(kappa) = I1(kappa)/I0(kappa) from the Gauss continued fraction
/// I1/I0 = 1/(2/k + 1/(4/k + 1/(6/k + ...))), evaluated by modified Lentz.
inline double bessel_ratio(double kappa) {
  if (!(kappa > 0.0) || !std::isfinite(kappa))
    throw DomainError("bessel_ratio requires finite kappa > 0");
  constexpr double tiny = 1e-300;
  constexpr double eps = 1e-16;
  double f = 2.0 / kappa;
  double c = f;
  double d = 0.0;
  for (int k = 2; k < 1000000; ++k) {
    const double bk = 2.0 * k / kappa;
    d = bk + d;
    if (d == 0.0) d = tiny;
    c = bk + 1.0 / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::abs(delta - 1.0) < eps) break;
  }
  return 1.0 / f;
}

/// Von Mises bearing noise with shared concentration kappa.
class VonMisesModel {
 public:
  explicit VonMisesModel(double kappa)
      : kappa_(kappa), ratio_(infogeo::bessel_ratio(kappa)) {}

  double kappa() const noexcept { return kappa_; }
  double bessel_ratio() const noexcept { return ratio_; }
  /// kappa A(kappa): Fisher information of one bearing about its mean.
  double information_scale() const noexcept { return kappa_ * ratio_; }

  friend bool operator==(const VonMisesModel& a, const VonMisesModel& b) {
    return a.kappa_ == b.kappa_;
  }

 private:
  double kappa_;
  double ratio_;
};

namespace detail {

struct Offset {
  double dx, dy, r2;
};

inline Offset offset(Point2 sensor, ParameterPoint theta) {
  const double dx = sensor.x - theta.x;
  const double dy = sensor.y - theta.y;
  if (std::hypot(dx, dy) < kCoincidenceRadius)
    throw CoincidentError("sensor coincides with parameter point");
  return {dx, dy, dx * dx + dy * dy};
}

}  // namespace detail

/// Contribution of one platform to the Fisher information.
inline SymMatrix fisher_term(Point2 sensor, ParameterPoint theta,
                             const VonMisesModel& model) {
  const auto [dx, dy, r2] = detail::offset(sensor, theta);
  const double s = model.information_scale() / (r2 * r2);
  Matrix m(2, 2);
  m << dy * dy, -dx * dy, -dx * dy, dx * dx;
  return SymMatrix(Matrix(s * m));
}

inline SymMatrix fisher_information(const SensorConfiguration& sigma,
                                    ParameterPoint theta,
                                    const VonMisesModel& model) {
  SymMatrix f(2);
  for (int j = 0; j < sigma.platform_count(); ++j)
    f += fisher_term(sigma.platform(j), theta, model);
  return f;
}

/// Derivative of the Fisher information along sensor chart axis `axis`
/// (2j for x_j, 2j+1 for y_j).  Only platform j's term depends on it.
inline SymMatrix fisher_derivative(const SensorConfiguration& sigma,
                                   ParameterPoint theta,
                                   const VonMisesModel& model, int axis) {
  if (axis < 0 || axis >= sigma.dim())
    throw DomainError("fisher_derivative: axis out of range");
  for (int j = 0; j < sigma.platform_count(); ++j)
    detail::offset(sigma.platform(j), theta);
  const auto [dx, dy, r2] = detail::offset(sigma.platform(axis / 2), theta);
  const bool along_x = axis % 2 == 0;
  // term = c v vᵀ / R⁴ with v = (y~, -x~).
  const double c = model.information_scale();
  Eigen::Vector2d v(dy, -dx);
  const Eigen::Vector2d dv = along_x ? Eigen::Vector2d(0.0, -1.0)
                                     : Eigen::Vector2d(1.0, 0.0);
  const double dr2 = 2.0 * (along_x ? dx : dy);
  const double inv_r4 = 1.0 / (r2 * r2);
  const Eigen::Matrix2d d = c * ((dv * v.transpose() + v * dv.transpose()) * inv_r4 -
                                 (2.0 * dr2 * inv_r4 / r2) * v * v.transpose());
  return SymMatrix(Matrix(d));
}

/// Optional ridge F + eps·tr(F)·I that keeps the Fisher metric invertible
/// near degenerate geometries.
struct FisherOptions {
  bool ridge = false;
  double ridge_epsilon = 1e-8;
  friend bool operator==(const FisherOptions&, const FisherOptions&) = default;
};

inline SymMatrix fisher_metric(const SensorConfiguration& sigma,
                               ParameterPoint theta, const VonMisesModel& model,
                               const FisherOptions& opts = {}) {
  SymMatrix f = fisher_information(sigma, theta, model);
  if (opts.ridge) f += SymMatrix::identity(2) * (opts.ridge_epsilon * f.trace());
  return f;
}

inline SymMatrix fisher_metric_derivative(const SensorConfiguration& sigma,
                                          ParameterPoint theta,
                                          const VonMisesModel& model, int axis,
                                          const FisherOptions& opts = {}) {
  SymMatrix d = fisher_derivative(sigma, theta, model, axis);
  if (opts.ridge) d += SymMatrix::identity(2) * (opts.ridge_epsilon * d.trace());
  return d;
}

// ---------------------------------------------------------------------------
// Random numbers and von Mises sampling

/// SplitMix64, used to derive independent stream seeds.
inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Uniform double in the open interval (0,1) from the top 53 bits.
inline double uniform_open(std::mt19937_64& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// Best–Fisher (1979) wrapped-Cauchy rejection sampler for von Mises
/// deviates about mean zero.
class VonMisesSampler {
 public:
  explicit VonMisesSampler(double kappa) : kappa_(kappa) {
    if (!(kappa > 0.0)) throw DomainError("von Mises sampler needs kappa > 0");
    const double tau = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
    const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * kappa);
    r_ = (1.0 + rho * rho) / (2.0 * rho);
  }

  /// Deviation from the circular mean, in [-pi, pi].
  double operator()(std::mt19937_64& rng) const {
    double f = 0.0;
    for (;;) {
      const double u1 = uniform_open(rng);
      const double u2 = uniform_open(rng);
      const double z = std::cos(std::numbers::pi * u1);
      f = (1.0 + r_ * z) / (r_ + z);
      const double c = kappa_ * (r_ - f);
      if (c * (2.0 - c) - u2 > 0.0) break;
      if (std::log(c / u2) + 1.0 - c >= 0.0) break;
    }
    const double u3 = uniform_open(rng);
    const double a = std::acos(std::clamp(f, -1.0, 1.0));
    return u3 > 0.5 ? a : -a;
  }

 private:
  double kappa_;
  double r_;
};

struct FisherEstimate {
  SymMatrix mean;            // sample mean of the score outer product
  SymMatrix standard_error;  // per-entry standard error of the mean
  std::size_t samples;
};

/// Samples per independently seeded stream in the Monte-Carlo oracle.  The
/// stream layout depends only on the sample count, never on threading.
inline constexpr std::size_t kMonteCarloChunk = 1 << 16;

/// Monte-Carlo estimate of E[dl ⊗ dl] for the bearings likelihood.  Each
/// draw simulates one bearing per platform and accumulates the outer
/// product of the score d/dtheta sum_j kappa cos(z_j - phi_j).
inline FisherEstimate fisher_mc_estimate(const SensorConfiguration& sigma,
                                         ParameterPoint theta,
                                         const VonMisesModel& model,
                                         std::size_t sample_count,
                                         std::uint64_t seed) {
  if (sample_count < 1) throw DomainError("sample_count must be >= 1");
  const int j_count = sigma.platform_count();
  // d phi_j / d theta = (y~, -x~) / R².
  std::vector<Eigen::Vector2d> grad(j_count);
  for (int j = 0; j < j_count; ++j) {
    const auto [dx, dy, r2] = detail::offset(sigma.platform(j), theta);
    grad[j] = Eigen::Vector2d(dy, -dx) / r2;
  }
  const VonMisesSampler sampler(model.kappa());
  const double kappa = model.kappa();

  struct Sums {
    double s[3] = {0, 0, 0};   // xx, xy, yy
    double q[3] = {0, 0, 0};   // squares, for the standard error
  };
  const std::size_t chunks = (sample_count + kMonteCarloChunk - 1) / kMonteCarloChunk;
  auto partial = parallel_map(chunks, [&](std::size_t c) {
    std::mt19937_64 rng(splitmix64(seed ^ splitmix64(c + 1)));
    const std::size_t begin = c * kMonteCarloChunk;
    const std::size_t end = std::min(sample_count, begin + kMonteCarloChunk);
    Sums acc;
    for (std::size_t i = begin; i < end; ++i) {
      Eigen::Vector2d score = Eigen::Vector2d::Zero();
      for (int j = 0; j < j_count; ++j)
        score += kappa * std::sin(sampler(rng)) * grad[j];
      const double e[3] = {score.x() * score.x(), score.x() * score.y(),
                           score.y() * score.y()};
      for (int k = 0; k < 3; ++k) {
        acc.s[k] += e[k];
        acc.q[k] += e[k] * e[k];
      }
    }
    return acc;
  });
  Sums total;
  for (const auto& p : partial)
    for (int k = 0; k < 3; ++k) {
      total.s[k] += p.s[k];
      total.q[k] += p.q[k];
    }
  const double n = static_cast<double>(sample_count);
  double mean[3], se[3];
  for (int k = 0; k < 3; ++k) {
    mean[k] = total.s[k] / n;
    const double var = n > 1 ? std::max(0.0, (total.q[k] / n - mean[k] * mean[k]) *
                                                 n / (n - 1))
                             : 0.0;
    se[k] = std::sqrt(var / n);
  }
  return {SymMatrix{{mean[0], mean[1]}, {mean[1], mean[2]}},
          SymMatrix{{se[0], se[1]}, {se[1], se[2]}}, sample_count};
}

inline SymMatrix fisher_mc_oracle(const SensorConfiguration& sigma,
                                  ParameterPoint theta, const VonMisesModel& model,
                                  std::size_t sample_count, std::uint64_t seed) {
  return fisher_mc_estimate(sigma, theta, model, sample_count, seed).mean;
}

// ---------------------------------------------------------------------------
// Kullback–Leibler divergence of the bearings likelihood

/// KL(vM(mu1, kappa) || vM(mu2, kappa)) by the periodic trapezoidal rule
/// on `nodes` points.  The normalizers cancel because kappa is shared.
inline double von_mises_kl_numeric(double mu1, double mu2, double kappa,
                                   int nodes = 2048) {
  double weight_sum = 0.0;
  double acc = 0.0;
  for (int i = 0; i < nodes; ++i) {
    const double z = -std::numbers::pi + 2.0 * std::numbers::pi * i / nodes;
    const double c1 = std::cos(z - mu1);
    const double w = std::exp(kappa * (c1 - 1.0));
    weight_sum += w;
    acc += w * kappa * (c1 - std::cos(z - mu2));
  }
  return acc / weight_sum;
}

/// Closed form kappa A(kappa) (1 - cos(mu1 - mu2)).
inline double von_mises_kl(double mu1, double mu2, const VonMisesModel& model) {
  return model.information_scale() * (1.0 - std::cos(mu1 - mu2));
}

/// KL between the joint bearing likelihoods at theta and theta_prime.
inline double bearings_kl_numeric(const SensorConfiguration& sigma,
                                  ParameterPoint theta, ParameterPoint theta_prime,
                                  const VonMisesModel& model, int nodes = 2048) {
  double kl = 0.0;
  for (int j = 0; j < sigma.platform_count(); ++j)
    kl += von_mises_kl_numeric(bearing(sigma.platform(j), theta),
                               bearing(sigma.platform(j), theta_prime),
                               model.kappa(), nodes);
  return kl;
}

}  // namespace infogeo

#endif  // INFOGEO_SENSOR_MODEL_HPP
