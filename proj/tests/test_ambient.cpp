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


#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "infogeo/ambient.hpp"

namespace {

using namespace infogeo;

SymMatrix random_spd(std::mt19937_64& rng, int n, double floor = 0.5) {
  std::normal_distribution<double> z;
  Matrix b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = z(rng);
  return SymMatrix(Matrix(b * b.transpose() / n + floor * Matrix::Identity(n, n)));
}

SymMatrix random_sym(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> z;
  Matrix b(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) = z(rng);
  return SymMatrix(Matrix(0.5 * (b + b.transpose())));
}

QuadratureGrid two_sensor_grid() {
  return build_grid(Prior({1, 1}, SymMatrix::identity(2) * 0.01));
}

TEST(AmbientInner, HandValues) {
  const QuadratureGrid grid = two_sensor_grid();
  const auto c = [](const SymMatrix& m) { return MetricField::constant(m); };
  const auto t = [](const SymMatrix& m) { return TangentField::constant(m); };
  EXPECT_NEAR(ambient_inner(c(SymMatrix::identity(2)), t(SymMatrix::diagonal({1, 0})),
                            t(SymMatrix::diagonal({0, 1})), grid),
              0.0, 1e-15);
  EXPECT_NEAR(ambient_inner(c(SymMatrix::identity(2) * 2.0), t(SymMatrix::identity(2)),
                            t(SymMatrix::identity(2)), grid),
              0.5, 1e-14);
}

TEST(AmbientInner, SymmetricBilinearPositive) {
  std::mt19937_64 rng(4);
  const QuadratureGrid grid = two_sensor_grid();
  const SymMatrix g0 = random_spd(rng, 2), a = random_sym(rng, 2), b = random_sym(rng, 2);
  const MetricField g([g0](const ParameterPoint& p) { return g0 * (1.0 + 0.3 * p.x); }, "lin");
  const TangentField h([a](const ParameterPoint& p) { return a * p.y; }, "a");
  const TangentField k([b](const ParameterPoint&) { return b; }, "b");
  const TangentField hk([a, b](const ParameterPoint& p) { return a * (2.0 * p.y) + b; }, "ab");
  const double hkv = ambient_inner(g, h, k, grid);
  EXPECT_NEAR(hkv, ambient_inner(g, k, h, grid), 1e-14);
  EXPECT_NEAR(ambient_inner(g, hk, k, grid),
              2.0 * hkv + ambient_inner(g, k, k, grid), 1e-12);
  EXPECT_GT(ambient_inner(g, h, h, grid), 0.0);
}

TEST(AmbientInner, VolumeFormReweightsNodes) {
  const QuadratureGrid grid = two_sensor_grid();
  const MetricField g = MetricField::constant(SymMatrix::identity(2) * 4.0);
  const TangentField h = TangentField::constant(SymMatrix::identity(2));
  double want = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i)
    want += grid.weights[i] * (2.0 / 16.0) * 4.0 / grid.densities[i];
  EXPECT_NEAR(ambient_inner(g, h, h, grid, Weighting::volume_form), want, 1e-12 * want);
}

// Second difference in t, used as an independent check of the ODE.
TEST(AmbientGeodesic, ClosedFormSatisfiesOde) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const SpdMatrix g0(random_spd(rng, 2));
    const SymMatrix v0 = random_sym(rng, 2) * 0.5;
    for (double t : {0.2, 0.5, 0.9}) {
      const double h = 1e-3;
      const Matrix gm = ambient_geodesic_point(g0, v0, t - h).matrix();
      const Matrix gc = ambient_geodesic_point(g0, v0, t).matrix();
      const Matrix gp = ambient_geodesic_point(g0, v0, t + h).matrix();
      const Matrix acc = (gp - 2.0 * gc + gm) / (h * h);
      const Matrix vel = (gp - gm) / (2.0 * h);
      const Matrix rhs = vel * gc.inverse() * vel;
      EXPECT_LT((acc - rhs).norm(), 1e-6 * std::max(1.0, rhs.norm()));
    }
    EXPECT_EQ(ambient_geodesic_point(g0, v0, 0.0), g0.sym());
  }
}

TEST(AmbientGeodesic, Rk4MatchesClosedFormWithFourthOrder) {
  std::mt19937_64 rng(12);
  const SpdMatrix g0(random_spd(rng, 3));
  const SymMatrix v0 = random_sym(rng, 3);
  auto err = [&](double dt) {
    const auto path = ambient_geodesic_rk4(g0, v0, 1.0, dt);
    double e = 0.0;
    for (const auto& s : path)
      e = std::max(e, (s.gamma - ambient_geodesic_point(g0, v0, s.t)).frobenius_norm());
    return e;
  };
  const double coarse = err(0.1), fine = err(0.05);
  EXPECT_LT(err(0.01), 1e-6);
  EXPECT_GT(coarse / fine, 12.0);
  EXPECT_LT(coarse / fine, 20.0);
}

TEST(AmbientGeodesic, VelocityAndEnergyDensity) {
  std::mt19937_64 rng(13);
  const SpdMatrix g0(random_spd(rng, 2));
  const SymMatrix v0 = random_sym(rng, 2);
  const double e0 = ambient_energy_density(g0.sym(), v0);
  for (double t : {0.25, 0.75}) {
    const SymMatrix g = ambient_geodesic_point(g0, v0, t);
    const SymMatrix v = ambient_geodesic_velocity(g0, v0, t);
    EXPECT_NEAR(ambient_energy_density(g, v), e0, 1e-10 * e0);
  }
  // Straight line through I along a diagonal: exp.
  const SymMatrix line = ambient_geodesic_point(SpdMatrix(SymMatrix::identity(2)),
                                                SymMatrix::diagonal({1.0, -2.0}), 0.5);
  EXPECT_NEAR(line(0, 0), std::exp(0.5), 1e-14);
  EXPECT_NEAR(line(1, 1), std::exp(-1.0), 1e-14);
}

TEST(AmbientGeodesic, PointwiseFields) {
  const MetricField g0 = MetricField::constant(SymMatrix::identity(2));
  const TangentField v0([](const ParameterPoint& p) { return SymMatrix::identity(2) * p.x; },
                        "x");
  const MetricField g = ambient_geodesic(g0, v0, 1.0);
  EXPECT_NEAR(g({0.5, 0.0})(0, 0), std::exp(0.5), 1e-14);
}

TEST(Divergence, HandValues) {
  const SymMatrix i2 = SymMatrix::identity(2);
  EXPECT_NEAR(kl_integrand(i2, i2 * 2.0), std::log(2.0) - 0.5, 1e-15);
  EXPECT_NEAR(kl_integrand(i2 * 2.0, i2), 1.0 - std::log(2.0), 1e-15);
  EXPECT_NEAR(kl_integrand(i2, i2 * 2.0), 0.193147, 1e-6);
  EXPECT_NEAR(kl_integrand(i2 * 2.0, i2), 0.306853, 1e-6);
  EXPECT_NEAR(mi_integrand(i2, i2 * 2.0), 2.0 * std::log(1.5) + 2.0 * std::log(0.75), 1e-15);
  EXPECT_NEAR(mi_integrand(i2, i2 * 2.0), 0.235566, 1e-6);
  EXPECT_EQ(kl_integrand(i2, i2), 0.0);
  EXPECT_EQ(mi_integrand(i2, i2), 0.0);
}

TEST(Divergence, MiFormsAgreeAndPrintedVariantIsHalf) {
  std::mt19937_64 rng(15);
  for (int trial = 0; trial < 20; ++trial) {
    const SymMatrix g = random_spd(rng, 2), h = random_spd(rng, 2);
    const double sym = mi_integrand(g, h, MiForm::symmetrized);
    EXPECT_NEAR(mi_integrand(g, h, MiForm::one_sided), sym, 1e-12);
    EXPECT_NEAR(mi_integrand(h, g), sym, 1e-12);
    // log|½(I + g⁻¹h)| + ½ log(|g|/|h|)
    const Matrix m = 0.5 * (Matrix(Matrix::Identity(2, 2)) + g.matrix().inverse() * h.matrix());
    const double printed =
        std::log(m.determinant()) +
        0.5 * std::log(g.matrix().determinant() / h.matrix().determinant());
    EXPECT_NEAR(printed, 0.5 * sym, 1e-12);
    EXPECT_GE(kl_integrand(g, h), 0.0);
    EXPECT_GE(sym, 0.0);
  }
}

TEST(Divergence, FieldIntegrals) {
  const QuadratureGrid grid = two_sensor_grid();
  const MetricField g = MetricField::constant(SymMatrix::identity(2));
  const MetricField h = MetricField::constant(SymMatrix::identity(2) * 2.0);
  EXPECT_NEAR(kl_divergence(g, h, grid), std::log(2.0) - 0.5, 1e-14);
  EXPECT_NEAR(divergence(DivergenceKind::mi, g, h, grid), mi_integrand(g({0, 0}), h({0, 0})),
              1e-14);
}

class HessianTest : public ::testing::TestWithParam<int> {};

TEST_P(HessianTest, BothDivergencesGiveHalfAmbientMetric) {
  std::mt19937_64 rng(100 + GetParam());
  const QuadratureGrid grid = two_sensor_grid();
  const SymMatrix a = random_spd(rng, 2), b = random_sym(rng, 2) * 0.1;
  const SymMatrix c = random_sym(rng, 2), d = random_sym(rng, 2);
  const MetricField g([a, b](const ParameterPoint& p) { return a + b * (p.x - 1.0); }, "g");
  const TangentField h([c, d](const ParameterPoint& p) { return c + d * (p.y - 1.0); }, "h");
  const double half = 0.5 * ambient_inner(g, h, h, grid);
  for (Slot slot : {Slot::first, Slot::second}) {
    const double kl = divergence_hessian(DivergenceKind::kl, g, h, grid, slot);
    const double mi = divergence_hessian(DivergenceKind::mi, g, h, grid, slot);
    EXPECT_NEAR(kl, half, 1e-6 * half);
    EXPECT_NEAR(mi, half, 1e-6 * half);
    EXPECT_NEAR(divergence_slope(DivergenceKind::kl, g, h, grid, slot), 0.0, 1e-8 * half);
    EXPECT_NEAR(divergence_slope(DivergenceKind::mi, g, h, grid, slot), 0.0, 1e-8 * half);
  }
}

INSTANTIATE_TEST_SUITE_P(Seeds, HessianTest, ::testing::Range(0, 8));

TEST(DivergenceHessian, SensorFields) {
  const QuadratureGrid grid = two_sensor_grid();
  const VonMisesModel m(2.0);
  const SensorConfiguration s({{0.0, 1.0}, {1.0, 0.0}});
  Vector u(4);
  u << 0.3, -0.1, 0.2, 0.5;
  const MetricField g = sensor_metric_field(s, m);
  const TangentField h = sensor_pushforward(s, m, u);
  const double half = 0.5 * ambient_inner(g, h, h, grid);
  EXPECT_NEAR(divergence_hessian(DivergenceKind::kl, g, h, grid), half, 1e-5 * half);
  EXPECT_NEAR(divergence_hessian(DivergenceKind::mi, g, h, grid), half, 1e-5 * half);
}

TEST(DivergenceHessian, StepLeavingConeIsReported) {
  const QuadratureGrid grid = two_sensor_grid();
  const MetricField g = MetricField::constant(SymMatrix::diagonal({1.0, 1e-6}));
  const TangentField h = TangentField::constant(SymMatrix::diagonal({0.0, 1.0}));
  EXPECT_THROW(divergence_hessian(DivergenceKind::kl, g, h, grid), StepTooLargeError);
  const TangentField zero = TangentField::constant(SymMatrix(2));
  EXPECT_EQ(divergence_hessian(DivergenceKind::mi, MetricField::constant(SymMatrix::identity(2)),
                               zero, grid),
            0.0);
}

TEST(SensorPushforward, MatchesDirectionalDerivative) {
  const VonMisesModel m(2.0);
  const SensorConfiguration s({{0.0, 1.0}, {1.0, 0.0}});
  Vector u(4);
  u << 1.0, 0.0, 0.0, -2.0;
  const SymMatrix want = fisher_derivative(s, {1.2, 0.9}, m, 0) -
                         2.0 * fisher_derivative(s, {1.2, 0.9}, m, 3);
  EXPECT_LT((sensor_pushforward(s, m, u)({1.2, 0.9}) - want).frobenius_norm(), 1e-15);
  EXPECT_THROW(sensor_pushforward(s, m, Vector(Vector::Ones(3))), DomainError);
}

}  // namespace
