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
#include <numbers>

#include <gtest/gtest.h>

#include "infogeo/planner.hpp"

namespace {

using namespace infogeo;

Scenario make_scenario(std::vector<Point2> sensors, int iterations = 3) {
  Scenario sc{{1, 1},
              Prior({1, 1}, SymMatrix::identity(2) * 0.01),
              VonMisesModel(2.0),
              SensorConfiguration(sensors),
              {},
              {},
              {}};
  sc.plan.speed = 0.05;
  sc.plan.replan_period = 1.0;
  sc.plan.ode_step = 0.01;
  sc.plan.iterations = iterations;
  sc.fisher.ridge = true;
  sc.fisher.ridge_epsilon = 1e-6;
  return sc;
}

const SensorConfiguration kTwoSensor({{0.0, 1.0}, {1.0, 0.0}});

TEST(InitialDirection, DominantAxis) {
  const InducedMetric q(SymMatrix::diagonal({4.0, 1.0, 1.0, 1.0}));
  const Vector u = initial_direction(kTwoSensor, q, 0.05, {1, 1});
  EXPECT_NEAR(u(0), 0.05, 1e-15);
  EXPECT_EQ(u.tail(3).norm(), 0.0);
}

TEST(InitialDirection, IsotropicTieGoesToFirstAxis) {
  const InducedMetric q(SymMatrix::identity(4));
  const Vector u = initial_direction(kTwoSensor, q, 0.05, {1, 1});
  EXPECT_NEAR(u(0), 0.05, 1e-15);
  EXPECT_NEAR(u.tail(3).norm(), 0.0, 1e-15);
}

TEST(InitialDirection, FirstSignClosesRange) {
  // Sensor 1 right of the target: +x would open range.
  const SensorConfiguration s({{2.0, 1.0}, {1.0, 0.0}});
  const InducedMetric q(SymMatrix::diagonal({4.0, 1.0, 1.0, 1.0}));
  EXPECT_NEAR(initial_direction(s, q, 0.05, {1, 1})(0), -0.05, 1e-15);
  // Motion tangential to both ranges: lexicographic sign.
  const InducedMetric qy(SymMatrix::diagonal({1.0, 4.0, 1.0, 1.0}));
  EXPECT_NEAR(initial_direction(s, qy, 0.05, {1, 1})(1), 0.05, 1e-15);
}

TEST(InitialDirection, ContinuityOverridesRange) {
  const InducedMetric q(SymMatrix::diagonal({4.0, 1.0, 1.0, 1.0}));
  Vector prev = Vector::Zero(4);
  prev(0) = -1.0;
  EXPECT_NEAR(initial_direction(kTwoSensor, q, 0.05, {1, 1}, &prev)(0), -0.05, 1e-15);
}

TEST(InitialDirection, ScaleInvariantAndSpeedBound) {
  const SymMatrix a{{3.0, 0.4, 0.1, 0.0},
                    {0.4, 2.0, 0.2, 0.3},
                    {0.1, 0.2, 1.5, 0.1},
                    {0.0, 0.3, 0.1, 1.0}};
  const Vector u = initial_direction(kTwoSensor, InducedMetric(a), 0.05, {1, 1});
  const Vector v = initial_direction(kTwoSensor, InducedMetric(a * 7.5), 0.05, {1, 1});
  EXPECT_LT((u - v).norm(), 1e-14);
  EXPECT_NEAR(max_platform_speed(u), 0.05, 1e-15);
  // Eigenvector of a.
  const Vector au = a.matrix() * u;
  EXPECT_NEAR(std::abs(au.normalized().dot(u.normalized())), 1.0, 1e-12);
}

TEST(NaturalGradient, GradientMatchesFiniteDifferenceOfExpectedLogDet) {
  const VonMisesModel m(2.0);
  const QuadratureGrid grid = build_grid(Prior({1, 1}, SymMatrix::identity(2) * 0.01));
  const SensorConfiguration s({{0.1, 1.2}, {1.3, -0.1}});
  const Vector g = information_gradient(s, m, grid);
  for (int i = 0; i < 4; ++i) {
    const double h = 1e-6;
    Vector a = s.coordinates(), b = s.coordinates();
    a(i) += h;
    b(i) -= h;
    const double fd = (expected_log_det(SensorConfiguration::from_coordinates(a), m, grid) -
                       expected_log_det(SensorConfiguration::from_coordinates(b), m, grid)) /
                      (2 * h);
    EXPECT_NEAR(g(i), fd, 1e-6 * std::max(1.0, std::abs(fd)));
  }
  const InducedMetric q = induced_metric(s, m, grid);
  const Vector u = natural_gradient_direction(s, q, 0.05, m, grid);
  EXPECT_NEAR(max_platform_speed(u), 0.05, 1e-15);
  const Vector qu = q.sym().matrix() * u;
  EXPECT_NEAR(qu.normalized().dot(g.normalized()), 1.0, 1e-12);
  // Ascent direction.
  EXPECT_GT(g.dot(u), 0.0);
}

TEST(NaturalGradient, TwoSensorMovesRadiallyInward) {
  const VonMisesModel m(2.0);
  const QuadratureGrid grid = build_grid(Prior({1, 1}, SymMatrix::identity(2) * 0.01));
  const Vector u = natural_gradient_direction(kTwoSensor, induced_metric(kTwoSensor, m, grid), 0.05, m, grid);
  EXPECT_GT(u(0), 0.0);
  EXPECT_GT(u(3), 0.0);
  EXPECT_LT(std::abs(u(1)), 0.02 * u(0));
  EXPECT_NEAR(u(0), u(3), 1e-12);
  EXPECT_NEAR(u(1), u(2), 1e-12);
}

TEST(Diagnostics, BearingSeparationHandValues) {
  EXPECT_NEAR(bearing_separation(kTwoSensor, {1, 1}), 0.5 * std::numbers::pi, 1e-15);
  EXPECT_NEAR(bearing_separation(SensorConfiguration({{0, 0.5}, {0.5, 0}}), {1, 1}),
              std::atan(2.0) - std::atan(0.5), 1e-12);
  EXPECT_NEAR(bearing_separation(SensorConfiguration({{0, 1}, {2, 1}}), {1, 1}),
              std::numbers::pi, 1e-15);
  EXPECT_EQ(bearing_separation(SensorConfiguration({{0, 1}}), {1, 1}), 0.0);
  EXPECT_NEAR(det_fisher_at(kTwoSensor, {1, 1}, VonMisesModel(2.0)), std::pow(1.3955493158, 2), 1e-8);
}

TEST(ReplanLoop, TinySpeedDoesNotMove) {
  Scenario sc = make_scenario({{0.0, 1.0}, {1.0, 0.0}}, 1);
  sc.plan.speed = 1e-9;
  const PlanTrace tr = replan_loop(sc);
  ASSERT_EQ(tr.status, PlanStatus::completed);
  ASSERT_EQ(tr.records.size(), 2u);
  EXPECT_LT((tr.records.back().sigma - kTwoSensor.coordinates()).norm(), 1e-8);
  EXPECT_EQ(tr.records.front().sigma, kTwoSensor.coordinates());
  EXPECT_EQ(tr.records.front().time, 0.0);
  EXPECT_EQ(tr.records.back().time, 1.0);
}

TEST(ReplanLoop, TwoSensorInformationGrowsAndIsDeterministic) {
  const Scenario sc = make_scenario({{0.0, 1.0}, {1.0, 0.0}}, 3);
  const PlanTrace a = replan_loop(sc);
  ASSERT_EQ(a.status, PlanStatus::completed) << a.message;
  ASSERT_EQ(a.records.size(), 4u);
  EXPECT_NEAR(a.records[0].bearing_sep, 0.5 * std::numbers::pi, 1e-15);
  for (std::size_t i = 1; i < a.records.size(); ++i) {
    EXPECT_GT(a.records[i].time, a.records[i - 1].time);
    EXPECT_GE(a.records[i].det_f_mean, a.records[i - 1].det_f_mean);
  }
  const PlanTrace b = replan_loop(sc);
  ASSERT_EQ(b.records.size(), a.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    EXPECT_EQ(a.records[i].sigma, b.records[i].sigma);
    EXPECT_EQ(a.records[i].direction, b.records[i].direction);
    EXPECT_EQ(a.records[i].q_eigenvalues, b.records[i].q_eigenvalues);
  }
  EXPECT_EQ(a.path.size(), 301u);
}

TEST(ReplanLoop, DiagnosticsRecomputableFromSigma) {
  const Scenario sc = make_scenario({{0.0, 1.0}, {1.0, 0.0}}, 1);
  const PlanTrace tr = replan_loop(sc);
  const QuadratureGrid grid = build_grid(sc.prior);
  for (const PlanRecord& r : tr.records) {
    const SensorConfiguration s = SensorConfiguration::from_coordinates(r.sigma);
    EXPECT_EQ(r.det_f_mean, det_fisher_at(s, {1, 1}, sc.model));
    EXPECT_EQ(r.bearing_sep, bearing_separation(s, {1, 1}));
    EXPECT_EQ(r.q_eigenvalues, sym_eigen(induced_metric_matrix(s, sc.model, grid, sc.fisher)).values);
  }
}

TEST(ReplanLoop, PerturbedStartSeparationIncreases) {
  const PlanTrace tr = replan_loop(make_scenario({{0.0, 0.5}, {0.5, 0.0}}, 3));
  ASSERT_EQ(tr.status, PlanStatus::completed) << tr.message;
  ASSERT_EQ(tr.records.size(), 4u);
  EXPECT_LT(tr.records[0].bearing_sep, 0.5 * std::numbers::pi);
  for (std::size_t i = 1; i < tr.records.size(); ++i)
    EXPECT_GT(tr.records[i].bearing_sep, tr.records[i - 1].bearing_sep);
}

TEST(ReplanLoop, EigenvectorRuleKeepsSignAndLosesInformationOnTwoSensor) {
  Scenario sc = make_scenario({{0.0, 1.0}, {1.0, 0.0}}, 2);
  sc.plan.rule = DirectionRule::dominant_eigenvector;
  const PlanTrace tr = replan_loop(sc);
  ASSERT_EQ(tr.status, PlanStatus::completed) << tr.message;
  ASSERT_EQ(tr.records.size(), 3u);
  EXPECT_GT(tr.records[0].direction.dot(tr.records[1].direction), 0.0);
  EXPECT_LT(range_rate(kTwoSensor, tr.records[0].direction, {1, 1}), 0.0);
  // The dominant direction is mostly tangential; information drops by the
  // second segment.
  EXPECT_LT(tr.records[2].det_f_mean, tr.records[1].det_f_mean);
}

TEST(ReplanLoop, GuardStopsBeforeEnteringDisk) {
  Scenario sc = make_scenario({{0.3, 1.0}, {1.0, 0.3}}, 5);
  sc.plan.guard_radius = 0.66;
  const PlanTrace tr = replan_loop(sc);
  EXPECT_EQ(tr.status, PlanStatus::guard_stop);
  const Vector& last = tr.records.back().sigma;
  EXPECT_GE(std::hypot(last(0) - 1.0, last(1) - 1.0), 0.66);
  EXPECT_LT(tr.records.back().time, 1.0);
  Scenario inside = sc;
  inside.plan.guard_radius = 0.8;
  EXPECT_THROW(replan_loop(inside), ValidationError);
}

TEST(ReplanLoop, GeometryErrorReturnsPartialTrace) {
  Scenario sc = make_scenario({{0.0, 1.0}, {0.0, 1.0}}, 2);
  sc.fisher.ridge = false;
  const PlanTrace tr = replan_loop(sc);
  EXPECT_EQ(tr.status, PlanStatus::geometry_error);
  EXPECT_TRUE(tr.records.empty());
  EXPECT_FALSE(tr.message.empty());
}

TEST(ReplanLoop, PriorHookIsCalledPerSegment) {
  const Scenario sc = make_scenario({{0.0, 1.0}, {1.0, 0.0}}, 2);
  int calls = 0;
  const PlanTrace tr = replan_loop(sc, [&](const Prior& p, const PlanRecord&) {
    ++calls;
    return p;
  });
  EXPECT_EQ(calls, 2);
  const PlanTrace plain = replan_loop(sc);
  EXPECT_EQ(tr.records.back().sigma, plain.records.back().sigma);
}

TEST(Scenario, Validation) {
  Scenario sc = make_scenario({{0.0, 1.0}, {1.0, 0.0}});
  sc.plan.speed = 0.0;
  EXPECT_THROW(sc.validate(), ValidationError);
  sc = make_scenario({{0.0, 1.0}, {1.0, 0.0}});
  sc.plan.replan_period = 0.001;
  EXPECT_THROW(sc.validate(), ValidationError);
  sc = make_scenario({{0.0, 1.0}, {1.0, 0.0}});
  sc.plan.iterations = 0;
  EXPECT_THROW(sc.validate(), ValidationError);
}

TEST(Extrapolate, StraightLineProperties) {
  PlanTrace tr;
  PlanRecord r;
  r.time = 2.0;
  r.sigma = kTwoSensor.coordinates();
  r.direction = Vector(4);
  r.direction << 0.03, 0.04, 0.05, 0.0;
  tr.records.push_back(r);
  const auto zero = extrapolate(tr, 0.0);
  EXPECT_EQ(zero.back(), r.sigma);
  const auto pts = extrapolate(tr, 2.0, 4);
  ASSERT_EQ(pts.size(), 5u);
  EXPECT_NEAR(std::hypot(pts.back()(0) - r.sigma(0), pts.back()(1) - r.sigma(1)), 0.1, 1e-15);
  EXPECT_NEAR(std::hypot(pts.back()(2) - r.sigma(2), pts.back()(3) - r.sigma(3)), 0.1, 1e-15);
  for (int j = 0; j < 2; ++j)
    for (const Vector& p : pts) {
      const double cross = (p(2 * j) - r.sigma(2 * j)) * r.direction(2 * j + 1) -
                           (p(2 * j + 1) - r.sigma(2 * j + 1)) * r.direction(2 * j);
      EXPECT_NEAR(cross, 0.0, 1e-15);
    }
  EXPECT_THROW(extrapolate(PlanTrace{}, 1.0), DomainError);
}

}  // namespace
