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


// Induced metric on sensor space and one planning step.

#include <iostream>

#include "infogeo/infogeo.hpp"

int main() {
  using namespace infogeo;
  const Scenario sc = parse_scenario(kTwoSensorScenarioText);
  const QuadratureGrid grid = build_grid(sc.prior);
  const InducedMetric q = induced_metric(sc.initial, sc.model, grid, sc.fisher);
  const SymEigen eig = sym_eigen(q.sym());
  std::cout << "Q eigenvalues: " << eig.values.transpose() << "\n";
  const Vector u = natural_gradient_direction(sc.initial, q, sc.plan.speed, sc.model, grid,
                                              sc.fisher);
  std::cout << "natural-gradient direction: " << u.transpose() << "\n";
  const Vector e = initial_direction(sc.initial, q, sc.plan.speed, sc.prior.mean());
  std::cout << "dominant-eigenvector direction: " << e.transpose() << "\n";
}
