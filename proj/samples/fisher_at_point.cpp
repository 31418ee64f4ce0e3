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


// Fisher information of two bearings sensors at a few emitter positions.

#include <iostream>

#include "infogeo/infogeo.hpp"

int main() {
  using namespace infogeo;
  const VonMisesModel model(2.0);
  const SensorConfiguration sensors({{0.0, 1.0}, {1.0, 0.0}});
  std::cout << "kappa A(kappa) = " << format_significant(model.information_scale()) << "\n";
  for (const ParameterPoint theta : {ParameterPoint{1.0, 1.0}, ParameterPoint{0.5, 0.5},
                                     ParameterPoint{2.0, 1.5}}) {
    const SymMatrix f = fisher_information(sensors, theta, model);
    std::cout << "theta (" << theta.x << ", " << theta.y << "): F = [" << f(0, 0) << ", "
              << f(0, 1) << "; " << f(1, 0) << ", " << f(1, 1)
              << "], det = " << f.matrix().determinant() << "\n";
  }
  const auto est = fisher_mc_estimate(sensors, {1.0, 1.0}, model, 200000, 1);
  std::cout << "Monte-Carlo at (1, 1): [" << est.mean(0, 0) << ", " << est.mean(0, 1) << "; "
            << est.mean(1, 0) << ", " << est.mean(1, 1) << "] +- " << est.standard_error(0, 0)
            << "\n";
}
