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


// Closed-form geodesic in the space of metrics against RK4.

#include <iostream>

#include "infogeo/infogeo.hpp"

int main() {
  using namespace infogeo;
  const SpdMatrix g0(SymMatrix{{2.0, 0.3}, {0.3, 1.0}});
  const SymMatrix v0{{0.5, -0.2}, {-0.2, 0.1}};
  const auto rk = ambient_geodesic_rk4(g0, v0, 1.0, 0.01);
  for (std::size_t k = 0; k < rk.size(); k += 25) {
    const SymMatrix exact = ambient_geodesic_point(g0, v0, rk[k].t);
    std::cout << "t=" << rk[k].t << "  gamma=[" << exact(0, 0) << ", " << exact(0, 1) << "; "
              << exact(1, 1) << "]  |rk4 - exact| = "
              << (rk[k].gamma - exact).frobenius_norm() << "\n";
  }
}
