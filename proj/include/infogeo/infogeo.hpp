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


// Convenience header pulling in the whole library.

#ifndef INFOGEO_INFOGEO_HPP
#define INFOGEO_INFOGEO_HPP

#include "infogeo/ambient.hpp"
#include "infogeo/checks.hpp"
#include "infogeo/errors.hpp"
#include "infogeo/ode.hpp"
#include "infogeo/parallel.hpp"
#include "infogeo/planner.hpp"
#include "infogeo/prior.hpp"
#include "infogeo/scenario_io.hpp"
#include "infogeo/sensor_manifold.hpp"
#include "infogeo/sensor_model.hpp"
#include "infogeo/spd.hpp"

#endif  // INFOGEO_INFOGEO_HPP
