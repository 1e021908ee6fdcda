// Copyright 2026 The srnf Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Geometry>

#include "srnf/grid.hpp"

namespace srnf::testing {

inline constexpr double kPi = std::numbers::pi;

inline Mat3 rotation_from_axis_angle(Vec3 axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

inline Mat3 random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Eigen::Quaterniond q(n(rng), n(rng), n(rng), n(rng));
  q.normalize();
  return q.toRotationMatrix();
}

inline TangentField smooth_field(const GridSpec& spec, double scale = 1.0) {
  TangentField w(spec);
  for (int i = 0; i < spec.n_u(); ++i) {
    for (int j = 0; j < spec.n_v(); ++j) {
      const Vec3 e = sphere_direction(spec.u(i), spec.v(j));
      w(i, j) = scale * Vec3(0.3 * e.x() * e.y() + 0.1 * e.z(), 0.2 * e.z() * e.z() - 0.05 * e.x(),
                             0.15 * e.x() * e.y() * e.z() + 0.07 * e.y());
    }
  }
  return w;
}

}  // namespace srnf::testing
