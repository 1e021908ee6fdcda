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

#include <functional>
#include <string>
#include <vector>

#include "srnf/grid.hpp"

/// Analytic test surfaces in their canonical parameterization over the
/// (u, v) grid; e = e(u, v) is the unit direction.
namespace srnf::synth {

/// r·e
SurfaceGrid sphere(const GridSpec& spec, double radius = 1.0);
/// diag(a, b, c)·e
SurfaceGrid ellipsoid(const GridSpec& spec, double a, double b, double c);
/// (r·eₓ(1 + κe_z²), r·e_y(1 + κe_z²), (r + h)·e_z): a rounded cylinder of
/// radius ≈ r and half-length ≈ r + h along z.
SurfaceGrid capsule(const GridSpec& spec, double radius = 0.5, double half_length = 1.0,
                    double flare = 0.5);
/// The capsule bent in the xz-plane along a circular arc so that its axis
/// turns by `bend_angle` radians; bend_angle = 0 is the capsule itself.
SurfaceGrid bent_capsule(const GridSpec& spec, double bend_angle, double radius = 0.5,
                         double half_length = 1.0, double flare = 0.5);
/// ρ(e)·e for a caller-supplied positive radial function.
SurfaceGrid star(const GridSpec& spec, const std::function<double(const Vec3&)>& rho);
/// ρ = 1 + a·cos v
SurfaceGrid bumpy_sphere(const GridSpec& spec, double amplitude = 0.3);
/// ρ = r₀(1 + A·Σ_k exp(κ(⟨e, d_k⟩ − 1))) for unit limb directions d_k.
SurfaceGrid limbed_blob(const GridSpec& spec, const std::vector<Vec3>& directions,
                        double base_radius = 0.6, double amplitude = 1.2, double sharpness = 8.0);
/// Rotates each point about z by rate·(x² + y²); a diffeomorphism of R³,
/// so embedded surfaces stay embedded.
SurfaceGrid twist(SurfaceGrid f, double rate);
/// limbed_blob(r₀ = 0.6) with the four tetrahedral directions, then twisted so
/// the limbs curl and the surface is no longer star-shaped (twist > 0).
SurfaceGrid four_limb(const GridSpec& spec, double amplitude = 2.0, double sharpness = 12.0,
                      double twist_rate = 1.0);
/// limbed_blob(r₀ = 0.7) with eight limbs spread around the lower hemisphere.
SurfaceGrid octopus(const GridSpec& spec, double amplitude = 1.0, double sharpness = 10.0,
                    double twist_rate = 0.0);

/// Names accepted by by_name.
std::vector<std::string> shape_names();
/// Builds a named family; `params` are positional overrides of the defaults.
SurfaceGrid by_name(const std::string& name, const GridSpec& spec, const std::vector<double>& params);

}  // namespace srnf::synth
