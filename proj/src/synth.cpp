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

#include "srnf/synth.hpp"

#include <cmath>

namespace srnf::synth {
namespace {

template <class F>
SurfaceGrid from_direction(const GridSpec& spec, F&& map) {
  SurfaceGrid f(spec);
  for (int i = 0; i < spec.n_u(); ++i) {
    for (int j = 0; j < spec.n_v(); ++j) f(i, j) = map(sphere_direction(spec.u(i), spec.v(j)));
  }
  return f;
}

double param(const std::vector<double>& p, std::size_t k, double fallback) {
  return k < p.size() ? p[k] : fallback;
}

}  // namespace

SurfaceGrid sphere(const GridSpec& spec, double radius) {
  return from_direction(spec, [&](const Vec3& e) { return Vec3(radius * e); });
}

SurfaceGrid ellipsoid(const GridSpec& spec, double a, double b, double c) {
  return from_direction(spec, [&](const Vec3& e) { return Vec3(a * e.x(), b * e.y(), c * e.z()); });
}

SurfaceGrid capsule(const GridSpec& spec, double radius, double half_length, double flare) {
  return from_direction(spec, [&](const Vec3& e) {
    const double s = 1.0 + flare * e.z() * e.z();
    return Vec3(radius * s * e.x(), radius * s * e.y(), (radius + half_length) * e.z());
  });
}

SurfaceGrid bent_capsule(const GridSpec& spec, double bend_angle, double radius, double half_length,
                         double flare) {
  SurfaceGrid f = capsule(spec, radius, half_length, flare);
  if (bend_angle == 0.0) return f;
  // Axis length 2(r + h) maps onto an arc of angle bend_angle.
  const double k = bend_angle / (2.0 * (radius + half_length));
  const double rb = 1.0 / k;
  for (std::size_t p = 0; p < f.size(); ++p) {
    const Vec3 x = f[p];
    const double phi = k * x.z();
    f[p] = Vec3(rb - (rb - x.x()) * std::cos(phi), x.y(), (rb - x.x()) * std::sin(phi));
  }
  return f;
}

SurfaceGrid star(const GridSpec& spec, const std::function<double(const Vec3&)>& rho) {
  return from_direction(spec, [&](const Vec3& e) { return Vec3(rho(e) * e); });
}

SurfaceGrid bumpy_sphere(const GridSpec& spec, double amplitude) {
  return star(spec, [&](const Vec3& e) { return 1.0 + amplitude * e.z(); });
}

SurfaceGrid limbed_blob(const GridSpec& spec, const std::vector<Vec3>& directions,
                        double base_radius, double amplitude, double sharpness) {
  std::vector<Vec3> d;
  for (const auto& x : directions) d.push_back(x.normalized());
  return star(spec, [&](const Vec3& e) {
    double bumps = 0.0;
    for (const auto& x : d) bumps += std::exp(sharpness * (e.dot(x) - 1.0));
    return base_radius * (1.0 + amplitude * bumps);
  });
}

SurfaceGrid twist(SurfaceGrid f, double rate) {
  if (rate == 0.0) return f;
  for (std::size_t k = 0; k < f.size(); ++k) {
    const Vec3 x = f[k];
    const double a = rate * (x.x() * x.x() + x.y() * x.y());
    f[k] = Vec3(std::cos(a) * x.x() - std::sin(a) * x.y(), std::sin(a) * x.x() + std::cos(a) * x.y(), x.z());
  }
  return f;
}

SurfaceGrid four_limb(const GridSpec& spec, double amplitude, double sharpness, double twist_rate) {
  const std::vector<Vec3> tetra{{1, 1, 1}, {1, -1, -1}, {-1, 1, -1}, {-1, -1, 1}};
  return twist(limbed_blob(spec, tetra, 0.6, amplitude, sharpness), twist_rate);
}

SurfaceGrid octopus(const GridSpec& spec, double amplitude, double sharpness, double twist_rate) {
  std::vector<Vec3> limbs;
  for (int k = 0; k < 8; ++k) {
    const double a = 2.0 * std::acos(-1.0) * (k + 0.25) / 8.0;
    limbs.emplace_back(std::cos(a), std::sin(a), -0.45);
  }
  return twist(limbed_blob(spec, limbs, 0.7, amplitude, sharpness), twist_rate);
}

std::vector<std::string> shape_names() {
  return {"sphere", "ellipsoid", "capsule", "bent_capsule", "bumpy_sphere", "four_limb", "octopus"};
}

SurfaceGrid by_name(const std::string& name, const GridSpec& spec, const std::vector<double>& p) {
  if (name == "sphere") return sphere(spec, param(p, 0, 1.0));
  if (name == "ellipsoid") return ellipsoid(spec, param(p, 0, 1.0), param(p, 1, 1.0), param(p, 2, 2.0));
  if (name == "capsule") return capsule(spec, param(p, 0, 0.5), param(p, 1, 1.0), param(p, 2, 0.5));
  if (name == "bent_capsule") {
    return bent_capsule(spec, param(p, 0, 1.5), param(p, 1, 0.5), param(p, 2, 1.0), param(p, 3, 0.5));
  }
  if (name == "bumpy_sphere") return bumpy_sphere(spec, param(p, 0, 0.3));
  if (name == "four_limb") {
    return four_limb(spec, param(p, 0, 2.0), param(p, 1, 12.0), param(p, 2, 1.0));
  }
  if (name == "octopus") return octopus(spec, param(p, 0, 1.0), param(p, 1, 10.0), param(p, 2, 0.0));
  throw Error(ErrorCode::kInvalidArgument, "unknown shape '" + name + "'");
}

}  // namespace srnf::synth
