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

#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "srnf/basis.hpp"
#include "srnf/srnf.hpp"

using namespace srnf;
using srnf::testing::kPi;
using srnf::testing::smooth_field;

namespace {

SurfaceGrid ellipsoid(const GridSpec& spec, double a, double b, double c) {
  SurfaceGrid f = sphere_points(spec);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = Vec3(a * f[k].x(), b * f[k].y(), c * f[k].z());
  return f;
}

}  // namespace

TEST_CASE("srnf of the unit sphere is the radial direction") {
  const GridSpec spec(32, 32);
  const auto q = srnf_map(sphere_points(spec));
  const auto e = sphere_points(spec);
  double worst = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) worst = std::max(worst, (q[k] - e[k]).norm());
  CHECK(worst < 1e-12);
  CHECK(l2_norm(q) * l2_norm(q) == doctest::Approx(4 * kPi).epsilon(1e-12));
}

TEST_CASE("squared srnf norm equals surface area") {
  const GridSpec spec(48, 48);
  const auto f = ellipsoid(spec, 1.0, 1.0, 2.0);
  const auto q = srnf_map(f);
  CHECK(l2_inner(q, q) == doctest::Approx(surface_area(f)).epsilon(1e-12));
}

TEST_CASE("srnf scales with degree one and ignores translation") {
  const GridSpec spec(32, 32);
  const auto f = ellipsoid(spec, 1.0, 0.7, 1.3) + smooth_field(spec);
  const auto q = srnf_map(f);
  const auto q2 = srnf_map(2.5 * f);
  const auto qt = srnf_map(translate(f, Vec3(0.3, -2.0, 1.0)));
  double e_scale = 0.0, e_trans = 0.0;
  for (std::size_t k = 0; k < q.size(); ++k) {
    e_scale = std::max(e_scale, (q2[k] - 2.5 * q[k]).norm());
    e_trans = std::max(e_trans, (qt[k] - q[k]).norm());
  }
  CHECK(e_scale < 1e-12);
  CHECK(e_trans < 1e-12);
}

TEST_CASE("differential agrees with central differences of Q") {
  const GridSpec spec(24, 24);
  const auto f = ellipsoid(spec, 1.0, 0.8, 1.2);
  const auto b = smooth_field(spec);
  const SrnfLinearization lin(f);
  const auto dq = lin.differential(b);
  const auto dq2 = lin.differential_unstabilized(b);
  const double h = 1e-5;
  const auto qp = srnf_map(f + h * b);
  const auto qm = srnf_map(f + (-h) * b);
  double err = 0.0, err_forms = 0.0, scale = 0.0;
  for (std::size_t k = 0; k < dq.size(); ++k) {
    const Vec3 fd = (qp[k] - qm[k]) / (2 * h);
    err = std::max(err, (fd - dq[k]).norm());
    err_forms = std::max(err_forms, (dq2[k] - dq[k]).norm());
    scale = std::max(scale, fd.norm());
  }
  CHECK(err < 1e-7 * scale);
  CHECK(err_forms < 1e-12 * scale);
}

TEST_CASE("adjoint satisfies the dot-product identity") {
  const GridSpec spec(16, 12);
  const auto f = ellipsoid(spec, 1.1, 0.9, 1.0) + smooth_field(spec, 0.5);
  const SrnfLinearization lin(f);
  const auto b = smooth_field(spec, 2.0) + field_cast<TangentTag>(sphere_points(spec, 0.3));
  SrnfField z(spec);
  for (int i = 0; i < spec.n_u(); ++i) {
    for (int j = 0; j < spec.n_v(); ++j) {
      z(i, j) = Vec3(std::cos(spec.u(i)), std::sin(2 * spec.v(j)), 0.2 * i - 0.1 * j);
    }
  }
  const auto g = lin.adjoint(z);
  const auto dq = lin.differential(b);
  double lhs = 0.0;
  for (std::size_t k = 0; k < b.size(); ++k) lhs += g[k].dot(b[k]);
  CHECK(lhs == doctest::Approx(l2_inner(z, dq)).epsilon(1e-11));
}

TEST_CASE("energy gradient matches direct evaluation and finite differences") {
  const GridSpec spec(24, 24);
  const auto basis = spherical_harmonic_basis(spec, 3);
  const auto f0 = sphere_points(spec);
  const auto q = srnf_map(ellipsoid(spec, 1.2, 0.9, 1.1));
  VecX alpha = VecX::Zero(static_cast<Eigen::Index>(basis.size()));
  for (Eigen::Index j = 0; j < alpha.size(); ++j) alpha[j] = 0.02 * std::sin(1.0 + j);
  const VecX g = energy_gradient(f0, alpha, q, basis);
  const VecX gd = energy_gradient_direct(f0, alpha, q, basis);
  CHECK((g - gd).norm() < 1e-10 * gd.norm());
  const double h = 1e-6;
  for (Eigen::Index j : {0, 2, 7, 20, 33, 47}) {
    VecX ap = alpha, am = alpha;
    ap[j] += h;
    am[j] -= h;
    const double ep = inversion_energy(f0 + basis.expand(ap), q).energy;
    const double em = inversion_energy(f0 + basis.expand(am), q).energy;
    CHECK(std::abs(g[j] - (ep - em) / (2 * h)) < 1e-6 * (1.0 + std::abs(g[j])));
  }
}

TEST_CASE("normal clamp keeps degenerate surfaces finite") {
  const GridSpec spec(16, 16);
  SurfaceGrid f = sphere_points(spec);
  for (int i = 0; i < spec.n_u(); ++i) f(i, 0) = f(i, 1);
  const SrnfLinearization lin(f);
  CHECK(lin.value().all_finite());
  CHECK(lin.adjoint(lin.value()).all_finite());
}
