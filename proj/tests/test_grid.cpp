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
#include "srnf/grid.hpp"

using namespace srnf;
using srnf::testing::kPi;

TEST_CASE("grid spec validation and index layout") {
  CHECK_THROWS_AS(GridSpec(3, 8), Error);
  CHECK_THROWS_AS(GridSpec(8, 7), Error);
  const GridSpec s(16, 8);
  CHECK(s.size() == 128);
  CHECK(s.index(2, 3) == 2 * 8 + 3);
  CHECK(s.u(4) == doctest::Approx(2 * kPi * 4 / 16));
  CHECK(s.v(0) == doctest::Approx(kPi * 0.5 / 8));
  CHECK(s.halvable());
  CHECK(s.halved() == GridSpec(8, 4));
  CHECK_FALSE(GridSpec(12, 6).halvable());
}

TEST_CASE("quadrature integrates polynomials in cos v exactly") {
  for (int n : {8, 16, 32, 64}) {
    const GridSpec spec(n, n);
    const auto& w = quadrature_weights(spec);
    double total = 0.0;
    for (double x : w) {
      CHECK(x > 0.0);
      total += x;
    }
    CHECK(total == doctest::Approx(4 * kPi).epsilon(1e-14));
    for (int k = 0; k < n; ++k) {
      double s = 0.0;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) s += w[spec.index(i, j)] * std::pow(std::cos(spec.v(j)), k);
      }
      // ∫ cos^k v dA = 4π/(k+1) for even k, 0 otherwise.
      const double exact = (k % 2 == 0) ? 4 * kPi / (k + 1) : 0.0;
      CHECK(s == doctest::Approx(exact).epsilon(1e-12).scale(1.0));
    }
  }
}

TEST_CASE("unit sphere derivatives and normal match closed forms") {
  for (auto diff : {Differentiation::spectral, Differentiation::finite_difference}) {
    const GridSpec spec(32, 32, diff);
    const double tol = diff == Differentiation::spectral ? 1e-12 : 2e-2;
    const auto f = sphere_points(spec);
    const auto d = partial_derivatives(f);
    const auto n = normal_field(d);
    double err_u = 0.0, err_v = 0.0, err_n = 0.0;
    for (int i = 0; i < spec.n_u(); ++i) {
      for (int j = 0; j < spec.n_v(); ++j) {
        const double u = spec.u(i), v = spec.v(j);
        const Vec3 fu(-std::sin(u) * std::sin(v), std::cos(u) * std::sin(v), 0.0);
        const Vec3 fv(std::cos(u) * std::cos(v), std::sin(u) * std::cos(v), -std::sin(v));
        err_u = std::max(err_u, (d.du(i, j) - fu).norm());
        err_v = std::max(err_v, (d.dv(i, j) - fv).norm());
        err_n = std::max(err_n, (n(i, j) - std::sin(v) * sphere_direction(u, v)).norm());
      }
    }
    CHECK(err_u < tol);
    CHECK(err_v < tol);
    CHECK(err_n < tol);
  }
}

TEST_CASE("derivative transposes are adjoint to the operators") {
  const GridSpec spec(12, 10);
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  std::vector<Vec3> a(spec.size()), b(spec.size()), da(spec.size()), dtb(spec.size());
  for (auto& x : a) x = Vec3(g(rng), g(rng), g(rng));
  for (auto& x : b) x = Vec3(g(rng), g(rng), g(rng));
  for (int which = 0; which < 2; ++which) {
    std::fill(dtb.begin(), dtb.end(), Vec3::Zero());
    if (which == 0) {
      apply_du(spec, a, da);
      accumulate_du_transpose(spec, b, dtb);
    } else {
      apply_dv(spec, a, da);
      accumulate_dv_transpose(spec, b, dtb);
    }
    double lhs = 0.0, rhs = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      lhs += da[k].dot(b[k]);
      rhs += a[k].dot(dtb[k]);
    }
    CHECK(lhs == doctest::Approx(rhs).epsilon(1e-11));
  }
}

TEST_CASE("surface area of a prolate spheroid") {
  const GridSpec spec(64, 64);
  SurfaceGrid f = sphere_points(spec);
  for (std::size_t k = 0; k < f.size(); ++k) f[k].z() *= 2.0;
  // Closed form for semi-axes a = 1, c = 2: 2πa²(1 + (c/(a e)) asin e).
  const double e = std::sqrt(1.0 - 1.0 / 4.0);
  const double exact = 2 * kPi * (1.0 + (2.0 / e) * std::asin(e));
  CHECK(surface_area(f) == doctest::Approx(exact).epsilon(1e-10));
  const auto unit = rescale_to_unit_area(f);
  CHECK(surface_area(unit) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("centroid follows translation and zero area is rejected") {
  const GridSpec spec(16, 16);
  const Vec3 c(0.5, -1.25, 2.0);
  const auto f = translate(sphere_points(spec, 2.0), c);
  CHECK((centroid(f) - c).norm() < 1e-12);
  CHECK(centroid(center(f)).norm() < 1e-12);
  CHECK_THROWS_AS(rescale_to_unit_area(SurfaceGrid(spec)), Error);
}

TEST_CASE("rms distance of concentric spheres") {
  const GridSpec spec(16, 16);
  const auto a = sphere_points(spec, 1.0);
  const auto b = sphere_points(spec, 1.5);
  CHECK(rms_distance(a, b) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(centered_rms_distance(translate(a, Vec3(1, 2, 3)), b) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("mismatched grids are rejected") {
  TangentField a(GridSpec(8, 8));
  TangentField b(GridSpec(8, 12));
  CHECK_THROWS_AS(a += b, Error);
  try {
    (void)weighted_inner(a, b);
    FAIL("expected throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kSpecMismatch);
  }
}
