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

#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "helpers.hpp"
#include "srnf/inversion.hpp"
#include "srnf/synth.hpp"

using namespace srnf;

namespace {

bool monotone(const InversionResult& r) {
  for (const auto& stage : r.trace) {
    for (std::size_t k = 1; k < stage.reports.size(); ++k) {
      if (stage.reports[k].energy > stage.reports[k - 1].energy) return false;
    }
  }
  return true;
}

SurfaceGrid undo_alignment(const InversionResult& r) {
  return transform_surface(r.alignment.rotation.inverse(),
                           RigidReparam{r.alignment.reparam.rotation.inverse()}, r.surface);
}

}  // namespace

TEST_CASE("an exact zero converges at iteration zero") {
  const GridSpec spec(16, 16);
  const auto f0 = synth::ellipsoid(spec, 1.0, 0.8, 1.2);
  InversionConfig cfg;
  const auto r = invert_single(srnf_map(f0), f0, spherical_harmonic_basis(spec, 4), cfg);
  REQUIRE(r.trace.size() == 1);
  CHECK(r.trace[0].reports.size() == 1);
  CHECK(r.converged);
  CHECK(r.final_energy < 1e-12);
}

TEST_CASE("sphere to ellipsoid with a degree 8 basis") {
  const GridSpec spec(32, 32);
  const auto target = rescale_to_unit_area(synth::ellipsoid(spec, 1.0, 0.8, 1.4));
  const auto q = srnf_map(target);
  InversionConfig cfg;
  for (auto rule : {StepRule::barzilai_borwein, StepRule::normalized}) {
    cfg.step_rule = rule;
    const auto r = invert_single(q, area_matched_sphere(q), spherical_harmonic_basis(spec, 8), cfg);
    CHECK(r.final_energy < 1e-6 * l2_inner(q, q));
    CHECK(centered_rms_distance(undo_alignment(r), target) < 1e-2);
    CHECK(monotone(r));
    CHECK(std::abs(centroid(r.surface).norm()) < 1e-12);
  }
}

TEST_CASE("inverting the SRNF of a result from that result is immediate") {
  const GridSpec spec(16, 16);
  const auto target = synth::bumpy_sphere(spec, 0.2);
  InversionConfig cfg;
  const auto basis = spherical_harmonic_basis(spec, 5);
  const auto r = invert_single(srnf_map(target), synth::sphere(spec), basis, cfg);
  const auto again = invert_single(srnf_map(r.surface), r.surface, basis, cfg);
  CHECK(again.trace[0].reports.size() == 1);
  CHECK(rms_distance(again.surface, r.surface) < 1e-12);
}

TEST_CASE("multiscale and multires pipelines") {
  const GridSpec spec(32, 32);
  InversionConfig cfg;
  SUBCASE("identical ladder is trivial") {
    const auto f0 = synth::sphere(spec);
    const auto q = srnf_map(f0);
    const auto r = invert_multiscale(build_scale_ladder(q, 3, q), f0, level_basis(spec, cfg), cfg);
    CHECK(r.trace.size() == 3);
    CHECK(r.final_energy < 1e-12);
  }
  SUBCASE("unit sphere is a fixed point of the pyramid") {
    const auto f = synth::sphere(GridSpec(64, 64));
    std::vector<SrnfField> qp;
    for (const auto& level : build_pyramid(f, 4).levels) qp.push_back(srnf_map(level));
    const auto r = invert_multires(qp, synth::sphere(qp[0].spec()), cfg);
    CHECK(r.final_energy < 1e-10);
    CHECK(r.surface.spec() == GridSpec(64, 64));
    CHECK(monotone(r));
  }
  SUBCASE("levels must double") {
    std::vector<SrnfField> bad{SrnfField(GridSpec(8, 8)), SrnfField(GridSpec(32, 32))};
    CHECK_THROWS_AS(invert_multires(bad, SurfaceGrid(GridSpec(8, 8)), cfg), Error);
  }
  SUBCASE("mismatched basis") {
    const auto f0 = synth::sphere(spec);
    CHECK_THROWS_AS(invert_single(srnf_map(f0), f0, spherical_harmonic_basis(GridSpec(16, 16), 3), cfg),
                    Error);
  }
}

TEST_CASE("facade counts one inversion per call") {
  const GridSpec spec(32, 32);
  const auto q = srnf_map(synth::ellipsoid(spec, 1.0, 1.0, 1.3));
  InversionConfig cfg;
  cfg.n_levels = 2;
  cfg.n_scales = 2;
  const auto before = inversion_count();
  const auto r = invert(q, cfg);
  CHECK(inversion_count() == before + 1);
  CHECK(r.trace.size() == 3);
  CHECK(r.final_energy < 1e-6 * l2_inner(q, q));
}

TEST_CASE("surface-pyramid targets") {
  const GridSpec spec(32, 32);
  const auto f = rescale_to_unit_area(synth::bent_capsule(spec, 1.0));
  const auto qp = srnf_pyramid(f, 3);
  REQUIRE(qp.size() == 3);
  CHECK(qp.front().spec() == GridSpec(8, 8));
  const auto q = srnf_map(f);
  CHECK(std::equal(qp.back().values().begin(), qp.back().values().end(), q.values().begin()));

  InversionConfig cfg;
  cfg.n_levels = 3;
  const auto before = inversion_count();
  const auto r = invert_target_surface(f, area_matched_sphere(q), cfg);
  CHECK(inversion_count() == before + 1);
  CHECK(monotone(r));
  CHECK(r.final_energy < 1e-3 * l2_inner(q, q));
  CHECK(centered_rms_distance(surface_in_target_frame(r), f) < 1e-2);
}

TEST_CASE("star-shaped inverse") {
  const GridSpec spec(64, 64);
  SUBCASE("unit sphere") {
    const auto s = invert_star_shaped(srnf_map(synth::sphere(spec)));
    CHECK(s.star_like);
    CHECK(rms_distance(s.surface, synth::sphere(spec)) < 1e-6);
  }
  SUBCASE("axisymmetric radial function") {
    const auto f = synth::bumpy_sphere(spec, 0.3);
    const auto s = invert_star_shaped(srnf_map(f));
    CHECK(rms_distance(s.surface, f) < 1e-3);
  }
  SUBCASE("radial normal component equals rho squared") {
    const auto f = synth::star(spec, [](const Vec3& e) { return 1.0 + 0.2 * e.x() * e.y() + 0.1 * e.z(); });
    const auto q = srnf_map(f);
    double worst = 0.0;
    for (int i = 0; i < spec.n_u(); ++i) {
      for (int j = 0; j < spec.n_v(); ++j) {
        const Vec3 e = sphere_direction(spec.u(i), spec.v(j));
        const double rho = f(i, j).norm();
        // |q|·qʳ = nʳ for the intrinsic normal density.
        worst = std::max(worst, std::abs(q(i, j).norm() * q(i, j).dot(e) - rho * rho) / (rho * rho));
      }
    }
    CHECK(worst < 1e-6);
  }
  SUBCASE("inward normals are clamped and flagged") {
    SrnfField q = srnf_map(synth::sphere(spec));
    for (int i = 0; i < spec.n_u() / 4; ++i) q(i, spec.n_v() / 2) *= -1.0;
    const auto s = invert_star_shaped(q);
    CHECK_FALSE(s.star_like);
    CHECK(s.clamped_fraction == doctest::Approx(16.0 / 4096.0));
    CHECK(s.surface.all_finite());
  }
}
