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

#include "srnf/inversion.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "srnf/spherical_harmonics.hpp"

namespace srnf {
namespace {

std::atomic<std::uint64_t> g_inversions{0};
thread_local int g_depth = 0;

/// Counts the outermost inversion entry on this thread.
class CountScope {
 public:
  CountScope() {
    if (g_depth++ == 0) ++g_inversions;
  }
  ~CountScope() { --g_depth; }
  CountScope(const CountScope&) = delete;
  CountScope& operator=(const CountScope&) = delete;
};

double squared(const SrnfField& r) { return l2_inner(r, r); }

struct StageOutcome {
  SurfaceGrid surface;
  StageTrace trace;
  double energy;
  Alignment alignment;
};

StageOutcome run_stage(const SrnfField& q, const SurfaceGrid& f0, const BasisSet& basis,
                       const InversionConfig& cfg, const Alignment& start, int level, int scale,
                       int max_iters) {
  require_same_spec(q.spec(), f0.spec(), "inversion target vs initial surface");
  require_same_spec(f0.spec(), basis.spec(), "inversion basis");

  Alignment align = start;
  if (cfg.register_target) {
    const Alignment global = optimal_rigid_reparam(srnf_map(f0), q, cfg.registration);
    if (global.energy < alignment_energy(srnf_map(f0), q, align.rotation, align.reparam)) align = global;
  }
  SrnfField qa = act(align.rotation, align.reparam, q);

  StageTrace trace;
  trace.level = level;
  trace.scale = scale;
  SurfaceGrid f = f0;
  auto lin = std::make_unique<SrnfLinearization>(f);
  SrnfField residual = lin->value() - qa;
  double e = squared(residual);
  if (!std::isfinite(e)) throw Error(ErrorCode::kNonFiniteEnergy, "initial energy is not finite");
  const double floor = cfg.absolute_tolerance * std::max(squared(q), 1e-300);

  VecX precond = VecX::Ones(static_cast<Eigen::Index>(basis.size()));
  if (cfg.sobolev_weight > 0.0 && basis.kind() == BasisKind::spherical_harmonic) {
    for (std::size_t j = 0; j < basis.size(); ++j) {
      const double l = basis.labels()[j].degree;
      precond[static_cast<Eigen::Index>(j)] = 1.0 / (1.0 + cfg.sobolev_weight * l * (l + 1.0));
    }
  }

  VecX g_prev, s_prev;
  int quiet = 0;
  for (int it = 0;; ++it) {
    if (cfg.realign_every > 0 && it > 0 && it % cfg.realign_every == 0) {
      const Alignment cand = refine_alignment(lin->value(), q, align, cfg.registration);
      if (cand.energy < e) {
        align = cand;
        qa = act(align.rotation, align.reparam, q);
        residual = lin->value() - qa;
        e = squared(residual);
        g_prev.resize(0);
      }
    }
    const VecX g = 2.0 * basis.project_dual(lin->adjoint(residual));
    const double gn = g.norm();
    trace.reports.push_back({e, gn, it});
    if (e <= floor || !(gn > 0.0) || quiet >= cfg.patience) {
      trace.converged = true;
      break;
    }
    if (it >= max_iters) break;

    // Direction P·g; BB lengths are measured in the metric P⁻¹.
    const VecX pg = precond.cwiseProduct(g);
    double t = cfg.initial_step / std::sqrt(g.dot(pg));
    if (cfg.step_rule == StepRule::barzilai_borwein && g_prev.size() == g.size()) {
      const double sy = s_prev.dot(g - g_prev);
      if (sy > 0.0) t = s_prev.dot(s_prev.cwiseQuotient(precond)) / sy;
    }
    const TangentField d = basis.expand(pg);
    bool accepted = false, any_finite = false;
    SurfaceGrid trial(f.spec());
    double e_trial = 0.0;
    for (int h = 0; h <= cfg.max_halvings; ++h, t *= 0.5) {
      trial = f;
      trial.axpy(-t, field_cast<SurfaceTag>(d));
      e_trial = squared(srnf_map(trial) - qa);
      if (std::isfinite(e_trial)) any_finite = true;
      if (std::isfinite(e_trial) && e_trial < e) {
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (!any_finite) throw Error(ErrorCode::kNonFiniteEnergy, "every trial step diverged");
      trace.converged = true;  // no representable descent step remains
      break;
    }
    quiet = (e - e_trial) < cfg.tolerance * e ? quiet + 1 : 0;
    g_prev = g;
    s_prev = -t * pg;
    f = std::move(trial);
    lin = std::make_unique<SrnfLinearization>(f);
    residual = lin->value() - qa;
    e = squared(residual);
  }
  if (cfg.pin_centroid) f = center(f);
  return {std::move(f), std::move(trace), e, align};
}

void append(InversionResult& res, StageOutcome&& stage) {
  res.converged = stage.trace.converged;
  res.trace.push_back(std::move(stage.trace));
  res.final_energy = stage.energy;
  res.alignment = stage.alignment;
  res.surface = std::move(stage.surface);
}

}  // namespace

std::uint64_t inversion_count() { return g_inversions.load(); }

SurfaceGrid surface_in_target_frame(const InversionResult& r) {
  if (r.alignment.rotation.is_identity() && r.alignment.reparam.rotation.is_identity()) return r.surface;
  return transform_surface(r.alignment.rotation.inverse(), RigidReparam{r.alignment.reparam.rotation.inverse()},
                           r.surface);
}

BasisSet level_basis(const GridSpec& spec, const InversionConfig& cfg) {
  if (cfg.basis && cfg.basis->spec() == spec) return *cfg.basis;
  if (cfg.max_degree < 0) throw Error(ErrorCode::kInvalidArgument, "max_degree must be >= 0");
  return spherical_harmonic_basis(spec, std::min(cfg.max_degree, SphericalTransform::exact_degree(spec)));
}

InversionResult invert_single(const SrnfField& q, const SurfaceGrid& f0, const BasisSet& basis,
                              const InversionConfig& cfg, const Alignment& start) {
  CountScope scope;
  InversionResult res(f0.spec());
  append(res, run_stage(q, f0, basis, cfg, start, 0, 0, cfg.max_iters_coarse));
  return res;
}

InversionResult invert_multiscale(const SrnfScaleLadder& ladder, const SurfaceGrid& f0,
                                  const BasisSet& basis, const InversionConfig& cfg,
                                  const Alignment& start) {
  CountScope scope;
  if (ladder.points.empty()) throw Error(ErrorCode::kEmptyInput, "empty scale ladder");
  InversionResult res(f0.spec());
  res.surface = f0;
  res.alignment = start;
  for (std::size_t i = 0; i < ladder.points.size(); ++i) {
    append(res, run_stage(ladder.points[i], res.surface, basis, cfg, res.alignment, 0,
                          static_cast<int>(i) + 1, cfg.max_iters_coarse));
  }
  return res;
}

namespace {

InversionResult multires_impl(const std::vector<SrnfField>& q_pyramid, const SurfaceGrid& f0,
                              const std::vector<SurfaceGrid>* warm, const InversionConfig& cfg,
                              const Alignment& start) {
  if (q_pyramid.empty()) throw Error(ErrorCode::kEmptyInput, "empty SRNF pyramid");
  require_same_spec(q_pyramid.front().spec(), f0.spec(), "coarsest level vs initial surface");
  for (std::size_t l = 1; l < q_pyramid.size(); ++l) {
    const GridSpec& a = q_pyramid[l - 1].spec();
    if (q_pyramid[l].spec().n_u() != 2 * a.n_u() || q_pyramid[l].spec().n_v() != 2 * a.n_v()) {
      throw Error(ErrorCode::kResolutionNotHalvable, "pyramid levels must double in resolution");
    }
  }
  if (warm) {
    if (warm->size() != q_pyramid.size()) {
      throw Error(ErrorCode::kInvalidArgument, "need one initial surface per pyramid level");
    }
    for (std::size_t l = 0; l < warm->size(); ++l) {
      require_same_spec(q_pyramid[l].spec(), (*warm)[l].spec(), "level initial surface");
    }
  }
  InversionResult res(f0.spec());
  res.surface = f0;
  res.alignment = start;
  const std::size_t n = q_pyramid.size();
  for (std::size_t l = 0; l < n; ++l) {
    const GridSpec& spec = q_pyramid[l].spec();
    const BasisSet basis = level_basis(spec, cfg);
    const int iters = (l + 1 == n && n > 1) ? cfg.max_iters_fine : cfg.max_iters_coarse;
    const int level = static_cast<int>(l) + 1;
    if (l == 0) {
      const auto ladder = build_scale_ladder(q_pyramid[0], std::max(cfg.n_scales, 1), srnf_map(res.surface));
      for (std::size_t i = 0; i < ladder.points.size(); ++i) {
        append(res, run_stage(ladder.points[i], res.surface, basis, cfg, res.alignment, level,
                              static_cast<int>(i) + 1, iters));
      }
    } else {
      SurfaceGrid init = upsample(res.surface, spec, Upsampling::spectral);
      if (warm) {
        const SrnfField target = act(res.alignment.rotation, res.alignment.reparam, q_pyramid[l]);
        const auto& other = (*warm)[l];
        if (squared(srnf_map(other) - target) < squared(srnf_map(init) - target)) init = other;
      }
      append(res, run_stage(q_pyramid[l], init, basis, cfg, res.alignment, level, 0, iters));
    }
    res.level_surfaces.push_back(res.surface);
  }
  return res;
}

}  // namespace

InversionResult invert_multires(const std::vector<SrnfField>& q_pyramid, const SurfaceGrid& f0,
                                const InversionConfig& cfg, const Alignment& start) {
  CountScope scope;
  return multires_impl(q_pyramid, f0, nullptr, cfg, start);
}

InversionResult invert_multires(const std::vector<SrnfField>& q_pyramid,
                                const std::vector<SurfaceGrid>& level_inits,
                                const InversionConfig& cfg, const Alignment& start) {
  CountScope scope;
  if (level_inits.empty()) throw Error(ErrorCode::kEmptyInput, "no initial surfaces");
  return multires_impl(q_pyramid, level_inits.front(), &level_inits, cfg, start);
}

StarInversion invert_star_shaped(const SrnfField& q) {
  const GridSpec& spec = q.spec();
  StarInversion out{SurfaceGrid(spec)};
  std::size_t clamped = 0;
  for (int i = 0; i < spec.n_u(); ++i) {
    for (int j = 0; j < spec.n_v(); ++j) {
      const Vec3 e = sphere_direction(spec.u(i), spec.v(j));
      const double qr = q(i, j).dot(e);
      if (qr < -1e-9) ++clamped;
      out.surface(i, j) = std::sqrt(q(i, j).norm() * std::max(qr, 0.0)) * e;
    }
  }
  out.clamped_fraction = static_cast<double>(clamped) / static_cast<double>(spec.size());
  out.star_like = clamped == 0;
  return out;
}

SurfaceGrid area_matched_sphere(const SrnfField& q) {
  const double area = l2_inner(q, q);
  if (!(area > 0.0)) throw Error(ErrorCode::kZeroArea, "target SRNF has zero norm");
  return sphere_points(q.spec(), std::sqrt(area / (4 * std::numbers::pi)));
}

InversionResult invert(const SrnfField& q, const SurfaceGrid& f0, const InversionConfig& cfg) {
  CountScope scope;
  require_same_spec(q.spec(), f0.spec(), "invert");
  if (cfg.n_levels > 1) {
    const auto pyramid = build_srnf_pyramid(q, cfg.n_levels);
    const SurfaceGrid coarse = spectral_lowpass(f0, 0.0, pyramid.front().spec());
    return invert_multires(pyramid, coarse, cfg);
  }
  if (cfg.n_scales > 1) {
    return invert_multiscale(build_scale_ladder(q, cfg.n_scales, srnf_map(f0)), f0, level_basis(q.spec(), cfg), cfg);
  }
  return invert_single(q, f0, level_basis(q.spec(), cfg), cfg);
}

InversionResult invert(const SrnfField& q, const InversionConfig& cfg) {
  CountScope scope;
  const SurfaceGrid f0 = cfg.star_init ? invert_star_shaped(q).surface : area_matched_sphere(q);
  return invert(q, f0, cfg);
}

std::vector<SrnfField> srnf_pyramid(const SurfaceGrid& f, int n_levels) {
  const auto pyr = build_pyramid(f, n_levels);
  std::vector<SrnfField> out;
  out.reserve(pyr.levels.size());
  for (const auto& level : pyr.levels) out.push_back(srnf_map(level));
  return out;
}

InversionResult invert_target_surface(const SurfaceGrid& target, const SurfaceGrid& f0,
                                      const InversionConfig& cfg) {
  CountScope scope;
  require_same_spec(target.spec(), f0.spec(), "invert_target_surface");
  if (cfg.n_levels <= 1) return invert(srnf_map(target), f0, cfg);
  const auto pyramid = srnf_pyramid(target, cfg.n_levels);
  return invert_multires(pyramid, spectral_lowpass(f0, 0.0, pyramid.front().spec()), cfg);
}

}  // namespace srnf
