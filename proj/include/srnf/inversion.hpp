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

#include <cstdint>
#include <memory>
#include <vector>

#include "srnf/basis.hpp"
#include "srnf/pyramid.hpp"
#include "srnf/registration.hpp"
#include "srnf/srnf.hpp"

namespace srnf {

/// First trial step of each backtracking search.
enum class StepRule {
  /// Barzilai–Borwein length from the last two iterates; 0.1/‖g‖ when unavailable.
  barzilai_borwein,
  /// Always initial_step/‖g‖.
  normalized,
};

struct InversionConfig {
  BasisKind basis_kind = BasisKind::spherical_harmonic;
  /// SH degree cap; each level uses min(n_v/2 − 1, max_degree).
  int max_degree = 34;
  /// Used for the finest level when its grid matches; SH elsewhere.
  std::shared_ptr<const BasisSet> basis;

  int n_levels = 4;
  int n_scales = 5;
  int max_iters_coarse = 2000;
  int max_iters_fine = 200;
  /// Converged once the relative decrease stays below `tolerance` for
  /// `patience` consecutive iterations.
  double tolerance = 1e-8;
  int patience = 5;
  /// Energy at or below absolute_tolerance·‖q‖² counts as an exact zero.
  double absolute_tolerance = 1e-14;

  StepRule step_rule = StepRule::barzilai_borwein;
  double initial_step = 0.1;
  int max_halvings = 30;
  /// SH coefficients of degree l are scaled by 1/(1 + κ·l(l+1)) in the
  /// descent direction (a Sobolev-type metric on coefficients); 0 keeps the
  /// plain L² gradient. Ignored for non-SH bases.
  double sobolev_weight = 0.0;

  /// Alignment is refined every `realign_every` steps; 0 disables it.
  int realign_every = 5;
  /// Run the global restart search once before the first stage.
  bool register_target = false;
  RegistrationOptions registration;

  bool pin_centroid = true;
  /// Start from the analytic star-shaped inverse instead of a sphere.
  bool star_init = false;
};

struct StageTrace {
  int level = 0;
  int scale = 0;
  std::vector<EnergyReport> reports;
  bool converged = false;
};

struct InversionResult {
  SurfaceGrid surface;
  std::vector<StageTrace> trace;
  double final_energy = 0.0;
  bool converged = false;
  /// Final (O, γ): surface approximates the inverse of act(O, γ, q).
  Alignment alignment;
  /// Multires only: the result of each level, coarse to fine.
  std::vector<SurfaceGrid> level_surfaces;

  explicit InversionResult(const GridSpec& spec) : surface(spec) {}
};

/// Gradient descent on basis coefficients around f0 toward the target.
InversionResult invert_single(const SrnfField& q, const SurfaceGrid& f0, const BasisSet& basis,
                              const InversionConfig& cfg, const Alignment& start = {});

/// Sequential invert_single along the ladder with warm starts.
InversionResult invert_multiscale(const SrnfScaleLadder& ladder, const SurfaceGrid& f0,
                                  const BasisSet& basis, const InversionConfig& cfg,
                                  const Alignment& start = {});

/// Coarse-to-fine over SRNF levels; f0 lives on the coarsest grid. The
/// coarsest level follows a ladder from Q(f0) with cfg.n_scales rungs.
InversionResult invert_multires(const std::vector<SrnfField>& q_pyramid, const SurfaceGrid& f0,
                                const InversionConfig& cfg, const Alignment& start = {});
/// Warm-started variant with one initial surface per level. Level l > 0
/// starts from whichever of level_inits[l] and the upsampled level l − 1
/// result has the lower energy.
InversionResult invert_multires(const std::vector<SrnfField>& q_pyramid,
                                const std::vector<SurfaceGrid>& level_inits,
                                const InversionConfig& cfg, const Alignment& start = {});

struct StarInversion {
  SurfaceGrid surface;
  /// Fraction of samples with qʳ < −1e-9, clamped to zero.
  double clamped_fraction = 0.0;
  bool star_like = true;
};

/// f̃ = √(|q|·max(qʳ, 0))·e.
StarInversion invert_star_shaped(const SrnfField& q);

/// Sphere whose area equals ‖q‖².
SurfaceGrid area_matched_sphere(const SrnfField& q);

/// Facade: initial surface from cfg.star_init, an SRNF pyramid of q when
/// cfg.n_levels > 1, otherwise a ladder (n_scales > 1) or a single stage.
InversionResult invert(const SrnfField& q, const InversionConfig& cfg);
/// Same with an explicit initial surface on q's grid (resampled for pyramids).
InversionResult invert(const SrnfField& q, const SurfaceGrid& f0, const InversionConfig& cfg);

/// Q(fⁱ) for every level of build_pyramid(f, n_levels).
std::vector<SrnfField> srnf_pyramid(const SurfaceGrid& f, int n_levels);

/// invert(Q(target), f0, cfg) with per-level targets taken from the surface
/// pyramid of `target` rather than from smoothed SRNFs.
InversionResult invert_target_surface(const SurfaceGrid& target, const SurfaceGrid& f0,
                                      const InversionConfig& cfg);

/// result.surface carried back by the inverse of result.alignment, so that
/// its SRNF approximates the unaligned target.
SurfaceGrid surface_in_target_frame(const InversionResult& result);

/// Number of top-level inversions started by this process; nested stages
/// count once.
std::uint64_t inversion_count();

/// The SH or user basis used for one grid.
BasisSet level_basis(const GridSpec& spec, const InversionConfig& cfg);

}  // namespace srnf
