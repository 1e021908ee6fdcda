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

#include <vector>

#include "srnf/basis.hpp"
#include "srnf/grid.hpp"

namespace srnf {

struct EnergyReport {
  double energy = 0.0;
  double gradient_norm = 0.0;
  int iteration = 0;
};

/// Relative clamp on the normal density: |n| is floored at δ = κ·mean|n|.
inline constexpr double kNormalClamp = 1e-12;

/// Pointwise data of Q at a surface, reused by the value, the differential
/// and its adjoint.
///
/// The normal density is taken per unit area of the domain sphere,
/// n(s) = (f_v × f_u)/sin v, so that rigid reparameterizations act on the
/// SRNF by plain composition.
class SrnfLinearization {
 public:
  explicit SrnfLinearization(const SurfaceGrid& f);

  const GridSpec& spec() const noexcept { return value_.spec(); }
  const SrnfField& value() const noexcept { return value_; }
  const PartialDerivatives& derivatives() const noexcept { return d_; }
  std::size_t clamped_count() const noexcept { return clamped_; }

  /// Q_{*,f}(b) via the stabilized form (1/√|n|)(n_b − ½(ñ·n_b)ñ).
  SrnfField differential(const TangentField& b) const;
  /// Same, from precomputed derivatives of b.
  SrnfField differential(const PartialDerivatives& db) const;
  /// Q_{*,f}(b) via n_b/√|n| − (n·n_b)/(2|n|^{5/2}) n.
  SrnfField differential_unstabilized(const TangentField& b) const;

  /// G such that Σ_s ⟨G(s), b(s)⟩ = ⟨z, Q_{*,f}(b)⟩ for every b.
  TangentField adjoint(const SrnfField& z) const;

 private:
  SurfaceGrid f_;
  PartialDerivatives d_;
  SrnfField value_;
  std::vector<Mat3> jacobian_;  // chart n_b ↦ Q_*(b), symmetric
  std::vector<Vec3> normal_;    // intrinsic n
  std::vector<double> inv_sin_;
  double delta_ = 0.0;
  std::size_t clamped_ = 0;
};

SrnfField srnf_map(const SurfaceGrid& f);

double l2_inner(const SrnfField& a, const SrnfField& b);
double l2_norm(const SrnfField& a);
double l2_distance(const SrnfField& a, const SrnfField& b);

SrnfField srnf_differential(const SurfaceGrid& f, const TangentField& b);

/// ‖Q(f) − q‖² against an already aligned target.
EnergyReport inversion_energy(const SurfaceGrid& f, const SrnfField& q_target);

/// ∂E/∂α_j at f0 + Σ α_j b_j, computed through the adjoint of Q_*.
VecX energy_gradient(const SurfaceGrid& f0, const VecX& coeffs, const SrnfField& q_target,
                     const BasisSet& basis);

/// Reference evaluation 2⟨Q(f) − q, Q_*(b_j)⟩ one element at a time.
VecX energy_gradient_direct(const SurfaceGrid& f0, const VecX& coeffs, const SrnfField& q_target,
                            const BasisSet& basis);

}  // namespace srnf
