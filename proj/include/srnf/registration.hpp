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

#include "srnf/grid.hpp"

namespace srnf {

/// Element of SO(3); orthogonality and det = +1 hold within 1e-10.
class Rotation3 {
 public:
  Rotation3() : m_(Mat3::Identity()) {}
  /// Throws InvalidArgument unless `m` is a rotation within 1e-10.
  explicit Rotation3(const Mat3& m);

  static Rotation3 identity() { return Rotation3(); }
  /// exp of the skew matrix of ω (axis ω/|ω|, angle |ω|).
  static Rotation3 exp(const Vec3& omega);
  /// Closest rotation in Frobenius norm.
  static Rotation3 nearest(const Mat3& m);

  const Mat3& matrix() const noexcept { return m_; }
  Rotation3 inverse() const { return Rotation3(m_.transpose(), Unchecked{}); }
  bool is_identity() const { return m_ == Mat3::Identity(); }
  double angle() const;

  friend Rotation3 operator*(const Rotation3& a, const Rotation3& b) {
    return Rotation3(a.m_ * b.m_, Unchecked{});
  }
  Vec3 operator*(const Vec3& x) const { return m_ * x; }

 private:
  struct Unchecked {};
  Rotation3(const Mat3& m, Unchecked) : m_(m) {}
  Mat3 m_;
};

/// Rigid reparameterization γ(x) = R·x of the domain sphere; J_γ ≡ 1.
struct RigidReparam {
  Rotation3 rotation;
};

enum class Interpolation { spectral, bicubic };

/// (O, γ)·q: s ↦ O·q(γ(s)). Composition:
/// act(O₂, γ₂, act(O₁, γ₁, q)) = act(O₂O₁, γ₁∘γ₂, q), i.e. rotation R₁R₂.
/// Spectral evaluation rotates SH coefficients up to the grid's exact degree;
/// identity γ skips resampling and leaves the samples untouched.
SrnfField act(const Rotation3& o, const RigidReparam& gamma, const SrnfField& q,
              Interpolation method = Interpolation::spectral);

/// s ↦ O·f(γ(s)), the surface whose SRNF is act(O, γ, Q(f)).
SurfaceGrid transform_surface(const Rotation3& o, const RigidReparam& gamma, const SurfaceGrid& f);

struct ProcrustesResult {
  Rotation3 rotation;
  Vec3 singular_values = Vec3::Zero();
  /// Rank of the correlation is below two, so the minimizer is not unique.
  bool degenerate = false;
};

/// argmin_O ‖q1 − O·q2‖.
ProcrustesResult optimal_rotation(const SrnfField& q1, const SrnfField& q2);

struct Alignment {
  Rotation3 rotation;
  RigidReparam reparam;
  /// ‖q1 − act(rotation, reparam, q2)‖².
  double energy = 0.0;
  bool degenerate = false;
};

struct RegistrationOptions {
  int n_restarts = 60;
  /// Best restarts that receive local refinement.
  int n_refined = 3;
  int refine_iters = 40;
  double fd_step = 1e-5;
};

/// Deterministic quasi-uniform rotations; index 0 is the identity. The first
/// 60 form the icosahedral rotation group.
std::vector<Rotation3> restart_rotations(int n);

/// Global search over γ ∈ SO(3) with Procrustes O at each candidate. Never
/// worse than the identity alignment.
Alignment optimal_rigid_reparam(const SrnfField& q1, const SrnfField& q2,
                                const RegistrationOptions& options = {});
Alignment optimal_rigid_reparam(const SrnfField& q1, const SrnfField& q2, int n_restarts);

/// Local descent on γ from `start`; never worse than `start`.
Alignment refine_alignment(const SrnfField& q1, const SrnfField& q2, const Alignment& start,
                           const RegistrationOptions& options = {});

/// ‖q1 − act(o, γ, q2)‖².
double alignment_energy(const SrnfField& q1, const SrnfField& q2, const Rotation3& o,
                        const RigidReparam& gamma);

}  // namespace srnf
