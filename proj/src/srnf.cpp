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

#include "srnf/srnf.hpp"

#include <cmath>

namespace srnf {

SrnfLinearization::SrnfLinearization(const SurfaceGrid& f)
    : f_(f), d_(partial_derivatives(f)), value_(f.spec()) {
  const auto& spec = f.spec();
  const std::size_t n = f.size();
  normal_.resize(n);
  inv_sin_.resize(n);
  jacobian_.resize(n);
  double mean = 0.0;
  for (int i = 0; i < spec.n_u(); ++i) {
    for (int j = 0; j < spec.n_v(); ++j) {
      const std::size_t k = spec.index(i, j);
      inv_sin_[k] = 1.0 / std::sin(spec.v(j));
      normal_[k] = d_.dv[k].cross(d_.du[k]) * inv_sin_[k];
      mean += normal_[k].norm();
    }
  }
  mean /= static_cast<double>(n);
  delta_ = kNormalClamp * mean;
  const double floor = delta_ > 0.0 ? delta_ : 1e-300;
  for (std::size_t k = 0; k < n; ++k) {
    const double len = normal_[k].norm();
    if (len >= floor && len > 0.0) {
      const double scale = 1.0 / std::sqrt(len);
      const Vec3 unit = normal_[k] / len;
      value_[k] = normal_[k] * scale;
      jacobian_[k] = scale * inv_sin_[k] * (Mat3::Identity() - 0.5 * unit * unit.transpose());
    } else {
      const double scale = 1.0 / std::sqrt(floor);
      value_[k] = normal_[k] * scale;
      jacobian_[k] = scale * inv_sin_[k] * Mat3::Identity();
      ++clamped_;
    }
  }
}

SrnfField SrnfLinearization::differential(const PartialDerivatives& db) const {
  SrnfField out(spec());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const Vec3 nb = d_.dv[k].cross(db.du[k]) + db.dv[k].cross(d_.du[k]);
    out[k] = jacobian_[k] * nb;
  }
  return out;
}

SrnfField SrnfLinearization::differential(const TangentField& b) const {
  require_same_spec(spec(), b.spec(), "srnf_differential");
  return differential(partial_derivatives(b));
}

SrnfField SrnfLinearization::differential_unstabilized(const TangentField& b) const {
  require_same_spec(spec(), b.spec(), "srnf_differential");
  const auto db = partial_derivatives(b);
  SrnfField out(spec());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const Vec3 nb = (d_.dv[k].cross(db.du[k]) + db.dv[k].cross(d_.du[k])) * inv_sin_[k];
    const Vec3& nn = normal_[k];
    const double len = std::max(nn.norm(), delta_);
    out[k] = nb / std::sqrt(len) - nn.dot(nb) / (2.0 * std::pow(len, 2.5)) * nn;
  }
  return out;
}

TangentField SrnfLinearization::adjoint(const SrnfField& z) const {
  require_same_spec(spec(), z.spec(), "srnf adjoint");
  const auto& w = quadrature_weights(spec());
  const std::size_t n = z.size();
  std::vector<Vec3> a(n), c(n);
  for (std::size_t k = 0; k < n; ++k) {
    const Vec3 y = w[k] * (jacobian_[k] * z[k]);
    a[k] = y.cross(d_.dv[k]);   // pairs with b_u
    c[k] = d_.du[k].cross(y);   // pairs with b_v
  }
  TangentField g(spec());
  accumulate_du_transpose(spec(), a, g.values());
  accumulate_dv_transpose(spec(), c, g.values());
  return g;
}

SrnfField srnf_map(const SurfaceGrid& f) { return SrnfLinearization(f).value(); }

double l2_inner(const SrnfField& a, const SrnfField& b) { return weighted_inner(a, b); }
double l2_norm(const SrnfField& a) { return std::sqrt(weighted_inner(a, a)); }
double l2_distance(const SrnfField& a, const SrnfField& b) { return l2_norm(a - b); }

SrnfField srnf_differential(const SurfaceGrid& f, const TangentField& b) {
  require_same_spec(f.spec(), b.spec(), "srnf_differential");
  return SrnfLinearization(f).differential(b);
}

EnergyReport inversion_energy(const SurfaceGrid& f, const SrnfField& q_target) {
  require_same_spec(f.spec(), q_target.spec(), "inversion_energy");
  const auto q = srnf_map(f);
  EnergyReport r;
  const auto diff = q - q_target;
  r.energy = l2_inner(diff, diff);
  return r;
}

namespace {

SurfaceGrid displaced(const SurfaceGrid& f0, const VecX& coeffs, const BasisSet& basis) {
  require_same_spec(f0.spec(), basis.spec(), "basis");
  if (static_cast<std::size_t>(coeffs.size()) != basis.size()) {
    throw Error(ErrorCode::kBasisMismatch, "coefficient vector length does not match basis size");
  }
  return f0 + basis.expand(coeffs);
}

}  // namespace

VecX energy_gradient(const SurfaceGrid& f0, const VecX& coeffs, const SrnfField& q_target,
                     const BasisSet& basis) {
  require_same_spec(f0.spec(), q_target.spec(), "energy_gradient");
  const SrnfLinearization lin(displaced(f0, coeffs, basis));
  const auto g = lin.adjoint(lin.value() - q_target);
  return 2.0 * basis.project_dual(g);
}

VecX energy_gradient_direct(const SurfaceGrid& f0, const VecX& coeffs, const SrnfField& q_target,
                            const BasisSet& basis) {
  require_same_spec(f0.spec(), q_target.spec(), "energy_gradient");
  const SrnfLinearization lin(displaced(f0, coeffs, basis));
  const auto r = lin.value() - q_target;
  VecX out(basis.size());
  for (std::size_t j = 0; j < basis.size(); ++j) {
    out[j] = 2.0 * l2_inner(r, lin.differential(basis.element(j)));
  }
  return out;
}

}  // namespace srnf
