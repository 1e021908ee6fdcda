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

#include <memory>
#include <span>
#include <vector>

#include "srnf/grid.hpp"

namespace srnf {

using CoeffMatrix = Eigen::Matrix<double, Eigen::Dynamic, 3>;

/// Real spherical harmonics (no Condon–Shortley phase) sampled on a grid.
///
/// Y_lm = P̄_l^|m|(cos v) · {√2 sin(|m|u), 1, √2 cos(mu)} for m < 0, m = 0,
/// m > 0. Per order m the polar profiles are re-orthonormalized against the
/// grid quadrature by modified Gram–Schmidt, so the sampled family is
/// orthonormal on the grid for any admissible degree. Below the quadrature's
/// exactness limit (2L < n_v) the correction is at rounding level.
class SphericalTransform {
 public:
  SphericalTransform(const GridSpec& spec, int max_degree);

  /// Shared, cached instance.
  static std::shared_ptr<const SphericalTransform> get(const GridSpec& spec, int max_degree);
  /// Largest degree with exact grid quadrature: min(n_v/2, n_u/2) − 1.
  static int exact_degree(const GridSpec& spec) noexcept;

  static int index(int l, int m) noexcept { return l * l + l + m; }
  static int count_for(int max_degree) noexcept { return (max_degree + 1) * (max_degree + 1); }

  const GridSpec& spec() const noexcept { return spec_; }
  int max_degree() const noexcept { return max_degree_; }
  int count() const noexcept { return count_for(max_degree_); }

  /// c_k = Σ_s weight(s) f(s) Y_k(s).
  VecX analyze(std::span<const double> f) const;
  CoeffMatrix analyze(std::span<const Vec3> f) const;
  void synthesize(const VecX& coeffs, std::span<double> out) const;
  void synthesize(const CoeffMatrix& coeffs, std::span<Vec3> out) const;

  /// Samples of basis function k on the grid.
  std::vector<double> basis_function(int k) const;

  /// Values of every (orthonormalized) basis function at an arbitrary point.
  void evaluate(double u, double v, std::span<double> out) const;

 private:
  GridSpec spec_;
  int max_degree_;
  std::vector<double> wv_;  // polar quadrature weights (times 2π)
  // profiles_[m] is (L−m+1) × n_v, row r holds degree l = m + r.
  std::vector<Eigen::MatrixXd> profiles_;
  // Lower-triangular maps from analytic P̄ to orthonormalized profiles.
  std::vector<Eigen::MatrixXd> triangular_;
  Eigen::MatrixXd cos_table_;  // (L+1) × n_u
  Eigen::MatrixXd sin_table_;  // (L+1) × n_u
};

/// Normalized associated Legendre values P̄_l^m(cos v) for l, m ≤ L in the
/// packed layout out[l*(l+1)/2 + m].
void associated_legendre(int max_degree, double v, std::span<double> out);

/// Real-SH rotation blocks: for g(x) = f(Rᵀx), the degree-l coefficients of g
/// are blocks[l] · (degree-l coefficients of f).
std::vector<Eigen::MatrixXd> sh_rotation_blocks(const Mat3& rotation, int max_degree);

/// Applies blocks to a 3-channel coefficient matrix.
CoeffMatrix rotate_coefficients(const std::vector<Eigen::MatrixXd>& blocks, const CoeffMatrix& c);

}  // namespace srnf
