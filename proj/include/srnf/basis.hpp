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
#include <optional>
#include <vector>

#include "srnf/grid.hpp"
#include "srnf/spherical_harmonics.hpp"

namespace srnf {

enum class BasisKind { spherical_harmonic, pca, concatenated };

const char* to_string(BasisKind kind);

struct ShLabel {
  int degree = 0;
  int order = 0;
  int axis = 0;
};

/// Orthonormal family of deformation fields {b_j} on one grid.
///
/// Spherical-harmonic bases stay in factored form (Y_i e_k) and expand or
/// project through the fast transform; other kinds store dense fields.
class BasisSet {
 public:
  static BasisSet spherical_harmonic(const GridSpec& spec, int max_degree);
  /// Dense basis; elements must already be orthonormal.
  static BasisSet dense(BasisKind kind, const GridSpec& spec, std::vector<TangentField> elements,
                        std::vector<double> singular_values = {},
                        std::optional<SurfaceGrid> mean = std::nullopt);

  const GridSpec& spec() const noexcept { return spec_; }
  BasisKind kind() const noexcept { return kind_; }
  std::size_t size() const noexcept { return size_; }
  /// SH degree for spherical_harmonic bases, −1 otherwise.
  int max_degree() const noexcept { return max_degree_; }

  TangentField element(std::size_t j) const;
  const std::vector<ShLabel>& labels() const noexcept { return labels_; }
  const std::vector<double>& singular_values() const noexcept { return singular_values_; }
  const std::optional<SurfaceGrid>& mean() const noexcept { return mean_; }

  /// Σ_j c_j b_j.
  TangentField expand(const VecX& coeffs) const;
  /// c_j = ⟨w, b_j⟩ under the domain quadrature.
  VecX project(const TangentField& w) const;
  /// c_j = Σ_s ⟨g(s), b_j(s)⟩ without quadrature weights, for covectors such
  /// as adjoint gradients.
  VecX project_dual(const TangentField& g) const;

 private:
  BasisSet() : spec_(4, 4) {}

  GridSpec spec_;
  BasisKind kind_ = BasisKind::spherical_harmonic;
  std::size_t size_ = 0;
  int max_degree_ = -1;
  std::shared_ptr<const SphericalTransform> transform_;
  std::vector<TangentField> elements_;
  std::vector<ShLabel> labels_;
  std::vector<double> singular_values_;
  std::optional<SurfaceGrid> mean_;
};

/// 3·(L+1)² elements {Y_i e₁} ∪ {Y_j e₂} ∪ {Y_k e₃}.
BasisSet spherical_harmonic_basis(const GridSpec& spec, int max_degree);

/// Mean-centred PCA of pre-aligned surfaces; the mean is kept as metadata.
BasisSet pca_basis(const std::vector<SurfaceGrid>& training, int n_components);

/// Concatenation followed by modified Gram–Schmidt; dependent fields are dropped.
BasisSet concatenate(const BasisSet& a, const BasisSet& b);

Eigen::MatrixXd gram_matrix(const BasisSet& basis);

}  // namespace srnf
