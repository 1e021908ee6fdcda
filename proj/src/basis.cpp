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

#include "srnf/basis.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <string>

namespace srnf {

const char* to_string(BasisKind kind) {
  switch (kind) {
    case BasisKind::spherical_harmonic: return "sh";
    case BasisKind::pca: return "pca";
    case BasisKind::concatenated: return "concatenated";
  }
  return "unknown";
}

BasisSet BasisSet::spherical_harmonic(const GridSpec& spec, int max_degree) {
  BasisSet b;
  b.spec_ = spec;
  b.kind_ = BasisKind::spherical_harmonic;
  b.max_degree_ = max_degree;
  b.transform_ = SphericalTransform::get(spec, max_degree);
  const int ny = b.transform_->count();
  b.size_ = static_cast<std::size_t>(3 * ny);
  b.labels_.reserve(b.size_);
  for (int axis = 0; axis < 3; ++axis) {
    for (int l = 0; l <= max_degree; ++l) {
      for (int m = -l; m <= l; ++m) b.labels_.push_back({l, m, axis});
    }
  }
  return b;
}

BasisSet BasisSet::dense(BasisKind kind, const GridSpec& spec, std::vector<TangentField> elements,
                         std::vector<double> singular_values, std::optional<SurfaceGrid> mean) {
  for (const auto& e : elements) require_same_spec(spec, e.spec(), "basis element");
  BasisSet b;
  b.spec_ = spec;
  b.kind_ = kind;
  b.size_ = elements.size();
  b.elements_ = std::move(elements);
  b.singular_values_ = std::move(singular_values);
  b.mean_ = std::move(mean);
  return b;
}

TangentField BasisSet::element(std::size_t j) const {
  if (j >= size_) throw Error(ErrorCode::kBasisMismatch, "basis index out of range");
  if (!transform_) return elements_[j];
  const std::size_t ny = size_ / 3;
  const auto values = transform_->basis_function(static_cast<int>(j % ny));
  TangentField out(spec_);
  const int axis = static_cast<int>(j / ny);
  for (std::size_t k = 0; k < out.size(); ++k) out[k][axis] = values[k];
  return out;
}

TangentField BasisSet::expand(const VecX& coeffs) const {
  if (static_cast<std::size_t>(coeffs.size()) != size_) {
    throw Error(ErrorCode::kBasisMismatch, "expand: " + std::to_string(coeffs.size()) +
                                               " coefficients for " + std::to_string(size_) +
                                               " elements");
  }
  TangentField out(spec_);
  if (transform_) {
    const int ny = transform_->count();
    CoeffMatrix c(ny, 3);
    for (int axis = 0; axis < 3; ++axis) c.col(axis) = coeffs.segment(axis * ny, ny);
    transform_->synthesize(c, out.values());
    return out;
  }
  for (std::size_t j = 0; j < size_; ++j) {
    if (coeffs[j] != 0.0) out.axpy(coeffs[j], elements_[j]);
  }
  return out;
}

VecX BasisSet::project(const TangentField& w) const {
  require_same_spec(spec_, w.spec(), "project");
  VecX out(size_);
  if (transform_) {
    const int ny = transform_->count();
    const CoeffMatrix c = transform_->analyze(w.values());
    for (int axis = 0; axis < 3; ++axis) out.segment(axis * ny, ny) = c.col(axis);
    return out;
  }
  for (std::size_t j = 0; j < size_; ++j) out[j] = weighted_inner(w, elements_[j]);
  return out;
}

VecX BasisSet::project_dual(const TangentField& g) const {
  require_same_spec(spec_, g.spec(), "project_dual");
  if (transform_) {
    const auto& w = quadrature_weights(spec_);
    TangentField scaled(spec_);
    for (std::size_t k = 0; k < g.size(); ++k) scaled[k] = g[k] / w[k];
    return project(scaled);
  }
  VecX out(size_);
  for (std::size_t j = 0; j < size_; ++j) {
    double s = 0.0;
    const auto& e = elements_[j];
    for (std::size_t k = 0; k < g.size(); ++k) s += g[k].dot(e[k]);
    out[j] = s;
  }
  return out;
}

BasisSet spherical_harmonic_basis(const GridSpec& spec, int max_degree) {
  return BasisSet::spherical_harmonic(spec, max_degree);
}

BasisSet pca_basis(const std::vector<SurfaceGrid>& training, int n_components) {
  if (training.size() < 2) {
    throw Error(ErrorCode::kInsufficientData, "PCA basis needs at least two training surfaces");
  }
  if (n_components < 1) throw Error(ErrorCode::kInvalidArgument, "n_components must be positive");
  const GridSpec spec = training.front().spec();
  for (const auto& f : training) require_same_spec(spec, f.spec(), "pca_basis");

  const std::size_t n = training.size();
  SurfaceGrid mean(spec);
  for (const auto& f : training) mean += f;
  mean *= 1.0 / static_cast<double>(n);

  std::vector<TangentField> centered;
  centered.reserve(n);
  for (const auto& f : training) centered.push_back(f - mean);

  Eigen::MatrixXd gram(n, n);
  double scale = 0.0;
  for (std::size_t a = 0; a < n; ++a) {
    scale += weighted_inner(training[a], training[a]);
    for (std::size_t b = a; b < n; ++b) {
      gram(a, b) = gram(b, a) = weighted_inner(centered[a], centered[b]);
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  const VecX lambda = eig.eigenvalues().reverse();
  const Eigen::MatrixXd vecs = eig.eigenvectors().rowwise().reverse();
  const double tol = 1e-12 * std::max(scale, 1e-300);
  std::vector<TangentField> elements;
  std::vector<double> sv;
  for (std::size_t k = 0; k < n && static_cast<int>(elements.size()) < n_components; ++k) {
    if (!(lambda[k] > tol)) break;
    TangentField u(spec);
    for (std::size_t a = 0; a < n; ++a) u.axpy(vecs(a, k) / std::sqrt(lambda[k]), centered[a]);
    elements.push_back(std::move(u));
    sv.push_back(std::sqrt(lambda[k]));
  }
  if (elements.empty()) {
    throw Error(ErrorCode::kInsufficientData, "training surfaces have no variance");
  }
  return BasisSet::dense(BasisKind::pca, spec, std::move(elements), std::move(sv), mean);
}

BasisSet concatenate(const BasisSet& a, const BasisSet& b) {
  require_same_spec(a.spec(), b.spec(), "concatenate");
  std::vector<TangentField> out;
  out.reserve(a.size() + b.size());
  auto push = [&](TangentField e) {
    const double before = std::sqrt(weighted_inner(e, e));
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& p : out) e.axpy(-weighted_inner(e, p), p);
    }
    const double nrm = std::sqrt(weighted_inner(e, e));
    if (nrm > 1e-8 * std::max(before, 1e-300)) out.push_back((1.0 / nrm) * e);
  };
  for (std::size_t j = 0; j < a.size(); ++j) push(a.element(j));
  for (std::size_t j = 0; j < b.size(); ++j) push(b.element(j));
  auto mean = a.mean() ? a.mean() : b.mean();
  return BasisSet::dense(BasisKind::concatenated, a.spec(), std::move(out), {}, mean);
}

Eigen::MatrixXd gram_matrix(const BasisSet& basis) {
  const std::size_t n = basis.size();
  std::vector<TangentField> e;
  e.reserve(n);
  for (std::size_t j = 0; j < n; ++j) e.push_back(basis.element(j));
  Eigen::MatrixXd g(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) g(a, b) = g(b, a) = weighted_inner(e[a], e[b]);
  }
  return g;
}

}  // namespace srnf
