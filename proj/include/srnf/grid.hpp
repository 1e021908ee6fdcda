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

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstddef>
#include <span>
#include <type_traits>
#include <vector>

#include "srnf/error.hpp"

namespace srnf {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
using Mat2 = Eigen::Matrix2d;
using VecX = Eigen::VectorXd;

/// How partial derivatives are taken on the grid.
///
/// `spectral` differentiates the double-Fourier-sphere extension (periodic in
/// u, continued across the poles in v) and is exact for band-limited data.
/// `finite_difference` uses second-order central differences, periodic in u
/// and one-sided on the first/last v rows.
enum class Differentiation { spectral, finite_difference };

/// Equiangular sampling of S²: u_i = 2πi/n_u, v_j = π(j + ½)/n_v.
/// No sample sits on a pole.
class GridSpec {
 public:
  GridSpec() : GridSpec(64, 64) {}
  GridSpec(int n_u, int n_v, Differentiation diff = Differentiation::spectral);

  int n_u() const noexcept { return n_u_; }
  int n_v() const noexcept { return n_v_; }
  Differentiation differentiation() const noexcept { return diff_; }
  std::size_t size() const noexcept { return static_cast<std::size_t>(n_u_) * n_v_; }

  double u(int i) const noexcept;
  double v(int j) const noexcept;
  double du() const noexcept;
  double dv() const noexcept;

  /// Row-major flat index, i (azimuth) outer, j (polar) inner.
  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(i) * n_v_ + j;
  }

  bool halvable() const noexcept;
  GridSpec halved() const;
  GridSpec doubled() const;
  GridSpec with_differentiation(Differentiation d) const { return GridSpec(n_u_, n_v_, d); }

  friend bool operator==(const GridSpec&, const GridSpec&) = default;

 private:
  int n_u_;
  int n_v_;
  Differentiation diff_;
};

void require_same_spec(const GridSpec& a, const GridSpec& b, const char* what);

struct SurfaceTag {};
struct TangentTag {};
struct SrnfTag {};

/// A map S² → R³ sampled on a GridSpec. The tag distinguishes surfaces,
/// deformation fields and SRNFs, which share storage but not meaning.
template <class Tag>
class GridField {
 public:
  explicit GridField(const GridSpec& spec) : spec_(spec), values_(spec.size(), Vec3::Zero()) {}
  GridField(const GridSpec& spec, std::vector<Vec3> values) : spec_(spec), values_(std::move(values)) {
    if (values_.size() != spec_.size()) {
      throw Error(ErrorCode::kInvalidArgument, "field size does not match grid");
    }
  }

  const GridSpec& spec() const noexcept { return spec_; }
  std::size_t size() const noexcept { return values_.size(); }

  Vec3& operator()(int i, int j) { return values_[spec_.index(i, j)]; }
  const Vec3& operator()(int i, int j) const { return values_[spec_.index(i, j)]; }
  Vec3& operator[](std::size_t k) { return values_[k]; }
  const Vec3& operator[](std::size_t k) const { return values_[k]; }

  std::span<const Vec3> values() const noexcept { return values_; }
  std::span<Vec3> values() noexcept { return values_; }

  bool all_finite() const noexcept {
    for (const auto& x : values_) {
      if (!x.allFinite()) return false;
    }
    return true;
  }

  GridField& operator+=(const GridField& o) {
    require_same_spec(spec_, o.spec_, "field +=");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += o.values_[k];
    return *this;
  }
  GridField& operator-=(const GridField& o) {
    require_same_spec(spec_, o.spec_, "field -=");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= o.values_[k];
    return *this;
  }
  GridField& operator*=(double s) {
    for (auto& x : values_) x *= s;
    return *this;
  }
  /// this += s·o
  GridField& axpy(double s, const GridField& o) {
    require_same_spec(spec_, o.spec_, "field axpy");
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += s * o.values_[k];
    return *this;
  }

  friend GridField operator+(GridField a, const GridField& b) { return a += b; }
  // Surface differences are deformations; see the free operator below.
  friend GridField operator-(GridField a, const GridField& b)
    requires(!std::is_same_v<Tag, SurfaceTag>)
  {
    return a -= b;
  }
  friend GridField operator*(double s, GridField a) { return a *= s; }
  friend GridField operator*(GridField a, double s) { return a *= s; }

 private:
  GridSpec spec_;
  std::vector<Vec3> values_;
};

using SurfaceGrid = GridField<SurfaceTag>;
using TangentField = GridField<TangentTag>;
using SrnfField = GridField<SrnfTag>;

/// Reinterprets the samples of one field kind as another.
template <class To, class From>
GridField<To> field_cast(const GridField<From>& f) {
  return GridField<To>(f.spec(), std::vector<Vec3>(f.values().begin(), f.values().end()));
}

inline SurfaceGrid operator+(SurfaceGrid f, const TangentField& w) {
  require_same_spec(f.spec(), w.spec(), "surface + deformation");
  for (std::size_t k = 0; k < f.size(); ++k) f[k] += w[k];
  return f;
}

inline TangentField operator-(const SurfaceGrid& a, const SurfaceGrid& b) {
  require_same_spec(a.spec(), b.spec(), "surface - surface");
  TangentField out(a.spec());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] - b[k];
  return out;
}

SurfaceGrid translate(SurfaceGrid f, const Vec3& c);

/// First fundamental form and area form per sample.
struct MetricSample {
  std::vector<Mat2> g;
  std::vector<double> omega;  // det(g)^{1/2}
};

struct PartialDerivatives {
  TangentField du;
  TangentField dv;
};

/// Unit directions e(u_i, v_j) = (cos u sin v, sin u sin v, cos v).
SurfaceGrid sphere_points(const GridSpec& spec, double radius = 1.0);
Vec3 sphere_direction(double u, double v);

/// Domain quadrature on S²; Σ weights = 4π.
const std::vector<double>& quadrature_weights(const GridSpec& spec);

/// Linear differentiation operators and their transposes on raw samples.
void apply_du(const GridSpec& spec, std::span<const Vec3> in, std::span<Vec3> out);
void apply_dv(const GridSpec& spec, std::span<const Vec3> in, std::span<Vec3> out);
/// out += Dᵀ·in
void accumulate_du_transpose(const GridSpec& spec, std::span<const Vec3> in, std::span<Vec3> out);
void accumulate_dv_transpose(const GridSpec& spec, std::span<const Vec3> in, std::span<Vec3> out);

template <class Tag>
PartialDerivatives partial_derivatives(const GridField<Tag>& f) {
  PartialDerivatives d{TangentField(f.spec()), TangentField(f.spec())};
  apply_du(f.spec(), f.values(), d.du.values());
  apply_dv(f.spec(), f.values(), d.dv.values());
  return d;
}

/// Unnormalized outward normal n = f_v × f_u (chart density).
TangentField normal_field(const SurfaceGrid& f);
TangentField normal_field(const PartialDerivatives& d);

MetricSample first_fundamental_form(const SurfaceGrid& f);

/// Σ_s |n(s)| / sin(v) · weight(s).
double surface_area(const SurfaceGrid& f);
SurfaceGrid rescale_to_unit_area(const SurfaceGrid& f);
/// Area-weighted centroid.
Vec3 centroid(const SurfaceGrid& f);
SurfaceGrid center(const SurfaceGrid& f);

/// Σ_s weight(s)·⟨a(s), b(s)⟩ with the domain quadrature.
template <class A, class B>
double weighted_inner(const GridField<A>& a, const GridField<B>& b) {
  require_same_spec(a.spec(), b.spec(), "inner product");
  const auto& w = quadrature_weights(a.spec());
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += w[k] * a[k].dot(b[k]);
  return s;
}

/// Root-mean-square pointwise distance under the domain quadrature.
double rms_distance(const SurfaceGrid& a, const SurfaceGrid& b);
/// Same after removing each surface's centroid.
double centered_rms_distance(const SurfaceGrid& a, const SurfaceGrid& b);

}  // namespace srnf
