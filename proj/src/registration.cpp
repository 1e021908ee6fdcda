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

#include "srnf/registration.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "srnf/parallel.hpp"
#include "srnf/pyramid.hpp"
#include "srnf/spherical_harmonics.hpp"
#include "srnf/srnf.hpp"

namespace srnf {
namespace {

constexpr double kRotationTol = 1e-10;

Vec3 direction_to_angles(const Vec3& x) {
  const double v = std::acos(std::clamp(x.z() / x.norm(), -1.0, 1.0));
  double u = std::atan2(x.y(), x.x());
  if (u < 0.0) u += 2 * std::numbers::pi;
  return Vec3(u, v, 0.0);
}

/// Resamples g(s) = field(R·x(s)) spectrally.
template <class Tag>
GridField<Tag> rotate_domain(const GridField<Tag>& field, const Rotation3& r) {
  const GridSpec& spec = field.spec();
  const int L = SphericalTransform::exact_degree(spec);
  const auto t = SphericalTransform::get(spec, L);
  // field(R x) = field((Rᵀ)ᵀ x), the rotation of field by Rᵀ.
  const CoeffMatrix c =
      rotate_coefficients(sh_rotation_blocks(r.matrix().transpose(), L), t->analyze(field.values()));
  GridField<Tag> out(spec);
  t->synthesize(c, out.values());
  return out;
}

ProcrustesResult procrustes(const Mat3& a) {
  // a = Σ w q2 q1ᵀ; maximize tr(O a).
  Eigen::JacobiSVD<Mat3> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Mat3 u = svd.matrixU(), v = svd.matrixV();
  Mat3 d = Mat3::Identity();
  d(2, 2) = (v * u.transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  ProcrustesResult out;
  out.rotation = Rotation3::nearest(v * d * u.transpose());
  out.singular_values = svd.singularValues();
  const double s1 = out.singular_values[0];
  out.degenerate = !(s1 > 0.0) || out.singular_values[1] <= 1e-10 * s1;
  return out;
}

/// Alignment energies in SH coefficient space: for band-limited act,
/// Σ_s w·act(q2)(s)·q1(s)ᵀ is a product of coefficient matrices.
class CoefficientAligner {
 public:
  CoefficientAligner(const SrnfField& q1, const SrnfField& q2)
      : degree_(SphericalTransform::exact_degree(q1.spec())),
        transform_(SphericalTransform::get(q1.spec(), degree_)),
        c1_(transform_->analyze(q1.values())),
        c2_(transform_->analyze(q2.values())) {
    base_ = l2_inner(q1, q1) + c2_.squaredNorm();
  }

  struct Eval {
    double energy;
    ProcrustesResult fit;
  };

  Eval evaluate(const Rotation3& gamma) const {
    const CoeffMatrix cg =
        rotate_coefficients(sh_rotation_blocks(gamma.matrix().transpose(), degree_), c2_);
    const Mat3 a = cg.transpose() * c1_;
    ProcrustesResult fit = procrustes(a);
    const double trace = (fit.rotation.matrix() * a).trace();
    return {base_ - 2.0 * trace, fit};
  }

 private:
  int degree_;
  std::shared_ptr<const SphericalTransform> transform_;
  CoeffMatrix c1_;
  CoeffMatrix c2_;
  double base_ = 0.0;
};

Rotation3 icosahedral_axis_rotation(const Vec3& axis, double angle) {
  return Rotation3::exp(axis.normalized() * angle);
}

std::vector<Rotation3> icosahedral_group() {
  const double phi = std::numbers::phi;
  const Rotation3 a = icosahedral_axis_rotation(Vec3(0, 1, phi), 2 * std::numbers::pi / 5);
  const Rotation3 b = icosahedral_axis_rotation(Vec3(1, 1, 1), 2 * std::numbers::pi / 3);
  std::vector<Rotation3> group{Rotation3::identity()};
  for (std::size_t k = 0; k < group.size(); ++k) {
    for (const Rotation3* g : {&a, &b}) {
      const Rotation3 c = group[k] * *g;
      const bool seen = std::any_of(group.begin(), group.end(), [&](const Rotation3& x) {
        return (x.matrix() - c.matrix()).cwiseAbs().maxCoeff() < 1e-9;
      });
      if (!seen) group.push_back(Rotation3::nearest(c.matrix()));
    }
  }
  auto key = [](const Rotation3& r) {
    const Mat3& m = r.matrix();
    return std::tuple(std::round(r.angle() * 1e9), m(0, 0), m(1, 1), m(0, 1), m(0, 2), m(1, 2));
  };
  std::stable_sort(group.begin() + 1, group.end(),
                   [&](const Rotation3& x, const Rotation3& y) { return key(x) < key(y); });
  return group;
}

/// Super-Fibonacci spiral on unit quaternions.
Rotation3 spiral_rotation(int i, int n) {
  const double phi = std::sqrt(2.0);
  const double psi = 1.533751168755204288118041;
  const double s = i + 0.5;
  const double r = std::sqrt(s / n), big_r = std::sqrt(1.0 - s / n);
  const double alpha = 2 * std::numbers::pi * s / phi, beta = 2 * std::numbers::pi * s / psi;
  Eigen::Quaterniond q(big_r * std::cos(beta), r * std::sin(alpha), r * std::cos(alpha),
                       big_r * std::sin(beta));
  return Rotation3::nearest(q.normalized().toRotationMatrix());
}

}  // namespace

Rotation3::Rotation3(const Mat3& m) : m_(m) {
  const double orth = (m.transpose() * m - Mat3::Identity()).cwiseAbs().maxCoeff();
  if (!(orth <= kRotationTol) || !(std::abs(m.determinant() - 1.0) <= kRotationTol)) {
    throw Error(ErrorCode::kInvalidArgument, "matrix is not a rotation");
  }
}

Rotation3 Rotation3::exp(const Vec3& omega) {
  const double angle = omega.norm();
  if (angle == 0.0) return Rotation3();
  return Rotation3(Eigen::AngleAxisd(angle, omega / angle).toRotationMatrix(), Unchecked{});
}

Rotation3 Rotation3::nearest(const Mat3& m) {
  Eigen::JacobiSVD<Mat3> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 d = Mat3::Identity();
  d(2, 2) = (svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  return Rotation3(svd.matrixU() * d * svd.matrixV().transpose(), Unchecked{});
}

double Rotation3::angle() const {
  return std::acos(std::clamp((m_.trace() - 1.0) / 2.0, -1.0, 1.0));
}

SrnfField act(const Rotation3& o, const RigidReparam& gamma, const SrnfField& q,
              Interpolation method) {
  SrnfField out = q;
  if (!gamma.rotation.is_identity()) {
    if (method == Interpolation::spectral) {
      out = rotate_domain(q, gamma.rotation);
    } else {
      const GridSpec& spec = q.spec();
      for (int i = 0; i < spec.n_u(); ++i) {
        for (int j = 0; j < spec.n_v(); ++j) {
          const Vec3 uv = direction_to_angles(gamma.rotation * sphere_direction(spec.u(i), spec.v(j)));
          out(i, j) = sample_bicubic(q.values(), spec, uv[0], uv[1]);
        }
      }
    }
  }
  if (!o.is_identity()) {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = o.matrix() * out[k];
  }
  return out;
}

SurfaceGrid transform_surface(const Rotation3& o, const RigidReparam& gamma, const SurfaceGrid& f) {
  SurfaceGrid out = gamma.rotation.is_identity() ? f : rotate_domain(f, gamma.rotation);
  if (!o.is_identity()) {
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = o.matrix() * out[k];
  }
  return out;
}

ProcrustesResult optimal_rotation(const SrnfField& q1, const SrnfField& q2) {
  require_same_spec(q1.spec(), q2.spec(), "optimal_rotation");
  const auto& w = quadrature_weights(q1.spec());
  Mat3 a = Mat3::Zero();
  for (std::size_t k = 0; k < q1.size(); ++k) a += w[k] * q2[k] * q1[k].transpose();
  return procrustes(a);
}

double alignment_energy(const SrnfField& q1, const SrnfField& q2, const Rotation3& o,
                        const RigidReparam& gamma) {
  const SrnfField moved = act(o, gamma, q2);
  return l2_inner(q1 - moved, q1 - moved);
}

std::vector<Rotation3> restart_rotations(int n) {
  if (n < 1) throw Error(ErrorCode::kInvalidArgument, "need at least one restart");
  static const std::vector<Rotation3> group = icosahedral_group();
  std::vector<Rotation3> out(group.begin(), group.begin() + std::min<std::size_t>(n, group.size()));
  const int extra = n - static_cast<int>(out.size());
  for (int i = 0; i < extra; ++i) out.push_back(spiral_rotation(i, extra));
  return out;
}

namespace {

Alignment finish(const SrnfField& q1, const SrnfField& q2, const Rotation3& gamma,
                 const ProcrustesResult& fit) {
  Alignment a;
  a.reparam.rotation = gamma;
  a.rotation = fit.rotation;
  a.degenerate = fit.degenerate;
  a.energy = alignment_energy(q1, q2, a.rotation, a.reparam);
  return a;
}

/// Backtracking descent over ω with γ = γ₀·exp(ω).
Rotation3 descend(const CoefficientAligner& aligner, Rotation3 gamma, const RegistrationOptions& opt) {
  double e = aligner.evaluate(gamma).energy;
  double radius = 0.1;
  for (int it = 0; it < opt.refine_iters; ++it) {
    Vec3 g;
    for (int a = 0; a < 3; ++a) {
      Vec3 h = Vec3::Zero();
      h[a] = opt.fd_step;
      g[a] = (aligner.evaluate(gamma * Rotation3::exp(h)).energy -
              aligner.evaluate(gamma * Rotation3::exp(-h)).energy) /
             (2 * opt.fd_step);
    }
    const double gn = g.norm();
    if (!(gn > 0.0)) break;
    bool improved = false;
    for (int halving = 0; halving < 30 && radius > 1e-10; ++halving) {
      const Rotation3 trial = gamma * Rotation3::exp(-(radius / gn) * g);
      const double et = aligner.evaluate(trial).energy;
      if (et < e) {
        improved = e - et > 1e-15 * std::abs(e);
        gamma = trial;
        e = et;
        radius = std::min(2 * radius, 0.5);
        break;
      }
      radius *= 0.5;
    }
    if (!improved) break;
  }
  return gamma;
}

}  // namespace

Alignment refine_alignment(const SrnfField& q1, const SrnfField& q2, const Alignment& start,
                           const RegistrationOptions& options) {
  require_same_spec(q1.spec(), q2.spec(), "refine_alignment");
  const CoefficientAligner aligner(q1, q2);
  const Rotation3 gamma = descend(aligner, start.reparam.rotation, options);
  // Procrustes at the starting γ is never worse than the starting O.
  Alignment best = finish(q1, q2, start.reparam.rotation,
                          optimal_rotation(q1, act(Rotation3(), start.reparam, q2)));
  if (!(gamma.matrix() == start.reparam.rotation.matrix())) {
    Alignment refined = finish(q1, q2, gamma, aligner.evaluate(gamma).fit);
    if (refined.energy < best.energy) best = refined;
  }
  return best;
}

Alignment optimal_rigid_reparam(const SrnfField& q1, const SrnfField& q2,
                                const RegistrationOptions& options) {
  require_same_spec(q1.spec(), q2.spec(), "optimal_rigid_reparam");
  const CoefficientAligner aligner(q1, q2);
  const auto starts = restart_rotations(options.n_restarts);
  std::vector<double> energies(starts.size());
  parallel_for(starts.size(), [&](std::size_t k) { energies[k] = aligner.evaluate(starts[k]).energy; });

  std::vector<std::size_t> order(starts.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return energies[a] < energies[b]; });
  const std::size_t n_refined =
      std::min<std::size_t>(std::max(options.n_refined, 1), order.size());
  std::vector<Rotation3> refined(n_refined);
  parallel_for(n_refined, [&](std::size_t r) { refined[r] = descend(aligner, starts[order[r]], options); });

  // The unrefined identity candidate with raw samples guarantees no regression.
  Alignment best = finish(q1, q2, Rotation3(), optimal_rotation(q1, q2));
  for (std::size_t r = 0; r < n_refined; ++r) {
    Alignment cand = finish(q1, q2, refined[r], aligner.evaluate(refined[r]).fit);
    if (cand.energy < best.energy) best = cand;
  }
  Alignment none;
  none.energy = l2_inner(q1 - q2, q1 - q2);
  if (none.energy <= best.energy) return none;
  return best;
}

Alignment optimal_rigid_reparam(const SrnfField& q1, const SrnfField& q2, int n_restarts) {
  RegistrationOptions options;
  options.n_restarts = n_restarts;
  return optimal_rigid_reparam(q1, q2, options);
}

}  // namespace srnf
