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

#include "srnf/pyramid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "srnf/spherical_harmonics.hpp"
#include "srnf/srnf.hpp"

namespace srnf {

template <class Tag>
GridField<Tag> spectral_lowpass(const GridField<Tag>& f, double sigma, const GridSpec& target) {
  const int l_in = SphericalTransform::exact_degree(f.spec());
  const int l_out = std::min(l_in, SphericalTransform::exact_degree(target));
  const auto analysis = SphericalTransform::get(f.spec(), l_in);
  const CoeffMatrix c = analysis->analyze(f.values());
  CoeffMatrix kept(SphericalTransform::count_for(l_out), 3);
  for (int l = 0; l <= l_out; ++l) {
    const double damp = std::exp(-std::max(l * (l + 1) - 2, 0) * sigma * sigma);
    for (int m = -l; m <= l; ++m) {
      const int k = SphericalTransform::index(l, m);
      kept.row(k) = damp * c.row(k);
    }
  }
  GridField<Tag> out(target);
  SphericalTransform::get(target, l_out)->synthesize(kept, out.values());
  return out;
}

template SurfaceGrid spectral_lowpass(const SurfaceGrid&, double, const GridSpec&);
template SrnfField spectral_lowpass(const SrnfField&, double, const GridSpec&);
template TangentField spectral_lowpass(const TangentField&, double, const GridSpec&);

double pyramid_sigma(const GridSpec& finest, int level, int n_levels) {
  const double sigma0 = 1.0 / SphericalTransform::exact_degree(finest);
  return sigma0 * std::ldexp(1.0, n_levels - level);
}

namespace {

std::vector<GridSpec> level_specs(const GridSpec& finest, int n_levels) {
  if (n_levels < 1) throw Error(ErrorCode::kInvalidArgument, "n_levels must be positive");
  std::vector<GridSpec> specs{finest};
  for (int i = 1; i < n_levels; ++i) {
    if (!specs.back().halvable()) {
      throw Error(ErrorCode::kResolutionNotHalvable,
                  std::to_string(finest.n_u()) + "x" + std::to_string(finest.n_v()) +
                      " cannot be halved " + std::to_string(n_levels - 1) + " times");
    }
    specs.push_back(specs.back().halved());
  }
  std::reverse(specs.begin(), specs.end());
  return specs;
}

template <class Tag>
std::vector<GridField<Tag>> smooth_levels(const GridField<Tag>& f, int n_levels) {
  const auto specs = level_specs(f.spec(), n_levels);
  std::vector<GridField<Tag>> levels(specs.size(), GridField<Tag>(f.spec()));
  levels.back() = f;
  for (int i = n_levels - 1; i >= 1; --i) {
    // 1-based level i is built from level i + 1.
    levels[i - 1] = spectral_lowpass(levels[i], pyramid_sigma(f.spec(), i, n_levels), specs[i - 1]);
  }
  return levels;
}

double cubic_weight(double t) {
  // Catmull–Rom kernel (a = −½).
  t = std::abs(t);
  if (t < 1.0) return (1.5 * t - 2.5) * t * t + 1.0;
  if (t < 2.0) return ((-0.5 * t + 2.5) * t - 4.0) * t + 2.0;
  return 0.0;
}

}  // namespace

SurfacePyramid build_pyramid(const SurfaceGrid& f, int n_levels) {
  return SurfacePyramid{smooth_levels(f, n_levels)};
}

std::vector<SrnfField> build_srnf_pyramid(const SrnfField& q, int n_levels) {
  return smooth_levels(q, n_levels);
}

Vec3 sample_bicubic(std::span<const Vec3> values, const GridSpec& spec, double u, double v) {
  const int nu = spec.n_u(), nv = spec.n_v();
  const double x = u / spec.du();
  const double y = v / spec.dv() - 0.5;
  const int i0 = static_cast<int>(std::floor(x));
  const int j0 = static_cast<int>(std::floor(y));
  Vec3 acc = Vec3::Zero();
  for (int dj = -1; dj <= 2; ++dj) {
    const double wy = cubic_weight(y - (j0 + dj));
    if (wy == 0.0) continue;
    int j = j0 + dj;
    int shift = 0;
    if (j < 0) {
      j = -1 - j;
      shift = nu / 2;
    } else if (j >= nv) {
      j = 2 * nv - 1 - j;
      shift = nu / 2;
    }
    for (int di = -1; di <= 2; ++di) {
      const double wx = cubic_weight(x - (i0 + di));
      if (wx == 0.0) continue;
      const int i = (((i0 + di + shift) % nu) + nu) % nu;
      acc += (wx * wy) * values[spec.index(i, j)];
    }
  }
  return acc;
}

SurfaceGrid upsample(const SurfaceGrid& coarse, const GridSpec& target, Upsampling method) {
  if (target.n_u() != 2 * coarse.spec().n_u() || target.n_v() != 2 * coarse.spec().n_v()) {
    throw Error(ErrorCode::kSpecMismatch, "upsample target must double both grid dimensions");
  }
  if (method == Upsampling::spectral) return spectral_lowpass(coarse, 0.0, target);
  SurfaceGrid out(target);
  for (int i = 0; i < target.n_u(); ++i) {
    for (int j = 0; j < target.n_v(); ++j) {
      out(i, j) = sample_bicubic(coarse.values(), coarse.spec(), target.u(i), target.v(j));
    }
  }
  return out;
}

SrnfScaleLadder build_scale_ladder(const SrnfField& q_target, int m, const SrnfField& q_base) {
  require_same_spec(q_target.spec(), q_base.spec(), "scale ladder");
  if (m < 1) throw Error(ErrorCode::kInvalidArgument, "scale ladder needs m >= 1");
  SrnfScaleLadder ladder;
  const SrnfField delta = q_target - q_base;
  for (int i = 1; i < m; ++i) {
    SrnfField p = q_base;
    p.axpy(static_cast<double>(i) / m, delta);
    ladder.points.push_back(std::move(p));
  }
  ladder.points.push_back(q_target);
  ladder.spacing = l2_norm(delta) / m;
  return ladder;
}

SrnfScaleLadder build_scale_ladder(const SrnfField& q_target, int m) {
  return build_scale_ladder(q_target, m, srnf_map(sphere_points(q_target.spec())));
}

}  // namespace srnf
