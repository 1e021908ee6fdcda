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

/// Coarse to fine; levels.back() is the input surface.
struct SurfacePyramid {
  std::vector<SurfaceGrid> levels;
};

/// Equidistant points q¹..qᵐ on the segment from a base SRNF to the target;
/// points.back() is the target.
struct SrnfScaleLadder {
  std::vector<SrnfField> points;
  double spacing = 0.0;
};

enum class Upsampling { bicubic, spectral };

/// Gaussian low-pass on SH coefficients. Degree l is damped by
/// exp(−max(l(l+1) − 2, 0)·σ²), so degrees 0 and 1 pass unchanged, and the
/// result is band-limited to the degree resolvable on `target`.
template <class Tag>
GridField<Tag> spectral_lowpass(const GridField<Tag>& f, double sigma, const GridSpec& target);

/// σ for level i (1-based, coarse to fine) of an m-level pyramid.
double pyramid_sigma(const GridSpec& finest, int level, int n_levels);

SurfacePyramid build_pyramid(const SurfaceGrid& f, int n_levels = 4);
/// Same smoothing schedule applied directly to an SRNF.
std::vector<SrnfField> build_srnf_pyramid(const SrnfField& q, int n_levels = 4);

/// Resampling onto a grid with twice the resolution in both directions.
SurfaceGrid upsample(const SurfaceGrid& coarse, const GridSpec& target,
                     Upsampling method = Upsampling::bicubic);

/// Catmull–Rom interpolation at an arbitrary (u, v), periodic in u and
/// continued across the poles through the antipodal meridian.
Vec3 sample_bicubic(std::span<const Vec3> values, const GridSpec& spec, double u, double v);

SrnfScaleLadder build_scale_ladder(const SrnfField& q_target, int m, const SrnfField& q_base);
/// Base is the SRNF of the unit sphere on the target's grid.
SrnfScaleLadder build_scale_ladder(const SrnfField& q_target, int m);

}  // namespace srnf
