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

#include "srnf/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <tuple>

#include "cache.hpp"

namespace srnf {

namespace {

constexpr double kPi = std::numbers::pi;

struct DiffOperators {
  // Dense row-major matrices. D_u acts along i; D_v along j with an extra
  // term reading the antipodal column i + n_u/2 (across-pole continuation).
  std::vector<double> du;  // n_u × n_u
  std::vector<double> av;  // n_v × n_v
  std::vector<double> bv;  // n_v × n_v
};

// Fourier differentiation matrix on m equispaced points of a 2π-periodic
// interval with spacing h (m even): D_jk = ½(−1)^{j−k} cot((j−k)h/2).
double fourier_diff_entry(int j, int k, int m, double h) {
  if (j == k) return 0.0;
  const int d = j - k;
  const double sign = ((d % 2) + 2) % 2 == 0 ? 1.0 : -1.0;
  (void)m;
  return 0.5 * sign / std::tan(d * h / 2.0);
}

DiffOperators make_operators(const GridSpec& spec) {
  const int nu = spec.n_u();
  const int nv = spec.n_v();
  DiffOperators ops;
  ops.du.assign(static_cast<std::size_t>(nu) * nu, 0.0);
  ops.av.assign(static_cast<std::size_t>(nv) * nv, 0.0);
  ops.bv.assign(static_cast<std::size_t>(nv) * nv, 0.0);
  if (spec.differentiation() == Differentiation::spectral) {
    const double hu = 2.0 * kPi / nu;
    for (int i = 0; i < nu; ++i) {
      for (int k = 0; k < nu; ++k) ops.du[i * nu + k] = fourier_diff_entry(i, k, nu, hu);
    }
    const int m = 2 * nv;
    const double hv = kPi / nv;
    for (int j = 0; j < nv; ++j) {
      for (int k = 0; k < nv; ++k) {
        ops.av[j * nv + k] = fourier_diff_entry(j, k, m, hv);
        ops.bv[j * nv + k] = fourier_diff_entry(j, 2 * nv - 1 - k, m, hv);
      }
    }
  } else {
    const double hu = spec.du();
    for (int i = 0; i < nu; ++i) {
      ops.du[i * nu + (i + 1) % nu] += 0.5 / hu;
      ops.du[i * nu + (i + nu - 1) % nu] -= 0.5 / hu;
    }
    const double hv = spec.dv();
    for (int j = 1; j + 1 < nv; ++j) {
      ops.av[j * nv + j + 1] = 0.5 / hv;
      ops.av[j * nv + j - 1] = -0.5 / hv;
    }
    ops.av[0] = -1.5 / hv;
    ops.av[1] = 2.0 / hv;
    ops.av[2] = -0.5 / hv;
    const int last = nv - 1;
    ops.av[last * nv + last] = 1.5 / hv;
    ops.av[last * nv + last - 1] = -2.0 / hv;
    ops.av[last * nv + last - 2] = 0.5 / hv;
  }
  return ops;
}

using OpKey = std::tuple<int, int, int>;

std::shared_ptr<const DiffOperators> operators(const GridSpec& spec) {
  static detail::KeyedCache<OpKey, DiffOperators> cache;
  return cache.get(OpKey{spec.n_u(), spec.n_v(), static_cast<int>(spec.differentiation())},
                   [&] { return make_operators(spec); });
}

// Fejér's first rule on nodes θ_j = π(j+½)/n: exact for polynomials in
// cos θ of degree < n, all weights positive.
std::vector<double> fejer_weights(int n) {
  std::vector<double> w(n);
  for (int j = 0; j < n; ++j) {
    const double theta = kPi * (j + 0.5) / n;
    double s = 0.0;
    for (int k = 1; k <= n / 2; ++k) s += std::cos(2.0 * k * theta) / (4.0 * k * k - 1.0);
    w[j] = 2.0 / n * (1.0 - 2.0 * s);
  }
  return w;
}

}  // namespace

GridSpec::GridSpec(int n_u, int n_v, Differentiation diff) : n_u_(n_u), n_v_(n_v), diff_(diff) {
  if (n_u < 4 || n_v < 4 || n_u % 2 != 0 || n_v % 2 != 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "grid must be at least 4x4 with even sizes, got " + std::to_string(n_u) + "x" +
                    std::to_string(n_v));
  }
}

double GridSpec::u(int i) const noexcept { return 2.0 * kPi * i / n_u_; }
double GridSpec::v(int j) const noexcept { return kPi * (j + 0.5) / n_v_; }
double GridSpec::du() const noexcept { return 2.0 * kPi / n_u_; }
double GridSpec::dv() const noexcept { return kPi / n_v_; }

bool GridSpec::halvable() const noexcept {
  return n_u_ % 4 == 0 && n_v_ % 4 == 0 && n_u_ >= 8 && n_v_ >= 8;
}

GridSpec GridSpec::halved() const {
  if (!halvable()) {
    throw Error(ErrorCode::kResolutionNotHalvable,
                "cannot halve " + std::to_string(n_u_) + "x" + std::to_string(n_v_));
  }
  return GridSpec(n_u_ / 2, n_v_ / 2, diff_);
}

GridSpec GridSpec::doubled() const { return GridSpec(n_u_ * 2, n_v_ * 2, diff_); }

void require_same_spec(const GridSpec& a, const GridSpec& b, const char* what) {
  if (!(a == b)) {
    throw Error(ErrorCode::kSpecMismatch,
                std::string(what) + ": " + std::to_string(a.n_u()) + "x" + std::to_string(a.n_v()) +
                    " vs " + std::to_string(b.n_u()) + "x" + std::to_string(b.n_v()));
  }
}

Vec3 sphere_direction(double u, double v) {
  return {std::cos(u) * std::sin(v), std::sin(u) * std::sin(v), std::cos(v)};
}

SurfaceGrid sphere_points(const GridSpec& spec, double radius) {
  SurfaceGrid f(spec);
  for (int i = 0; i < spec.n_u(); ++i) {
    for (int j = 0; j < spec.n_v(); ++j) f(i, j) = radius * sphere_direction(spec.u(i), spec.v(j));
  }
  return f;
}

SurfaceGrid translate(SurfaceGrid f, const Vec3& c) {
  for (auto& x : f.values()) x += c;
  return f;
}

const std::vector<double>& quadrature_weights(const GridSpec& spec) {
  static detail::KeyedCache<std::pair<int, int>, std::vector<double>> cache;
  // Cached entries are never evicted, so the reference stays valid.
  auto ptr = cache.get({spec.n_u(), spec.n_v()}, [&] {
    const auto wv = fejer_weights(spec.n_v());
    std::vector<double> w(spec.size());
    for (int i = 0; i < spec.n_u(); ++i) {
      for (int j = 0; j < spec.n_v(); ++j) w[spec.index(i, j)] = spec.du() * wv[j];
    }
    return w;
  });
  return *ptr;
}

// Both operators annihilate constants, so they are evaluated on differences
// f_k − f_self. A translation that is exact in floating point then leaves
// the derivative bit-for-bit unchanged.
void apply_du(const GridSpec& spec, std::span<const Vec3> in, std::span<Vec3> out) {
  const auto ops = operators(spec);
  const int nu = spec.n_u();
  const int nv = spec.n_v();
  for (int i = 0; i < nu; ++i) {
    Vec3* row = &out[spec.index(i, 0)];
    const Vec3* self = &in[spec.index(i, 0)];
    for (int j = 0; j < nv; ++j) row[j].setZero();
    for (int k = 0; k < nu; ++k) {
      const double c = ops->du[i * nu + k];
      if (c == 0.0) continue;
      const Vec3* src = &in[spec.index(k, 0)];
      for (int j = 0; j < nv; ++j) row[j] += c * (src[j] - self[j]);
    }
  }
}

void apply_dv(const GridSpec& spec, std::span<const Vec3> in, std::span<Vec3> out) {
  const auto ops = operators(spec);
  const int nu = spec.n_u();
  const int nv = spec.n_v();
  const bool across = spec.differentiation() == Differentiation::spectral;
  for (int i = 0; i < nu; ++i) {
    const Vec3* own = &in[spec.index(i, 0)];
    const Vec3* anti = &in[spec.index((i + nu / 2) % nu, 0)];
    for (int j = 0; j < nv; ++j) {
      Vec3 acc = Vec3::Zero();
      const Vec3 self = own[j];
      const double* a = &ops->av[j * nv];
      for (int k = 0; k < nv; ++k) {
        if (a[k] != 0.0) acc += a[k] * (own[k] - self);
      }
      if (across) {
        const double* b = &ops->bv[j * nv];
        for (int k = 0; k < nv; ++k) acc += b[k] * (anti[k] - self);
      }
      out[spec.index(i, j)] = acc;
    }
  }
}

void accumulate_du_transpose(const GridSpec& spec, std::span<const Vec3> in, std::span<Vec3> out) {
  const auto ops = operators(spec);
  const int nu = spec.n_u();
  const int nv = spec.n_v();
  for (int i = 0; i < nu; ++i) {
    const Vec3* src = &in[spec.index(i, 0)];
    for (int k = 0; k < nu; ++k) {
      const double c = ops->du[i * nu + k];
      if (c == 0.0) continue;
      Vec3* dst = &out[spec.index(k, 0)];
      for (int j = 0; j < nv; ++j) dst[j] += c * src[j];
    }
  }
}

void accumulate_dv_transpose(const GridSpec& spec, std::span<const Vec3> in, std::span<Vec3> out) {
  const auto ops = operators(spec);
  const int nu = spec.n_u();
  const int nv = spec.n_v();
  const bool across = spec.differentiation() == Differentiation::spectral;
  for (int i = 0; i < nu; ++i) {
    Vec3* own = &out[spec.index(i, 0)];
    Vec3* anti = &out[spec.index((i + nu / 2) % nu, 0)];
    for (int j = 0; j < nv; ++j) {
      const Vec3 g = in[spec.index(i, j)];
      const double* a = &ops->av[j * nv];
      for (int k = 0; k < nv; ++k) {
        if (a[k] != 0.0) own[k] += a[k] * g;
      }
      if (across) {
        const double* b = &ops->bv[j * nv];
        for (int k = 0; k < nv; ++k) anti[k] += b[k] * g;
      }
    }
  }
}

TangentField normal_field(const PartialDerivatives& d) {
  TangentField n(d.du.spec());
  for (std::size_t k = 0; k < n.size(); ++k) n[k] = d.dv[k].cross(d.du[k]);
  return n;
}

TangentField normal_field(const SurfaceGrid& f) { return normal_field(partial_derivatives(f)); }

MetricSample first_fundamental_form(const SurfaceGrid& f) {
  const auto d = partial_derivatives(f);
  MetricSample m;
  m.g.resize(f.size());
  m.omega.resize(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    const double guu = d.du[k].dot(d.du[k]);
    const double guv = d.du[k].dot(d.dv[k]);
    const double gvv = d.dv[k].dot(d.dv[k]);
    m.g[k] << guu, guv, guv, gvv;
    m.omega[k] = std::sqrt(std::max(0.0, guu * gvv - guv * guv));
  }
  return m;
}

double surface_area(const SurfaceGrid& f) {
  const auto& spec = f.spec();
  const auto n = normal_field(f);
  const auto& w = quadrature_weights(spec);
  double area = 0.0;
  for (int i = 0; i < spec.n_u(); ++i) {
    for (int j = 0; j < spec.n_v(); ++j) {
      const std::size_t k = spec.index(i, j);
      area += n[k].norm() / std::sin(spec.v(j)) * w[k];
    }
  }
  return area;
}

SurfaceGrid rescale_to_unit_area(const SurfaceGrid& f) {
  const double area = surface_area(f);
  if (!(area > 1e-300) || !std::isfinite(area)) {
    throw Error(ErrorCode::kZeroArea, "surface has zero area");
  }
  return (1.0 / std::sqrt(area)) * f;
}

Vec3 centroid(const SurfaceGrid& f) {
  const auto& spec = f.spec();
  const auto n = normal_field(f);
  const auto& w = quadrature_weights(spec);
  Vec3 c = Vec3::Zero();
  double area = 0.0;
  for (int i = 0; i < spec.n_u(); ++i) {
    for (int j = 0; j < spec.n_v(); ++j) {
      const std::size_t k = spec.index(i, j);
      const double da = n[k].norm() / std::sin(spec.v(j)) * w[k];
      c += da * f[k];
      area += da;
    }
  }
  if (!(area > 0.0)) {
    // Degenerate surface: fall back to the plain domain average.
    c.setZero();
    double ws = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
      c += w[k] * f[k];
      ws += w[k];
    }
    return c / ws;
  }
  return c / area;
}

SurfaceGrid center(const SurfaceGrid& f) { return translate(f, -centroid(f)); }

double rms_distance(const SurfaceGrid& a, const SurfaceGrid& b) {
  require_same_spec(a.spec(), b.spec(), "rms_distance");
  const auto& w = quadrature_weights(a.spec());
  double s = 0.0;
  double ws = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    s += w[k] * (a[k] - b[k]).squaredNorm();
    ws += w[k];
  }
  return std::sqrt(s / ws);
}

double centered_rms_distance(const SurfaceGrid& a, const SurfaceGrid& b) {
  return rms_distance(center(a), center(b));
}

}  // namespace srnf
